//! The positive dyadic operator on tile functions, compared with `P_α^+`.

use bergman_lab::operators::{apply_dyadic, apply_pplus, dyadic_floor_tail, dyadic_tail};
use bergman_lab::{
    AlphaMeasure, CarlesonBox, DyadicInterval, GridWindow, Interval, Point, QuadratureSpec, Shift, TestFunction,
    TileFunction, TileGrid,
};

fn main() -> bergman_lab::Result<()> {
    let mu = AlphaMeasure::new(0.0)?;
    let window = GridWindow::new(-6, 10, -1024.0, 1024.0)?;
    let grid = TileGrid::new(Shift::Zero, window)?;
    let unit = Interval::new(0.0, 1.0)?;
    let f = TileFunction::from_fn(grid, |d| {
        let r = d.realize();
        if r.left >= unit.left && r.right() <= unit.right() { 1.0 } else { 0.0 }
    });

    let qf = apply_dyadic(&f, &mu);
    let unit_tile = DyadicInterval::new(Shift::Zero, 0, 0);
    let top = qf.get(&unit_tile).unwrap();
    let below = dyadic_floor_tail(&f, &mu).get(&unit_tile).unwrap();
    println!(
        "Q f on T_[0,1) = {top:.12}, 4/3 up to {:.2e} above and {below:.2e} below the window",
        dyadic_tail(&f, &mu)
    );

    let g = TestFunction::Indicator(CarlesonBox::full(unit));
    let q = QuadratureSpec::default();
    let small = GridWindow::new(-6, 3, -8.0, 8.0)?;
    for (x, y) in [(0.5, 0.75), (0.5, 0.1), (3.0, 1.0), (0.0, 10.0)] {
        let z = Point::new(x, y)?;
        let p = apply_pplus(&g, z, &mu, &small, &q)?;
        println!("P+ 1_Q(z={x},{y}) = {:.8} (err {:.1e})", p.value, p.error);
    }
    Ok(())
}
