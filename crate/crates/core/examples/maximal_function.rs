//! Weighted dyadic maximal functions and their Rayleigh quotients against `p'`.

use bergman_lab::extrapolation::tile_norm;
use bergman_lab::operators::{dyadic_maximal, maximal_alpha, weight_tile_masses};
use bergman_lab::{AlphaMeasure, GridWindow, QuadratureSpec, Shift, TileFunction, TileGrid, Weight};

fn main() -> bergman_lab::Result<()> {
    let mu = AlphaMeasure::new(1.0)?;
    let q = QuadratureSpec::default();
    let grid = TileGrid::new(Shift::Zero, GridWindow::new(-5, 2, -4.0, 4.0)?)?;
    let f = TileFunction::from_fn(grid.clone(), |d| {
        let x = d.left() + 0.5 * d.length();
        (1.0 + x * x).recip() * if d.j < -3 { 3.0 } else { 1.0 }
    });

    for spec in ["constant:c=1", "power:gamma=1.5", "step:a=1,b=50"] {
        let w = Weight::parse(spec)?;
        let masses = weight_tile_masses(&grid, &w, &mu, &q)?;
        let wt = masses.zip_map(&TileFunction::tile_areas(&grid, &mu), |m, a| m / a)?;
        let mf = dyadic_maximal(&f, &w, &mu, &q)?;
        for p in [1.5, 2.0, 3.0] {
            let ratio = tile_norm(&mf, &wt, p, &mu)? / tile_norm(&f, &wt, p, &mu)?;
            println!("{spec:>16}  p={p}  |Mf|/|f| = {ratio:.4}  p' = {:.4}", p / (p - 1.0));
        }
    }

    let two = maximal_alpha(&f, &mu);
    println!("two-grid maximal: max {:.4}, min {:.4}", two.max_value(), two.min_value());
    Ok(())
}
