//! The two shifted grids, their nesting, and the covering of arbitrary intervals.

use bergman_lab::{covering_interval, locate_tile, DyadicInterval, Interval, Point, Shift};

fn main() -> bergman_lab::Result<()> {
    for shift in Shift::BOTH {
        let d = DyadicInterval::new(shift, 0, 0);
        let (a, b) = d.children();
        println!("{d} -> {a}, {b}   parent {}", d.parent());
    }

    for (left, len) in [(0.3, 0.9), (-1.0, 2.0), (0.999, 0.002), (-7.5, 12.0)] {
        let i = Interval::new(left, len)?;
        let k = covering_interval(&i)?;
        let kr = k.realize();
        println!(
            "[{:.4}, {:.4}) covered by {k} = [{:.4}, {:.4}), ratio {:.3}",
            i.left,
            i.right(),
            kr.left,
            kr.right(),
            kr.length / i.length
        );
    }

    let z = Point::new(0.7, 0.3)?;
    for shift in Shift::BOTH {
        println!("tile of {z:?} in {shift}: {}", locate_tile(shift, z)?);
    }
    Ok(())
}
