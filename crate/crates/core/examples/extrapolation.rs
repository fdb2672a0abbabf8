//! The series `D(h) = Σ 2^{-k} S^k(h) / N^k` and its three properties.

use bergman_lab::extrapolation::{verify_properties, ExtrapolationConfig};
use bergman_lab::{AlphaMeasure, BoxFamily, GridWindow, QuadratureSpec, Shift, TileFunction, TileGrid, Weight};

fn main() -> bergman_lab::Result<()> {
    let q = QuadratureSpec::default();
    let mu = AlphaMeasure::new(0.0)?;
    let window = GridWindow::new(-4, 2, -4.0, 4.0)?;
    let grid = TileGrid::new(Shift::Zero, window)?;
    let fam = BoxFamily::dyadic(&window)?.union(&BoxFamily::centered_ladder(-4, 2)?);
    let h = TileFunction::from_fn(grid, |d| 1.0 + 0.5 * (0.7 * d.m as f64 + d.j as f64).sin());
    let cfg = ExtrapolationConfig::new(3.0)?;

    for spec in ["constant:c=2", "power:gamma=0.8", "step:a=1,b=3"] {
        let w = Weight::parse(spec)?;
        let (out, reports) = verify_properties(&h, &w, &cfg, &mu, &fam, &q)?;
        println!("{spec}: N = {:.6}, B_3(w) = {:.6}", out.divisor, out.bekolle);
        for r in reports {
            println!("  [{}] {}: {:.6} vs {:.6}", if r.pass { "ok" } else { "FAIL" }, r.claim, r.lhs, r.rhs);
        }
    }
    Ok(())
}
