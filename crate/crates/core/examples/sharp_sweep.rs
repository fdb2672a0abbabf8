//! The extremal weight and function across δ, with log-log slope fits.

use bergman_lab::fit::fit_power_law;
use bergman_lab::sharp::{default_deltas, delta_sweep, sweep_family};
use bergman_lab::QuadratureSpec;

fn main() -> bergman_lab::Result<()> {
    let q = QuadratureSpec::default();
    let fam = sweep_family()?;
    let deltas = default_deltas();
    for p in [1.5, 2.0] {
        for alpha in [0.0, 1.0] {
            let rows = delta_sweep(p, alpha, &deltas, &fam, &q)?;
            let inv: Vec<f64> = rows.iter().map(|r| 1.0 / r.delta).collect();
            let b: Vec<f64> = rows.iter().map(|r| r.bekolle).collect();
            let r: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
            let fb = fit_power_law(&inv, &b)?;
            let fr = fit_power_law(&inv, &r)?;
            println!(
                "p={p} alpha={alpha}: B slope {:.4} (p-1 = {}), ratio slope {:.4}",
                fb.slope,
                p - 1.0,
                fr.slope
            );
        }
    }
    Ok(())
}
