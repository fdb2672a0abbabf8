//! Pointwise domination of `|z - conj ξ|^{-(2+α)}` by the sum of the two dyadic kernels.

use bergman_lab::domination::{domination_experiment, DominationConfig};

fn main() -> bergman_lab::Result<()> {
    for alpha in [-0.5, 0.0, 1.0] {
        let rep = domination_experiment(&DominationConfig::new(alpha, 10_000, 1))?;
        println!(
            "alpha={alpha:>4}: sup ratio {:.3} <= bound {} ({} violations), worst z={:?} xi={:?}",
            rep.empirical_constant, rep.bound, rep.violations, rep.worst_z, rep.worst_xi
        );
    }
    Ok(())
}
