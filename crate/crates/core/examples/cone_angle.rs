//! The radius beyond which `(z - conj ξ)^{-(2+α)}` keeps its argument inside a quarter turn.

use bergman_lab::sharp::{angle_threshold, arg_span_violations};

fn main() -> bergman_lab::Result<()> {
    for alpha in [0.0, 0.5, 1.0, 2.0] {
        let a = angle_threshold(alpha, 512)?;
        let bad = arg_span_violations(alpha, a.measured_m, 10_000, 3);
        let below = arg_span_violations(alpha, 0.9 * a.measured_m, 10_000, 3);
        println!(
            "alpha={alpha}: M = {:.6}, tan-formula {:.6}, violations at M: {bad}, at 0.9M: {below}",
            a.measured_m, a.paper_formula_m
        );
    }
    Ok(())
}
