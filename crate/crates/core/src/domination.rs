//! Pointwise domination of `K_α^+` by the two dyadic kernels.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{GridWindow, Point, Shift};
use crate::kernel::{kernel_dyadic, kernel_plus};
use crate::measure::AlphaMeasure;

/// `16^{2+α}`.
pub fn domination_bound(mu: &AlphaMeasure) -> f64 {
    16f64.powf(mu.dimension())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DominationConfig {
    pub alpha: f64,
    pub samples: usize,
    /// Heights and separations are drawn as `2^u` with `u` uniform in this range.
    pub scale_lo: f64,
    pub scale_hi: f64,
    pub seed: u64,
}

impl DominationConfig {
    pub fn new(alpha: f64, samples: usize, seed: u64) -> DominationConfig {
        DominationConfig {
            alpha,
            samples,
            scale_lo: -6.0,
            scale_hi: 6.0,
            seed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DominationReport {
    pub alpha: f64,
    pub samples: usize,
    pub empirical_constant: f64,
    pub bound: f64,
    pub violations: usize,
    pub pass: bool,
    pub worst_z: Point,
    pub worst_xi: Point,
}

/// `K_α^+(z, ξ) / (K_α^0(z, ξ) + K_α^{1/3}(z, ξ))` with the dyadic sums truncated at a
/// scale that always contains a common box of the covering argument.
pub fn domination_ratio(z: Point, xi: Point, mu: &AlphaMeasure, window: &GridWindow) -> Result<f64> {
    let k = kernel_plus(z, xi, mu);
    let mut d = 0.0;
    for shift in Shift::BOTH {
        d += kernel_dyadic(z, xi, shift, mu, window)?.value;
    }
    Ok(if d > 0.0 { k / d } else { f64::INFINITY })
}

pub fn sample_pair(rng: &mut impl Rng, lo: f64, hi: f64) -> (Point, Point) {
    let mut h = || rng.gen_range(lo..=hi).exp2();
    let (y1, y2, sep) = (h(), h(), h());
    let x0 = rng.gen_range(-1.0..1.0) * hi.exp2() * 4.0;
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    (Point { x: x0, y: y1 }, Point { x: x0 + sign * sep, y: y2 })
}

/// Samples point pairs log-uniformly over scales and records the largest ratio.
pub fn domination_experiment(cfg: &DominationConfig) -> Result<DominationReport> {
    if cfg.samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    if cfg.scale_lo.is_nan() || cfg.scale_hi.is_nan() || cfg.scale_lo > cfg.scale_hi {
        return Err(Error::invalid("scale range is empty"));
    }
    let mu = AlphaMeasure::new(cfg.alpha)?;
    let bound = domination_bound(&mu);
    let reach = (cfg.scale_hi.ceil() as i32) + 4;
    let window = GridWindow::new(
        cfg.scale_lo.floor() as i32 - 1,
        reach + 8,
        -(2f64.powi(reach + 2)),
        2f64.powi(reach + 2),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best = 0.0;
    let mut worst = None;
    let mut violations = 0;
    for _ in 0..cfg.samples {
        let (z, xi) = sample_pair(&mut rng, cfg.scale_lo, cfg.scale_hi);
        let r = domination_ratio(z, xi, &mu, &window)?;
        if r > bound {
            violations += 1;
        }
        if r > best || worst.is_none() {
            best = r;
            worst = Some((z, xi));
        }
    }
    let (worst_z, worst_xi) = worst.expect("at least one sample");
    Ok(DominationReport {
        alpha: cfg.alpha,
        samples: cfg.samples,
        empirical_constant: best,
        bound,
        violations,
        pass: violations == 0,
        worst_z,
        worst_xi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_values() {
        assert_eq!(domination_bound(&AlphaMeasure::new(0.0).unwrap()), 256.0);
        assert_eq!(domination_bound(&AlphaMeasure::new(1.0).unwrap()), 4096.0);
    }

    #[test]
    fn equal_points_have_small_positive_ratio() {
        let mu = AlphaMeasure::new(0.0).unwrap();
        let win = GridWindow::new(-4, 12, -100.0, 100.0).unwrap();
        let z = Point::new(0.5, 0.75).unwrap();
        let r = domination_ratio(z, z, &mu, &win).unwrap();
        assert!(r > 0.0 && r < 1.0);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let cfg = DominationConfig::new(0.0, 200, 7);
        let a = domination_experiment(&cfg).unwrap();
        let b = domination_experiment(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.pass);
    }
}
