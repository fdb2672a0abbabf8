//! The extremal weight and function, the cone-angle threshold, and the δ-sweep.
//!
//! For `0 < δ < 1` the weight is `|z|^{(α+2)(p-1)(1-δ)}` and the function is
//! `|z|^{(α+2)(δ-1)} 1_{|z|<=1}`. Far from the unit disc, `P_α^+ f` behaves like
//! `‖f‖_{L^1(dA_α)} |z|^{-(2+α)}`, and the norm of that profile over an annulus
//! `M <= |z| <= R` is a one-dimensional power integral.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::bekolle::{bekolle_constant, BoxFamily};
use crate::error::{Error, Result};
use crate::function::TestFunction;
use crate::geometry::{GridWindow, Point};
use crate::measure::{AlphaMeasure, Exponents};
use crate::quadrature::QuadratureSpec;
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SharpInstance {
    pub p: f64,
    pub alpha: f64,
    pub delta: f64,
}

impl SharpInstance {
    pub fn new(p: f64, alpha: f64, delta: f64) -> Result<SharpInstance> {
        if !(p > 1.0 && p <= 2.0) {
            return Err(Error::invalid(format!(
                "the extremal family is built for 1 < p <= 2 (use duality above 2), got {p}"
            )));
        }
        AlphaMeasure::new(alpha)?;
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::invalid(format!("delta must lie in (0, 1), got {delta}")));
        }
        Ok(SharpInstance { p, alpha, delta })
    }

    /// `(α+2)(p-1)(1-δ)`
    pub fn weight_exponent(&self) -> f64 {
        (self.alpha + 2.0) * (self.p - 1.0) * (1.0 - self.delta)
    }

    /// `(α+2)(δ-1)`
    pub fn function_exponent(&self) -> f64 {
        (self.alpha + 2.0) * (self.delta - 1.0)
    }

    pub fn weight(&self) -> Weight {
        Weight::Power {
            gamma: self.weight_exponent(),
        }
    }

    pub fn function(&self) -> TestFunction {
        TestFunction::RadialPower {
            exponent: self.function_exponent(),
            radius: 1.0,
        }
    }

    pub fn measure(&self) -> AlphaMeasure {
        AlphaMeasure { alpha: self.alpha }
    }

    pub fn exponents(&self) -> Exponents {
        Exponents::new(self.p).expect("validated")
    }

    /// `ε = (α+2)(p-1)δ`; the annulus integrand is `r^{-1-ε}`.
    pub fn epsilon(&self) -> f64 {
        (self.alpha + 2.0) * (self.p - 1.0) * self.delta
    }
}

/// `∫_0^π sin^α θ dθ = √π Γ((α+1)/2) / Γ(α/2 + 1)`.
pub fn sine_integral(alpha: f64) -> f64 {
    PI.sqrt() * gamma(0.5 * (alpha + 1.0)) / gamma(0.5 * alpha + 1.0)
}

/// `‖f‖_{L^1(dA_α)} = S_α / ((α+2)δ)`, unweighted.
pub fn f_l1_norm(s: &SharpInstance) -> f64 {
    sine_integral(s.alpha) / ((s.alpha + 2.0) * s.delta)
}

/// `‖f‖_{L^p(w dA_α)}` from `‖f‖^p = S_α / ((α+2)δ)`.
pub fn closed_form_f_norm(s: &SharpInstance) -> f64 {
    f_l1_norm(s).powf(1.0 / s.p)
}

/// Angular extent, seen from the origin, of `{z - conj(ξ) : |ξ| <= 1, Im ξ > 0}`.
///
/// The set is `z` plus the closed upper unit half-disc. Its extreme directions are the
/// corners `z ± 1` or the points where a ray from the origin is tangent to the arc.
pub fn arg_span(z: Point) -> f64 {
    let r = z.modulus();
    if r <= 1.0 {
        return PI;
    }
    let phi = z.y.atan2(z.x);
    let a = (1.0 / r).asin();
    let right = z.y.atan2(z.x + 1.0);
    let left = z.y.atan2(z.x - 1.0);
    let mut hi = right.max(left);
    let mut lo = right.min(left);
    if phi <= FRAC_PI_2 - a {
        hi = hi.max(phi + a);
    }
    if phi >= FRAC_PI_2 + a {
        lo = lo.min(phi - a);
    }
    hi - lo
}

fn max_span(radius: f64, samples: usize) -> f64 {
    let n = samples.max(16);
    let at = |t: f64| arg_span(Point { x: radius * t.cos(), y: radius * t.sin() });
    let mut best_t = FRAC_PI_2;
    let mut best = at(best_t);
    for i in 1..n {
        let t = PI * i as f64 / n as f64;
        let v = at(t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    let mut h = PI / n as f64;
    for _ in 0..60 {
        for t in [best_t - h, best_t + h] {
            if t > 0.0 && t < PI {
                let v = at(t);
                if v > best {
                    best = v;
                    best_t = t;
                }
            }
        }
        h *= 0.5;
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AngleResult {
    pub alpha: f64,
    pub measured_m: f64,
    /// `tan(π/(4(2+α))) + 1`
    pub paper_formula_m: f64,
}

/// Smallest `M` such that for `|z| >= M` the arguments of `(z - conj(ξ))^{2+α}`, `ξ` in
/// the upper unit half-disc, span at most `π/2`. Bisection on `M`; for each candidate
/// the span is maximised over `samples` directions of `z` and then refined locally.
pub fn angle_threshold(alpha: f64, samples: usize) -> Result<AngleResult> {
    let mu = AlphaMeasure::new(alpha)?;
    let limit = FRAC_PI_2 / mu.dimension();
    let ok = |m: f64| max_span(m, samples) <= limit;
    let (mut lo, mut hi) = (1.0 + 1e-12, 2.0);
    while !ok(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NoBracket { lo: 1.0, hi });
        }
    }
    if ok(lo) {
        return Err(Error::NoBracket { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    Ok(AngleResult {
        alpha,
        measured_m: hi * (1.0 + 1e-10),
        paper_formula_m: (PI / (4.0 * mu.dimension())).tan() + 1.0,
    })
}

/// Uniform point of the open upper unit half-disc.
pub fn sample_half_disc(rng: &mut impl Rng) -> Point {
    loop {
        let x: f64 = rng.gen_range(-1.0..1.0);
        let y: f64 = rng.gen_range(0.0..1.0);
        if y > 0.0 && x * x + y * y <= 1.0 {
            return Point { x, y };
        }
    }
}

/// Counts random triples `(z, ξ_1, ξ_2)` with `M <= |z| <= 8M` whose arguments
/// `(2+α) arg(z - conj ξ_i)` differ by more than `π/2`.
pub fn arg_span_violations(alpha: f64, m: f64, trials: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limit = FRAC_PI_2 / (2.0 + alpha);
    let mut bad = 0;
    for _ in 0..trials {
        let r = m * rng.gen_range(0.0f64..3.0).exp2();
        let t = rng.gen_range(0.0..PI);
        let z = Point { x: r * t.cos(), y: r * t.sin() };
        let arg = |xi: Point| (z.y + xi.y).atan2(z.x - xi.x);
        let a = arg(sample_half_disc(&mut rng));
        let b = arg(sample_half_disc(&mut rng));
        if (a - b).abs() > limit {
            bad += 1;
        }
    }
    bad
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PfLower {
    pub value: f64,
    pub m: f64,
    pub log_radius: f64,
    pub tail_fraction: f64,
}

/// `‖ ‖f‖_{L^1(dA_α)} |z|^{-(2+α)} 1_{M<=|z|<=R} ‖_{L^p(w dA_α)}` by the exact radial integral
/// `S_α ∫_M^R r^{-1-ε} dr`. `R` is passed as `ln R` (default `ln M + 10/ε`) and must leave
/// less than 1% of the infinite-annulus value outside.
pub fn pf_norm_lower(s: &SharpInstance, m: f64, log_radius: Option<f64>) -> Result<PfLower> {
    if m.is_nan() || m <= 1.0 {
        return Err(Error::invalid("the inner radius must exceed 1"));
    }
    let eps = s.epsilon();
    let lm = m.ln();
    let lr = log_radius.unwrap_or(lm + 10.0 / eps);
    if lr <= lm {
        return Err(Error::invalid("outer radius must exceed the inner radius"));
    }
    let tail_fraction = (-eps * (lr - lm)).exp();
    if tail_fraction >= 0.01 {
        return Err(Error::WindowTooSmall { tail_fraction });
    }
    let radial = (-eps * lm).exp() * (1.0 - tail_fraction) / eps;
    let c = f_l1_norm(s);
    let value = c * (sine_integral(s.alpha) * radial).powf(1.0 / s.p);
    Ok(PfLower {
        value,
        m,
        log_radius: lr,
        tail_fraction,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub delta: f64,
    pub bekolle: f64,
    pub f_norm: f64,
    pub pf_norm: f64,
    pub ratio: f64,
}

/// `2^{-2}, ..., 2^{-8}`.
pub fn default_deltas() -> Vec<f64> {
    (2..=8).map(|k| (-(k as f64)).exp2()).collect()
}

/// Both grids on `j ∈ [-2, 2]`, `x ∈ [-8, 8)`, plus `[-t, t]` for `t = 2^{-4}, ..., 2^4`.
pub fn sweep_family() -> Result<BoxFamily> {
    let dy = BoxFamily::dyadic(&GridWindow::new(-2, 2, -8.0, 8.0)?)?;
    Ok(dy.union(&BoxFamily::centered_ladder(-4, 4)?))
}

pub fn delta_sweep(
    p: f64,
    alpha: f64,
    deltas: &[f64],
    fam: &BoxFamily,
    q: &QuadratureSpec,
) -> Result<Vec<SweepRecord>> {
    let m = angle_threshold(alpha, 512)?.measured_m;
    deltas
        .iter()
        .map(|&delta| {
            let row = || -> Result<SweepRecord> {
                let s = SharpInstance::new(p, alpha, delta)?;
                let b = bekolle_constant(&s.weight(), &s.exponents(), &s.measure(), fam, q)?;
                let f_norm = closed_form_f_norm(&s);
                let pf = pf_norm_lower(&s, m, None)?.value;
                Ok(SweepRecord {
                    delta,
                    bekolle: b.value,
                    f_norm,
                    pf_norm: pf,
                    ratio: pf / f_norm,
                })
            };
            row().map_err(|e| Error::AtDelta {
                delta,
                source: Box::new(e),
            })
        })
        .collect()
}
