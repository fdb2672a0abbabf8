//! Gauss-Legendre rules and the tensor rule used on half-plane rectangles.
//!
//! Vertical integrals against `y^α dy` are taken in the variable `u = y^{1+α}`,
//! which turns `∫ g(y) y^α dy` into `(1+α)^{-1} ∫ g(u^{1/(1+α)}) du` and removes
//! the boundary singularity for `α < 0`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Rect;

const MAX_CACHED: usize = 128;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> GaussLegendre {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// `∫_a^b f`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }

    /// Mapped nodes and weights on `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, w * half))
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Cached rule for `n <= 128`.
pub fn gauss_legendre(n: usize) -> &'static GaussLegendre {
    static CACHE: [OnceLock<GaussLegendre>; MAX_CACHED + 1] =
        [const { OnceLock::new() }; MAX_CACHED + 1];
    assert!(
        (1..=MAX_CACHED).contains(&n),
        "cached rules cover 1..={MAX_CACHED} nodes"
    );
    CACHE[n].get_or_init(|| GaussLegendre::new(n))
}

/// Node counts for tensor quadrature on a rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Nodes per panel in `x`.
    pub nodes_x: usize,
    /// Nodes per panel in `u = y^{1+α}`.
    pub nodes_u: usize,
    /// The finest level uses `2^refinement_levels` panels per axis; the previous level
    /// provides the error estimate.
    pub refinement_levels: u32,
    /// Relative disagreement between the two finest levels that is still accepted.
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes_x: 16,
            nodes_u: 16,
            refinement_levels: 1,
            rel_tol: 1e-8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes_x < 2 || self.nodes_u < 2 {
            return Err(Error::invalid("quadrature needs at least 2 nodes per axis"));
        }
        if self.nodes_x > MAX_CACHED || self.nodes_u > MAX_CACHED {
            return Err(Error::invalid("at most 128 nodes per axis"));
        }
        if self.refinement_levels == 0 || self.refinement_levels > 8 {
            return Err(Error::invalid("refinement_levels must be in 1..=8"));
        }
        Ok(())
    }

    pub fn with_nodes(nodes: usize) -> QuadratureSpec {
        QuadratureSpec {
            nodes_x: nodes,
            nodes_u: nodes,
            ..QuadratureSpec::default()
        }
    }
}

/// A quadrature value with its self-reported error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    /// Bound on mass omitted by truncating the domain.
    pub tail: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Estimate {
        Estimate {
            value,
            error: 0.0,
            tail: 0.0,
        }
    }

    pub fn check(self, rel_tol: f64) -> Result<Estimate> {
        if self.error > rel_tol * self.value.abs().max(f64::MIN_POSITIVE) && self.error > 1e-300 {
            Err(Error::NonConvergence {
                value: self.value,
                error: self.error,
            })
        } else {
            Ok(self)
        }
    }
}

/// `∫∫_rect f(x, y) y^α dy dx` with `panels × panels` sub-rectangles of tensor Gauss rules.
pub fn tensor_rect<T, F>(rect: &Rect, alpha: f64, spec: &QuadratureSpec, panels: usize, f: &mut F) -> T
where
    T: Default + std::ops::AddAssign + std::ops::Mul<f64, Output = T>,
    F: FnMut(f64, f64) -> T,
{
    let gx = gauss_legendre(spec.nodes_x);
    let gu = gauss_legendre(spec.nodes_u);
    let a1 = 1.0 + alpha;
    let inv = 1.0 / a1;
    let u0 = rect.y0.powf(a1);
    let u1 = rect.y1.powf(a1);
    let dx = (rect.x1 - rect.x0) / panels as f64;
    let du = (u1 - u0) / panels as f64;
    let mut total = T::default();
    for pu in 0..panels {
        let ua = u0 + du * pu as f64;
        let ub = if pu + 1 == panels { u1 } else { ua + du };
        for (u, wu) in gu.mapped(ua, ub) {
            let y = if alpha == 0.0 { u } else { u.powf(inv) };
            for px in 0..panels {
                let xa = rect.x0 + dx * px as f64;
                let xb = if px + 1 == panels { rect.x1 } else { xa + dx };
                for (x, wx) in gx.mapped(xa, xb) {
                    total += f(x, y) * (wx * wu * inv);
                }
            }
        }
    }
    total
}

/// Two-level tensor integration over a rectangle with a refinement error estimate.
pub fn integrate_rect(
    rect: &Rect,
    alpha: f64,
    spec: &QuadratureSpec,
    mut f: impl FnMut(f64, f64) -> f64,
) -> Estimate {
    let fine = 1usize << spec.refinement_levels;
    let coarse = fine / 2;
    let a: f64 = tensor_rect(rect, alpha, spec, fine, &mut f);
    let b: f64 = tensor_rect(rect, alpha, spec, coarse, &mut f);
    Estimate {
        value: a,
        error: (a - b).abs(),
        tail: 0.0,
    }
}

/// Nodes and weights for `∫_0^b g(y) y^α dy` with `g` smooth on `[0, b]`. In the
/// variable `u = y^{1+α}` the panels shrink by a factor 4 toward zero, so that
/// fractional powers of `u` near the boundary do not spoil convergence.
pub fn graded_rule(b: f64, alpha: f64, nodes: usize, levels: u32) -> Vec<(f64, f64)> {
    let rule = gauss_legendre(nodes);
    let a1 = 1.0 + alpha;
    let inv = 1.0 / a1;
    let mut out = Vec::with_capacity(nodes * (levels as usize + 1));
    let mut ub = b.powf(a1);
    for level in 0..=levels {
        let ua = if level == levels { 0.0 } else { ub * 0.25 };
        for (u, w) in rule.mapped(ua, ub) {
            let y = if alpha == 0.0 { u } else { u.powf(inv) };
            out.push((y, w * inv));
        }
        ub = ua;
    }
    out
}

/// `∫_0^b g(y) y^α dy` on the nodes of [`graded_rule`].
pub fn graded_vertical(b: f64, alpha: f64, nodes: usize, levels: u32, mut g: impl FnMut(f64) -> f64) -> f64 {
    graded_rule(b, alpha, nodes, levels)
        .into_iter()
        .map(|(y, w)| g(y) * w)
        .sum()
}
