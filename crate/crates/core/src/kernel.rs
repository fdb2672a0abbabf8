//! The Bergman kernel, its modulus, and the dyadic kernels `K_α^β`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::{ceil_log2, pow2, reflected_distance_sq, DyadicInterval, GridWindow, Point, Shift};
use crate::measure::AlphaMeasure;

/// `|z - conj(ξ)|^{-(2+α)}`.
pub fn kernel_plus(z: Point, xi: Point, mu: &AlphaMeasure) -> f64 {
    reflected_distance_sq(z, xi).powf(-0.5 * mu.dimension())
}

/// `(z - conj(ξ))^{-(2+α)}` on the principal branch.
pub fn kernel_bergman(z: Point, xi: Point, mu: &AlphaMeasure) -> Complex64 {
    Complex64::new(z.x - xi.x, z.y + xi.y).powf(-mu.dimension())
}

/// A truncated dyadic kernel value and the bound on the omitted coarser scales.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DyadicKernel {
    pub value: f64,
    pub tail: f64,
    /// Finest scale of a common box, if one exists in the window.
    pub first_common: Option<i32>,
}

/// `|R|^{-(2+α)} r/(1-r)` with `r = 2^{-(2+α)}` and `|R| = 2^{j_max}`.
pub fn geometric_tail(j_max: i32, mu: &AlphaMeasure) -> f64 {
    let r = (-mu.dimension()).exp2();
    pow2(j_max).powf(-mu.dimension()) * r / (1.0 - r)
}

/// `Σ_I 1_{Q_I}(z) 1_{Q_I}(ξ) |I|^{-(2+α)}` over grid intervals at scales `j_min..=j_max`.
pub fn kernel_dyadic(
    z: Point,
    xi: Point,
    shift: Shift,
    mu: &AlphaMeasure,
    window: &GridWindow,
) -> Result<DyadicKernel> {
    let tail = geometric_tail(window.j_max, mu);
    let j0 = ceil_log2(z.y.max(xi.y))?.max(window.j_min);
    let mut first = None;
    for j in j0..=window.j_max {
        if DyadicInterval::containing(shift, j, z.x)? == DyadicInterval::containing(shift, j, xi.x)? {
            first = Some(j);
            break;
        }
    }
    let value = match first {
        Some(j) => (j..=window.j_max).map(|k| pow2(k).powf(-mu.dimension())).sum(),
        None => 0.0,
    };
    Ok(DyadicKernel {
        value,
        tail,
        first_common: first,
    })
}
