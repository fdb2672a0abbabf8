//! The measures `dA_α = y^α dx dy` and Hölder exponent pairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CarlesonBox, Rect};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaMeasure {
    pub alpha: f64,
}

impl AlphaMeasure {
    pub fn new(alpha: f64) -> Result<AlphaMeasure> {
        if !(alpha > -1.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!("alpha must exceed -1, got {alpha}")));
        }
        Ok(AlphaMeasure { alpha })
    }

    /// `2 + α`, the homogeneity of `dA_α`.
    pub fn dimension(&self) -> f64 {
        2.0 + self.alpha
    }

    /// `∫_{y0}^{y1} y^α dy`.
    pub fn vertical_mass(&self, y0: f64, y1: f64) -> f64 {
        let a1 = 1.0 + self.alpha;
        if self.alpha == 0.0 {
            return y1 - y0;
        }
        (y1.powf(a1) - y0.powf(a1)) / a1
    }

    pub fn rect_area(&self, rect: &Rect) -> f64 {
        if rect.is_empty() {
            return 0.0;
        }
        rect.width() * self.vertical_mass(rect.y0, rect.y1)
    }

    /// `|Q_I|_α` or `|T_I|_α` in closed form.
    pub fn box_area(&self, b: &CarlesonBox) -> f64 {
        alpha_area(b, self)
    }
}

/// `|Q_I|_α = |I|^{2+α}/(1+α)` and `|T_I|_α = |I|^{2+α}(1 - 2^{-(1+α)})/(1+α)`.
pub fn alpha_area(b: &CarlesonBox, mu: &AlphaMeasure) -> f64 {
    let a1 = 1.0 + mu.alpha;
    let l = b.interval.length;
    let full = l.powf(2.0 + mu.alpha) / a1;
    match b.kind {
        crate::geometry::BoxKind::Full => full,
        crate::geometry::BoxKind::TopHalf => full * (1.0 - (-a1).exp2()),
    }
}

/// `p` together with `p' = p/(p-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub p: f64,
    pub p_conj: f64,
}

impl Exponents {
    pub fn new(p: f64) -> Result<Exponents> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::invalid(format!("p must lie in (1, inf), got {p}")));
        }
        Ok(Exponents {
            p,
            p_conj: p / (p - 1.0),
        })
    }

    pub fn conj(&self) -> Exponents {
        Exponents {
            p: self.p_conj,
            p_conj: self.p,
        }
    }

    /// `1 - p'`, the exponent of the dual weight.
    pub fn dual_power(&self) -> f64 {
        1.0 - self.p_conj
    }
}
