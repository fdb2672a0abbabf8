//! Békollé constants over finite box families.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{GridWindow, Interval, Shift};
use crate::measure::{AlphaMeasure, Exponents};
use crate::quadrature::QuadratureSpec;
use crate::weight::{dual_weight, Weight};

/// A finite set of intervals standing in for the supremum over all intervals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxFamily {
    pub label: String,
    intervals: Vec<Interval>,
}

impl BoxFamily {
    pub fn explicit(label: impl Into<String>, intervals: Vec<Interval>) -> Result<BoxFamily> {
        if intervals.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if let Some(i) = intervals.iter().find(|i| !(i.length > 0.0 && i.left.is_finite())) {
            return Err(Error::invalid(format!("family member {i:?} is not an interval")));
        }
        Ok(BoxFamily {
            label: label.into(),
            intervals,
        })
    }

    /// Every interval of both grids in the window.
    pub fn dyadic(window: &GridWindow) -> Result<BoxFamily> {
        let mut v = Vec::new();
        for shift in Shift::BOTH {
            v.extend(window.intervals(shift)?.iter().map(|d| d.realize()));
        }
        BoxFamily::explicit("dyadic", v)
    }

    /// `[-t, t]` for each `t`.
    pub fn centered(ts: impl IntoIterator<Item = f64>) -> Result<BoxFamily> {
        let v = ts
            .into_iter()
            .map(Interval::centered)
            .collect::<Result<Vec<_>>>()?;
        BoxFamily::explicit("centered", v)
    }

    /// `[-2^k, 2^k]` for `k_min <= k <= k_max`.
    pub fn centered_ladder(k_min: i32, k_max: i32) -> Result<BoxFamily> {
        BoxFamily::centered((k_min..=k_max).map(|k| (k as f64).exp2()))
    }

    pub fn union(&self, other: &BoxFamily) -> BoxFamily {
        let mut intervals = self.intervals.clone();
        intervals.extend_from_slice(&other.intervals);
        BoxFamily {
            label: format!("{}+{}", self.label, other.label),
            intervals,
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// A family maximum together with the box attaining it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FamilyMax {
    pub value: f64,
    pub worst_box: Interval,
    pub family_size: usize,
}

/// `⟨w⟩_{Q_I} ⟨w^{1-p'}⟩_{Q_I}^{p-1}`.
pub fn bekolle_ratio(w: &Weight, e: &Exponents, mu: &AlphaMeasure, i: &Interval, q: &QuadratureSpec) -> Result<f64> {
    let sigma = dual_weight(w, e);
    ratio_with(w, &sigma, e.p - 1.0, mu, i, q)
}

fn ratio_with(w: &Weight, v: &Weight, power: f64, mu: &AlphaMeasure, i: &Interval, q: &QuadratureSpec) -> Result<f64> {
    let a = w.box_average(i, mu, q)?;
    let b = v.box_average(i, mu, q)?;
    Ok(a * b.powf(power))
}

fn family_max(fam: &BoxFamily, mut ratio: impl FnMut(&Interval) -> Result<f64>) -> Result<FamilyMax> {
    let mut best: Option<(f64, Interval)> = None;
    for i in fam.intervals() {
        let r = match ratio(i) {
            Ok(r) => r,
            Err(Error::EmptyBox { .. }) => continue,
            Err(e) => return Err(e),
        };
        if best.is_none_or(|(b, _)| r > b) {
            best = Some((r, *i));
        }
    }
    let (value, worst_box) = best.ok_or(Error::EmptyFamily)?;
    Ok(FamilyMax {
        value,
        worst_box,
        family_size: fam.len(),
    })
}

/// `max_I` of [`bekolle_ratio`] over the family; boxes missing a table weight's domain are skipped.
pub fn bekolle_constant(
    w: &Weight,
    e: &Exponents,
    mu: &AlphaMeasure,
    fam: &BoxFamily,
    q: &QuadratureSpec,
) -> Result<FamilyMax> {
    let sigma = dual_weight(w, e);
    family_max(fam, |i| ratio_with(w, &sigma, e.p - 1.0, mu, i, q))
}

/// `max_I ⟨w⟩_{Q_I} ⟨σ^{-1}⟩_{Q_I}`.
pub fn joint_b2_constant(
    w: &Weight,
    sigma: &Weight,
    mu: &AlphaMeasure,
    fam: &BoxFamily,
    q: &QuadratureSpec,
) -> Result<FamilyMax> {
    let inv = sigma.pow(-1.0);
    family_max(fam, |i| ratio_with(w, &inv, 1.0, mu, i, q))
}
