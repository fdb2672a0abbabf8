//! The iteration `D(h) = Σ_k 2^{-k} S^k(h) / N^k` used to extrapolate from `p = 2`.
//!
//! Everything lives on the tiles of one truncated grid. A catalog weight is first
//! realized as its tile averages, and that tile weight is used throughout, so the
//! maximal function, the Békollé constants and the norms all see the same weight.

use std::sync::Arc;

use serde::Serialize;

use crate::bekolle::{bekolle_constant, BoxFamily};
use crate::error::{Error, Result};
use crate::geometry::{CarlesonBox, Interval};
use crate::measure::{AlphaMeasure, Exponents};
use crate::operators::{family_maximal, maximal_alpha};
use crate::quadrature::QuadratureSpec;
use crate::report::ClaimReport;
use crate::tiles::{TileFunction, TileGrid};
use crate::weight::Weight;

/// `φ(p) = (p-2)/(p-1)`.
pub fn phi(p: f64) -> Result<f64> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(Error::invalid(format!("phi is defined for p >= 2, got {p}")));
    }
    Ok((p - 2.0) / (p - 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExtrapolationConfig {
    pub p: f64,
    /// Number of iterates `K`; the series keeps terms `0..=K`.
    pub truncation: usize,
    /// Divisor `N`; when `None` it is chosen as the larger of the measured quotients
    /// and `B_p(w)^φ`.
    pub norm_bound: Option<f64>,
    pub tolerance: f64,
}

impl ExtrapolationConfig {
    pub fn new(p: f64) -> Result<ExtrapolationConfig> {
        phi(p)?;
        if p == 2.0 {
            return Err(Error::invalid("the iteration needs p > 2"));
        }
        Ok(ExtrapolationConfig {
            p,
            truncation: 40,
            norm_bound: None,
            tolerance: 1e-6,
        })
    }
}

/// Tile averages of `w`; table weights on the same grid are used as they are.
pub fn realize_weight(w: &Weight, grid: &TileGrid, mu: &AlphaMeasure, q: &QuadratureSpec) -> Result<TileFunction> {
    if let Weight::Table { tiles, .. } = w {
        if tiles.grid() == grid {
            return Ok((**tiles).clone());
        }
    }
    TileFunction::try_from_fn(grid.clone(), |d| {
        let rect = w.clip(&d.top_half().rect());
        let area = mu.rect_area(&rect);
        if area == 0.0 {
            return Err(Error::DomainMismatch(format!("weight {w} does not cover tile {d}")));
        }
        Ok(w.rect_integral(&rect, mu, q)?.check(q.rel_tol)?.value / area)
    })
}

fn table(t: TileFunction) -> Weight {
    Weight::Table {
        tiles: Arc::new(t),
        source: None,
    }
}

/// `(∫_Ω |h|^r w dA_α)^{1/r}` for tile functions.
pub fn tile_norm(h: &TileFunction, w: &TileFunction, r: f64, mu: &AlphaMeasure) -> Result<f64> {
    let hw = h.zip_map(w, |a, b| a.abs().powf(r) * b)?;
    Ok(hw.integral(mu).powf(1.0 / r))
}

/// `S(h) = (M_α(h^{1/φ} w) / w)^φ` with `w` the tile realization of the weight.
///
/// When a family is given, its boxes are added to the maximal function.
pub fn s_operator(
    h: &TileFunction,
    w: &Weight,
    p: f64,
    mu: &AlphaMeasure,
    fam: Option<&BoxFamily>,
    q: &QuadratureSpec,
) -> Result<TileFunction> {
    let wt = realize_weight(w, h.grid(), mu, q)?;
    s_tiles(h, &wt, p, mu, fam)
}

fn s_tiles(h: &TileFunction, wt: &TileFunction, p: f64, mu: &AlphaMeasure, fam: Option<&BoxFamily>) -> Result<TileFunction> {
    let ph = phi(p)?;
    if ph == 0.0 {
        return Err(Error::invalid("S needs p > 2"));
    }
    if !h.is_nonnegative() {
        return Err(Error::invalid("S acts on nonnegative functions"));
    }
    let g = h.zip_map(wt, |a, b| a.powf(1.0 / ph) * b)?;
    let m = match fam {
        Some(f) => family_maximal(&g, f, mu),
        None => maximal_alpha(&g, mu),
    };
    m.zip_map(wt, |a, b| (a / b).powf(ph))
}

/// The truncated series and what was measured while building it.
#[derive(Clone, Debug, Serialize)]
pub struct RdfOutput {
    pub d: TileFunction,
    pub divisor: f64,
    /// `‖S(u)‖ / ‖u‖` along the iterates `u = S^k h`.
    pub quotients: Vec<f64>,
    /// `‖S^k h‖ / N^k` for each kept term.
    pub term_norms: Vec<f64>,
    /// `B_p(w)` of the tile-realized weight over the family.
    pub bekolle: f64,
}

/// `D(h) = Σ_{k=0}^{K} 2^{-k} S^k(h) / N^k`.
pub fn rdf_algorithm(
    h: &TileFunction,
    w: &Weight,
    cfg: &ExtrapolationConfig,
    mu: &AlphaMeasure,
    fam: &BoxFamily,
    q: &QuadratureSpec,
) -> Result<RdfOutput> {
    let wt = realize_weight(w, h.grid(), mu, q)?;
    let ph = phi(cfg.p)?;
    let e = Exponents::new(cfg.p)?;
    let r = e.p_conj / ph;
    let bekolle = bekolle_constant(&table(wt.clone()), &e, mu, fam, q)?.value;

    let mut iterates = vec![h.clone()];
    let mut norms = vec![tile_norm(h, &wt, r, mu)?];
    let mut quotients = Vec::new();
    if norms[0] > 0.0 {
        for _ in 0..cfg.truncation {
            let u = iterates.last().unwrap();
            let nu = *norms.last().unwrap();
            let s = s_tiles(u, &wt, cfg.p, mu, Some(fam))?;
            let ns = tile_norm(&s, &wt, r, mu)?;
            quotients.push(ns / nu);
            iterates.push(s.map(|v| v / ns));
            norms.push(1.0);
        }
    }
    let measured = quotients.iter().copied().fold(0.0, f64::max);
    let divisor = cfg.norm_bound.unwrap_or(measured.max(bekolle.powf(ph)));

    let mut d = TileFunction::constant(h.grid().clone(), 0.0);
    let mut term_norms = Vec::with_capacity(iterates.len());
    let mut scale = norms[0];
    for (k, u) in iterates.iter().enumerate() {
        if k > 0 {
            let q_k = quotients[k - 1];
            if q_k > divisor * (1.0 + cfg.tolerance) {
                return Err(Error::NonDecay {
                    k,
                    norm: scale * q_k / divisor,
                    previous: scale,
                });
            }
            scale *= q_k / divisor;
        }
        term_norms.push(scale);
        if scale == 0.0 {
            break;
        }
        // iterates after the first are normalized to unit norm
        let c = (-(k as f64)).exp2() * if k == 0 { 1.0 } else { scale };
        d = d.zip_map(u, |a, b| a + c * b)?;
    }
    Ok(RdfOutput {
        d,
        divisor,
        quotients,
        term_norms,
        bekolle,
    })
}

fn box_avg(t: &TileFunction, iv: &Interval, mu: &AlphaMeasure) -> Option<f64> {
    let rect = CarlesonBox::full(*iv).rect().intersect(&t.grid().domain());
    if rect.is_empty() {
        return None;
    }
    Some(t.rect_integral(&rect, mu) / mu.rect_area(&rect))
}

/// Checks `⟨hw⟩_Q ⟨(S(h) w)^{-1}⟩_Q <= (⟨w⟩_Q ⟨w^{1-p'}⟩_Q^{p-1})^{1/(p-1)}` on every
/// family box, and reports the family maxima of both sides.
pub fn check_joint_claim(
    h: &TileFunction,
    w: &Weight,
    p: f64,
    mu: &AlphaMeasure,
    fam: &BoxFamily,
    q: &QuadratureSpec,
    tolerance: f64,
) -> Result<ClaimReport> {
    let wt = realize_weight(w, h.grid(), mu, q)?;
    let s = s_tiles(h, &wt, p, mu, Some(fam))?;
    if s.min_value() <= 0.0 {
        return Err(Error::invalid("S(h) vanishes somewhere; h must be nonzero"));
    }
    let e = Exponents::new(p)?;
    let hw = h.zip_map(&wt, |a, b| a * b)?;
    let inv = s.zip_map(&wt, |a, b| 1.0 / (a * b))?;
    let dual = wt.map(|v| v.powf(e.dual_power()));
    let mut lhs: f64 = 0.0;
    let mut rhs: f64 = 0.0;
    let mut worst = fam.intervals()[0];
    let mut worst_margin = f64::INFINITY;
    let mut violations = 0;
    for iv in fam.intervals() {
        let (Some(a), Some(b), Some(c), Some(d)) = (
            box_avg(&hw, iv, mu),
            box_avg(&inv, iv, mu),
            box_avg(&wt, iv, mu),
            box_avg(&dual, iv, mu),
        ) else {
            continue;
        };
        let left = a * b;
        let right = (c * d.powf(p - 1.0)).powf(1.0 / (p - 1.0));
        lhs = lhs.max(left);
        rhs = rhs.max(right);
        if left > right * (1.0 + tolerance) {
            violations += 1;
        }
        let margin = right / left - 1.0;
        if margin < worst_margin {
            worst_margin = margin;
            worst = *iv;
        }
    }
    Ok(ClaimReport {
        claim: "joint constant of (hw, S(h)w) against B_p(w)^{1/(p-1)}".into(),
        lhs,
        rhs,
        margin: worst_margin,
        family_size: fam.len(),
        worst_box: worst,
        pass: violations == 0,
    })
}

/// Reports for `|h| <= D(h)`, `‖D(h)‖ <= 2‖h‖`, the joint claim and
/// `B_2(D(h)w) <= 2N B_p(w)^{1/(p-1)}`.
pub fn verify_properties(
    h: &TileFunction,
    w: &Weight,
    cfg: &ExtrapolationConfig,
    mu: &AlphaMeasure,
    fam: &BoxFamily,
    q: &QuadratureSpec,
) -> Result<(RdfOutput, Vec<ClaimReport>)> {
    let out = rdf_algorithm(h, w, cfg, mu, fam, q)?;
    let wt = realize_weight(w, h.grid(), mu, q)?;
    let e = Exponents::new(cfg.p)?;
    let r = e.p_conj / phi(cfg.p)?;
    let mut reports = Vec::new();

    let mut worst_gap = f64::NEG_INFINITY;
    let mut worst_tile = None;
    for ((d, hv), dv) in h.iter().zip(out.d.values()) {
        let gap = hv.abs() - dv;
        if gap > worst_gap {
            worst_gap = gap;
            worst_tile = Some(d);
        }
    }
    let worst_tile = worst_tile.expect("nonempty grid");
    reports.push(ClaimReport {
        claim: "|h| <= D(h) on every tile".into(),
        lhs: worst_gap,
        rhs: 0.0,
        margin: -worst_gap,
        family_size: h.grid().len(),
        worst_box: worst_tile.realize(),
        pass: worst_gap <= 0.0,
    });

    let nd = tile_norm(&out.d, &wt, r, mu)?;
    let nh = tile_norm(h, &wt, r, mu)?;
    reports.push(ClaimReport {
        claim: "‖D(h)‖ <= 2‖h‖".into(),
        lhs: nd,
        rhs: 2.0 * nh,
        margin: 2.0 * nh / nd - 1.0,
        family_size: out.term_norms.len(),
        worst_box: h.grid().tile(0, 0).realize(),
        pass: nd <= 2.0 * nh * (1.0 + cfg.tolerance),
    });

    reports.push(check_joint_claim(h, w, cfg.p, mu, fam, q, cfg.tolerance)?);

    let dw = out.d.zip_map(&wt, |a, b| a * b)?;
    let b2 = bekolle_constant(&table(dw), &Exponents::new(2.0)?, mu, fam, q)?;
    let bound = 2.0 * out.divisor * out.bekolle.powf(1.0 / (cfg.p - 1.0));
    reports.push(ClaimReport {
        claim: "B_2(D(h)w) <= 2N B_p(w)^{1/(p-1)}".into(),
        lhs: b2.value,
        rhs: bound,
        margin: bound / b2.value - 1.0,
        family_size: b2.family_size,
        worst_box: b2.worst_box,
        pass: b2.value <= bound * (1.0 + cfg.tolerance),
    });
    Ok((out, reports))
}
