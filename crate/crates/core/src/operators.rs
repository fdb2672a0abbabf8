//! `P_α`, `P_α^+`, the dyadic model `Q_α^β` and the maximal functions.

use std::ops::{AddAssign, Mul, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::bekolle::BoxFamily;
use crate::error::Result;
use crate::function::{window_rect, TestFunction};
use crate::geometry::{pow2, CarlesonBox, GridWindow, Point, Rect};
use crate::kernel::{geometric_tail, kernel_bergman, kernel_plus};
use crate::measure::AlphaMeasure;
use crate::quadrature::{gauss_legendre, graded_rule, tensor_rect, QuadratureSpec};
use crate::tiles::{TileFunction, TileGrid};
use crate::weight::Weight;

/// Values that quadrature can accumulate.
pub trait Accum: Copy + Default + AddAssign + Mul<f64, Output = Self> + Sub<Output = Self> {
    fn magnitude(self) -> f64;
}

impl Accum for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Accum for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// An operator value with its quadrature error and window-tail bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OperatorValue<T> {
    pub value: T,
    pub error: f64,
    pub tail: f64,
}

/// `∫ |f|(ξ) |z - conj(ξ)|^{-(2+α)} dA_α(ξ)` over the window.
///
/// Radial powers are integrated over their whole support in polar coordinates.
pub fn apply_pplus(
    f: &TestFunction,
    z: Point,
    mu: &AlphaMeasure,
    window: &GridWindow,
    q: &QuadratureSpec,
) -> Result<OperatorValue<f64>> {
    q.validate()?;
    integrate_against(f, z, mu, window, q, true, |xi| kernel_plus(z, xi, mu))
}

/// `c_α ∫ f(ξ) (z - conj(ξ))^{-(2+α)} dA_α(ξ)` over the window.
pub fn apply_bergman(
    f: &TestFunction,
    z: Point,
    mu: &AlphaMeasure,
    window: &GridWindow,
    q: &QuadratureSpec,
    c_alpha: f64,
) -> Result<OperatorValue<Complex64>> {
    q.validate()?;
    let v = integrate_against(f, z, mu, window, q, false, |xi| kernel_bergman(z, xi, mu))?;
    Ok(OperatorValue {
        value: v.value * c_alpha,
        error: v.error * c_alpha.abs(),
        tail: v.tail * c_alpha.abs(),
    })
}

fn integrate_against<T: Accum>(
    f: &TestFunction,
    z: Point,
    mu: &AlphaMeasure,
    window: &GridWindow,
    q: &QuadratureSpec,
    modulus: bool,
    kernel: impl Fn(Point) -> T,
) -> Result<OperatorValue<T>> {
    let fv = |xi: Point| {
        let v = f.eval(xi);
        if modulus {
            v.abs()
        } else {
            v
        }
    };
    if let TestFunction::RadialPower { exponent, radius } = f {
        return Ok(polar(*exponent, *radius, mu, q, &kernel));
    }
    let fine = 1usize << q.refinement_levels;
    let mut value = T::default();
    let mut error = 0.0;
    for cell in f.cells(window) {
        let mut g = |x: f64, y: f64| {
            let xi = Point { x, y };
            kernel(xi) * fv(xi)
        };
        let a: T = tensor_rect(&cell, mu.alpha, q, fine, &mut g);
        let b: T = tensor_rect(&cell, mu.alpha, q, fine / 2, &mut g);
        value += a;
        error += (a - b).magnitude();
    }
    let outside = outside_mass(f, window, mu);
    let tail = outside * z.y.powf(-mu.dimension());
    Ok(OperatorValue { value, error, tail })
}

/// `∫ |f| dA_α` outside the window, for functions where it is known exactly.
fn outside_mass(f: &TestFunction, window: &GridWindow, mu: &AlphaMeasure) -> f64 {
    let frame = window_rect(window);
    let cut = |r: &Rect| (mu.rect_area(r) - mu.rect_area(&r.intersect(&frame))).max(0.0);
    match f {
        TestFunction::Indicator(b) => cut(&b.rect()),
        TestFunction::Tiles(t) => t.iter().map(|(d, v)| v.abs() * cut(&d.top_half().rect())).sum(),
        _ => 0.0,
    }
}

/// `∫_{|ξ|<=R} |ξ|^e k(ξ) dA_α(ξ)` in polar form with geometric radial panels and an
/// analytic innermost disc on which `k` is frozen at the origin.
fn polar<T: Accum>(e: f64, radius: f64, mu: &AlphaMeasure, q: &QuadratureSpec, k: impl Fn(Point) -> T) -> OperatorValue<T> {
    let run = |nodes: usize| -> T {
        let alpha = mu.alpha;
        let half = std::f64::consts::FRAC_PI_2;
        let ang = graded_rule(half, alpha, nodes, 16);
        let sinc = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
        let angular: Vec<(f64, f64, f64)> = ang
            .iter()
            .flat_map(|&(t, w)| {
                let wt = w * sinc(t).powf(alpha);
                [(t.cos(), t.sin(), wt), (-t.cos(), t.sin(), wt)]
            })
            .collect();
        let radial_power = e + alpha + 1.0;
        let rule = gauss_legendre(nodes);
        let levels = 24;
        let mut total = T::default();
        let mut hi = radius;
        for _ in 0..levels {
            let lo = hi * 0.25;
            for (r, wr) in rule.mapped(lo, hi) {
                let rw = wr * r.powf(radial_power);
                let mut ring = T::default();
                for &(c, s, wt) in &angular {
                    ring += k(Point { x: r * c, y: r * s }) * wt;
                }
                total += ring * rw;
            }
            hi = lo;
        }
        let s_alpha: f64 = angular.iter().map(|a| a.2).sum();
        let inner = hi.powf(e + mu.dimension()) / (e + mu.dimension());
        total += k(Point { x: 0.0, y: 0.0 }) * (inner * s_alpha);
        total
    };
    let a = run(q.nodes_x);
    let b = run((q.nodes_x / 2).max(4));
    OperatorValue {
        value: a,
        error: (a - b).magnitude(),
        tail: 0.0,
    }
}

/// `Q_α^β f = Σ_I ⟨f, 1_{Q_I}⟩_α |I|^{-(2+α)} 1_{Q_I}` over the tile grid of `f`.
///
/// One bottom-up pass forms the box sums, one top-down pass accumulates ancestors.
/// Boxes above `j_max` are omitted; [`dyadic_tail`] bounds their contribution.
pub fn apply_dyadic(f: &TileFunction, mu: &AlphaMeasure) -> TileFunction {
    let grid = f.grid();
    let masses = f
        .zip_map(&TileFunction::tile_areas(grid, mu), |v, a| v * a)
        .expect("same grid");
    let sums = TileFunction::box_sums(&masses);
    let mut out = sums.clone();
    for k in 0..grid.levels() {
        let scale = pow2(grid.scale(k)).powf(-mu.dimension());
        for v in out.level_mut(k) {
            *v *= scale;
        }
    }
    accumulate_down(&mut out, |parent, own| parent + own);
    out
}

/// Pointwise bound on the super-window part of `Q_α^β f`: `‖f‖_{L^1(α)} |R|^{-(2+α)} r/(1-r)`.
pub fn dyadic_tail(f: &TileFunction, mu: &AlphaMeasure) -> f64 {
    f.map(f64::abs).integral(mu) * geometric_tail(f.grid().window.j_max, mu)
}

/// Per-tile bound on the part of `Q_α^β f` coming from the strip below the finest tiles,
/// for an `f` whose modulus there does not exceed its largest finest-level value.
pub fn dyadic_floor_tail(f: &TileFunction, mu: &AlphaMeasure) -> TileFunction {
    let grid = f.grid();
    let bottom = grid.levels() - 1;
    let sup = f.level(bottom).iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let strip = mu.vertical_mass(0.0, pow2(grid.window.j_min - 1));
    let mut out = TileFunction::from_fn(grid.clone(), |d| sup * strip * pow2(d.j).powf(-(1.0 + mu.alpha)));
    accumulate_down(&mut out, |parent, own| parent + own);
    out
}

fn accumulate_down(t: &mut TileFunction, op: impl Fn(f64, f64) -> f64) {
    for k in 1..t.grid().levels() {
        let parent = t.level(k - 1).to_vec();
        for (i, v) in t.level_mut(k).iter_mut().enumerate() {
            *v = op(parent[i / 2], *v);
        }
    }
}

fn chain_max(num: &TileFunction, den: &TileFunction) -> TileFunction {
    let mut out = num
        .zip_map(den, |a, b| if b > 0.0 { a / b } else { 0.0 })
        .expect("same grid");
    accumulate_down(&mut out, f64::max);
    out
}

/// `M_{w,α} f`: on each tile, the largest `w dA_α`-average of `|f|` over grid boxes containing it.
pub fn dyadic_maximal(f: &TileFunction, w: &Weight, mu: &AlphaMeasure, q: &QuadratureSpec) -> Result<TileFunction> {
    let masses = weight_tile_masses(f.grid(), w, mu, q)?;
    Ok(maximal_with_masses(f, &masses))
}

/// `∫_{T_I} w dA_α` for every tile.
pub fn weight_tile_masses(grid: &TileGrid, w: &Weight, mu: &AlphaMeasure, q: &QuadratureSpec) -> Result<TileFunction> {
    TileFunction::try_from_fn(grid.clone(), |d| {
        let rect = w.clip(&d.top_half().rect());
        Ok(w.rect_integral(&rect, mu, q)?.check(q.rel_tol)?.value)
    })
}

/// Dyadic maximal function for precomputed tile masses `W(T) = ∫_T w dA_α`.
pub fn maximal_with_masses(f: &TileFunction, masses: &TileFunction) -> TileFunction {
    let fw = f.zip_map(masses, |v, m| v.abs() * m).expect("same grid");
    chain_max(&TileFunction::box_sums(&fw), &TileFunction::box_sums(masses))
}

/// The two-grid maximal function with `w ≡ 1`.
///
/// On each tile `T_J` the value is the largest average of `|f|` over `Q_I ∩ Ω` for
/// boxes `Q_I` of either grid that meet `T_J` at scales up to `j_max`. This is the
/// supremum of the pointwise two-grid maximal function over the tile; by the covering
/// lemma it is at most `8^{2+α}` times the supremum over all intervals, up to the
/// truncation of the window.
pub fn maximal_alpha(f: &TileFunction, mu: &AlphaMeasure) -> TileFunction {
    let grid = f.grid();
    let areas = TileFunction::tile_areas(grid, mu);
    let mut out = maximal_with_masses(f, &areas);

    let (x0, x1) = grid.span();
    let other_win = GridWindow {
        x_lo: x0,
        x_hi: x1,
        ..grid.window
    };
    let other = TileGrid::new(grid.shift.other(), other_win).expect("window already validated");
    let mut num = TileFunction::constant(other.clone(), 0.0);
    let mut den = TileFunction::constant(other.clone(), 0.0);
    for k in 0..other.levels() {
        let j = other.scale(k);
        let vm = mu.vertical_mass(pow2(j - 1), pow2(j));
        for i in 0..other.count(k) {
            let iv = other.tile(k, i).realize();
            let (mut a, mut b) = (0.0, 0.0);
            for bi in grid.overlapping(k, iv.left, iv.right()) {
                let ov = grid.tile(k, bi).realize().overlap(iv.left, iv.right());
                a += f.level(k)[bi].abs() * ov;
                b += ov;
            }
            num.level_mut(k)[i] = a * vm;
            den.level_mut(k)[i] = b * vm;
        }
    }
    let other_max = chain_max(&TileFunction::box_sums(&num), &TileFunction::box_sums(&den));
    for k in 0..grid.levels() {
        for i in 0..grid.count(k) {
            let iv = grid.tile(k, i).realize();
            let best = other
                .overlapping(k, iv.left, iv.right())
                .map(|oi| other_max.level(k)[oi])
                .fold(out.level(k)[i], f64::max);
            out.level_mut(k)[i] = best;
        }
    }
    out
}

/// [`maximal_alpha`] enlarged by the averages over `Q_I ∩ Ω` for every box of the family.
pub fn family_maximal(f: &TileFunction, fam: &BoxFamily, mu: &AlphaMeasure) -> TileFunction {
    let mut out = maximal_alpha(f, mu);
    let grid = f.grid().clone();
    let dom = grid.domain();
    for iv in fam.intervals() {
        let rect = CarlesonBox::full(*iv).rect().intersect(&dom);
        if rect.is_empty() {
            continue;
        }
        let avg = f.rect_integral_with(&rect, mu, f64::abs) / mu.rect_area(&rect);
        for k in 0..grid.levels() {
            if pow2(grid.scale(k)) >= 2.0 * iv.length {
                continue;
            }
            for i in grid.overlapping(k, iv.left, iv.right()) {
                let v = &mut out.level_mut(k)[i];
                *v = v.max(avg);
            }
        }
    }
    out
}
