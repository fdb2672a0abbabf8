//! Test functions on the half-plane and weighted `L^p` norms.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{pow2, CarlesonBox, GridWindow, Point, Rect, Shift};
use crate::measure::{AlphaMeasure, Exponents};
use crate::quadrature::{graded_vertical, integrate_rect, Estimate, QuadratureSpec};
use crate::tiles::TileFunction;
use crate::weight::Weight;

/// A function handle accepted by the norm and operator routines.
#[derive(Clone)]
pub enum TestFunction {
    /// `1_B`
    Indicator(CarlesonBox),
    /// `|z|^exponent` on `|z| <= radius`, zero outside.
    RadialPower { exponent: f64, radius: f64 },
    /// Piecewise constant on tiles, zero off the tile domain.
    Tiles(TileFunction),
    Custom(Arc<dyn Fn(Point) -> f64 + Send + Sync>),
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Indicator(b) => f.debug_tuple("Indicator").field(b).finish(),
            TestFunction::RadialPower { exponent, radius } => f
                .debug_struct("RadialPower")
                .field("exponent", exponent)
                .field("radius", radius)
                .finish(),
            TestFunction::Tiles(t) => write!(f, "Tiles({} tiles)", t.grid().len()),
            TestFunction::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl TestFunction {
    pub fn custom(f: impl Fn(Point) -> f64 + Send + Sync + 'static) -> TestFunction {
        TestFunction::Custom(Arc::new(f))
    }

    pub fn eval(&self, z: Point) -> f64 {
        match self {
            TestFunction::Indicator(b) => {
                if b.contains(z) {
                    1.0
                } else {
                    0.0
                }
            }
            TestFunction::RadialPower { exponent, radius } => {
                let r = z.modulus();
                if r <= *radius {
                    r.powf(*exponent)
                } else {
                    0.0
                }
            }
            TestFunction::Tiles(t) => t.value_at(z.x, z.y).unwrap_or(0.0),
            TestFunction::Custom(f) => f(z),
        }
    }

    /// Rectangles covering the support inside the window, on each of which the
    /// function is smooth.
    pub fn cells(&self, window: &GridWindow) -> Vec<Rect> {
        let frame = window_rect(window);
        let clip = |r: Rect| {
            let c = r.intersect(&frame);
            (!c.is_empty()).then_some(c)
        };
        match self {
            TestFunction::Indicator(b) => window_cells(window)
                .into_iter()
                .filter_map(|c| {
                    let r = c.intersect(&b.rect());
                    (!r.is_empty()).then_some(r)
                })
                .collect(),
            TestFunction::Tiles(t) => t
                .iter()
                .filter(|(_, v)| *v != 0.0)
                .filter_map(|(d, _)| clip(d.top_half().rect()))
                .collect(),
            _ => window_cells(window),
        }
    }
}

/// `[x_lo, x_hi) × (0, 2^{j_max}]`.
pub fn window_rect(window: &GridWindow) -> Rect {
    Rect {
        x0: window.x_lo,
        x1: window.x_hi,
        y0: 0.0,
        y1: window.top(),
    }
}

/// Whitney-type cells of the window: the `D^0` tiles clipped to `[x_lo, x_hi)` at each
/// scale, plus a bottom strip of scale-`j_min` cells reaching down to `y = 0`.
pub fn window_cells(window: &GridWindow) -> Vec<Rect> {
    let mut out = Vec::new();
    let band = |j: i32, y0: f64, y1: f64, out: &mut Vec<Rect>| {
        if let Ok(ds) = window.intervals_at(Shift::Zero, j) {
            for d in ds {
                let x0 = d.left().max(window.x_lo);
                let x1 = d.right().min(window.x_hi);
                if x1 > x0 {
                    out.push(Rect { x0, x1, y0, y1 });
                }
            }
        }
    };
    for j in window.j_min..=window.j_max {
        band(j, pow2(j - 1), pow2(j), &mut out);
    }
    band(window.j_min, 0.0, pow2(window.j_min - 1), &mut out);
    out
}

/// `∫_0^π sin^α θ dθ`, computed numerically with grading at the endpoints.
pub fn sine_power_integral(alpha: f64) -> f64 {
    let sinc = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
    2.0 * graded_vertical(std::f64::consts::FRAC_PI_2, alpha, 24, 24, |t| sinc(t).powf(alpha))
}

/// `(∫_window |f|^p w dA_α)^{1/p}`.
///
/// Radial powers against power or constant weights are integrated in polar form over
/// their whole support, which must fit in the window. The `tail` field bounds the
/// norm of the part of `f` outside the window when that is computable.
pub fn lp_norm(
    f: &TestFunction,
    w: &Weight,
    e: &Exponents,
    mu: &AlphaMeasure,
    window: &GridWindow,
    q: &QuadratureSpec,
) -> Result<Estimate> {
    let p = e.p;
    let frame = window_rect(window);
    let finish = |inside: f64, err: f64, total: Option<f64>| Estimate {
        value: inside.powf(1.0 / p),
        error: if inside > 0.0 {
            inside.powf(1.0 / p) * err / (p * inside)
        } else {
            0.0
        },
        tail: total.map_or(0.0, |t| (t.max(inside)).powf(1.0 / p) - inside.powf(1.0 / p)),
    };
    match f {
        TestFunction::Indicator(b) => {
            let rect = w.clip(&b.rect());
            let inner = rect.intersect(&frame);
            let a = w.rect_integral(&inner, mu, q)?.check(q.rel_tol)?;
            let t = w.rect_integral(&rect, mu, q)?.check(q.rel_tol)?;
            Ok(finish(a.value, a.error, Some(t.value)))
        }
        TestFunction::Tiles(t) => {
            let (mut inside, mut err, mut total) = (0.0, 0.0, 0.0);
            for (d, v) in t.iter() {
                if v == 0.0 {
                    continue;
                }
                let rect = w.clip(&d.top_half().rect());
                let vp = v.abs().powf(p);
                let a = w.rect_integral(&rect.intersect(&frame), mu, q)?;
                let b = w.rect_integral(&rect, mu, q)?;
                inside += vp * a.value;
                err += vp * a.error;
                total += vp * b.value;
            }
            Ok(finish(inside, err, Some(total)))
        }
        TestFunction::RadialPower { exponent, radius }
            if radial_fits(*radius, window) && matches!(w, Weight::Power { .. } | Weight::Constant { .. }) =>
        {
            let (gamma, c) = match w {
                Weight::Power { gamma } => (*gamma, 1.0),
                Weight::Constant { c } => (0.0, *c),
                _ => unreachable!(),
            };
            let s = exponent * p + gamma + mu.dimension();
            if s <= 0.0 {
                return Err(Error::NotIntegrable {
                    gamma: exponent * p + gamma,
                    alpha: mu.alpha,
                });
            }
            let inside = c * sine_power_integral(mu.alpha) * radius.powf(s) / s;
            Ok(finish(inside, 1e-13 * inside, None))
        }
        _ => {
            let (mut inside, mut err) = (0.0, 0.0);
            for cell in f.cells(window) {
                let cell = w.clip(&cell);
                if cell.is_empty() {
                    continue;
                }
                let est = integrate_rect(&cell, mu.alpha, q, |x, y| {
                    let z = Point { x, y };
                    f.eval(z).abs().powf(p) * w.eval(z).unwrap_or(0.0)
                });
                inside += est.value;
                err += est.error;
            }
            Ok(finish(inside, err, None))
        }
    }
}

fn radial_fits(radius: f64, window: &GridWindow) -> bool {
    window.x_lo <= -radius && radius <= window.x_hi && radius <= window.top()
}
