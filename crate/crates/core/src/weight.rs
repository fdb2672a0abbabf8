//! The closed weight catalog and weighted box integrals.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{CarlesonBox, Interval, Point, Rect};
use crate::measure::{AlphaMeasure, Exponents};
use crate::quadrature::{gauss_legendre, graded_vertical, Estimate, QuadratureSpec};
use crate::tiles::{TileFunction, TileGrid};

/// A positive weight on the upper half-plane.
///
/// Table weights live on the tiles of a truncated grid and are taken to vanish off
/// their domain `Ω`; every average of a table weight is an average over `Q_I ∩ Ω`.
#[derive(Clone, Debug)]
pub enum Weight {
    Constant { c: f64 },
    /// `|z|^γ`
    Power { gamma: f64 },
    /// `a` for `x < 0`, `b` for `x >= 0`.
    Step { a: f64, b: f64 },
    Table {
        tiles: Arc<TileFunction>,
        source: Option<String>,
    },
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

impl Weight {
    pub fn constant(c: f64) -> Result<Weight> {
        Ok(Weight::Constant { c: positive("c", c)? })
    }

    pub fn power(gamma: f64) -> Result<Weight> {
        if !gamma.is_finite() {
            return Err(Error::invalid("gamma must be finite"));
        }
        Ok(Weight::Power { gamma })
    }

    pub fn step(a: f64, b: f64) -> Result<Weight> {
        Ok(Weight::Step {
            a: positive("a", a)?,
            b: positive("b", b)?,
        })
    }

    pub fn table(tiles: TileFunction) -> Result<Weight> {
        if let Some(v) = tiles.values().find(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::invalid(format!("table weights must be positive, found {v}")));
        }
        Ok(Weight::Table {
            tiles: Arc::new(tiles),
            source: None,
        })
    }

    /// Reads a table file with rows `beta j m value`.
    pub fn load_table(path: impl AsRef<Path>) -> Result<Weight> {
        let path = path.as_ref();
        let file = std::io::BufReader::new(std::fs::File::open(path)?);
        match Weight::table(TileFunction::read_table(file)?)? {
            Weight::Table { tiles, .. } => Ok(Weight::Table {
                tiles,
                source: Some(path.display().to_string()),
            }),
            _ => unreachable!(),
        }
    }

    /// Parses `constant:c=..`, `power:gamma=..`, `step:a=..,b=..` or `table:path=..`.
    pub fn parse(spec: &str) -> Result<Weight> {
        let (kind, rest) = spec
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("weight spec `{spec}` lacks `kind:`")))?;
        let mut params = Vec::new();
        for kv in rest.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("expected key=value, got `{kv}`")))?;
            params.push((k.trim(), v.trim()));
        }
        let get = |key: &str| -> Result<&str> {
            params
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::invalid(format!("weight spec `{spec}` needs `{key}`")))
        };
        let num = |key: &str| -> Result<f64> {
            let v = get(key)?;
            v.parse()
                .map_err(|_| Error::invalid(format!("`{key}={v}` is not a number")))
        };
        let allowed: &[&str] = match kind.trim() {
            "constant" => &["c"],
            "power" => &["gamma"],
            "step" => &["a", "b"],
            "table" => &["path"],
            other => return Err(Error::invalid(format!("unknown weight kind `{other}`"))),
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(k)) {
            return Err(Error::invalid(format!("unexpected parameter `{k}` in `{spec}`")));
        }
        match kind.trim() {
            "constant" => Weight::constant(num("c")?),
            "power" => Weight::power(num("gamma")?),
            "step" => Weight::step(num("a")?, num("b")?),
            _ => Weight::load_table(get("path")?),
        }
    }

    /// `w(z)`, or `None` off the domain of a table weight.
    pub fn eval(&self, z: Point) -> Option<f64> {
        match self {
            Weight::Constant { c } => Some(*c),
            Weight::Power { gamma } => Some(z.modulus().powf(*gamma)),
            Weight::Step { a, b } => Some(if z.x < 0.0 { *a } else { *b }),
            Weight::Table { tiles, .. } => tiles.value_at(z.x, z.y),
        }
    }

    /// `w^r`, staying in the catalog.
    pub fn pow(&self, r: f64) -> Weight {
        match self {
            Weight::Constant { c } => Weight::Constant { c: c.powf(r) },
            Weight::Power { gamma } => Weight::Power { gamma: gamma * r },
            Weight::Step { a, b } => Weight::Step {
                a: a.powf(r),
                b: b.powf(r),
            },
            Weight::Table { tiles, .. } => Weight::Table {
                tiles: Arc::new(tiles.map(|v| v.powf(r))),
                source: None,
            },
        }
    }

    pub fn tile_grid(&self) -> Option<&TileGrid> {
        match self {
            Weight::Table { tiles, .. } => Some(tiles.grid()),
            _ => None,
        }
    }

    /// The part of `rect` on which the weight is defined.
    pub fn clip(&self, rect: &Rect) -> Rect {
        match self.tile_grid() {
            Some(g) => rect.intersect(&g.domain()),
            None => *rect,
        }
    }

    /// `|rect ∩ dom w|_α`.
    pub fn support_area(&self, rect: &Rect, mu: &AlphaMeasure) -> f64 {
        mu.rect_area(&self.clip(rect))
    }

    /// `∫_{rect} w dA_α`, closed form where available.
    pub fn rect_integral(&self, rect: &Rect, mu: &AlphaMeasure, q: &QuadratureSpec) -> Result<Estimate> {
        if rect.is_empty() {
            return Ok(Estimate::exact(0.0));
        }
        match self {
            Weight::Constant { c } => Ok(Estimate::exact(c * mu.rect_area(rect))),
            Weight::Step { a, b } => {
                let neg = (rect.x1.min(0.0) - rect.x0).max(0.0);
                let pos = (rect.x1 - rect.x0.max(0.0)).max(0.0);
                Ok(Estimate::exact((a * neg + b * pos) * mu.vertical_mass(rect.y0, rect.y1)))
            }
            Weight::Power { gamma } => power_rect_integral(*gamma, rect, mu, q),
            Weight::Table { tiles, .. } => Ok(Estimate::exact(tiles.rect_integral(rect, mu))),
        }
    }

    /// `|Q_I|_{w,α} / |Q_I|_α`, with both sides restricted to the weight's domain.
    pub fn box_average(&self, interval: &Interval, mu: &AlphaMeasure, q: &QuadratureSpec) -> Result<f64> {
        let rect = self.clip(&CarlesonBox::full(*interval).rect());
        if rect.is_empty() {
            return Err(Error::EmptyBox { interval: *interval });
        }
        let mass = self
            .rect_integral(&rect, mu, q)?
            .check(q.rel_tol)
            .map_err(|e| e.at_interval(*interval))?;
        Ok(mass.value / mu.rect_area(&rect))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Constant { c } => write!(f, "constant:c={c}"),
            Weight::Power { gamma } => write!(f, "power:gamma={gamma}"),
            Weight::Step { a, b } => write!(f, "step:a={a},b={b}"),
            Weight::Table { source: Some(p), .. } => write!(f, "table:path={p}"),
            Weight::Table { tiles, .. } => write!(f, "table:<{} tiles>", tiles.grid().len()),
        }
    }
}

/// `w^{1-p'}`.
pub fn dual_weight(w: &Weight, e: &Exponents) -> Weight {
    w.pow(e.dual_power())
}

/// `∫_B w dA_α` over the part of the box on which `w` is defined.
pub fn weighted_box_integral(
    w: &Weight,
    b: &CarlesonBox,
    mu: &AlphaMeasure,
    q: &QuadratureSpec,
) -> Result<Estimate> {
    w.rect_integral(&w.clip(&b.rect()), mu, q)
}

/// `∫∫_rect (x² + y²)^{γ/2} y^α dy dx`.
///
/// Rectangles near the origin are reduced to four corner integrals
/// `G(X, Y) = ∫_0^X ∫_0^Y`, each of which is a pair of one-dimensional integrals in
/// polar form. Rectangles far from the origin use tensor quadrature.
pub fn power_rect_integral(gamma: f64, rect: &Rect, mu: &AlphaMeasure, q: &QuadratureSpec) -> Result<Estimate> {
    let s = gamma + mu.dimension();
    let dx = if rect.x0 <= 0.0 && rect.x1 >= 0.0 {
        0.0
    } else {
        rect.x0.abs().min(rect.x1.abs())
    };
    let dist = dx.hypot(rect.y0);
    let size = rect.width().max(rect.y1 - rect.y0);
    if dist == 0.0 && s <= 0.0 {
        return Err(Error::NotIntegrable {
            gamma,
            alpha: mu.alpha,
        });
    }
    if s > 0.0 && dist < size {
        let h = |x: f64| {
            let g = corner_integral(gamma, mu.alpha, x.abs(), rect.y1)
                - corner_integral(gamma, mu.alpha, x.abs(), rect.y0);
            (x.signum() * g, g.abs())
        };
        let (h1, m1) = h(rect.x1);
        let (h0, m0) = h(rect.x0);
        let value = h1 - h0;
        return Ok(Estimate {
            value,
            error: 1e-14 * (m0 + m1),
            tail: 0.0,
        });
    }
    Ok(far_power(gamma, rect, mu, q))
}

/// `G(X, Y) = ∫_0^X ∫_0^Y (x²+y²)^{γ/2} y^α dy dx = X^s/s A_α(Y/X) + Y^s/s A_0(X/Y)`.
fn corner_integral(gamma: f64, alpha: f64, x: f64, y: f64) -> f64 {
    if x == 0.0 || y == 0.0 {
        return 0.0;
    }
    let s = gamma + alpha + 2.0;
    x.powf(s) / s * slope_integral(alpha, gamma, y / x) + y.powf(s) / s * slope_integral(0.0, gamma, x / y)
}

/// `A_a(τ) = ∫_0^τ t^a (1 + t²)^{γ/2} dt`.
fn slope_integral(a: f64, gamma: f64, tau: f64) -> f64 {
    let hg = 0.5 * gamma;
    let eps = tau.min(0.01);
    let mut total = 0.0;
    let mut c = 1.0;
    let e2 = eps * eps;
    let mut pw = eps.powf(a + 1.0);
    for k in 0..12 {
        let kf = k as f64;
        total += c * pw / (a + 2.0 * kf + 1.0);
        c *= (hg - kf) / (kf + 1.0);
        pw *= e2;
    }
    let rule = gauss_legendre(20);
    let mut lo = eps;
    while lo < tau {
        let hi = (4.0 * lo).min(tau);
        total += rule.integrate(lo, hi, |t| t.powf(a) * (1.0 + t * t).powf(hg));
        lo = hi;
    }
    total
}

fn far_power(gamma: f64, rect: &Rect, mu: &AlphaMeasure, q: &QuadratureSpec) -> Estimate {
    let hg = 0.5 * gamma;
    let fine = 1usize << q.refinement_levels;
    let level = |panels: usize| -> f64 {
        let gx = gauss_legendre(q.nodes_x);
        let dxp = rect.width() / panels as f64;
        let mut total = 0.0;
        for px in 0..panels {
            let xa = rect.x0 + dxp * px as f64;
            let xb = if px + 1 == panels { rect.x1 } else { xa + dxp };
            for (x, wx) in gx.mapped(xa, xb) {
                let x2 = x * x;
                let g = |y: f64| (x2 + y * y).powf(hg);
                total += wx * vertical(rect.y0, rect.y1, mu.alpha, q.nodes_u, panels, g);
            }
        }
        total
    };
    let a = level(fine);
    let b = level(fine / 2);
    Estimate {
        value: a,
        error: (a - b).abs(),
        tail: 0.0,
    }
}

/// `∫_{y0}^{y1} g(y) y^α dy` for `g` smooth on the closed interval.
pub(crate) fn vertical(y0: f64, y1: f64, alpha: f64, nodes: usize, panels: usize, mut g: impl FnMut(f64) -> f64) -> f64 {
    if y0 == 0.0 {
        return graded_vertical(y1, alpha, nodes, 20 + panels as u32, g);
    }
    let rule = gauss_legendre(nodes);
    let a1 = 1.0 + alpha;
    let inv = 1.0 / a1;
    let (u0, u1) = (y0.powf(a1), y1.powf(a1));
    let du = (u1 - u0) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let ua = u0 + du * p as f64;
        let ub = if p + 1 == panels { u1 } else { ua + du };
        for (u, w) in rule.mapped(ua, ub) {
            let y = if alpha == 0.0 { u } else { u.powf(inv) };
            total += g(y) * w * inv;
        }
    }
    total
}
