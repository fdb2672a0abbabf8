#![allow(dead_code)]

use bergman_lab::geometry::Rect;
use bergman_lab::{GridWindow, Shift, TileFunction, TileGrid, Weight};
use rand::Rng;

/// Three-point Gauss rule on panels that halve toward `0` when `0` lies in `[a, b]`.
pub fn graded(a: f64, b: f64, panels: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let mut cuts = vec![a, b];
    if a < 0.0 && 0.0 < b {
        cuts = vec![a, 0.0, b];
    }
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mut edges = Vec::new();
        if lo == 0.0 || hi == 0.0 {
            let (z, far) = if lo == 0.0 { (lo, hi) } else { (hi, lo) };
            let mut d = far - z;
            edges.push(far);
            for _ in 0..80 {
                d *= 0.5;
                edges.push(z + d);
            }
            edges.push(z);
            edges.sort_by(|x, y| x.partial_cmp(y).unwrap());
        } else {
            edges.push(lo);
            edges.push(hi);
        }
        for e in edges.windows(2) {
            let h = (e[1] - e[0]) / panels as f64;
            for k in 0..panels {
                total += gauss3(e[0] + h * k as f64, e[0] + h * (k + 1) as f64, &mut f);
            }
        }
    }
    total
}

fn gauss3(a: f64, b: f64, f: &mut impl FnMut(f64) -> f64) -> f64 {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let s = (0.6f64).sqrt();
    r * (5.0 / 9.0 * f(c - r * s) + 8.0 / 9.0 * f(c) + 5.0 / 9.0 * f(c + r * s))
}

/// `∫∫_rect f(x, y) y^α dy dx` with `y = t²` and graded Gauss panels in `x` and `t`.
pub fn rect_oracle(rect: &Rect, alpha: f64, n: usize, f: impl Fn(f64, f64) -> f64) -> f64 {
    let (t0, t1) = (rect.y0.sqrt(), rect.y1.sqrt());
    graded(rect.x0, rect.x1, n, |x| {
        graded(t0, t1, n, |t| {
            let y = t * t;
            f(x, y) * 2.0 * t.powf(2.0 * alpha + 1.0)
        })
    })
}

pub fn random_tiles(rng: &mut impl Rng, grid: &TileGrid, lo: f64, hi: f64) -> TileFunction {
    TileFunction::from_fn(grid.clone(), |_| rng.gen_range(lo..hi))
}

pub fn grid(shift: Shift, j_min: i32, j_max: i32, x_lo: f64, x_hi: f64) -> TileGrid {
    TileGrid::new(shift, GridWindow::new(j_min, j_max, x_lo, x_hi).unwrap()).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Twenty catalog weights, each with the `α` it is used at.
pub fn catalog_suite() -> Vec<(Weight, f64)> {
    let mut out = Vec::new();
    for c in [0.5, 1.0, 20.0] {
        out.push((Weight::constant(c).unwrap(), 0.0));
    }
    for g in [-0.9, -0.5, -0.2, 0.3, 0.6, 0.9] {
        out.push((Weight::power(g).unwrap(), 0.0));
    }
    for g in [-1.2, 0.4, 0.8, 1.2] {
        out.push((Weight::power(g).unwrap(), 1.0));
    }
    out.push((Weight::power(-0.6).unwrap(), 0.5));
    for (a, b) in [(1.0, 2.0), (1.0, 9.0), (5.0, 0.5), (0.1, 3.0)] {
        out.push((Weight::step(a, b).unwrap(), 0.5));
    }
    let g = grid(Shift::Third, -3, 1, -2.0, 2.0);
    out.push((Weight::table(TileFunction::from_fn(g.clone(), |d| 1.0 + d.left().abs())).unwrap(), 0.0));
    out.push((Weight::table(TileFunction::from_fn(g, |d| 2f64.powi(d.j) + 0.1)).unwrap(), 1.0));
    out
}
