//! Functions that are constant on the tiles `T_I` of a truncated grid.
//!
//! The tile set of a window is the forest of all descendants, down to `j_min`, of the
//! grid intervals at scale `j_max` that meet `[x_lo, x_hi)`. Its union `Ω` is the
//! rectangle `[X_lo, X_hi) × (2^{j_min-1}, 2^{j_max}]`, where `[X_lo, X_hi)` is the
//! span of the roots. Functions are taken to vanish off `Ω`, and every box integral
//! here is over `Q_I ∩ Ω`.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{pow2, DyadicInterval, GridWindow, Interval, Rect, Shift};
use crate::measure::AlphaMeasure;

/// Index structure of the tiles of one grid over a window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TileGrid {
    pub shift: Shift,
    pub window: GridWindow,
    first_m: Vec<i64>,
    n_roots: usize,
}

impl TileGrid {
    pub fn new(shift: Shift, window: GridWindow) -> Result<TileGrid> {
        let roots = window.intervals_at(shift, window.j_max)?;
        let levels = (window.j_max - window.j_min + 1) as usize;
        if levels > 24 {
            return Err(Error::invalid("windows deeper than 24 scales are not supported"));
        }
        let mut first_m = Vec::with_capacity(levels);
        let mut m = roots[0].m;
        for k in 0..levels {
            first_m.push(m);
            let j = window.j_max - k as i32;
            m = 2 * m + shift.signed_thirds(j);
        }
        Ok(TileGrid {
            shift,
            window,
            first_m,
            n_roots: roots.len(),
        })
    }

    pub fn levels(&self) -> usize {
        self.first_m.len()
    }

    /// Scale `j` of level `k` (level 0 holds the roots).
    pub fn scale(&self, k: usize) -> i32 {
        self.window.j_max - k as i32
    }

    pub fn count(&self, k: usize) -> usize {
        self.n_roots << k
    }

    pub fn len(&self) -> usize {
        (0..self.levels()).map(|k| self.count(k)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.n_roots == 0
    }

    pub fn tile(&self, k: usize, idx: usize) -> DyadicInterval {
        DyadicInterval::new(self.shift, self.scale(k), self.first_m[k] + idx as i64)
    }

    pub fn index_of(&self, d: &DyadicInterval) -> Option<(usize, usize)> {
        if d.shift != self.shift || d.j > self.window.j_max || d.j < self.window.j_min {
            return None;
        }
        let k = (self.window.j_max - d.j) as usize;
        let idx = d.m - self.first_m[k];
        if idx < 0 || idx as usize >= self.count(k) {
            None
        } else {
            Some((k, idx as usize))
        }
    }

    /// `[X_lo, X_hi)`, the span of the roots.
    pub fn span(&self) -> (f64, f64) {
        let first = self.tile(0, 0);
        let last = self.tile(0, self.n_roots - 1);
        (first.left(), last.right())
    }

    /// The rectangle `Ω` covered by the tiles.
    pub fn domain(&self) -> Rect {
        let (x0, x1) = self.span();
        Rect {
            x0,
            x1,
            y0: pow2(self.window.j_min - 1),
            y1: pow2(self.window.j_max),
        }
    }

    /// Tile indices at level `k` whose intervals overlap `[a, b)` with positive length.
    pub fn overlapping(&self, k: usize, a: f64, b: f64) -> std::ops::Range<usize> {
        let (x0, x1) = self.span();
        let a = a.max(x0);
        let b = b.min(x1);
        if b <= a {
            return 0..0;
        }
        let j = self.scale(k);
        let lo = match DyadicInterval::containing(self.shift, j, a) {
            Ok(d) => d.m,
            Err(_) => return 0..0,
        };
        let mut hi = match DyadicInterval::containing(self.shift, j, b) {
            Ok(d) => d,
            Err(_) => return 0..0,
        };
        if hi.left() >= b {
            hi.m -= 1;
        }
        let start = (lo - self.first_m[k]).max(0) as usize;
        let end = ((hi.m - self.first_m[k] + 1).max(0) as usize).min(self.count(k));
        start..end.max(start)
    }

    pub fn tiles(&self) -> impl Iterator<Item = (usize, usize, DyadicInterval)> + '_ {
        (0..self.levels()).flat_map(move |k| (0..self.count(k)).map(move |i| (k, i, self.tile(k, i))))
    }
}

/// A function constant on each tile of a [`TileGrid`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TileFunction {
    grid: TileGrid,
    values: Vec<Vec<f64>>,
}

impl TileFunction {
    pub fn constant(grid: TileGrid, value: f64) -> TileFunction {
        let values = (0..grid.levels()).map(|k| vec![value; grid.count(k)]).collect();
        TileFunction { grid, values }
    }

    pub fn from_fn(grid: TileGrid, mut f: impl FnMut(&DyadicInterval) -> f64) -> TileFunction {
        let values = (0..grid.levels())
            .map(|k| (0..grid.count(k)).map(|i| f(&grid.tile(k, i))).collect())
            .collect();
        TileFunction { grid, values }
    }

    pub fn try_from_fn(
        grid: TileGrid,
        mut f: impl FnMut(&DyadicInterval) -> Result<f64>,
    ) -> Result<TileFunction> {
        let mut values = Vec::with_capacity(grid.levels());
        for k in 0..grid.levels() {
            let mut row = Vec::with_capacity(grid.count(k));
            for i in 0..grid.count(k) {
                row.push(f(&grid.tile(k, i))?);
            }
            values.push(row);
        }
        Ok(TileFunction { grid, values })
    }

    pub fn grid(&self) -> &TileGrid {
        &self.grid
    }

    pub fn level(&self, k: usize) -> &[f64] {
        &self.values[k]
    }

    pub fn level_mut(&mut self, k: usize) -> &mut [f64] {
        &mut self.values[k]
    }

    pub fn get(&self, d: &DyadicInterval) -> Option<f64> {
        self.grid.index_of(d).map(|(k, i)| self.values[k][i])
    }

    pub fn set(&mut self, d: &DyadicInterval, v: f64) -> Result<()> {
        let (k, i) = self
            .grid
            .index_of(d)
            .ok_or_else(|| Error::invalid(format!("{d} is not a tile of this grid")))?;
        self.values[k][i] = v;
        Ok(())
    }

    /// Value at a point of `Ω`, `None` outside.
    pub fn value_at(&self, x: f64, y: f64) -> Option<f64> {
        let dom = self.grid.domain();
        if !(x >= dom.x0 && x < dom.x1 && y > dom.y0 && y <= dom.y1) {
            return None;
        }
        let j = crate::geometry::ceil_log2(y).ok()?;
        let d = DyadicInterval::containing(self.grid.shift, j, x).ok()?;
        self.get(&d)
    }

    pub fn iter(&self) -> impl Iterator<Item = (DyadicInterval, f64)> + '_ {
        self.grid
            .tiles()
            .map(move |(k, i, d)| (d, self.values[k][i]))
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().flatten().copied()
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> TileFunction {
        TileFunction {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .map(|row| row.iter().map(|&v| f(v)).collect())
                .collect(),
        }
    }

    pub fn zip_map(&self, other: &TileFunction, mut f: impl FnMut(f64, f64) -> f64) -> Result<TileFunction> {
        self.same_grid(other)?;
        Ok(TileFunction {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
                .collect(),
        })
    }

    pub fn same_grid(&self, other: &TileFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::DomainMismatch(
                "tile functions live on different grids or windows".into(),
            ));
        }
        Ok(())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values().all(|v| v >= 0.0)
    }

    pub fn max_value(&self) -> f64 {
        self.values().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values().fold(f64::INFINITY, f64::min)
    }

    /// `dA_α`-areas of the tiles.
    pub fn tile_areas(grid: &TileGrid, mu: &AlphaMeasure) -> TileFunction {
        TileFunction::from_fn(grid.clone(), |d| mu.box_area(&d.top_half()))
    }

    /// `∫_Ω f dA_α = Σ_I f(I) |T_I|_α`.
    pub fn integral(&self, mu: &AlphaMeasure) -> f64 {
        self.iter()
            .map(|(d, v)| v * mu.box_area(&d.top_half()))
            .sum()
    }

    /// `⟨f, g⟩_α`.
    pub fn inner(&self, other: &TileFunction, mu: &AlphaMeasure) -> Result<f64> {
        self.same_grid(other)?;
        Ok(self
            .iter()
            .zip(other.values())
            .map(|((d, a), b)| a * b * mu.box_area(&d.top_half()))
            .sum())
    }

    /// Bottom-up box sums: `S(I) = m(I) + S(I_-) + S(I_+)` for tile masses `m`.
    pub fn box_sums(masses: &TileFunction) -> TileFunction {
        let mut out = masses.clone();
        for k in (0..out.grid.levels() - 1).rev() {
            let (upper, lower) = out.values.split_at_mut(k + 1);
            let row = &mut upper[k];
            let below = &lower[0];
            for (i, v) in row.iter_mut().enumerate() {
                *v += below[2 * i] + below[2 * i + 1];
            }
        }
        out
    }

    /// `∫_{rect ∩ Ω} f dA_α`, exact for piecewise-constant `f`.
    pub fn rect_integral(&self, rect: &Rect, mu: &AlphaMeasure) -> f64 {
        self.rect_integral_with(rect, mu, |v| v)
    }

    /// `∫_{rect ∩ Ω} g(f) dA_α`.
    pub fn rect_integral_with(&self, rect: &Rect, mu: &AlphaMeasure, g: impl Fn(f64) -> f64) -> f64 {
        let mut total = 0.0;
        for k in 0..self.grid.levels() {
            let j = self.grid.scale(k);
            let lo = pow2(j - 1).max(rect.y0);
            let hi = pow2(j).min(rect.y1);
            if hi <= lo {
                continue;
            }
            let vm = mu.vertical_mass(lo, hi);
            let mut row = 0.0;
            for i in self.grid.overlapping(k, rect.x0, rect.x1) {
                let d = self.grid.tile(k, i);
                let ov = d.realize().overlap(rect.x0, rect.x1);
                row += g(self.values[k][i]) * ov;
            }
            total += row * vm;
        }
        total
    }

    /// `∫_{Q_I ∩ Ω} f dA_α` for an arbitrary interval.
    pub fn box_integral(&self, interval: &Interval, mu: &AlphaMeasure) -> f64 {
        self.rect_integral(&crate::geometry::CarlesonBox::full(*interval).rect(), mu)
    }

    /// Writes the text format: header `beta j_min j_max x_lo x_hi`, then rows `j m value`.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        let win = &self.grid.window;
        writeln!(
            w,
            "{} {} {} {:?} {:?}",
            self.grid.shift, win.j_min, win.j_max, win.x_lo, win.x_hi
        )?;
        for (d, v) in self.iter() {
            writeln!(w, "{} {} {:?}", d.j, d.m, v)?;
        }
        Ok(())
    }

    pub fn read_from(r: impl BufRead) -> Result<TileFunction> {
        let mut lines = r.lines().enumerate().filter_map(|(n, l)| match l {
            Ok(s) if s.trim().is_empty() || s.trim_start().starts_with('#') => None,
            other => Some((n + 1, other)),
        });
        let (n, header) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 1, message: "missing header".into() })?;
        let header = header?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(Error::Parse {
                line: n,
                message: "header must be `beta j_min j_max x_lo x_hi`".into(),
            });
        }
        let perr = |line: usize, what: &str| Error::Parse {
            line,
            message: format!("bad {what}"),
        };
        let shift = Shift::parse(fields[0]).map_err(|_| perr(n, "beta"))?;
        let j_min: i32 = fields[1].parse().map_err(|_| perr(n, "j_min"))?;
        let j_max: i32 = fields[2].parse().map_err(|_| perr(n, "j_max"))?;
        let x_lo: f64 = fields[3].parse().map_err(|_| perr(n, "x_lo"))?;
        let x_hi: f64 = fields[4].parse().map_err(|_| perr(n, "x_hi"))?;
        let grid = TileGrid::new(shift, GridWindow::new(j_min, j_max, x_lo, x_hi)?)?;
        let mut f = TileFunction::constant(grid, f64::NAN);
        for (n, line) in lines {
            let line = line?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(perr(n, "row (expected `j m value`)"));
            }
            let j: i32 = fields[0].parse().map_err(|_| perr(n, "j"))?;
            let m: i64 = fields[1].parse().map_err(|_| perr(n, "m"))?;
            let v: f64 = fields[2].parse().map_err(|_| perr(n, "value"))?;
            f.set(&DyadicInterval::new(shift, j, m), v)
                .map_err(|e| Error::Parse { line: n, message: e.to_string() })?;
        }
        if f.values().any(f64::is_nan) {
            return Err(Error::Parse {
                line: 0,
                message: "some tiles of the window have no value".into(),
            });
        }
        Ok(f)
    }

    /// Writes the weight-table format: rows `beta j m value`.
    pub fn write_table(&self, mut w: impl Write) -> Result<()> {
        for (d, v) in self.iter() {
            writeln!(w, "{} {} {} {:?}", d.shift, d.j, d.m, v)?;
        }
        Ok(())
    }

    /// Reads rows `beta j m value`; the rows must cover a complete window.
    pub fn read_table(r: impl BufRead) -> Result<TileFunction> {
        let mut rows = Vec::new();
        let mut shift = None;
        for (n, line) in r.lines().enumerate() {
            let n = n + 1;
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = t.split_whitespace().collect();
            let bad = |what: &str| Error::Parse { line: n, message: format!("bad {what}") };
            if fields.len() != 4 {
                return Err(bad("row (expected `beta j m value`)"));
            }
            let s = Shift::parse(fields[0]).map_err(|_| bad("beta"))?;
            if *shift.get_or_insert(s) != s {
                return Err(bad("beta (a table holds a single grid)"));
            }
            let j: i32 = fields[1].parse().map_err(|_| bad("j"))?;
            let m: i64 = fields[2].parse().map_err(|_| bad("m"))?;
            let v: f64 = fields[3].parse().map_err(|_| bad("value"))?;
            rows.push((j, m, v));
        }
        let shift = shift.ok_or_else(|| Error::Parse { line: 0, message: "empty table".into() })?;
        let j_min = rows.iter().map(|r| r.0).min().unwrap_or(0);
        let j_max = rows.iter().map(|r| r.0).max().unwrap_or(0);
        let m_lo = rows.iter().filter(|r| r.0 == j_max).map(|r| r.1).min().unwrap_or(0);
        let m_hi = rows.iter().filter(|r| r.0 == j_max).map(|r| r.1).max().unwrap_or(0);
        let x_lo = DyadicInterval::new(shift, j_max, m_lo).left();
        let x_hi = DyadicInterval::new(shift, j_max, m_hi).right();
        let grid = TileGrid::new(shift, GridWindow::new(j_min, j_max, x_lo, x_hi)?)?;
        let mut f = TileFunction::constant(grid, f64::NAN);
        for (j, m, v) in rows {
            f.set(&DyadicInterval::new(shift, j, m), v)
                .map_err(|e| Error::Parse { line: 0, message: e.to_string() })?;
        }
        if f.values().any(f64::is_nan) {
            return Err(Error::Parse {
                line: 0,
                message: "table rows do not cover every tile of their window".into(),
            });
        }
        Ok(f)
    }
}
