//! Intervals, the two shifted dyadic grids, Carleson boxes and their top halves.
//!
//! A grid interval is stored combinatorially as `(shift, j, m)` and realized as
//! `2^j [m + (-1)^j β, m + 1 + (-1)^j β)`. Endpoints are evaluated from the
//! integer numerator `3m ± 3β` divided by three once, so neighbouring intervals
//! share bit-identical endpoints and a parent's endpoints coincide exactly with
//! its children's.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest integer position we accept; keeps `3m ± 1` exactly representable.
const MAX_POSITION: f64 = 4.0e15;
/// Scales are restricted so that `2^j` stays a normal float with headroom.
pub const MAX_SCALE: i32 = 1000;

/// The shift tag β of a grid: `D^0` or `D^{1/3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Shift {
    Zero,
    Third,
}

impl Shift {
    pub const BOTH: [Shift; 2] = [Shift::Zero, Shift::Third];

    pub fn value(self) -> f64 {
        match self {
            Shift::Zero => 0.0,
            Shift::Third => 1.0 / 3.0,
        }
    }

    pub fn other(self) -> Shift {
        match self {
            Shift::Zero => Shift::Third,
            Shift::Third => Shift::Zero,
        }
    }

    /// `3 (-1)^j β`, an integer in {-1, 0, 1}.
    pub fn signed_thirds(self, j: i32) -> i64 {
        match self {
            Shift::Zero => 0,
            Shift::Third if j.rem_euclid(2) == 0 => 1,
            Shift::Third => -1,
        }
    }

    pub fn parse(s: &str) -> Result<Shift> {
        match s.trim() {
            "0" | "0.0" => Ok(Shift::Zero),
            "1/3" => Ok(Shift::Third),
            other => {
                let v: f64 = other
                    .parse()
                    .map_err(|_| Error::invalid(format!("unknown shift tag `{other}`")))?;
                if v == 0.0 {
                    Ok(Shift::Zero)
                } else if (v - 1.0 / 3.0).abs() < 1e-9 {
                    Ok(Shift::Third)
                } else {
                    Err(Error::invalid(format!("shift must be 0 or 1/3, got {v}")))
                }
            }
        }
    }
}

impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shift::Zero => write!(f, "0"),
            Shift::Third => write!(f, "1/3"),
        }
    }
}

/// Exact `2^j` for `|j| <= MAX_SCALE`.
pub fn pow2(j: i32) -> f64 {
    debug_assert!(j.abs() <= MAX_SCALE);
    f64::from_bits(((j + 1023) as u64) << 52)
}

/// `floor(log2 v)` read off the exponent field. Only normal positive floats are accepted.
pub fn floor_log2(v: f64) -> Result<i32> {
    if !(v.is_finite() && v.is_normal() && v > 0.0) {
        return Err(Error::ScaleOutOfRange(v));
    }
    Ok(((v.to_bits() >> 52) & 0x7ff) as i32 - 1023)
}

/// `ceil(log2 v)`, exact at powers of two.
pub fn ceil_log2(v: f64) -> Result<i32> {
    let e = floor_log2(v)?;
    let mantissa = v.to_bits() & ((1u64 << 52) - 1);
    Ok(if mantissa == 0 { e } else { e + 1 })
}

fn check_scale(j: i32, v: f64) -> Result<i32> {
    if j.abs() > MAX_SCALE {
        Err(Error::ScaleOutOfRange(v))
    } else {
        Ok(j)
    }
}

/// A point of the open upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Result<Point> {
        if !(x.is_finite() && y.is_finite() && y > 0.0) {
            return Err(Error::invalid(format!(
                "point ({x}, {y}) is not in the upper half-plane"
            )));
        }
        Ok(Point { x, y })
    }

    pub fn modulus(self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// A half-open interval `[left, left + length)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub left: f64,
    pub length: f64,
}

impl Interval {
    pub fn new(left: f64, length: f64) -> Result<Interval> {
        if !(left.is_finite() && length.is_finite() && length > 0.0) {
            return Err(Error::invalid(format!(
                "interval with left {left} and length {length}"
            )));
        }
        Ok(Interval { left, length })
    }

    pub fn from_endpoints(left: f64, right: f64) -> Result<Interval> {
        Interval::new(left, right - left)
    }

    /// `[-t, t)`.
    pub fn centered(t: f64) -> Result<Interval> {
        Interval::new(-t, 2.0 * t)
    }

    pub fn right(&self) -> f64 {
        self.left + self.length
    }

    pub fn contains(&self, x: f64) -> bool {
        self.left <= x && x < self.right()
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.left <= other.left && other.right() <= self.right()
    }

    /// Length of the overlap with `[a, b)`.
    pub fn overlap(&self, a: f64, b: f64) -> f64 {
        (self.right().min(b) - self.left.max(a)).max(0.0)
    }
}

/// An interval of `D^β`, identified by `(β, j, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicInterval {
    pub shift: Shift,
    pub j: i32,
    pub m: i64,
}

impl DyadicInterval {
    pub fn new(shift: Shift, j: i32, m: i64) -> DyadicInterval {
        DyadicInterval { shift, j, m }
    }

    fn endpoint(shift: Shift, j: i32, m: i64) -> f64 {
        let scale = pow2(j);
        match shift.signed_thirds(j) {
            0 => m as f64 * scale,
            s => ((3 * m + s) as f64 / 3.0) * scale,
        }
    }

    pub fn left(&self) -> f64 {
        Self::endpoint(self.shift, self.j, self.m)
    }

    /// Right endpoint, computed as the left endpoint of the next interval.
    pub fn right(&self) -> f64 {
        Self::endpoint(self.shift, self.j, self.m + 1)
    }

    pub fn length(&self) -> f64 {
        pow2(self.j)
    }

    pub fn realize(&self) -> Interval {
        Interval {
            left: self.left(),
            length: self.length(),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.left() <= x && x < self.right()
    }

    /// The two halves at scale `j - 1`, left child first.
    pub fn children(&self) -> (DyadicInterval, DyadicInterval) {
        let m = 2 * self.m + self.shift.signed_thirds(self.j);
        (
            DyadicInterval::new(self.shift, self.j - 1, m),
            DyadicInterval::new(self.shift, self.j - 1, m + 1),
        )
    }

    pub fn parent(&self) -> DyadicInterval {
        let j = self.j + 1;
        let m = (self.m - self.shift.signed_thirds(j)).div_euclid(2);
        DyadicInterval::new(self.shift, j, m)
    }

    /// The interval of `D^β` at scale `j` containing `x`.
    pub fn containing(shift: Shift, j: i32, x: f64) -> Result<DyadicInterval> {
        check_scale(j, x)?;
        if !x.is_finite() {
            return Err(Error::invalid(format!("non-finite coordinate {x}")));
        }
        let t = x / pow2(j) - shift.signed_thirds(j) as f64 / 3.0;
        if t.abs() > MAX_POSITION {
            return Err(Error::ScaleOutOfRange(x));
        }
        let mut d = DyadicInterval::new(shift, j, t.floor() as i64);
        // The float estimate can miss by one next to an endpoint.
        while x < d.left() {
            d.m -= 1;
        }
        while x >= d.right() {
            d.m += 1;
        }
        Ok(d)
    }

    pub fn top_half(&self) -> CarlesonBox {
        CarlesonBox::top_half(self.realize())
    }

    pub fn carleson_box(&self) -> CarlesonBox {
        CarlesonBox::full(self.realize())
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "D^{}[j={}, m={}] = [{}, {})",
            self.shift,
            self.j,
            self.m,
            self.left(),
            self.right()
        )
    }
}

/// Truncation of the infinite grids to scales `j_min..=j_max` over `[x_lo, x_hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridWindow {
    pub j_min: i32,
    pub j_max: i32,
    pub x_lo: f64,
    pub x_hi: f64,
}

impl GridWindow {
    pub fn new(j_min: i32, j_max: i32, x_lo: f64, x_hi: f64) -> Result<GridWindow> {
        if j_min > j_max {
            return Err(Error::invalid(format!("j_min {j_min} > j_max {j_max}")));
        }
        if j_min.abs() > MAX_SCALE - 2 || j_max.abs() > MAX_SCALE - 2 {
            return Err(Error::invalid("window scales out of range"));
        }
        if !(x_lo.is_finite() && x_hi.is_finite() && x_lo < x_hi) {
            return Err(Error::invalid(format!("window x-range [{x_lo}, {x_hi})")));
        }
        Ok(GridWindow {
            j_min,
            j_max,
            x_lo,
            x_hi,
        })
    }

    /// Height of the window rectangle, `2^{j_max}`.
    pub fn top(&self) -> f64 {
        pow2(self.j_max)
    }

    /// Grid intervals at scale `j` with positive overlap with `[x_lo, x_hi)`.
    pub fn intervals_at(&self, shift: Shift, j: i32) -> Result<Vec<DyadicInterval>> {
        let first = DyadicInterval::containing(shift, j, self.x_lo)?;
        let mut last = DyadicInterval::containing(shift, j, self.x_hi)?;
        if last.left() >= self.x_hi {
            last.m -= 1;
        }
        Ok((first.m..=last.m)
            .map(|m| DyadicInterval::new(shift, j, m))
            .collect())
    }

    /// All grid intervals of `D^β` in the window, coarsest scale first.
    pub fn intervals(&self, shift: Shift) -> Result<Vec<DyadicInterval>> {
        let mut out = Vec::new();
        for j in (self.j_min..=self.j_max).rev() {
            out.extend(self.intervals_at(shift, j)?);
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoxKind {
    /// `Q_I = I × [0, |I|]`
    Full,
    /// `T_I = I × (|I|/2, |I|]`
    TopHalf,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarlesonBox {
    pub interval: Interval,
    pub kind: BoxKind,
}

impl CarlesonBox {
    pub fn full(interval: Interval) -> CarlesonBox {
        CarlesonBox {
            interval,
            kind: BoxKind::Full,
        }
    }

    pub fn top_half(interval: Interval) -> CarlesonBox {
        CarlesonBox {
            interval,
            kind: BoxKind::TopHalf,
        }
    }

    /// Vertical extent `(bottom, top)`.
    pub fn y_range(&self) -> (f64, f64) {
        let l = self.interval.length;
        match self.kind {
            BoxKind::Full => (0.0, l),
            BoxKind::TopHalf => (0.5 * l, l),
        }
    }

    pub fn contains(&self, z: Point) -> bool {
        let (lo, hi) = self.y_range();
        let above = match self.kind {
            BoxKind::Full => z.y >= lo,
            BoxKind::TopHalf => z.y > lo,
        };
        self.interval.contains(z.x) && above && z.y <= hi
    }

    /// Lebesgue area.
    pub fn area(&self) -> f64 {
        let (lo, hi) = self.y_range();
        self.interval.length * (hi - lo)
    }

    pub fn rect(&self) -> Rect {
        let (y0, y1) = self.y_range();
        Rect {
            x0: self.interval.left,
            x1: self.interval.right(),
            y0,
            y1,
        }
    }
}

/// Axis-aligned rectangle `[x0, x1) × (y0, y1]` with `y0 >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn is_empty(&self) -> bool {
        self.x1 <= self.x0 || self.y1 <= self.y0
    }

    pub fn intersect(&self, other: &Rect) -> Rect {
        Rect {
            x0: self.x0.max(other.x0),
            x1: self.x1.min(other.x1),
            y0: self.y0.max(other.y0),
            y1: self.y1.min(other.y1),
        }
    }
}

/// The unique `I ∈ D^β` with `z ∈ T_I`.
pub fn locate_tile(shift: Shift, z: Point) -> Result<DyadicInterval> {
    let j = check_scale(ceil_log2(z.y)?, z.y)?;
    DyadicInterval::containing(shift, j, z.x)
}

/// A minimal-length `K` from either grid with `I ⊆ K` and `|K| <= 8|I|`; `D^0` wins ties.
pub fn covering_interval(interval: &Interval) -> Result<DyadicInterval> {
    let a = interval.left;
    let b = interval.right();
    let k_lo = check_scale(ceil_log2(interval.length)?, interval.length)?;
    let k_hi = check_scale(floor_log2(8.0 * interval.length)?, interval.length)?;
    for k in k_lo..=k_hi {
        for shift in Shift::BOTH {
            let d = DyadicInterval::containing(shift, k, a)?;
            if d.left() <= a && b <= d.right() {
                return Ok(d);
            }
        }
    }
    Err(Error::invalid(format!(
        "no grid interval of length <= 8|I| covers [{a}, {b})"
    )))
}

/// `|z - conj(ξ)|²`.
pub fn reflected_distance_sq(z: Point, xi: Point) -> f64 {
    let dx = z.x - xi.x;
    let dy = z.y + xi.y;
    dx * dx + dy * dy
}

/// `l = floor(log2 |z - conj(ξ)|)`, so that `4^l <= |z - conj(ξ)|² < 4^{l+1}`.
pub fn scale_index(z: Point, xi: Point) -> Result<i32> {
    let d2 = reflected_distance_sq(z, xi);
    Ok(floor_log2(d2)?.div_euclid(2))
}

/// An interval of length `2^{l+1}` centred between the two points whose box holds both.
pub fn common_box_interval(z: Point, xi: Point) -> Result<Interval> {
    let l = check_scale(scale_index(z, xi)?, z.y)?;
    let half = pow2(l);
    let center = 0.5 * (z.x + xi.x);
    Interval::new(center - half, 2.0 * half)
}
