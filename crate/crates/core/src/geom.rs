//! Exact planar primitives.
//!
//! Every coordinate is an arbitrary-precision rational, so side tests,
//! incidences and orientation predicates are decided without rounding.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number. Always reduced with a positive denominator.
pub type Rational = BigRational;

/// Builds `num / den` from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"p"` or `"p/q"` with decimal integers.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::ParseRational(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite float.
pub fn from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Serde adapter storing a rational as a `"p/q"` string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// A point of the plane. Ordered lexicographically by `x`, then `y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Point {
    #[serde(with = "rational_str")]
    pub x: Rational,
    #[serde(with = "rational_str")]
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(int(x), int(y))
    }

    pub fn origin() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        let two = int(2);
        Point::new((&self.x + &other.x) / &two, (&self.y + &other.y) / &two)
    }

    /// Euclidean distance, rounded to binary64.
    pub fn distance(&self, other: &Point) -> f64 {
        let dx = to_f64(&(&self.x - &other.x));
        let dy = to_f64(&(&self.y - &other.y));
        dx.hypot(dy)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

/// Sign of the cross product `(b - a) × (c - a)`: +1 anticlockwise, -1 clockwise, 0 collinear.
pub fn orientation(a: &Point, b: &Point, c: &Point) -> i8 {
    let cross = (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x);
    sign_of(&cross)
}

/// True iff `w` lies on the closed segment `[x, y]`.
pub fn on_segment(x: &Point, y: &Point, w: &Point) -> bool {
    if orientation(x, y, w) != 0 {
        return false;
    }
    let within = |a: &Rational, b: &Rational, v: &Rational| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        lo <= v && v <= hi
    };
    within(&x.x, &y.x, &w.x) && within(&x.y, &y.y, &w.y)
}

/// True iff all the points lie on one line (vacuous for fewer than three distinct points).
pub fn all_collinear(points: &[Point]) -> bool {
    let Some(first) = points.first() else {
        return true;
    };
    let Some(second) = points.iter().find(|p| *p != first) else {
        return true;
    };
    points.iter().all(|p| orientation(first, second, p) == 0)
}

/// Finite set of distinct points, stored in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    /// Rejects empty input and duplicates.
    pub fn new(mut points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        points.sort();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(w[0].to_string()));
        }
        Ok(Self { points })
    }

    /// Sorts and removes duplicates instead of rejecting them.
    pub fn from_points_dedup(mut points: Vec<Point>) -> Result<Self> {
        points.sort();
        points.dedup();
        Self::new(points)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index_of(p).is_some()
    }

    pub fn is_subset_of(&self, other: &PointSet) -> bool {
        self.points.iter().all(|p| other.contains(p))
    }

    pub fn is_collinear(&self) -> bool {
        all_collinear(&self.points)
    }

    /// Largest pairwise distance (0 for a singleton).
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                best = best.max(p.distance(q));
            }
        }
        best
    }

    /// Width of the projection onto the real axis.
    pub fn real_extent(&self) -> Rational {
        let lo = self.points.iter().map(|p| &p.x).min().unwrap();
        let hi = self.points.iter().map(|p| &p.x).max().unwrap();
        hi - lo
    }

    /// Width of the projection onto the imaginary axis.
    pub fn imag_extent(&self) -> Rational {
        let lo = self.points.iter().map(|p| &p.y).min().unwrap();
        let hi = self.points.iter().map(|p| &p.y).max().unwrap();
        hi - lo
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let points = Vec::<Point>::deserialize(d)?;
        PointSet::new(points).map_err(serde::de::Error::custom)
    }
}

/// Ordered list of points, repeats allowed. Implicitly the polyline through
/// its entries in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PointList {
    entries: Vec<Point>,
}

impl PointList {
    pub fn new(entries: Vec<Point>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyPointList);
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[Point] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Point> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of segments, `n` for a list `[x_0, ..., x_n]`.
    pub fn segment_count(&self) -> usize {
        self.entries.len() - 1
    }

    /// Distinct entries in sorted order.
    pub fn support(&self) -> PointSet {
        PointSet::from_points_dedup(self.entries.clone()).expect("list is nonempty")
    }

    pub fn reverse(&self) -> PointList {
        let mut entries = self.entries.clone();
        entries.reverse();
        PointList { entries }
    }

    /// Inserts `p` so that it ends up at position `i`.
    pub fn insert(&self, i: usize, p: Point) -> Result<PointList> {
        if i > self.entries.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.entries.len() });
        }
        let mut entries = self.entries.clone();
        entries.insert(i, p);
        Ok(PointList { entries })
    }

    /// Drops every entry equal to its predecessor.
    pub fn dedup_consecutive(&self) -> PointList {
        let mut entries = self.entries.clone();
        entries.dedup();
        PointList { entries }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.entries.iter()
    }
}

impl<'de> Deserialize<'de> for PointList {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<Point>::deserialize(d)?;
        PointList::new(entries).map_err(serde::de::Error::custom)
    }
}

/// The locus `a·x + b·y + c = 0`.
///
/// Lines are oriented: the side of a point is the sign of `a·x + b·y + c`.
/// The stored coefficients are scaled by a positive factor so that the
/// leading nonzero coefficient of `(a, b)` has absolute value one; two lines
/// compare equal iff their raw coefficients are positive multiples.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Line {
    #[serde(with = "rational_str")]
    a: Rational,
    #[serde(with = "rational_str")]
    b: Rational,
    #[serde(with = "rational_str")]
    c: Rational,
}

impl Line {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        let lead = if !a.is_zero() {
            a.abs()
        } else if !b.is_zero() {
            b.abs()
        } else {
            return Err(Error::DegenerateLine);
        };
        Ok(Self { a: a / &lead, b: b / &lead, c: c / &lead })
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(int(a), int(b), int(c))
    }

    /// The x-axis, oriented so that the upper half plane is positive.
    pub fn x_axis() -> Self {
        Self::from_ints(0, 1, 0).unwrap()
    }

    /// Line through two distinct points, oriented so that points to the left
    /// of `p → q` are positive.
    pub fn through(p: &Point, q: &Point) -> Result<Self> {
        let a = &p.y - &q.y;
        let b = &q.x - &p.x;
        let c = -(&a * &p.x + &b * &p.y);
        Self::new(a, b, c)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn negated(&self) -> Line {
        Line { a: -&self.a, b: -&self.b, c: -&self.c }
    }

    /// `a·x + b·y + c`.
    pub fn eval(&self, p: &Point) -> Rational {
        &self.a * &p.x + &self.b * &p.y + &self.c
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.eval(p).is_zero()
    }

    /// Signed position along the line direction `(b, -a)`; only differences
    /// between incident points are meaningful.
    pub fn position(&self, p: &Point) -> Rational {
        &self.b * &p.x - &self.a * &p.y
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x + {}y + {} = 0",
            format_rational(&self.a),
            format_rational(&self.b),
            format_rational(&self.c)
        )
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLine {
    #[serde(with = "rational_str")]
    a: Rational,
    #[serde(with = "rational_str")]
    b: Rational,
    #[serde(with = "rational_str")]
    c: Rational,
}

impl<'de> Deserialize<'de> for Line {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawLine::deserialize(d)?;
        Line::new(raw.a, raw.b, raw.c).map_err(serde::de::Error::custom)
    }
}

/// Side of `p` relative to `line`: -1, 0 or +1.
pub fn side(line: &Line, p: &Point) -> i8 {
    sign_of(&line.eval(p))
}

/// Orthogonal projection of every entry onto `line`, order preserved.
pub fn project_to_line(line: &Line, list: &PointList) -> PointList {
    let norm2 = &line.a * &line.a + &line.b * &line.b;
    let entries = list
        .iter()
        .map(|p| {
            let t = line.eval(p) / &norm2;
            Point::new(&p.x - &t * &line.a, &p.y - &t * &line.b)
        })
        .collect();
    PointList { entries }
}

/// Invertible real-affine map `p ↦ M p + t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    m: [[Rational; 2]; 2],
    t: [Rational; 2],
}

impl AffineMap {
    pub fn new(m: [[Rational; 2]; 2], t: [Rational; 2]) -> Result<Self> {
        let map = Self { m, t };
        if map.det().is_zero() {
            return Err(Error::SingularMap);
        }
        Ok(map)
    }

    pub fn identity() -> Self {
        Self { m: [[int(1), int(0)], [int(0), int(1)]], t: [int(0), int(0)] }
    }

    pub fn translation(dx: Rational, dy: Rational) -> Self {
        Self { m: [[int(1), int(0)], [int(0), int(1)]], t: [dx, dy] }
    }

    /// Anticlockwise quarter turn about the origin.
    pub fn quarter_turn() -> Self {
        Self { m: [[int(0), int(-1)], [int(1), int(0)]], t: [int(0), int(0)] }
    }

    pub fn det(&self) -> Rational {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn apply(&self, p: &Point) -> Point {
        Point::new(
            &self.m[0][0] * &p.x + &self.m[0][1] * &p.y + &self.t[0],
            &self.m[1][0] * &p.x + &self.m[1][1] * &p.y + &self.t[1],
        )
    }

    pub fn inverse(&self) -> AffineMap {
        let det = self.det();
        let m = [
            [&self.m[1][1] / &det, -&self.m[0][1] / &det],
            [-&self.m[1][0] / &det, &self.m[0][0] / &det],
        ];
        let t = [
            -(&m[0][0] * &self.t[0] + &m[0][1] * &self.t[1]),
            -(&m[1][0] * &self.t[0] + &m[1][1] * &self.t[1]),
        ];
        AffineMap { m, t }
    }

    pub fn apply_list(&self, list: &PointList) -> PointList {
        PointList { entries: list.iter().map(|p| self.apply(p)).collect() }
    }

    /// Images of distinct points stay distinct, so this cannot fail.
    pub fn apply_set(&self, set: &PointSet) -> PointSet {
        PointSet::new(set.iter().map(|p| self.apply(p)).collect()).expect("affine map is injective")
    }

    /// The image line, oriented so that `side(map_line(l), T p) == side(l, p)`.
    pub fn map_line(&self, line: &Line) -> Line {
        // l'(y) = l(T^{-1} y) = (a, b)·(M^{-1} y + s) + c
        let inv = self.inverse();
        let a = &line.a * &inv.m[0][0] + &line.b * &inv.m[1][0];
        let b = &line.a * &inv.m[0][1] + &line.b * &inv.m[1][1];
        let c = &line.a * &inv.t[0] + &line.b * &inv.t[1] + &line.c;
        Line::new(a, b, c).expect("invertible map sends lines to lines")
    }
}

/// Vertices of the convex hull in anticlockwise order, starting from the
/// lexicographically smallest point. Points lying on hull edges are dropped.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orientation(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orientation(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Hull order of `set` if every point is a strict hull vertex and there are
/// at least three of them.
pub fn strictly_convex_order(set: &PointSet) -> Option<Vec<Point>> {
    if set.len() < 3 {
        return None;
    }
    let hull = convex_hull(set.points());
    (hull.len() == set.len()).then_some(hull)
}
