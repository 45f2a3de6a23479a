//! Seeded generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use planar_variation::geom::{convex_hull, int, orientation, rat, side, Line, Point, PointList, PointSet, Rational};
use planar_variation::{Complex64, FunctionTable};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational in `[-8, 8]` with denominator 1, 2 or 3.
pub fn coord(r: &mut ChaCha8Rng) -> Rational {
    let den = r.gen_range(1..=3);
    rat(r.gen_range(-8 * den..=8 * den), den)
}

pub fn point(r: &mut ChaCha8Rng) -> Point {
    Point::new(coord(r), coord(r))
}

/// List of length `1..=max_len` drawn from a small pool so that repeats and
/// collinear incidences are common.
pub fn list(r: &mut ChaCha8Rng, max_len: usize) -> PointList {
    let pool_size = r.gen_range(1..=5);
    let mut pool: Vec<Point> = (0..pool_size).map(|_| point(r)).collect();
    if r.gen_bool(0.3) {
        // force three collinear points
        let a = pool[0].clone();
        let b = point(r);
        pool.push(b.clone());
        pool.push(Point::new(&a.x + int(2) * (&b.x - &a.x), &a.y + int(2) * (&b.y - &a.y)));
        pool.push(a.midpoint(&b));
    }
    let n = r.gen_range(1..=max_len);
    PointList::new((0..n).map(|_| pool.choose(r).unwrap().clone()).collect()).unwrap()
}

pub fn line(r: &mut ChaCha8Rng) -> Line {
    loop {
        let (a, b, c) = (coord(r), coord(r), coord(r));
        if let Ok(l) = Line::new(a, b, c) {
            return l;
        }
    }
}

/// A line through two list entries, so that incidences actually occur.
pub fn incident_line(r: &mut ChaCha8Rng, s: &PointList) -> Line {
    let support = s.support();
    if support.len() >= 2 {
        let mut pts = support.points().to_vec();
        pts.shuffle(r);
        Line::through(&pts[0], &pts[1]).unwrap()
    } else {
        let p = &support.points()[0];
        let b = coord(r);
        let c = -(&p.x + &b * &p.y);
        Line::new(int(1), b, c).unwrap()
    }
}

/// Side of `p` for the raw form `a x + b y + c`, no normalisation.
fn raw_side(a: &Rational, b: &Rational, c: &Rational, p: &Point) -> i8 {
    let v = a * &p.x + b * &p.y + c;
    v.cmp(&int(0)) as i8
}

/// Crossing count straight from the segment definitions, on a sign slice.
pub fn count_from_signs(signs: &[i8]) -> usize {
    if signs.len() == 1 {
        return usize::from(signs[0] == 0);
    }
    let mut count = 0;
    for j in 1..signs.len() {
        let (a, b) = (signs[j - 1], signs[j]);
        let opposite = a != 0 && b != 0 && a != b;
        let starts_on = j == 1 && a == 0;
        let arrives = a != 0 && b == 0;
        if opposite || starts_on || arrives {
            count += 1;
        }
    }
    count
}

/// `vf(S)` over an explicit family: lines through `p + δ₁` and `q + δ₂` for
/// every pair of support points and small displacements `δ`, plus slightly
/// shifted horizontals. Uses no symbolic perturbation at all.
pub fn vf_explicit(s: &PointList) -> usize {
    let eps = rat(1, 1_000_000);
    let zero = int(0);
    let deltas = [
        (zero.clone(), zero.clone()),
        (eps.clone(), zero.clone()),
        (-eps.clone(), zero.clone()),
        (zero.clone(), eps.clone()),
        (zero.clone(), -eps.clone()),
    ];
    let support = s.support();
    let pts = support.points();
    let mut best = if s.len() == 1 { 1 } else { 0 };
    let mut consider = |a: Rational, b: Rational, c: Rational| {
        let signs: Vec<i8> = s.iter().map(|p| raw_side(&a, &b, &c, p)).collect();
        best = best.max(count_from_signs(&signs));
    };
    for p in pts {
        for d in [zero.clone(), eps.clone(), -eps.clone()] {
            consider(zero.clone(), int(1), -(&p.y + &d));
        }
    }
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            for d1 in &deltas {
                for d2 in &deltas {
                    let p1 = Point::new(&p.x + &d1.0, &p.y + &d1.1);
                    let q1 = Point::new(&q.x + &d2.0, &q.y + &d2.1);
                    let a = &p1.y - &q1.y;
                    let b = &q1.x - &p1.x;
                    if a == zero && b == zero {
                        continue;
                    }
                    let c = -(&a * &p1.x + &b * &p1.y);
                    consider(a, b, c);
                }
            }
        }
    }
    best
}

pub fn signs_on(line: &Line, s: &PointList) -> Vec<i8> {
    s.iter().map(|p| side(line, p)).collect()
}

pub fn real_values(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.gen_range(-5.0..5.0)).collect()
}

pub fn complex_values(r: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(r.gen_range(-5.0..5.0), r.gen_range(-5.0..5.0))).collect()
}

/// Distinct points; with `collinear`, all on the real axis.
pub fn point_set(r: &mut ChaCha8Rng, size: usize, collinear: bool) -> PointSet {
    let mut pts: Vec<Point> = Vec::new();
    while pts.len() < size {
        let p = if collinear { Point::new(coord(r), int(0)) } else { point(r) };
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    PointSet::new(pts).unwrap()
}

pub fn table(r: &mut ChaCha8Rng, set: PointSet, real: bool) -> FunctionTable {
    let n = set.len();
    if real {
        FunctionTable::real(set, &real_values(r, n)).unwrap()
    } else {
        FunctionTable::new(set, complex_values(r, n)).unwrap()
    }
}

pub fn non_collinear_triple(r: &mut ChaCha8Rng) -> PointSet {
    loop {
        let (a, b, c) = (point(r), point(r), point(r));
        if orientation(&a, &b, &c) != 0 {
            return PointSet::new(vec![a, b, c]).unwrap();
        }
    }
}

/// `m` integer points in strictly convex position.
pub fn convex_polygon(r: &mut ChaCha8Rng, m: usize) -> PointSet {
    loop {
        let pts: Vec<Point> = (0..m)
            .map(|_| {
                let t: f64 = r.gen_range(0.0..std::f64::consts::TAU);
                Point::from_ints((40.0 * t.cos()).round() as i64, (40.0 * t.sin()).round() as i64)
            })
            .collect();
        let set = match PointSet::new(pts) {
            Ok(s) => s,
            Err(_) => continue,
        };
        if convex_hull(set.points()).len() == m {
            return set;
        }
    }
}

/// Naive left-to-right sum, a check on the correctly rounded one.
pub fn cvar_naive(f: &FunctionTable, s: &PointList) -> f64 {
    let v: Vec<Complex64> = s.iter().map(|p| f.value(p).unwrap()).collect();
    v.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}
