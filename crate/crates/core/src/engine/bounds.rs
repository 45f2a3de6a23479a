//! Closed forms and upper/lower bounds for `Var(f, σ)`.

use crate::error::{Error, Result};
use crate::fsum::fsum;
use crate::function::FunctionTable;
use crate::geom::{int, on_segment, orientation, strictly_convex_order, to_f64, Point, PointSet};

use super::{certified_estimate, LowerRule, SearchConfig, UpperRule, VariationEstimate};

/// Domain indices in order along the common line, or `None` if the set is
/// not collinear. Sorted order of collinear points is already monotone
/// along their line.
pub fn collinear_order(set: &PointSet) -> Option<Vec<usize>> {
    set.is_collinear().then(|| (0..set.len()).collect())
}

/// Classical variation along the line through a collinear domain.
pub fn exact_collinear(f: &FunctionTable) -> Result<f64> {
    let order = collinear_order(f.domain()).ok_or(Error::NotCollinear)?;
    Ok(fsum(order.windows(2).map(|w| f.diff(w[0], w[1]))))
}

/// `½ Σ_{i<j} |f(z_i) - f(z_j)|` on three non-collinear points.
pub fn triangle_exact(f: &FunctionTable) -> Result<f64> {
    if f.len() != 3 {
        return Err(Error::WrongPointCount { expected: 3, got: f.len() });
    }
    let p = f.domain().points();
    if orientation(&p[0], &p[1], &p[2]) == 0 {
        return Err(Error::CollinearPoints);
    }
    Ok(0.5 * fsum([f.diff(0, 1), f.diff(1, 2), f.diff(0, 2)]))
}

/// Bounds for a domain in strictly convex position.
///
/// With `e_1, ..., e_m` the value jumps along the hull cycle, the lower
/// bound is `½ Σ e_i` and the upper bound is the cycle sum with one edge
/// left out. Any vertex may serve as the first in anticlockwise order, so
/// the largest edge is the one dropped.
pub fn polygon_bounds(f: &FunctionTable) -> Result<(f64, f64)> {
    let hull = strictly_convex_order(f.domain()).ok_or(Error::NotConvexPosition)?;
    let idx: Vec<usize> = hull.iter().map(|p| f.domain().index_of(p).unwrap()).collect();
    let m = idx.len();
    let edges: Vec<f64> = (0..m).map(|i| f.diff(idx[i], idx[(i + 1) % m])).collect();
    let lower = 0.5 * fsum(edges.iter().copied());
    let upper = (0..m)
        .map(|cut| fsum(edges.iter().enumerate().filter(|&(i, _)| i != cut).map(|(_, &e)| e)))
        .fold(f64::INFINITY, f64::min);
    Ok((lower, upper))
}

/// `|σ_ℝ| + |σ_iℝ|`, an upper bound for the variation constant.
pub(crate) fn extent_sum(set: &PointSet) -> f64 {
    to_f64(&(set.real_extent() + set.imag_extent()))
}

/// `max |f(x) - f(y)| / |x - y|` over distinct pairs; 0 on a singleton.
pub fn lipschitz_constant(f: &FunctionTable) -> f64 {
    let pts = f.domain().points();
    let mut best = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            best = best.max(f.diff(i, j) / pts[i].distance(&pts[j]));
        }
    }
    best
}

/// `‖f‖_∞ + L(f) · (|σ_ℝ| + |σ_iℝ|)`, an upper bound for the variation norm.
pub fn lipschitz_bound(f: &FunctionTable) -> f64 {
    f.sup_norm() + lipschitz_constant(f) * extent_sum(f.domain())
}

/// Bound for `û(x + iy) = u(x)` on `σ`, where `u` lives on the real
/// projection of `σ`.
pub fn extension_bound(u: &FunctionTable, sigma: &PointSet) -> Result<f64> {
    let projection = PointSet::from_points_dedup(sigma.iter().map(|p| Point::new(p.x.clone(), int(0))).collect())?;
    if u.domain() != &projection {
        return Err(Error::ProjectionMismatch);
    }
    exact_collinear(u)
}

/// One-variable profile of `f` along an axis, if `f` is constant on every
/// line perpendicular to it.
fn axis_profile(f: &FunctionTable, key: impl Fn(&Point) -> Point) -> Option<FunctionTable> {
    let mut pairs: Vec<(Point, num_complex::Complex64)> =
        f.domain().iter().zip(f.values()).map(|(p, &v)| (key(p), v)).collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    for w in pairs.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 != w[1].1 {
            return None;
        }
    }
    pairs.dedup_by(|a, b| a.0 == b.0);
    FunctionTable::from_pairs(pairs).ok()
}

/// Extension bound for `f` constant on vertical or on horizontal lines.
pub fn profile_bound(f: &FunctionTable) -> Option<f64> {
    let vertical = axis_profile(f, |p| Point::new(p.x.clone(), int(0)))
        .map(|u| extension_bound(&u, f.domain()).expect("profile lives on the projection"));
    let horizontal = axis_profile(f, |p| Point::new(int(0), p.y.clone()))
        .map(|u| exact_collinear(&u).expect("profile is collinear"));
    match (vertical, horizontal) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

/// `2 · min_c Σ_z |f(z) - c|` over values `c` of `f`.
///
/// Writing `f = c + Σ (f(z) - c) χ_{z}` and using subadditivity with
/// `Var(χ_{z}) ≤ 2` bounds the variation for every finite domain.
pub fn trivial_upper(f: &FunctionTable) -> f64 {
    (0..f.len())
        .map(|i| 2.0 * fsum((0..f.len()).map(|j| f.diff(i, j))))
        .fold(f64::INFINITY, f64::min)
}

/// Certified interval for `C_σ = Var(ζ, σ)`.
pub fn variation_constant(set: &PointSet, cfg: &SearchConfig) -> VariationEstimate {
    let zeta = FunctionTable::from_fn(set.clone(), |p| {
        let (x, y) = p.to_f64();
        num_complex::Complex64::new(x, y)
    })
    .expect("rational coordinates are finite");
    let mut est = certified_estimate(&zeta, cfg);
    let diam = set.diameter();
    if set.is_collinear() {
        // both sides are the diameter; avoid mixing two roundings of it
        est.lower = diam;
        est.upper = diam;
        est.exact = true;
        return est;
    }
    if diam > est.lower {
        est.lower = diam;
        est.lower_rule = LowerRule::Diameter;
    }
    let extents = extent_sum(set);
    if extents < est.upper {
        est.upper = extents;
        est.upper_rule = UpperRule::ExtensionUpper;
    }
    est.exact = VariationEstimate::is_exact(est.lower, est.upper);
    est
}

/// Every segment from a point only in `σ₁` to a point only in `σ₂` passes
/// through a common point of both sets.
pub fn join_convexly(s1: &PointSet, s2: &PointSet) -> bool {
    let only1: Vec<&Point> = s1.iter().filter(|p| !s2.contains(p)).collect();
    let only2: Vec<&Point> = s2.iter().filter(|p| !s1.contains(p)).collect();
    let shared: Vec<&Point> = s1.iter().filter(|p| s2.contains(p)).collect();
    only1
        .iter()
        .all(|x| only2.iter().all(|y| shared.iter().any(|w| on_segment(x, y, w))))
}

/// `(max(lower₁, lower₂), upper₁ + upper₂)` for `σ = σ₁ ∪ σ₂` joined convexly.
pub fn join_bound(f: &FunctionTable, s1: &PointSet, s2: &PointSet, cfg: &SearchConfig) -> Result<(f64, f64)> {
    let union = PointSet::from_points_dedup(s1.iter().chain(s2.iter()).cloned().collect())?;
    if &union != f.domain() {
        return Err(Error::DomainMismatch);
    }
    if !join_convexly(s1, s2) {
        return Err(Error::NotJoinedConvexly);
    }
    let e1 = certified_estimate(&f.restrict(s1)?, cfg);
    let e2 = certified_estimate(&f.restrict(s2)?, cfg);
    Ok((e1.lower.max(e2.lower), e1.upper + e2.upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::rat;
    use num_complex::Complex64;

    fn set(pts: &[(i64, i64)]) -> PointSet {
        PointSet::new(pts.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()).unwrap()
    }

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn collinear_examples() {
        let f = FunctionTable::real(set(&[(1, 0), (2, 0), (3, 0), (4, 0)]), &[1.0, 4.0, 2.0, 2.5]).unwrap();
        assert_eq!(exact_collinear(&f).unwrap(), 3.0 + 2.0 + 0.5);
        let g = FunctionTable::real(set(&[(0, 0), (1, 1)]), &[0.0, 2.0]).unwrap();
        assert_eq!(exact_collinear(&g).unwrap(), 2.0);
        let h = FunctionTable::real(set(&[(0, 0), (1, 1), (1, 0)]), &[0.0, 2.0, 1.0]).unwrap();
        assert_eq!(exact_collinear(&h), Err(Error::NotCollinear));
    }

    #[test]
    fn triangle_examples() {
        let s = set(&[(0, 0), (1, 0), (0, 1)]);
        let f = FunctionTable::real(s.clone(), &[0.0, 1.0, 1.0]).unwrap();
        assert_eq!(triangle_exact(&f).unwrap(), 1.0);
        let k = FunctionTable::constant(s, c(2.0));
        assert_eq!(triangle_exact(&k).unwrap(), 0.0);
        let line = FunctionTable::real(set(&[(0, 0), (1, 0), (2, 0)]), &[0.0, 1.0, 1.0]).unwrap();
        assert_eq!(triangle_exact(&line), Err(Error::CollinearPoints));
        let four = FunctionTable::real(set(&[(0, 0), (1, 0), (2, 0), (0, 1)]), &[0.0; 4]).unwrap();
        assert!(matches!(triangle_exact(&four), Err(Error::WrongPointCount { .. })));
    }

    #[test]
    fn square_polygon_bounds() {
        let s = set(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let zeta = FunctionTable::from_fn(s, |p| {
            let (x, y) = p.to_f64();
            Complex64::new(x, y)
        })
        .unwrap();
        let (lb, ub) = polygon_bounds(&zeta).unwrap();
        assert_eq!(lb, 2.0);
        assert_eq!(ub, 3.0);
        let edge = set(&[(0, 0), (2, 0), (1, 0), (1, 1)]);
        let f = FunctionTable::real(edge, &[0.0; 4]).unwrap();
        assert_eq!(polygon_bounds(&f), Err(Error::NotConvexPosition));
    }

    #[test]
    fn extension_example() {
        let sigma = set(&[(-1, 1), (0, 0), (1, 1)]);
        let u = FunctionTable::real(set(&[(-1, 0), (0, 0), (1, 0)]), &[1.0, 0.0, 1.0]).unwrap();
        assert_eq!(extension_bound(&u, &sigma).unwrap(), 2.0);
        let wrong = FunctionTable::real(set(&[(-1, 0), (1, 0)]), &[1.0, 1.0]).unwrap();
        assert_eq!(extension_bound(&wrong, &sigma), Err(Error::ProjectionMismatch));
        let uhat = FunctionTable::real(sigma, &[1.0, 0.0, 1.0]).unwrap();
        assert_eq!(triangle_exact(&uhat).unwrap(), 1.0);
        // constant on horizontal lines as well, which gives the sharper bound
        assert_eq!(profile_bound(&uhat), Some(1.0));
        let only_vertical = FunctionTable::real(set(&[(-1, 1), (0, 0), (1, 1)]), &[1.0, 0.0, 2.0]).unwrap();
        assert_eq!(profile_bound(&only_vertical), Some(3.0));
    }

    #[test]
    fn lipschitz_examples() {
        let f = FunctionTable::real(set(&[(0, 0), (1, 0)]), &[0.0, 1.0]).unwrap();
        assert_eq!(lipschitz_bound(&f), 2.0);
        let k = FunctionTable::constant(set(&[(0, 0), (3, 4)]), c(-2.0));
        assert_eq!(lipschitz_bound(&k), 2.0);
    }

    #[test]
    fn trivial_bound_for_indicator() {
        let f = FunctionTable::real(set(&[(0, 0), (1, 0), (5, 2), (3, 3)]), &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(trivial_upper(&f), 2.0);
    }

    #[test]
    fn variation_constant_examples() {
        let cfg = SearchConfig::default();
        let sq = variation_constant(&set(&[(0, 0), (1, 0), (0, 1), (1, 1)]), &cfg);
        assert_eq!((sq.lower, sq.upper), (2.0, 2.0));
        assert!(sq.exact);
        let one = variation_constant(&set(&[(4, 4)]), &cfg);
        assert_eq!((one.lower, one.upper), (0.0, 0.0));
        let line = variation_constant(&set(&[(0, 0), (3, 0), (7, 0)]), &cfg);
        assert!(line.exact);
        assert_eq!(line.upper, 7.0);
    }

    #[test]
    fn join_predicate() {
        let half = Point::new(rat(1, 2), int(0));
        let s1 = PointSet::new(vec![Point::from_ints(0, 0), half.clone()]).unwrap();
        let s2 = PointSet::new(vec![half, Point::from_ints(1, 0)]).unwrap();
        assert!(join_convexly(&s1, &s2));
        let a = set(&[(0, 0), (2, 0)]);
        let b = set(&[(1, 0), (3, 0)]);
        assert!(!join_convexly(&a, &b));
        let f = FunctionTable::real(set(&[(0, 0), (1, 0), (2, 0), (3, 0)]), &[0.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(join_bound(&f, &a, &b, &SearchConfig::default()), Err(Error::NotJoinedConvexly));
    }
}
