//! Norm arithmetic on function tables.
//!
//! `‖f‖ = ‖f‖_∞ + Var(f, σ)`. Variation is only known as an interval, so
//! norms are intervals too, and every algebraic inequality is checked in its
//! certified form: a check fails only if the left side's lower end exceeds
//! the right side's upper end.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::engine::{approx_le, certified_estimate, SearchConfig, VariationEstimate};
use crate::error::{Error, Result};
use crate::function::FunctionTable;
use crate::geom::{convex_hull, strictly_convex_order, Point, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Self {
        Self { lower, upper }
    }

    pub fn point(v: f64) -> Self {
        Self { lower: v, upper: v }
    }

    pub fn scale(self, k: f64) -> Interval {
        debug_assert!(k >= 0.0);
        Interval::new(k * self.lower, k * self.upper)
    }

    /// Interval of `|x - y|` for `x ∈ self`, `y ∈ other`.
    pub fn abs_diff(self, other: Interval) -> Interval {
        let lower = (self.lower - other.upper).max(other.lower - self.upper).max(0.0);
        let upper = (self.upper - other.lower).max(other.upper - self.lower);
        Interval::new(lower, upper)
    }

    /// Certified `≤`: can only fail when the intervals are disjoint.
    pub fn may_be_le(self, other: Interval) -> bool {
        approx_le(self.lower, other.upper)
    }
}

impl std::ops::Add for Interval {
    type Output = Interval;

    fn add(self, other: Interval) -> Interval {
        Interval::new(self.lower + other.lower, self.upper + other.upper)
    }
}

/// Product of two nonnegative intervals.
impl std::ops::Mul for Interval {
    type Output = Interval;

    fn mul(self, other: Interval) -> Interval {
        Interval::new(self.lower * other.lower, self.upper * other.upper)
    }
}

/// A function together with its sup norm and (lazily) its variation interval.
#[derive(Debug)]
pub struct BvElement {
    table: FunctionTable,
    sup_norm: f64,
    cfg: SearchConfig,
    estimate: OnceLock<VariationEstimate>,
}

impl Clone for BvElement {
    fn clone(&self) -> Self {
        let estimate = OnceLock::new();
        if let Some(e) = self.estimate.get() {
            let _ = estimate.set(e.clone());
        }
        Self { table: self.table.clone(), sup_norm: self.sup_norm, cfg: self.cfg, estimate }
    }
}

impl BvElement {
    pub fn new(table: FunctionTable, cfg: SearchConfig) -> Self {
        let sup_norm = table.sup_norm();
        Self { table, sup_norm, cfg, estimate: OnceLock::new() }
    }

    pub fn table(&self) -> &FunctionTable {
        &self.table
    }

    pub fn domain(&self) -> &PointSet {
        self.table.domain()
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn config(&self) -> &SearchConfig {
        &self.cfg
    }

    /// Computed on first use; the search is deterministic, so concurrent
    /// first calls agree.
    pub fn estimate(&self) -> &VariationEstimate {
        self.estimate.get_or_init(|| certified_estimate(&self.table, &self.cfg))
    }

    pub fn var_interval(&self) -> Interval {
        let e = self.estimate();
        Interval::new(e.lower, e.upper)
    }

    pub fn norm_interval(&self) -> Interval {
        self.var_interval() + Interval::point(self.sup_norm)
    }

    pub fn is_exact(&self) -> bool {
        self.estimate().exact
    }

    fn derive(&self, table: FunctionTable) -> BvElement {
        BvElement::new(table, self.cfg)
    }

    fn zip(&self, other: &BvElement, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<BvElement> {
        Ok(self.derive(self.table.zip_with(&other.table, op)?))
    }

    fn map(&self, op: impl Fn(Complex64) -> Complex64) -> Result<BvElement> {
        Ok(self.derive(self.table.map(op)?))
    }

    pub fn add(&self, other: &BvElement) -> Result<BvElement> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &BvElement) -> Result<BvElement> {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &BvElement) -> Result<BvElement> {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, alpha: Complex64) -> Result<BvElement> {
        self.map(|v| alpha * v)
    }

    pub fn conj(&self) -> BvElement {
        self.map(|v| v.conj()).expect("conjugation keeps values finite")
    }

    pub fn abs_val(&self) -> BvElement {
        self.map(|v| Complex64::new(v.norm(), 0.0)).expect("moduli of finite values are finite")
    }

    pub fn re(&self) -> BvElement {
        self.derive(self.table.re())
    }

    pub fn im(&self) -> BvElement {
        self.derive(self.table.im())
    }

    fn require_real(&self, other: &BvElement) -> Result<()> {
        if !self.table.same_domain(&other.table) {
            return Err(Error::DomainMismatch);
        }
        if !self.table.is_real() || !other.table.is_real() {
            return Err(Error::NonRealInput);
        }
        Ok(())
    }

    /// `f ∨ g = ½ (f + g + |f - g|)`.
    pub fn lattice_max(&self, other: &BvElement) -> Result<BvElement> {
        self.require_real(other)?;
        self.zip(other, |a, b| Complex64::new(0.5 * (a.re + b.re + (a.re - b.re).abs()), 0.0))
    }

    /// `f ∧ g = ½ (f + g - |f - g|)`.
    pub fn lattice_min(&self, other: &BvElement) -> Result<BvElement> {
        self.require_real(other)?;
        self.zip(other, |a, b| Complex64::new(0.5 * (a.re + b.re - (a.re - b.re).abs()), 0.0))
    }
}

/// One certified inequality between two interval-valued sides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: Interval,
    pub rhs: Interval,
    pub holds: bool,
}

impl InequalityCheck {
    fn le(name: &str, lhs: Interval, rhs: Interval) -> Self {
        Self { name: name.to_string(), lhs, rhs, holds: lhs.may_be_le(rhs) }
    }

    fn eq(name: &str, lhs: Interval, rhs: Interval) -> Self {
        Self { name: name.to_string(), lhs, rhs, holds: lhs.may_be_le(rhs) && rhs.may_be_le(lhs) }
    }
}

/// Variation and norm inequalities for a pair `f, g` and a scalar `α`.
pub fn algebra_checks(f: &BvElement, g: &BvElement, alpha: Complex64) -> Result<Vec<InequalityCheck>> {
    let (vf, vg) = (f.var_interval(), g.var_interval());
    let (nf, ng) = (f.norm_interval(), g.norm_interval());
    let sum = f.add(g)?;
    let prod = f.mul(g)?;
    let diff = f.sub(g)?;
    let scaled = f.scale(alpha)?;
    let abs = f.abs_val();
    let a = alpha.norm();
    let mut checks = vec![
        InequalityCheck::le("var_sum", sum.var_interval(), vf + vg),
        InequalityCheck::le(
            "var_product",
            prod.var_interval(),
            vg.scale(f.sup_norm()) + vf.scale(g.sup_norm()),
        ),
        InequalityCheck::eq("var_scale", scaled.var_interval(), vf.scale(a)),
        InequalityCheck::le("var_difference", vf.abs_diff(vg), diff.var_interval()),
        InequalityCheck::le("var_modulus", abs.var_interval(), vf),
        InequalityCheck::le("norm_sum", sum.norm_interval(), nf + ng),
        InequalityCheck::le("norm_product", prod.norm_interval(), nf * ng),
        InequalityCheck::eq("norm_scale", scaled.norm_interval(), nf.scale(a)),
        InequalityCheck::le("norm_modulus", abs.norm_interval(), nf),
    ];
    let (re, im) = (f.re(), f.im());
    let parts = re.var_interval().lower.max(im.var_interval().lower);
    checks.push(InequalityCheck::le("real_imaginary_split", Interval::point(parts), vf));
    if f.table().is_real() && g.table().is_real() {
        let bound = nf + ng;
        checks.push(InequalityCheck::le("norm_lattice_max", f.lattice_max(g)?.norm_interval(), bound));
        checks.push(InequalityCheck::le("norm_lattice_min", f.lattice_min(g)?.norm_interval(), bound));
    }
    Ok(checks)
}

/// `p_x`, `p_y` and `ζ = p_x + i p_y` on `σ`.
pub fn coordinate_functions(set: &PointSet, cfg: SearchConfig) -> (BvElement, BvElement, BvElement) {
    let make = |g: &dyn Fn(f64, f64) -> Complex64| {
        let table = FunctionTable::from_fn(set.clone(), |p| {
            let (x, y) = p.to_f64();
            g(x, y)
        })
        .expect("finite coordinates");
        BvElement::new(table, cfg)
    };
    (
        make(&|x, _| Complex64::new(x, 0.0)),
        make(&|_, y| Complex64::new(y, 0.0)),
        make(&|x, y| Complex64::new(x, y)),
    )
}

/// `Σ c[m][n] x^m y^n` on `σ`.
pub fn eval_poly(coeffs: &[Vec<Complex64>], set: &PointSet, cfg: SearchConfig) -> Result<BvElement> {
    let table = FunctionTable::from_fn(set.clone(), |p| {
        let (x, y) = p.to_f64();
        let mut total = Complex64::new(0.0, 0.0);
        for (m, row) in coeffs.iter().enumerate() {
            for (n, &c) in row.iter().enumerate() {
                total += c * x.powi(m as i32) * y.powi(n as i32);
            }
        }
        total
    })?;
    Ok(BvElement::new(table, cfg))
}

/// Indicator of `{z}` on `σ`.
pub fn char_fn(z: &Point, set: &PointSet, cfg: SearchConfig) -> Result<BvElement> {
    if !set.contains(z) {
        return Err(Error::PointNotInDomain(z.to_string()));
    }
    let table = FunctionTable::from_fn(set.clone(), |p| Complex64::new(if p == z { 1.0 } else { 0.0 }, 0.0))?;
    Ok(BvElement::new(table, cfg))
}

/// Moves `f` from one strictly convex set to another of the same size,
/// matching the anticlockwise hull orders that start at each set's
/// lexicographically smallest point.
pub fn relabel_convex(f: &BvElement, target: &PointSet) -> Result<BvElement> {
    let source = f.domain();
    if source.len() != target.len() {
        return Err(Error::SizeMismatch { expected: source.len(), got: target.len() });
    }
    let from = strictly_convex_order(source).ok_or(Error::NotConvexPosition)?;
    let to = strictly_convex_order(target).ok_or(Error::NotConvexPosition)?;
    let pairs = from
        .iter()
        .zip(&to)
        .map(|(p, q)| Ok((q.clone(), f.table().value(p)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BvElement::new(FunctionTable::from_pairs(pairs)?, *f.config()))
}

/// Hull order used by [`relabel_convex`]; exposed for inspection.
pub fn hull_order(set: &PointSet) -> Vec<Point> {
    convex_hull(set.points())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{int, rat};

    fn cfg() -> SearchConfig {
        SearchConfig::new(4, 6, 16, 0).unwrap()
    }

    fn set(pts: &[(i64, i64)]) -> PointSet {
        PointSet::new(pts.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()).unwrap()
    }

    fn real(s: &PointSet, vals: &[f64]) -> BvElement {
        BvElement::new(FunctionTable::real(s.clone(), vals).unwrap(), cfg())
    }

    #[test]
    fn lattice_counterexample() {
        let s = PointSet::new(vec![Point::from_ints(0, 0), Point::new(rat(1, 2), int(0)), Point::from_ints(1, 0)]).unwrap();
        let f = real(&s, &[3.0, 3.0, 3.0]);
        let g = real(&s, &[2.0, 1.0, 2.0]);
        assert_eq!(f.norm_interval(), Interval::point(3.0));
        assert_eq!(g.norm_interval(), Interval::point(4.0));
        assert!(f.table().values().iter().zip(g.table().values()).all(|(a, b)| a.re > b.re));
    }

    #[test]
    fn lattice_identities() {
        let s = set(&[(0, 0), (1, 0), (0, 1)]);
        let f = real(&s, &[0.25, -1.0, 2.0]);
        let g = real(&s, &[1.0, -2.0, 2.0]);
        let hi = f.lattice_max(&g).unwrap();
        let lo = f.lattice_min(&g).unwrap();
        for i in 0..3 {
            let (a, b) = (f.table().value_at(i).re, g.table().value_at(i).re);
            assert_eq!(hi.table().value_at(i).re, a.max(b));
            assert_eq!(lo.table().value_at(i).re, a.min(b));
        }
        let same = f.lattice_max(&f).unwrap();
        assert_eq!(same.table(), f.table());
        let complex = f.scale(Complex64::new(0.0, 1.0)).unwrap();
        assert_eq!(f.lattice_max(&complex).err(), Some(Error::NonRealInput));
    }

    #[test]
    fn domain_mismatch() {
        let f = real(&set(&[(0, 0), (1, 0)]), &[0.0, 1.0]);
        let g = real(&set(&[(0, 0), (2, 0)]), &[0.0, 1.0]);
        assert_eq!(f.add(&g).err(), Some(Error::DomainMismatch));
    }

    #[test]
    fn checks_on_triangle() {
        let s = set(&[(0, 0), (3, 0), (1, 2)]);
        let f = real(&s, &[0.5, -1.0, 2.0]);
        let g = real(&s, &[1.5, 0.0, -0.5]);
        for c in algebra_checks(&f, &g, Complex64::new(-0.5, 2.0)).unwrap() {
            assert!(c.holds, "{c:?}");
        }
    }

    #[test]
    fn rotation_by_i_keeps_variation() {
        let s = set(&[(0, 0), (1, 0), (2, 0)]);
        let f = real(&s, &[0.0, 3.0, 1.0]);
        let g = f.scale(Complex64::new(0.0, 1.0)).unwrap();
        assert_eq!(f.var_interval(), g.var_interval());
    }

    #[test]
    fn coordinates_and_polynomials() {
        let s = set(&[(0, 0), (2, 1), (1, 3)]);
        let (px, py, zeta) = coordinate_functions(&s, cfg());
        for i in 0..3 {
            let z = zeta.table().value_at(i);
            assert_eq!(z, px.table().value_at(i) + Complex64::new(0.0, 1.0) * py.table().value_at(i));
        }
        assert!(px.var_interval().upper <= 2.0 + 1e-12);
        let one = eval_poly(&[vec![Complex64::new(1.0, 0.0)]], &s, cfg()).unwrap();
        assert_eq!(one.var_interval(), Interval::point(0.0));
        let x = eval_poly(&[vec![], vec![Complex64::new(1.0, 0.0)]], &s, cfg()).unwrap();
        assert_eq!(x.table(), px.table());
    }

    #[test]
    fn characteristic_functions() {
        let two = set(&[(0, 0), (1, 0)]);
        let chi = char_fn(&Point::from_ints(0, 0), &two, cfg()).unwrap();
        assert!(chi.is_exact());
        assert_eq!(chi.var_interval(), Interval::point(1.0));
        assert!(char_fn(&Point::from_ints(5, 0), &two, cfg()).is_err());
        let single = set(&[(3, 3)]);
        let c = char_fn(&Point::from_ints(3, 3), &single, cfg()).unwrap();
        assert_eq!(c.var_interval(), Interval::point(0.0));
    }

    #[test]
    fn relabel_square_to_diamond() {
        let sq = set(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let diamond = set(&[(1, 0), (0, 1), (-1, 0), (0, -1)]);
        let f = real(&sq, &[0.0, 2.0, 1.0, 3.0]);
        let g = relabel_convex(&f, &diamond).unwrap();
        assert_eq!(f.estimate().witness_ratio, g.estimate().witness_ratio);
        assert_eq!(f.var_interval().lower, g.var_interval().lower);
        assert!(relabel_convex(&f, &set(&[(0, 0), (1, 0), (0, 1)])).is_err());
        let same = relabel_convex(&f, &sq).unwrap();
        assert_eq!(same.table(), f.table());
    }
}
