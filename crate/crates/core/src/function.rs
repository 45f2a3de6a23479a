//! Complex-valued functions on a finite point set.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geom::{AffineMap, Point, PointList, PointSet};

/// A total function `σ → ℂ`, stored in the sorted order of `σ`.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionTable {
    domain: PointSet,
    values: Vec<Complex64>,
}

impl FunctionTable {
    /// `values[i]` is the value at `domain.points()[i]`.
    pub fn new(domain: PointSet, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::SizeMismatch { expected: domain.len(), got: values.len() });
        }
        for (p, v) in domain.iter().zip(&values) {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFiniteValue(p.to_string()));
            }
        }
        Ok(Self { domain, values })
    }

    /// Builds a table from unordered `(point, value)` pairs.
    pub fn from_pairs(pairs: Vec<(Point, Complex64)>) -> Result<Self> {
        let mut pairs = pairs;
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let domain = PointSet::new(pairs.iter().map(|(p, _)| p.clone()).collect())?;
        Self::new(domain, pairs.into_iter().map(|(_, v)| v).collect())
    }

    pub fn from_fn(domain: PointSet, f: impl Fn(&Point) -> Complex64) -> Result<Self> {
        let values = domain.iter().map(f).collect();
        Self::new(domain, values)
    }

    pub fn real(domain: PointSet, values: &[f64]) -> Result<Self> {
        Self::new(domain, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn constant(domain: PointSet, c: Complex64) -> Self {
        let values = vec![c; domain.len()];
        Self::new(domain, values).expect("finite constant")
    }

    pub fn domain(&self) -> &PointSet {
        &self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value_at(&self, i: usize) -> Complex64 {
        self.values[i]
    }

    pub fn value(&self, p: &Point) -> Result<Complex64> {
        self.domain
            .index_of(p)
            .map(|i| self.values[i])
            .ok_or_else(|| Error::PointNotInDomain(p.to_string()))
    }

    /// Domain indices of the list entries.
    pub fn indices(&self, list: &PointList) -> Result<Vec<usize>> {
        list.iter()
            .map(|p| self.domain.index_of(p).ok_or_else(|| Error::PointNotInDomain(p.to_string())))
            .collect()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn same_domain(&self, other: &FunctionTable) -> bool {
        self.domain == other.domain
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Result<FunctionTable> {
        FunctionTable::new(self.domain.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &FunctionTable, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<FunctionTable> {
        if !self.same_domain(other) {
            return Err(Error::DomainMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        FunctionTable::new(self.domain.clone(), values)
    }

    pub fn re(&self) -> FunctionTable {
        self.map(|v| Complex64::new(v.re, 0.0)).unwrap()
    }

    pub fn im(&self) -> FunctionTable {
        self.map(|v| Complex64::new(v.im, 0.0)).unwrap()
    }

    /// `f|σ₁` for `σ₁ ⊆ σ`.
    pub fn restrict(&self, subset: &PointSet) -> Result<FunctionTable> {
        let values = subset.iter().map(|p| self.value(p)).collect::<Result<Vec<_>>>()?;
        FunctionTable::new(subset.clone(), values)
    }

    /// `f ∘ T⁻¹` on `T(σ)`.
    pub fn transport(&self, map: &AffineMap) -> FunctionTable {
        let pairs = self.domain.iter().zip(&self.values).map(|(p, &v)| (map.apply(p), v)).collect();
        FunctionTable::from_pairs(pairs).expect("affine maps are injective")
    }

    pub fn diff(&self, i: usize, j: usize) -> f64 {
        (self.values[i] - self.values[j]).norm()
    }
}
