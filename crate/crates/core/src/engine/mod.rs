//! Curve variation, the supremum search and certified intervals for
//! `Var(f, σ) = sup_S cvar(f, S) / vf(S)`.
//!
//! No finite algorithm for `Var` is known in general, so the engine reports
//! a `[lower, upper]` interval. The lower end carries a witness list, the
//! upper end names the bound that justifies it.

mod bounds;
mod search;

use serde::{Deserialize, Serialize};

pub use bounds::{
    collinear_order, exact_collinear, extension_bound, join_bound, join_convexly, lipschitz_bound,
    lipschitz_constant, polygon_bounds, profile_bound, triangle_exact, trivial_upper, variation_constant,
};
pub use search::{amplify_cycle, search_sup, SearchOutcome};

use crate::error::{Error, Result};
use crate::fsum::fsum;
use crate::function::FunctionTable;
use crate::geom::PointList;
use crate::variation_factor::vf_max;

/// Relative tolerance for comparing floating-point variation values.
pub const TOLERANCE: f64 = 1e-9;

/// `|a - b| ≤ TOLERANCE · max(1, |a|, |b|)`.
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOLERANCE * 1f64.max(a.abs()).max(b.abs())
}

/// `a ≤ b` up to [`TOLERANCE`].
pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b + TOLERANCE * 1f64.max(b.abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Longest list enumerated directly.
    pub max_list_length: usize,
    /// Largest repetition count for cycle amplification.
    pub cycle_repetitions: usize,
    /// Beam width for sets with more than five points; 0 forces exhaustive search.
    pub beam_width: usize,
    /// Breaks ties between equally scored beam states.
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(max_list_length: usize, cycle_repetitions: usize, beam_width: usize, seed: u64) -> Result<Self> {
        if max_list_length == 0 || cycle_repetitions == 0 {
            return Err(Error::InvalidConfig("list length and repetitions must be at least 1".into()));
        }
        Ok(Self { max_list_length, cycle_repetitions, beam_width, seed })
    }

    /// Whether `search_sup` enumerates all lists for a set of `m` points.
    pub fn is_exhaustive_for(&self, m: usize) -> bool {
        self.beam_width == 0 || m <= 5
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { max_list_length: 6, cycle_repetitions: 25, beam_width: 64, seed: 0 }
    }
}

/// Where a lower bound comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LowerRule {
    /// Ratio of the witness list.
    Searched,
    Exact1D,
    TriangleExact,
    PolygonLower,
    Diameter,
}

/// Which bound justifies an upper value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UpperRule {
    Exact1D,
    TriangleExact,
    PolygonUpper,
    LipschitzUpper,
    ExtensionUpper,
    JoinConvexUpper,
    TrivialUpper,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariationEstimate {
    pub lower: f64,
    pub lower_rule: LowerRule,
    /// Best searched list; `witness_ratio` is its exact ratio.
    pub lower_witness: PointList,
    pub witness_ratio: f64,
    pub upper: f64,
    pub upper_rule: UpperRule,
    pub exact: bool,
}

impl VariationEstimate {
    pub fn is_exact(lower: f64, upper: f64) -> bool {
        (upper - lower).abs() <= TOLERANCE * 1f64.max(upper)
    }

    /// The common value when the interval has collapsed.
    pub fn value(&self) -> Option<f64> {
        self.exact.then_some(self.upper)
    }

    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

/// `Σ |f(x_i) - f(x_{i-1})|`, correctly rounded.
pub fn cvar(f: &FunctionTable, list: &PointList) -> Result<f64> {
    let idx = f.indices(list)?;
    Ok(cvar_indices(f, &idx))
}

pub(crate) fn cvar_indices(f: &FunctionTable, idx: &[usize]) -> f64 {
    fsum(idx.windows(2).map(|w| f.diff(w[0], w[1])))
}

/// `cvar(f, S) / vf(S)`.
pub fn ratio(f: &FunctionTable, list: &PointList) -> Result<f64> {
    let c = cvar(f, list)?;
    Ok(c / vf_max(list).0 as f64)
}

/// Combines the searched lower bound with every applicable closed form and
/// upper bound.
pub fn certified_estimate(f: &FunctionTable, cfg: &SearchConfig) -> VariationEstimate {
    let searched = search_sup(f, cfg);
    let witness = searched.witness_list(f);

    let exact_value = exact_collinear(f)
        .map(|v| (v, LowerRule::Exact1D, UpperRule::Exact1D))
        .or_else(|_| triangle_exact(f).map(|v| (v, LowerRule::TriangleExact, UpperRule::TriangleExact)))
        .ok();
    if let Some((v, lr, ur)) = exact_value {
        return VariationEstimate {
            lower: v,
            lower_rule: lr,
            lower_witness: witness,
            witness_ratio: searched.value,
            upper: v,
            upper_rule: ur,
            exact: true,
        };
    }

    let mut lower = (searched.value, LowerRule::Searched);
    let mut uppers = Vec::new();
    if let Ok((lb, ub)) = polygon_bounds(f) {
        if lb > lower.0 {
            lower = (lb, LowerRule::PolygonLower);
        }
        uppers.push((ub, UpperRule::PolygonUpper));
    }
    if let Some(ub) = profile_bound(f) {
        uppers.push((ub, UpperRule::ExtensionUpper));
    }
    uppers.push((lipschitz_constant(f) * bounds::extent_sum(f.domain()), UpperRule::LipschitzUpper));
    uppers.push((trivial_upper(f), UpperRule::TrivialUpper));
    let upper = uppers.into_iter().fold(None, |best: Option<(f64, UpperRule)>, u| match best {
        Some(b) if b.0 <= u.0 => Some(b),
        _ => Some(u),
    });
    let (upper, upper_rule) = upper.expect("trivial bound always applies");

    VariationEstimate {
        lower: lower.0,
        lower_rule: lower.1,
        lower_witness: witness,
        witness_ratio: searched.value,
        upper,
        upper_rule,
        exact: VariationEstimate::is_exact(lower.0, upper),
    }
}
