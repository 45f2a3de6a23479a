//! Samples of functions on the unit circle.
//!
//! A sample fixes angles `0 = θ_0 < ... < θ_n = 2π` (stored as rational
//! multiples of π) and values at `e^{iθ_j}`. The classical variation of
//! `θ ↦ f(e^{iθ})` over the partition is compared with the planar variation
//! interval on the point set `{e^{iθ_j}}`.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::engine::{amplify_cycle, approx_le, certified_estimate, SearchConfig, VariationEstimate};
use crate::error::{Error, Result};
use crate::fsum::fsum;
use crate::function::FunctionTable;
use crate::geom::{format_rational, from_f64, int, parse_rational, rat, to_f64, Point, PointList, PointSet, Rational};

/// Side tests on sampled circle points closer to zero than this are refused.
pub const AMBIGUITY_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CircleSample {
    angles_pi: Vec<Rational>,
    /// One value per angle; the last repeats the first.
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCircleSample {
    angles_pi: Vec<String>,
    values: Vec<[f64; 2]>,
}

impl CircleSample {
    /// `values` has one entry per angle (first and last equal) or one per
    /// angle except the final `2π`.
    pub fn new(angles_pi: Vec<Rational>, mut values: Vec<Complex64>) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidCircleSample(m.to_string()));
        if angles_pi.len() < 2 {
            return bad("need at least the angles 0 and 2");
        }
        if !angles_pi[0].is_zero() || angles_pi[angles_pi.len() - 1] != int(2) {
            return bad("angles must run from 0 to 2 (in units of π)");
        }
        if angles_pi.windows(2).any(|w| w[0] >= w[1]) {
            return bad("angles must be strictly increasing");
        }
        if values.len() + 1 == angles_pi.len() {
            values.push(values[0]);
        }
        if values.len() != angles_pi.len() {
            return Err(Error::SizeMismatch { expected: angles_pi.len(), got: values.len() });
        }
        if values[0] != values[values.len() - 1] {
            return bad("values at angles 0 and 2 must agree");
        }
        if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFiniteValue(format!("angle {}π", format_rational(&angles_pi[i]))));
        }
        Ok(Self { angles_pi, values })
    }

    /// `n` equally spaced angles with values from `f(θ / π)`.
    pub fn uniform(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let angles: Vec<Rational> = (0..=n).map(|j| rat(2 * j as i64, n as i64)).collect();
        let values = angles[..n].iter().map(|a| f(to_f64(a))).collect();
        Self::new(angles, values)
    }

    pub fn angles_pi(&self) -> &[Rational] {
        &self.angles_pi
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Number of distinct sample points.
    pub fn len(&self) -> usize {
        self.angles_pi.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `e^{iπθ}`: exact on the axes, otherwise the binary64 cosine and sine.
    pub fn point_at(angle_pi: &Rational) -> Point {
        let half = rat(1, 2);
        let reduced = angle_pi - int(2) * Rational::from_integer((angle_pi / int(2)).floor().to_integer());
        if reduced.is_zero() {
            Point::from_ints(1, 0)
        } else if reduced == half {
            Point::from_ints(0, 1)
        } else if reduced.is_one() {
            Point::from_ints(-1, 0)
        } else if reduced == rat(3, 2) {
            Point::from_ints(0, -1)
        } else {
            let t = std::f64::consts::PI * to_f64(&reduced);
            Point::new(from_f64(t.cos()).unwrap(), from_f64(t.sin()).unwrap())
        }
    }

    /// Sample points in angle order, without the repeated endpoint.
    pub fn points(&self) -> Vec<Point> {
        self.angles_pi[..self.len()].iter().map(Self::point_at).collect()
    }

    /// The sampled function as a table on its planar points. Refuses samples
    /// where some triple of points is too close to collinear to trust.
    pub fn table(&self) -> Result<FunctionTable> {
        let pts = self.points();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                for k in j + 1..pts.len() {
                    let det = (&pts[j].x - &pts[i].x) * (&pts[k].y - &pts[i].y)
                        - (&pts[j].y - &pts[i].y) * (&pts[k].x - &pts[i].x);
                    if to_f64(&det).abs() < AMBIGUITY_THRESHOLD {
                        return Err(Error::AmbiguousGeometry);
                    }
                }
            }
        }
        let pairs = pts.into_iter().zip(self.values.iter().copied()).collect();
        FunctionTable::from_pairs(pairs).map_err(|_| Error::AmbiguousGeometry)
    }
}

impl Serialize for CircleSample {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawCircleSample {
            angles_pi: self.angles_pi.iter().map(format_rational).collect(),
            values: self.values.iter().map(|v| [v.re, v.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CircleSample {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawCircleSample::deserialize(d)?;
        let angles = raw
            .angles_pi
            .iter()
            .map(|a| parse_rational(a))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        let values = raw.values.iter().map(|v| Complex64::new(v[0], v[1])).collect();
        CircleSample::new(angles, values).map_err(serde::de::Error::custom)
    }
}

/// Classical variation of `θ ↦ f(e^{iθ})` over the sampled partition.
pub fn circle_variation_bg(c: &CircleSample) -> f64 {
    fsum(c.values.windows(2).map(|w| (w[1] - w[0]).norm()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleReport {
    pub var_bg: f64,
    pub estimate: VariationEstimate,
    /// Best of the searched lower bound and the full sample cycle repeated
    /// `N` times.
    pub amplified_lower: f64,
    pub repetitions: usize,
    /// `upper ≤ var_bg`.
    pub upper_within_bg: bool,
    /// `var_bg ≤ 2 · amplified_lower · (2N + 1) / N`.
    pub bg_within_amplified: bool,
}

impl CircleReport {
    pub fn holds(&self) -> bool {
        self.upper_within_bg && self.bg_within_amplified
    }
}

pub fn circle_compare(c: &CircleSample, cfg: &SearchConfig) -> Result<CircleReport> {
    let f = c.table()?;
    let var_bg = circle_variation_bg(c);
    let estimate = certified_estimate(&f, cfg);
    let n = cfg.cycle_repetitions;
    let mut amplified_lower = estimate.lower;
    if c.len() >= 2 {
        let cycle = PointList::new(c.points())?;
        let (_, r) = amplify_cycle(&f, &cycle, n)?;
        amplified_lower = amplified_lower.max(r);
    }
    let factor = (2 * n + 1) as f64 / n as f64;
    Ok(CircleReport {
        var_bg,
        upper_within_bg: approx_le(estimate.upper, var_bg),
        bg_within_amplified: approx_le(var_bg, 2.0 * amplified_lower * factor),
        estimate,
        amplified_lower,
        repetitions: n,
    })
}

/// Point set of a sample, for callers that only need the geometry.
pub fn sample_points(c: &CircleSample) -> Result<PointSet> {
    Ok(c.table()?.domain().clone())
}
