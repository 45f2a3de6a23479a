//! The JSON problem schema shared by every subcommand.
//!
//! ```json
//! {"schema_version": 1,
//!  "points": [{"x": "0", "y": "1/2"}],
//!  "values": [[1.0, 0.0]]}
//! ```
//!
//! Optional members: `list` (a point list for `vf`), `subset_labels` (one of
//! `first`, `second`, `both` per point, describing a join), and `circle` (a
//! circle sample). Unknown members are rejected.

use std::path::Path;

use planar_variation::circle::CircleSample;
use planar_variation::geom::{Point, PointList, PointSet};
use planar_variation::{Complex64, FunctionTable};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubsetLabel {
    First,
    Second,
    Both,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub list: Option<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset_labels: Option<Vec<SubsetLabel>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circle: Option<CircleSample>,
}

impl ProblemFile {
    pub fn from_table(f: &FunctionTable) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            points: f.domain().points().to_vec(),
            values: Some(f.values().iter().map(|v| [v.re, v.im]).collect()),
            list: None,
            subset_labels: None,
            circle: None,
        }
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let p: ProblemFile = serde_json::from_str(text)?;
        if p.schema_version != SCHEMA_VERSION {
            return invalid(format!("unsupported schema_version {} (expected {SCHEMA_VERSION})", p.schema_version));
        }
        Ok(p)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn domain(&self) -> CliResult<PointSet> {
        if self.points.is_empty() {
            return invalid("problem has no points");
        }
        Ok(PointSet::new(self.points.clone())?)
    }

    /// Values keyed by the listed points, in the order given.
    pub fn table(&self) -> CliResult<FunctionTable> {
        let Some(values) = &self.values else {
            return invalid("problem has no values");
        };
        if values.len() != self.points.len() {
            return invalid(format!("{} points but {} values", self.points.len(), values.len()));
        }
        self.domain()?;
        let pairs = self.points.iter().cloned().zip(values.iter().map(|v| Complex64::new(v[0], v[1]))).collect();
        Ok(FunctionTable::from_pairs(pairs)?)
    }

    pub fn point_list(&self) -> CliResult<PointList> {
        match &self.list {
            Some(list) => Ok(PointList::new(list.clone())?),
            None => invalid("problem has no list"),
        }
    }

    /// `(σ₁, σ₂)` from `subset_labels`, if present.
    pub fn split(&self) -> CliResult<Option<(PointSet, PointSet)>> {
        let Some(labels) = &self.subset_labels else {
            return Ok(None);
        };
        if labels.len() != self.points.len() {
            return invalid(format!("{} points but {} subset labels", self.points.len(), labels.len()));
        }
        let pick = |keep: SubsetLabel| -> CliResult<PointSet> {
            let pts: Vec<Point> = self
                .points
                .iter()
                .zip(labels)
                .filter(|(_, &l)| l == keep || l == SubsetLabel::Both)
                .map(|(p, _)| p.clone())
                .collect();
            if pts.is_empty() {
                return invalid("each subset needs at least one point");
            }
            Ok(PointSet::new(pts)?)
        };
        Ok(Some((pick(SubsetLabel::First)?, pick(SubsetLabel::Second)?)))
    }

    pub fn circle_sample(&self) -> CliResult<&CircleSample> {
        self.circle.as_ref().ok_or_else(|| CliError::Invalid("problem has no circle sample".into()))
    }
}
