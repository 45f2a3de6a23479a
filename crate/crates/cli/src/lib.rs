//! Command implementations for `pvar`. Each command returns its complete
//! stdout document, so nothing is printed when validation fails.

pub mod error;
pub mod problem;
pub mod report;
pub mod verify;

use std::fmt::Write as _;
use std::path::Path;

use planar_variation::algebra::BvElement;
use planar_variation::circle::circle_compare;
use planar_variation::engine::{certified_estimate, join_bound, SearchConfig};
use planar_variation::geom::{parse_rational, Line};
use planar_variation::variation_factor::{sign_vector, vf_max, vf_on_line, PerturbedLine, SegmentClass};
use planar_variation::Complex64;
use serde::{Deserialize, Serialize};

pub use error::{CliError, CliResult};
pub use problem::ProblemFile;
pub use report::{emit_report, BoundRow, Figure, Format, ResultSet};
pub use verify::{verify_suite, Mutation, Suite, VerificationReport};

/// A command's stdout document and whether it reports a violated property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub violated: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, violated: false }
    }
}

fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// Caps the worker pool at `VARIATION_THREADS` when set.
pub fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("VARIATION_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Invalid(format!("VARIATION_THREADS must be a positive integer, got `{raw}`")))?;
    // a pool may already exist when called twice in one process; keep it
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// `a,b,c` with rational entries.
pub fn parse_line(s: &str) -> CliResult<Line> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Invalid(format!("line must be `a,b,c`, got `{s}`")));
    }
    let coeffs = parts.iter().map(|p| parse_rational(p)).collect::<Result<Vec<_>, _>>()?;
    let [a, b, c]: [_; 3] = coeffs.try_into().expect("three coefficients");
    Ok(Line::new(a, b, c)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VfOutput {
    pub vf: usize,
    pub line: PerturbedLine,
    pub segments: Vec<SegmentClass>,
}

pub fn vf_command(problem: &ProblemFile, line: Option<&Line>, explain: bool) -> CliResult<Output> {
    let list = problem.point_list()?;
    let line = match line {
        Some(l) => PerturbedLine::exact(l.clone()),
        None => vf_max(&list).1,
    };
    let vf = vf_on_line(&list, &line);
    let segments = sign_vector(&list, &line).classes();
    if !explain {
        return Ok(Output::ok(to_json(&VfOutput { vf, line, segments })?));
    }
    let mut out = String::new();
    let _ = writeln!(out, "line: {} ({:?})", line.base(), line.perturbation());
    let _ = writeln!(out, "{:>7}  {:<16} {:<16} class", "segment", "from", "to");
    let pts: Vec<_> = list.iter().collect();
    for (j, class) in segments.iter().enumerate() {
        let _ = writeln!(
            out,
            "{:>7}  {:<16} {:<16} {}",
            j + 1,
            pts[j].to_string(),
            pts[j + 1].to_string(),
            class.label()
        );
    }
    let _ = writeln!(out, "crossing segments: {vf}");
    Ok(Output::ok(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JoinOutput {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarOutput {
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
    /// The variation itself, when the interval has collapsed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    /// Indices into the problem's `points`.
    pub witness: Vec<usize>,
    pub witness_ratio: f64,
    pub lower_rule: String,
    pub upper_rule: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub join: Option<JoinOutput>,
}

pub fn var_command(problem: &ProblemFile, cfg: &SearchConfig, format: TableFormat) -> CliResult<Output> {
    let f = problem.table()?;
    let est = certified_estimate(&f, cfg);
    let witness = est
        .lower_witness
        .iter()
        .map(|p| problem.points.iter().position(|q| q == p).expect("witness points come from the domain"))
        .collect();
    let join = match problem.split()? {
        Some((s1, s2)) => {
            let (lower, upper) = join_bound(&f, &s1, &s2, cfg)?;
            Some(JoinOutput { lower, upper })
        }
        None => None,
    };
    match format {
        TableFormat::Json => Ok(Output::ok(to_json(&VarOutput {
            lower: est.lower,
            upper: est.upper,
            exact: est.exact,
            value: est.value(),
            witness,
            witness_ratio: est.witness_ratio,
            lower_rule: format!("{:?}", est.lower_rule),
            upper_rule: format!("{:?}", est.upper_rule),
            join,
        })?)),
        TableFormat::Csv => {
            let rows = vec![BoundRow::from_estimate("var", f.len(), &est)];
            Ok(Output::ok(emit_report(&ResultSet { rows, figure: None }, Format::Csv)?))
        }
    }
}

/// One step of a `norm --ops` pipeline.
#[derive(Clone, Debug, PartialEq)]
pub enum NormOp {
    Add(String),
    Sub(String),
    Mul(String),
    Max(String),
    Min(String),
    Scale(Complex64),
    Abs,
    Conj,
    Re,
    Im,
}

impl std::fmt::Display for NormOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormOp::Add(p) => write!(f, "add:{p}"),
            NormOp::Sub(p) => write!(f, "sub:{p}"),
            NormOp::Mul(p) => write!(f, "mul:{p}"),
            NormOp::Max(p) => write!(f, "max:{p}"),
            NormOp::Min(p) => write!(f, "min:{p}"),
            NormOp::Scale(a) => write!(f, "scale:{},{}", a.re, a.im),
            NormOp::Abs => f.write_str("abs"),
            NormOp::Conj => f.write_str("conj"),
            NormOp::Re => f.write_str("re"),
            NormOp::Im => f.write_str("im"),
        }
    }
}

/// Parses `add:g.json|mul:g.json|abs|max:g.json|scale:2,-1`.
pub fn parse_ops(s: &str) -> CliResult<Vec<NormOp>> {
    s.split('|')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|tok| {
            let (name, arg) = match tok.split_once(':') {
                Some((n, a)) => (n, Some(a.to_string())),
                None => (tok, None),
            };
            let need = |a: Option<String>| a.ok_or_else(|| CliError::Invalid(format!("`{name}` needs an argument")));
            Ok(match name {
                "add" => NormOp::Add(need(arg)?),
                "sub" => NormOp::Sub(need(arg)?),
                "mul" => NormOp::Mul(need(arg)?),
                "max" => NormOp::Max(need(arg)?),
                "min" => NormOp::Min(need(arg)?),
                "scale" => {
                    let a = need(arg)?;
                    let parts: Vec<f64> = a
                        .split(',')
                        .map(|p| p.trim().parse::<f64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| CliError::Invalid(format!("bad scale `{a}`")))?;
                    match parts[..] {
                        [re] if re.is_finite() => NormOp::Scale(Complex64::new(re, 0.0)),
                        [re, im] if re.is_finite() && im.is_finite() => NormOp::Scale(Complex64::new(re, im)),
                        _ => return Err(CliError::Invalid(format!("bad scale `{a}`"))),
                    }
                }
                "abs" | "conj" | "re" | "im" if arg.is_some() => {
                    return Err(CliError::Invalid(format!("`{name}` takes no argument")))
                }
                "abs" => NormOp::Abs,
                "conj" => NormOp::Conj,
                "re" => NormOp::Re,
                "im" => NormOp::Im,
                other => return Err(CliError::Invalid(format!("unknown op `{other}`"))),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormOutput {
    pub sup_norm: f64,
    pub var: [f64; 2],
    pub norm: [f64; 2],
    pub exact: bool,
    pub ops: Vec<String>,
}

pub fn norm_command(problem: &ProblemFile, ops: &[NormOp], base: &Path, cfg: &SearchConfig) -> CliResult<Output> {
    let mut f = BvElement::new(problem.table()?, *cfg);
    let mut applied = Vec::new();
    let load = |path: &str| -> CliResult<BvElement> {
        let g = ProblemFile::load(&base.join(path))?;
        Ok(BvElement::new(g.table()?, *cfg))
    };
    for op in ops {
        f = match op {
            NormOp::Add(p) => f.add(&load(p)?)?,
            NormOp::Sub(p) => f.sub(&load(p)?)?,
            NormOp::Mul(p) => f.mul(&load(p)?)?,
            NormOp::Max(p) => f.lattice_max(&load(p)?)?,
            NormOp::Min(p) => f.lattice_min(&load(p)?)?,
            NormOp::Scale(a) => f.scale(*a)?,
            NormOp::Abs => f.abs_val(),
            NormOp::Conj => f.conj(),
            NormOp::Re => f.re(),
            NormOp::Im => f.im(),
        };
        applied.push(op.to_string());
    }
    let (v, n) = (f.var_interval(), f.norm_interval());
    Ok(Output::ok(to_json(&NormOutput {
        sup_norm: f.sup_norm(),
        var: [v.lower, v.upper],
        norm: [n.lower, n.upper],
        exact: f.is_exact(),
        ops: applied,
    })?))
}

pub fn circle_command(problem: &ProblemFile, cfg: &SearchConfig) -> CliResult<Output> {
    let rep = circle_compare(problem.circle_sample()?, cfg)?;
    Ok(Output { text: to_json(&rep)?, violated: !rep.holds() })
}

pub fn verify_command(suite: Suite, seed: u64, trials: usize, mutation: Option<Mutation>) -> CliResult<Output> {
    let rep = verify_suite(suite, seed, trials, mutation)?;
    Ok(Output { text: to_json(&rep)?, violated: !rep.passed() })
}

/// Bound rows and a figure for a problem: the variation estimate when values
/// are present, and the list with its best line when a list is present.
pub fn problem_results(problem: &ProblemFile, cfg: &SearchConfig) -> CliResult<ResultSet> {
    let mut results = ResultSet::default();
    if problem.values.is_some() {
        let f = problem.table()?;
        results.rows.push(BoundRow::from_estimate("var", f.len(), &certified_estimate(&f, cfg)));
    }
    if problem.list.is_some() {
        let list = problem.point_list()?;
        let (_, line) = vf_max(&list);
        let mut fig = report::vf_figure(&list, &line);
        if !problem.points.is_empty() {
            fig.points = problem.domain()?.points().to_vec();
        }
        results.figure = Some(fig);
    } else if !problem.points.is_empty() {
        results.figure = Some(Figure { points: problem.domain()?.points().to_vec(), polyline: None, line: None });
    }
    Ok(results)
}

pub fn report_command(
    problem: Option<&ProblemFile>,
    harmonic: Option<usize>,
    format: Format,
    cfg: &SearchConfig,
) -> CliResult<Output> {
    let mut results = match problem {
        Some(p) => problem_results(p, cfg)?,
        None => ResultSet::default(),
    };
    if let Some(m) = harmonic {
        if m < 2 {
            return Err(CliError::Invalid("harmonic sweep needs m ≥ 2".into()));
        }
        results.rows.extend(report::harmonic_sweep(m));
    }
    Ok(Output::ok(emit_report(&results, format)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_parsing() {
        assert_eq!(parse_line("0, 1, 0").unwrap(), Line::x_axis());
        assert!(parse_line("0,0,1").is_err());
        assert!(parse_line("1,2").is_err());
        assert!(parse_line("1/2,x,0").is_err());
    }

    #[test]
    fn op_parsing() {
        let ops = parse_ops("add:g.json|abs|scale:2,-1|max:h.json").unwrap();
        assert_eq!(ops[0], NormOp::Add("g.json".into()));
        assert_eq!(ops[1], NormOp::Abs);
        assert_eq!(ops[2], NormOp::Scale(Complex64::new(2.0, -1.0)));
        assert!(parse_ops("add").is_err());
        assert!(parse_ops("abs:1").is_err());
        assert!(parse_ops("sqrt").is_err());
        assert!(parse_ops("scale:nan").is_err());
    }
}
