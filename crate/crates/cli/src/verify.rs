//! Randomized property suite behind `pvar verify`.
//!
//! Every trial draws from its own generator, seeded from `(seed, property,
//! trial)`, so trials can run in parallel and the report is byte-identical
//! for a fixed seed whatever the thread count.

use std::str::FromStr;

use planar_variation::algebra::{algebra_checks, relabel_convex, BvElement};
use planar_variation::circle::{circle_compare, CircleSample};
use planar_variation::engine::{
    amplify_cycle, approx_le, certified_estimate, exact_collinear, join_bound, polygon_bounds, ratio, search_sup,
    SearchConfig,
};
use planar_variation::geom::{
    convex_hull, int, orientation, project_to_line, rat, AffineMap, Line, Point, PointList, PointSet, Rational,
};
use planar_variation::variation_factor::{
    class_from_signs, dedup_consecutive, insert, reverse, sign_vector, vf_max, PerturbedLine, SegmentClass, Sign,
};
use planar_variation::{Complex64, FunctionTable};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{invalid, CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    VfOnly,
    Engine,
    Algebra,
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "all" => Ok(Suite::All),
            "vf-only" => Ok(Suite::VfOnly),
            "engine" => Ok(Suite::Engine),
            "algebra" => Ok(Suite::Algebra),
            other => invalid(format!("unknown suite `{other}` (expected all, vf-only, engine or algebra)")),
        }
    }
}

/// Deliberate defects for checking that the suite notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Classification forgets that a list may start on the line.
    BrokenType2,
}

impl FromStr for Mutation {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "broken-type2" => Ok(Mutation::BrokenType2),
            other => invalid(format!("unknown mutation `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub anchor: String,
    pub trials: usize,
    pub violations: usize,
    /// First violating trial, in trial order.
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub mutation: Option<Mutation>,
    pub properties: Vec<PropertyResult>,
    pub violations: usize,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Group {
    Vf,
    Engine,
    Algebra,
}

struct Ctx {
    cfg: SearchConfig,
    mutation: Option<Mutation>,
}

/// `None` when the trial passes, otherwise a description of the failure.
type Check = fn(&mut ChaCha8Rng, usize, &Ctx) -> Option<Value>;

struct Property {
    name: &'static str,
    anchor: &'static str,
    group: Group,
    check: Check,
}

const PROPERTIES: &[Property] = &[
    Property {
        name: "classification-vs-components",
        anchor: "crossing segments of a list equal the components of the list on a line",
        group: Group::Vf,
        check: classification,
    },
    Property { name: "reversal", anchor: "vf of a reversed list", group: Group::Vf, check: reversal },
    Property { name: "insertion", anchor: "vf never drops when a point is inserted", group: Group::Vf, check: insertion },
    Property { name: "dedup", anchor: "consecutive repeats do not change vf", group: Group::Vf, check: dedup },
    Property { name: "projection", anchor: "projecting a list onto a line does not raise vf", group: Group::Vf, check: projection },
    Property { name: "affine", anchor: "vf is invariant under invertible affine maps", group: Group::Vf, check: affine },
    Property { name: "vf-range", anchor: "1 ≤ vf(S) ≤ number of segments", group: Group::Vf, check: vf_range },
    Property {
        name: "collinear-exact",
        anchor: "on a line the variation is the sorted traversal sum",
        group: Group::Engine,
        check: collinear_exact,
    },
    Property {
        name: "triangle",
        anchor: "three non-collinear points: half the sum of pairwise differences",
        group: Group::Engine,
        check: triangle,
    },
    Property {
        name: "convex-sandwich",
        anchor: "vertices of a convex polygon: half cycle sum ≤ Var ≤ path sum",
        group: Group::Engine,
        check: convex_sandwich,
    },
    Property {
        name: "searched-below-upper",
        anchor: "no list ratio exceeds the certified upper bound",
        group: Group::Engine,
        check: searched_below_upper,
    },
    Property {
        name: "witness-reproducible",
        anchor: "the reported witness list reproduces the searched ratio",
        group: Group::Engine,
        check: witness_reproducible,
    },
    Property {
        name: "join-bounds",
        anchor: "convexly joined sets: max of parts ≤ Var ≤ sum of parts",
        group: Group::Engine,
        check: join_bounds,
    },
    Property {
        name: "algebra-inequalities",
        anchor: "variation and norm inequalities for sums, products, scalings and moduli",
        group: Group::Algebra,
        check: algebra,
    },
    Property {
        name: "lattice-identities",
        anchor: "f ∨ g and f ∧ g through half sums and moduli",
        group: Group::Algebra,
        check: lattice,
    },
    Property {
        name: "circle-sandwich",
        anchor: "circle samples: planar upper ≤ classical variation ≤ amplified bound",
        group: Group::Algebra,
        check: circle,
    },
    Property {
        name: "relabel-isometry",
        anchor: "relabelling between convex polygons preserves the bounds",
        group: Group::Algebra,
        check: relabel,
    },
];

fn selected(suite: Suite, group: Group) -> bool {
    match suite {
        Suite::All => true,
        Suite::VfOnly => group == Group::Vf,
        Suite::Engine => group == Group::Engine,
        Suite::Algebra => group == Group::Algebra,
    }
}

fn trial_seed(seed: u64, property: usize, trial: usize) -> u64 {
    let mut z = seed ^ ((property as u64) << 48) ^ trial as u64;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn verify_suite(suite: Suite, seed: u64, trials: usize, mutation: Option<Mutation>) -> CliResult<VerificationReport> {
    if trials == 0 {
        return invalid("trials must be at least 1");
    }
    let ctx = Ctx { cfg: SearchConfig::new(4, 8, 16, seed)?, mutation };
    let properties: Vec<PropertyResult> = PROPERTIES
        .iter()
        .enumerate()
        .filter(|(_, p)| selected(suite, p.group))
        .map(|(k, p)| {
            let failures: Vec<Option<Value>> = (0..trials)
                .into_par_iter()
                .map(|t| (p.check)(&mut ChaCha8Rng::seed_from_u64(trial_seed(seed, k, t)), t, &ctx))
                .collect();
            let violations = failures.iter().filter(|f| f.is_some()).count();
            let witness = failures.into_iter().flatten().next();
            PropertyResult { name: p.name.into(), anchor: p.anchor.into(), trials, violations, witness }
        })
        .collect();
    let violations = properties.iter().map(|p| p.violations).sum();
    Ok(VerificationReport { suite, seed, trials, mutation, properties, violations })
}

fn coord(r: &mut ChaCha8Rng) -> Rational {
    let den = r.gen_range(1..=3);
    rat(r.gen_range(-8 * den..=8 * den), den)
}

fn point(r: &mut ChaCha8Rng) -> Point {
    Point::new(coord(r), coord(r))
}

/// List of at most nine entries from a small pool, sometimes with three
/// collinear pool points.
fn list(r: &mut ChaCha8Rng) -> PointList {
    let mut pool: Vec<Point> = (0..r.gen_range(1..=5)).map(|_| point(r)).collect();
    if r.gen_bool(0.3) {
        let (a, b) = (pool[0].clone(), point(r));
        pool.push(a.midpoint(&b));
        pool.push(b);
    }
    let n = r.gen_range(1..=9);
    PointList::new((0..n).map(|_| pool.choose(r).unwrap().clone()).collect()).unwrap()
}

fn line(r: &mut ChaCha8Rng) -> Line {
    loop {
        if let Ok(l) = Line::new(coord(r), coord(r), coord(r)) {
            return l;
        }
    }
}

fn sign(r: &mut ChaCha8Rng) -> Sign {
    if r.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// A random line, or a line through list entries with a random perturbation.
fn perturbed_line(r: &mut ChaCha8Rng, s: &PointList) -> PerturbedLine {
    let support = s.support();
    let pts = support.points();
    if pts.len() < 2 || r.gen_bool(0.25) {
        return PerturbedLine::exact(line(r));
    }
    let (i, j) = (r.gen_range(0..pts.len()), r.gen_range(0..pts.len() - 1));
    let j = if j >= i { j + 1 } else { j };
    let base = Line::through(&pts[i], &pts[j]).unwrap();
    match r.gen_range(0..3) {
        0 => PerturbedLine::exact(base),
        1 => PerturbedLine::translated(base, sign(r)),
        _ => {
            let pivot = if r.gen_bool(0.5) { pts[i].clone() } else { pts[j].clone() };
            PerturbedLine::rotated(base, pivot, sign(r)).unwrap()
        }
    }
}

fn nine_point_list() -> PointList {
    let pts = [(1, 0), (2, 1), (3, 0), (5, 0), (4, 1), (5, -1), (6, -1), (7, 1), (8, 0)];
    PointList::new(pts.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()).unwrap()
}

fn crossing_count(signs: &[i8], mutation: Option<Mutation>) -> usize {
    if signs.len() == 1 {
        return usize::from(signs[0] == 0);
    }
    (1..signs.len())
        .map(|j| class_from_signs(signs[j - 1], signs[j], j == 1))
        .filter(|&c| !(mutation == Some(Mutation::BrokenType2) && c == SegmentClass::StartsOnLine))
        .filter(|c| c.is_crossing())
        .count()
}

fn classification(r: &mut ChaCha8Rng, trial: usize, ctx: &Ctx) -> Option<Value> {
    let (s, l) = if trial == 0 {
        (nine_point_list(), PerturbedLine::exact(Line::x_axis()))
    } else {
        let s = list(r);
        let l = perturbed_line(r, &s);
        (s, l)
    };
    let sv = sign_vector(&s, &l);
    let (a, b) = (crossing_count(sv.signs(), ctx.mutation), sv.component_count());
    (a != b).then(|| json!({"list": s, "line": l, "crossing_segments": a, "components": b}))
}

fn reversal(r: &mut ChaCha8Rng, _: usize, _: &Ctx) -> Option<Value> {
    let s = list(r);
    let (a, b) = (vf_max(&s).0, vf_max(&reverse(&s)).0);
    (a != b).then(|| json!({"list": s, "vf": a, "reversed": b}))
}

fn insertion(r: &mut ChaCha8Rng, _: usize, _: &Ctx) -> Option<Value> {
    let s = list(r);
    let i = r.gen_range(0..=s.len());
    let w = point(r);
    let bigger = insert(&s, i, w).unwrap();
    let (a, b) = (vf_max(&s).0, vf_max(&bigger).0);
    (a > b).then(|| json!({"list": s, "inserted": bigger, "vf": a, "after": b}))
}

fn dedup(r: &mut ChaCha8Rng, _: usize, _: &Ctx) -> Option<Value> {
    let s = list(r);
    let (a, b) = (vf_max(&s).0, vf_max(&dedup_consecutive(&s)).0);
    (a != b).then(|| json!({"list": s, "vf": a, "deduplicated": b}))
}

fn projection(r: &mut ChaCha8Rng, _: usize, _: &Ctx) -> Option<Value> {
    let s = list(r);
    let l = line(r);
    let (a, b) = (vf_max(&s).0, vf_max(&project_to_line(&l, &s)).0);
    (b > a).then(|| json!({"list": s, "line": l, "vf": a, "projected": b}))
}

fn affine_map(r: &mut ChaCha8Rng) -> AffineMap {
    loop {
        let e: Vec<i64> = (0..4).map(|_| r.gen_range(-3..=3)).collect();
        let m = [[rat(e[0], 1), rat(e[1], 2)], [rat(e[2], 3), rat(e[3], 1)]];
        if let Ok(t) = AffineMap::new(m, [coord(r), coord(r)]) {
            return t;
        }
    }
}

fn affine(r: &mut ChaCha8Rng, _: usize, _: &Ctx) -> Option<Value> {
    let s = list(r);
    let image = affine_map(r).apply_list(&s);
    let (a, b) = (vf_max(&s).0, vf_max(&image).0);
    (a != b).then(|| json!({"list": s, "image": image, "vf": a, "image_vf": b}))
}

fn vf_range(r: &mut ChaCha8Rng, _: usize, _: &Ctx) -> Option<Value> {
    let s = list(r);
    let v = vf_max(&s).0;
    (v < 1 || v > s.segment_count().max(1)).then(|| json!({"list": s, "vf": v}))
}

fn values(r: &mut ChaCha8Rng, n: usize, real: bool) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(r.gen_range(-5.0..5.0), if real { 0.0 } else { r.gen_range(-5.0..5.0) }))
        .collect()
}

fn pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn point_set(r: &mut ChaCha8Rng, size: usize, collinear: bool) -> PointSet {
    let mut pts: Vec<Point> = Vec::new();
    while pts.len() < size {
        let p = if collinear { Point::new(coord(r), int(0)) } else { point(r) };
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    PointSet::new(pts).unwrap()
}

fn table(r: &mut ChaCha8Rng, set: PointSet, real: bool) -> FunctionTable {
    let n = set.len();
    FunctionTable::new(set, values(r, n, real)).unwrap()
}

fn random_list_in(r: &mut ChaCha8Rng, set: &PointSet, max_len: usize) -> PointList {
    let n = r.gen_range(1..=max_len);
    PointList::new((0..n).map(|_| set.points().choose(r).unwrap().clone()).collect()).unwrap()
}

fn triple(r: &mut ChaCha8Rng) -> PointSet {
    loop {
        let (a, b, c) = (point(r), point(r), point(r));
        if orientation(&a, &b, &c) != 0 {
            return PointSet::new(vec![a, b, c]).unwrap();
        }
    }
}

fn convex_polygon(r: &mut ChaCha8Rng, m: usize) -> PointSet {
    loop {
        let pts: Vec<Point> = (0..m)
            .map(|_| {
                let t: f64 = r.gen_range(0.0..std::f64::consts::TAU);
                Point::from_ints((40.0 * t.cos()).round() as i64, (40.0 * t.sin()).round() as i64)
            })
            .collect();
        if let Ok(set) = PointSet::new(pts) {
            if convex_hull(set.points()).len() == m {
                return set;
            }
        }
    }
}

fn collinear_exact(r: &mut ChaCha8Rng, _: usize, ctx: &Ctx) -> Option<Value> {
    let m = r.gen_range(1..=6);
    let set = point_set(r, m, true);
    let f = table(r, set.clone(), false);
    let exact = exact_collinear(&f).unwrap();
    let found = search_sup(&f, &ctx.cfg).value;
    if (found - exact).abs() > 1e-9 * exact.max(1.0) {
        return Some(json!({"function": pairs(f.values()), "points": set, "searched": found, "exact": exact}));
    }
    let s = random_list_in(r, &set, 9);
    let q = ratio(&f, &s).unwrap();
    (!approx_le(q, exact)).then(|| json!({"points": set, "list": s, "ratio": q, "exact": exact}))
}

fn triangle(r: &mut ChaCha8Rng, _: usize, _: &Ctx) -> Option<Value> {
    let set = triple(r);
    let f = table(r, set.clone(), false);
    let v = f.values();
    let half = 0.5 * ((v[0] - v[1]).norm() + (v[0] - v[2]).norm() + (v[1] - v[2]).norm());
    let s = random_list_in(r, &set, 12);
    let q = ratio(&f, &s).unwrap();
    if q > half + 1e-9 {
        return Some(json!({"points": set, "list": s, "ratio": q, "exact": half}));
    }
    let cycle = PointList::new(set.points().to_vec()).unwrap();
    let (_, amp) = amplify_cycle(&f, &cycle, 25).unwrap();
    (amp < 0.98 * half).then(|| json!({"points": set, "amplified": amp, "exact": half}))
}

fn convex_sandwich(r: &mut ChaCha8Rng, _: usize, ctx: &Ctx) -> Option<Value> {
    let m = r.gen_range(4..=6);
    let set = convex_polygon(r, m);
    let real = r.gen_bool(0.3);
    let f = table(r, set.clone(), real);
    let (lb, ub) = polygon_bounds(&f).unwrap();
    let est = certified_estimate(&f, &ctx.cfg);
    let searched = search_sup(&f, &ctx.cfg).value;
    let ok = approx_le(lb, est.lower) && approx_le(searched, ub) && approx_le(est.upper, ub) && approx_le(est.lower, est.upper);
    (!ok).then(|| json!({"points": set, "lb": lb, "ub": ub, "searched": searched, "estimate": est}))
}

fn small_set(r: &mut ChaCha8Rng) -> PointSet {
    let m = r.gen_range(1..=6);
    let collinear = r.gen_bool(0.25);
    point_set(r, m, collinear)
}

fn searched_below_upper(r: &mut ChaCha8Rng, _: usize, ctx: &Ctx) -> Option<Value> {
    let set = small_set(r);
    let real = r.gen_bool(0.5);
    let f = table(r, set.clone(), real);
    let est = certified_estimate(&f, &ctx.cfg);
    let s = random_list_in(r, &set, 9);
    let q = ratio(&f, &s).unwrap();
    let ok = approx_le(q, est.upper) && approx_le(est.lower, est.upper);
    (!ok).then(|| json!({"points": set, "list": s, "ratio": q, "estimate": est}))
}

fn witness_reproducible(r: &mut ChaCha8Rng, _: usize, ctx: &Ctx) -> Option<Value> {
    let set = small_set(r);
    let f = table(r, set.clone(), false);
    let est = certified_estimate(&f, &ctx.cfg);
    let q = ratio(&f, &est.lower_witness).unwrap();
    (q.to_bits() != est.witness_ratio.to_bits()).then(|| json!({"points": set, "estimate": est, "recomputed": q}))
}

fn join_bounds(r: &mut ChaCha8Rng, _: usize, ctx: &Ctx) -> Option<Value> {
    let m = r.gen_range(2..=6);
    let set = point_set(r, m, true);
    let f = table(r, set.clone(), false);
    let cut = r.gen_range(0..m);
    let pts = set.points();
    let s1 = PointSet::new(pts[..=cut].to_vec()).unwrap();
    let s2 = PointSet::new(pts[cut..].to_vec()).unwrap();
    let (lb, ub) = join_bound(&f, &s1, &s2, &ctx.cfg).unwrap();
    let v = exact_collinear(&f).unwrap();
    (!(approx_le(lb, v) && approx_le(v, ub))).then(|| json!({"points": set, "cut": cut, "join": [lb, ub], "exact": v}))
}

/// Collinear sets and triangles, where the variation is known exactly.
fn exact_domain(r: &mut ChaCha8Rng) -> PointSet {
    if r.gen_bool(0.5) {
        let m = r.gen_range(1..=6);
        point_set(r, m, true)
    } else {
        triple(r)
    }
}

fn algebra(r: &mut ChaCha8Rng, _: usize, ctx: &Ctx) -> Option<Value> {
    let set = exact_domain(r);
    let real = r.gen_bool(0.5);
    let f = BvElement::new(table(r, set.clone(), real), ctx.cfg);
    let g = BvElement::new(table(r, set.clone(), real), ctx.cfg);
    let alpha = Complex64::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
    let failed: Vec<_> = algebra_checks(&f, &g, alpha).unwrap().into_iter().filter(|c| !c.holds).collect();
    (!failed.is_empty()).then(|| json!({"points": set, "f": pairs(f.table().values()), "g": pairs(g.table().values()), "failed": failed}))
}

fn lattice(r: &mut ChaCha8Rng, _: usize, ctx: &Ctx) -> Option<Value> {
    let m = r.gen_range(1..=8);
    let set = point_set(r, m, false);
    let f = BvElement::new(table(r, set.clone(), true), ctx.cfg);
    let g = BvElement::new(table(r, set.clone(), true), ctx.cfg);
    let (hi, lo) = (f.lattice_max(&g).unwrap(), f.lattice_min(&g).unwrap());
    for i in 0..m {
        let (a, b) = (f.table().value_at(i).re, g.table().value_at(i).re);
        let (h, l) = (hi.table().value_at(i).re, lo.table().value_at(i).re);
        let tol = 1e-12 * a.abs().max(b.abs()).max(1.0);
        if (h - a.max(b)).abs() > tol || (l - a.min(b)).abs() > tol {
            return Some(json!({"point": set.points()[i], "f": a, "g": b, "max": h, "min": l}));
        }
    }
    None
}

fn circle(r: &mut ChaCha8Rng, _: usize, ctx: &Ctx) -> Option<Value> {
    let n = r.gen_range(2..=8);
    let mut ks: Vec<i64> = (1..24).collect();
    ks.shuffle(r);
    let mut ks = ks[..n - 1].to_vec();
    ks.sort();
    let mut angles = vec![int(0)];
    angles.extend(ks.iter().map(|&k| rat(k, 12)));
    angles.push(int(2));
    let sample = CircleSample::new(angles, values(r, n, false)).unwrap();
    let cfg = SearchConfig::new(ctx.cfg.max_list_length, 25, ctx.cfg.beam_width, ctx.cfg.seed).unwrap();
    let rep = circle_compare(&sample, &cfg).unwrap();
    (!rep.holds()).then(|| json!({"sample": sample, "report": rep}))
}

fn relabel(r: &mut ChaCha8Rng, _: usize, ctx: &Ctx) -> Option<Value> {
    let m = r.gen_range(3..=6);
    let (a, b) = (convex_polygon(r, m), convex_polygon(r, m));
    let f = BvElement::new(table(r, a, false), ctx.cfg);
    let g = relabel_convex(&f, &b).unwrap();
    let (sf, sg) = (search_sup(f.table(), &ctx.cfg).value, search_sup(g.table(), &ctx.cfg).value);
    let (pf, pg) = (polygon_bounds(f.table()).unwrap(), polygon_bounds(g.table()).unwrap());
    let same = sf.to_bits() == sg.to_bits() && pf.0.to_bits() == pg.0.to_bits() && pf.1.to_bits() == pg.1.to_bits();
    (!same).then(|| json!({"from": f.domain(), "to": b, "searched": [sf, sg], "polygon": [pf, pg]}))
}
