//! Lower bounds for `Var(f, σ)` by searching lists and amplifying cycles.
//!
//! All lists are handled as index sequences into the sorted domain. Crossing
//! counts are maintained incrementally for every sign pattern of the
//! complete line family on `σ`, so `vf` of any list is a max over counters.

use crate::error::{Error, Result};
use crate::fsum::ExactSum;
use crate::function::FunctionTable;
use crate::geom::PointList;
use crate::variation_factor::{vf_max, SignPatterns};

use super::{collinear_order, cvar, SearchConfig};
use crate::geom::strictly_convex_order;

/// Best list found and its exact ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub value: f64,
    /// Domain indices of the witness list.
    pub witness: Vec<usize>,
}

impl SearchOutcome {
    pub fn witness_list(&self, f: &FunctionTable) -> PointList {
        let pts = f.domain().points();
        PointList::new(self.witness.iter().map(|&i| pts[i].clone()).collect()).expect("witness is nonempty")
    }

    fn beaten_by(&self, value: f64, list: &[usize]) -> bool {
        if value != self.value {
            return value > self.value;
        }
        (list.len(), list) < (self.witness.len(), self.witness.as_slice())
    }

    /// Cheap pre-check before an exact evaluation.
    fn may_be_beaten_by(&self, approx: f64) -> bool {
        approx >= self.value * (1.0 - 1e-12)
    }
}

struct Context<'a> {
    f: &'a FunctionTable,
    m: usize,
    k: usize,
    /// `zero[i * k + p]`: point `i` lies on pattern `p`'s line.
    zero: Vec<bool>,
    /// `inc[(i * m + j) * k + p]`: stepping `i → j` adds a crossing segment
    /// under pattern `p`.
    inc: Vec<u8>,
    diff: Vec<f64>,
}

impl<'a> Context<'a> {
    fn new(f: &'a FunctionTable) -> Self {
        let patterns = SignPatterns::new(f.domain());
        let m = f.len();
        let k = patterns.len();
        let mut zero = vec![false; m * k];
        let mut inc = vec![0u8; m * m * k];
        for p in 0..k {
            let pat = patterns.pattern(p);
            for i in 0..m {
                zero[i * k + p] = pat[i] == 0;
                for j in 0..m {
                    let (a, b) = (pat[i], pat[j]);
                    inc[(i * m + j) * k + p] = u8::from(a * b == -1 || (a != 0 && b == 0));
                }
            }
        }
        let mut diff = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                diff[i * m + j] = f.diff(i, j);
            }
        }
        Self { f, m, k, zero, inc, diff }
    }

    fn d(&self, i: usize, j: usize) -> f64 {
        self.diff[i * self.m + j]
    }

    fn start_counts(&self, i: usize) -> Vec<u32> {
        self.zero[i * self.k..(i + 1) * self.k].iter().map(|&z| u32::from(z)).collect()
    }

    fn step(&self, counts: &[u32], i: usize, j: usize) -> Vec<u32> {
        let inc = &self.inc[(i * self.m + j) * self.k..(i * self.m + j + 1) * self.k];
        counts.iter().zip(inc).map(|(&c, &d)| c + u32::from(d)).collect()
    }

    fn exact_cvar(&self, list: &[usize]) -> ExactSum {
        list.windows(2).map(|w| self.d(w[0], w[1])).collect()
    }

    /// Offers a directly enumerated list with its per-pattern counts.
    fn offer(&self, list: &[usize], counts: &[u32], approx_cvar: f64, best: &mut SearchOutcome) {
        if list.len() < 2 || reversal_is_smaller(list) {
            return;
        }
        let vf = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
        if !best.may_be_beaten_by(approx_cvar / vf) {
            return;
        }
        let value = self.exact_cvar(list).value() / vf;
        if best.beaten_by(value, list) {
            *best = SearchOutcome { value, witness: list.to_vec() };
        }
    }
}

/// Lists and their reversals share `cvar` and `vf`; only the smaller is scored.
fn reversal_is_smaller(list: &[usize]) -> bool {
    let n = list.len();
    for i in 0..n / 2 {
        match list[n - 1 - i].cmp(&list[i]) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

fn exhaustive(ctx: &Context, max_len: usize, best: &mut SearchOutcome) {
    fn dfs(ctx: &Context, list: &mut Vec<usize>, counts: &[u32], approx: f64, max_len: usize, best: &mut SearchOutcome) {
        ctx.offer(list, counts, approx, best);
        if list.len() == max_len {
            return;
        }
        let last = *list.last().unwrap();
        for j in (0..ctx.m).filter(|&j| j != last) {
            let next = ctx.step(counts, last, j);
            list.push(j);
            dfs(ctx, list, &next, approx + ctx.d(last, j), max_len, best);
            list.pop();
        }
    }
    for start in 0..ctx.m {
        dfs(ctx, &mut vec![start], &ctx.start_counts(start), 0.0, max_len, best);
    }
}

struct BeamState {
    list: Vec<usize>,
    counts: Vec<u32>,
    approx: f64,
}

fn mix(h: u64, x: u64) -> u64 {
    let mut z = (h ^ x).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seeded tie-break key built from the value sequence, so that it does not
/// depend on how the domain happens to be labelled.
fn tie_key(ctx: &Context, seed: u64, list: &[usize]) -> u64 {
    list.iter().fold(mix(0, seed), |h, &i| {
        let v = ctx.f.value_at(i);
        mix(mix(h, v.re.to_bits()), v.im.to_bits())
    })
}

fn beam(ctx: &Context, cfg: &SearchConfig, best: &mut SearchOutcome) {
    let mut states: Vec<BeamState> =
        (0..ctx.m).map(|i| BeamState { list: vec![i], counts: ctx.start_counts(i), approx: 0.0 }).collect();
    for _ in 1..cfg.max_list_length {
        let mut children = Vec::with_capacity(states.len() * ctx.m);
        for s in &states {
            let last = *s.list.last().unwrap();
            for j in (0..ctx.m).filter(|&j| j != last) {
                let mut list = s.list.clone();
                list.push(j);
                let counts = ctx.step(&s.counts, last, j);
                let approx = s.approx + ctx.d(last, j);
                ctx.offer(&list, &counts, approx, best);
                children.push(BeamState { list, counts, approx });
            }
        }
        let mut scored: Vec<(f64, f64, u64, BeamState)> = children
            .into_iter()
            .map(|c| {
                let vf = c.counts.iter().copied().max().unwrap_or(0).max(1) as f64;
                (c.approx / vf, c.approx, tie_key(ctx, cfg.seed, &c.list), c)
            })
            .collect();
        scored.sort_by(|a, b| {
            b.0.total_cmp(&a.0)
                .then(b.1.total_cmp(&a.1))
                .then(a.2.cmp(&b.2))
                .then_with(|| a.3.list.cmp(&b.3.list))
        });
        scored.truncate(cfg.beam_width);
        states = scored.into_iter().map(|s| s.3).collect();
    }
}

/// Scores `[c_s, ..., c_s]` repeated `1..=max_reps` times for every simple
/// cycle on at most six points and every start vertex `c_s`.
///
/// Over one loop the crossing count of a pattern does not depend on where the
/// loop starts, so `vf` of the repeated list is
/// `max_p ([c_s on p] + N · per_loop_p)`.
fn amplify_all(ctx: &Context, max_reps: usize, best: &mut SearchOutcome) {
    let kmax = ctx.m.min(6);
    if kmax < 2 {
        return;
    }
    let mut path = Vec::with_capacity(kmax);
    for c0 in 0..ctx.m {
        path.push(c0);
        extend_cycles(ctx, &mut path, kmax, max_reps, best);
        path.pop();
    }
}

fn extend_cycles(ctx: &Context, path: &mut Vec<usize>, kmax: usize, max_reps: usize, best: &mut SearchOutcome) {
    let n = path.len();
    // reversal duplicates: keep the orientation whose second vertex is smaller
    if n == 2 || (n > 2 && path[1] < path[n - 1]) {
        score_cycle(ctx, path, max_reps, best);
    }
    if n == kmax {
        return;
    }
    for j in (path[0] + 1)..ctx.m {
        if !path.contains(&j) {
            path.push(j);
            extend_cycles(ctx, path, kmax, max_reps, best);
            path.pop();
        }
    }
}

fn score_cycle(ctx: &Context, cycle: &[usize], max_reps: usize, best: &mut SearchOutcome) {
    let n = cycle.len();
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (cycle[i], cycle[(i + 1) % n])).collect();
    let loop_sum: ExactSum = edges.iter().map(|&(a, b)| ctx.d(a, b)).collect();
    let approx_loop: f64 = edges.iter().map(|&(a, b)| ctx.d(a, b)).sum();
    if approx_loop == 0.0 {
        return;
    }
    let mut per_loop = vec![0u64; ctx.k];
    for &(a, b) in &edges {
        let inc = &ctx.inc[(a * ctx.m + b) * ctx.k..(a * ctx.m + b + 1) * ctx.k];
        for (r, &d) in per_loop.iter_mut().zip(inc) {
            *r += u64::from(d);
        }
    }
    let overall = per_loop.iter().copied().max().unwrap_or(0);

    for s in 0..n {
        let start = cycle[s];
        let on_start = (0..ctx.k)
            .filter(|&p| ctx.zero[start * ctx.k + p])
            .map(|p| per_loop[p])
            .max();
        for reps in 1..=max_reps as u64 {
            let vf = (reps * overall).max(on_start.map_or(0, |r| 1 + reps * r)).max(1) as f64;
            if !best.may_be_beaten_by(reps as f64 * approx_loop / vf) {
                continue;
            }
            let value = loop_sum.scaled(reps).value() / vf;
            let len = n * reps as usize + 1;
            if value > best.value || (value == best.value && len <= best.witness.len()) {
                let list = repeated_cycle(cycle, s, reps as usize);
                if best.beaten_by(value, &list) {
                    *best = SearchOutcome { value, witness: list };
                }
            }
        }
    }
}

fn repeated_cycle(cycle: &[usize], start: usize, reps: usize) -> Vec<usize> {
    let n = cycle.len();
    let mut list = Vec::with_capacity(n * reps + 1);
    list.push(cycle[start]);
    for _ in 0..reps {
        for i in 1..=n {
            list.push(cycle[(start + i) % n]);
        }
    }
    list
}

/// Best ratio over enumerated lists of length at most `L` (exhaustive, or a
/// beam for larger sets), over amplified simple cycles, and over a few
/// shape-specific lists.
///
/// Ties are broken towards shorter, then lexicographically smaller, witness
/// index lists, so the outcome is a function of `f` and `cfg` alone.
pub fn search_sup(f: &FunctionTable, cfg: &SearchConfig) -> SearchOutcome {
    let mut best = SearchOutcome { value: 0.0, witness: vec![0] };
    if f.len() < 2 {
        return best;
    }
    let ctx = Context::new(f);
    if cfg.is_exhaustive_for(ctx.m) {
        exhaustive(&ctx, cfg.max_list_length, &mut best);
    } else {
        beam(&ctx, cfg, &mut best);
    }
    amplify_all(&ctx, cfg.cycle_repetitions, &mut best);
    structured_seeds(&ctx, cfg.cycle_repetitions, &mut best);
    best
}

/// Lists suggested by the shape of `σ`, independent of the length cap: the
/// monotone traversal of a collinear set and the hull cycle of a set in
/// convex position too large for the cycle pass.
fn structured_seeds(ctx: &Context, max_reps: usize, best: &mut SearchOutcome) {
    let domain = ctx.f.domain();
    if let Some(order) = collinear_order(domain) {
        let mut counts = ctx.start_counts(order[0]);
        let mut approx = 0.0;
        for w in order.windows(2) {
            counts = ctx.step(&counts, w[0], w[1]);
            approx += ctx.d(w[0], w[1]);
        }
        ctx.offer(&order, &counts, approx, best);
    } else if ctx.m > 6 {
        if let Some(hull) = strictly_convex_order(domain) {
            let cycle: Vec<usize> = hull.iter().map(|p| domain.index_of(p).unwrap()).collect();
            score_cycle(ctx, &cycle, max_reps, best);
        }
    }
}

/// `S_N`: the start point followed by `N` copies of the cycle body, with its
/// ratio. The cycle may be given closed (first = last) or open.
pub fn amplify_cycle(f: &FunctionTable, cycle: &PointList, reps: usize) -> Result<(PointList, f64)> {
    let mut body = cycle.entries().to_vec();
    if body.len() > 1 && body.first() == body.last() {
        body.pop();
    }
    if body.iter().all(|p| *p == body[0]) {
        return Err(Error::DegenerateCycle);
    }
    if reps == 0 {
        return Err(Error::InvalidConfig("repetitions must be at least 1".into()));
    }
    let n = body.len();
    let mut entries = Vec::with_capacity(n * reps + 1);
    entries.push(body[0].clone());
    for _ in 0..reps {
        for i in 1..=n {
            entries.push(body[i % n].clone());
        }
    }
    let list = PointList::new(entries)?;
    let value = cvar(f, &list)? / vf_max(&list).0 as f64;
    Ok((list, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::ratio;
    use crate::geom::{Point, PointSet};

    fn real(xs: &[i64], vals: &[f64]) -> FunctionTable {
        let set = PointSet::new(xs.iter().map(|&x| Point::from_ints(x, 0)).collect()).unwrap();
        FunctionTable::real(set, vals).unwrap()
    }

    fn triangle(vals: &[f64]) -> FunctionTable {
        let set = PointSet::new(vec![Point::from_ints(0, 0), Point::from_ints(4, 0), Point::from_ints(1, 3)]).unwrap();
        FunctionTable::real(set, vals).unwrap()
    }

    #[test]
    fn identity_on_two_points() {
        let f = real(&[0, 1], &[0.0, 1.0]);
        let out = search_sup(&f, &SearchConfig::default());
        assert_eq!(out.value, 1.0);
        assert_eq!(out.witness, vec![0, 1]);
    }

    #[test]
    fn witness_is_reproducible() {
        let f = triangle(&[0.3, -1.2, 2.5]);
        let out = search_sup(&f, &SearchConfig::default());
        assert_eq!(ratio(&f, &out.witness_list(&f)).unwrap().to_bits(), out.value.to_bits());
    }

    #[test]
    fn amplification_matches_direct_vf() {
        let f = triangle(&[0.0, 1.0, 3.0]);
        let pts = f.domain().points().to_vec();
        let cycle = PointList::new(vec![pts[0].clone(), pts[1].clone(), pts[2].clone(), pts[0].clone()]).unwrap();
        for reps in [1, 2, 5] {
            let (list, r) = amplify_cycle(&f, &cycle, reps).unwrap();
            assert_eq!(list.len(), 3 * reps + 1);
            assert_eq!(vf_max(&list).0, 2 * reps + 1);
            let total = 1.0 + 2.0 + 3.0;
            assert!((r - total * reps as f64 / (2 * reps + 1) as f64).abs() < 1e-12);
        }
        let (_, one) = amplify_cycle(&f, &cycle, 1).unwrap();
        assert_eq!(one, ratio(&f, &cycle).unwrap());
    }

    #[test]
    fn degenerate_cycle_rejected() {
        let f = real(&[0, 1], &[0.0, 1.0]);
        let p = f.domain().points()[0].clone();
        let c = PointList::new(vec![p.clone(), p]).unwrap();
        assert_eq!(amplify_cycle(&f, &c, 3), Err(Error::DegenerateCycle));
    }

    #[test]
    fn reversal_canonical_form() {
        assert!(!reversal_is_smaller(&[0, 1]));
        assert!(reversal_is_smaller(&[1, 0]));
        assert!(!reversal_is_smaller(&[0, 2, 0]));
        assert!(reversal_is_smaller(&[1, 2, 0]));
    }

    #[test]
    fn triangle_amplified_floor() {
        let f = triangle(&[0.0, 1.0, 1.0]);
        let out = search_sup(&f, &SearchConfig::default());
        assert!(out.value >= 25.0 / 51.0 * 2.0 - 1e-12);
        assert!(out.value <= 1.0 + 1e-9);
    }

    #[test]
    fn monotone_in_length_and_reps() {
        let set = PointSet::new(
            [(0, 0), (3, 1), (1, 4), (-2, 2), (5, 5), (2, -3), (4, 2)]
                .iter()
                .map(|&(x, y)| Point::from_ints(x, y))
                .collect(),
        )
        .unwrap();
        let f = FunctionTable::real(set, &[0.5, -1.0, 2.0, 0.0, 3.5, 1.25, -0.75]).unwrap();
        let mut prev = 0.0;
        for (l, n) in [(2, 1), (3, 1), (3, 4), (5, 4), (5, 10)] {
            let v = search_sup(&f, &SearchConfig::new(l, n, 16, 3).unwrap()).value;
            assert!(v >= prev, "L={l} N={n}: {v} < {prev}");
            prev = v;
        }
    }
}
