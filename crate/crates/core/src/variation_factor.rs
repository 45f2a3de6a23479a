//! Crossing segments and the variation factor of a point list.
//!
//! A line meets the polyline of a list `S = [x_0, ..., x_n]` in finitely many
//! connected pieces. The number of pieces, `vf(S, l)`, is computed here in two
//! independent ways: by classifying each segment, and by scanning the
//! parametrised polyline for maximal runs on the line. Both consume only the
//! [`SignVector`] of the list, which is the sufficient statistic.
//!
//! `vf(S)` maximises over every line in the plane. Sign vectors only change
//! when a line passes through a point, so the maximum is attained on a finite
//! family: lines through two points of `S`, each optionally pushed
//! infinitesimally off its on-line points by a translation or by a rotation
//! about a point of the line. See [`candidate_lines`].

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{int, side, Line, Point, PointList, PointSet};

/// One of the two sides of an oriented line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }
}

/// Symbolic, infinitesimal displacement of a line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Perturbation {
    None,
    /// Parallel shift: every on-line point lands on `side`.
    TranslateToSide { side: Sign },
    /// Rotation about a point of the line. On-line points ahead of the pivot
    /// (along the line direction `(b, -a)`) land on `orientation`, those
    /// behind it on the opposite side; the pivot itself stays on the line.
    RotateAbout { pivot: Point, orientation: Sign },
}

/// A line together with an optional symbolic perturbation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PerturbedLine {
    base: Line,
    perturbation: Perturbation,
}

impl PerturbedLine {
    pub fn exact(base: Line) -> Self {
        Self { base, perturbation: Perturbation::None }
    }

    pub fn translated(base: Line, side: Sign) -> Self {
        Self { base, perturbation: Perturbation::TranslateToSide { side } }
    }

    pub fn rotated(base: Line, pivot: Point, orientation: Sign) -> Result<Self> {
        if !base.contains(&pivot) {
            return Err(Error::InvalidPerturbation);
        }
        Ok(Self { base, perturbation: Perturbation::RotateAbout { pivot, orientation } })
    }

    pub fn new(base: Line, perturbation: Perturbation) -> Result<Self> {
        match perturbation {
            Perturbation::RotateAbout { pivot, orientation } => Self::rotated(base, pivot, orientation),
            other => Ok(Self { base, perturbation: other }),
        }
    }

    pub fn base(&self) -> &Line {
        &self.base
    }

    pub fn perturbation(&self) -> &Perturbation {
        &self.perturbation
    }

    /// Side of a single point, with on-line points resolved by the perturbation.
    pub fn side_of(&self, p: &Point) -> i8 {
        let s = side(&self.base, p);
        if s != 0 {
            return s;
        }
        match &self.perturbation {
            Perturbation::None => 0,
            Perturbation::TranslateToSide { side } => side.value(),
            Perturbation::RotateAbout { pivot, orientation } => {
                match self.base.position(p).cmp(&self.base.position(pivot)) {
                    Ordering::Equal => 0,
                    Ordering::Greater => orientation.value(),
                    Ordering::Less => -orientation.value(),
                }
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPerturbedLine {
    base: Line,
    perturbation: Perturbation,
}

impl<'de> Deserialize<'de> for PerturbedLine {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPerturbedLine::deserialize(d)?;
        PerturbedLine::new(raw.base, raw.perturbation).map_err(serde::de::Error::custom)
    }
}

/// How a segment `[x_{j-1}, x_j]` meets a line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SegmentClass {
    #[serde(rename = "none")]
    NonCrossing,
    /// Endpoints strictly on opposite sides.
    #[serde(rename = "type1")]
    Opposite,
    /// First segment of the list, starting on the line.
    #[serde(rename = "type2")]
    StartsOnLine,
    /// Arrives on the line from off it.
    #[serde(rename = "type3")]
    ArrivesOnLine,
}

impl SegmentClass {
    pub fn is_crossing(self) -> bool {
        self != SegmentClass::NonCrossing
    }

    pub fn label(self) -> &'static str {
        match self {
            SegmentClass::NonCrossing => "-",
            SegmentClass::Opposite => "type 1",
            SegmentClass::StartsOnLine => "type 2",
            SegmentClass::ArrivesOnLine => "type 3",
        }
    }
}

/// Segment class from the signs of its endpoints.
#[inline]
pub fn class_from_signs(prev: i8, cur: i8, first: bool) -> SegmentClass {
    if prev * cur == -1 {
        SegmentClass::Opposite
    } else if first && prev == 0 {
        SegmentClass::StartsOnLine
    } else if prev != 0 && cur == 0 {
        SegmentClass::ArrivesOnLine
    } else {
        SegmentClass::NonCrossing
    }
}

/// Per-entry side of a list relative to a perturbed line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    /// Entries must lie in `{-1, 0, 1}` and the vector must be nonempty.
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::EmptyPointList);
        }
        assert!(signs.iter().all(|s| (-1..=1).contains(s)), "sign entries must be -1, 0 or 1");
        Ok(Self(signs))
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn negated(&self) -> SignVector {
        SignVector(self.0.iter().map(|s| -s).collect())
    }

    /// Representative of `{v, -v}` whose first nonzero entry is positive.
    /// Crossing counts depend only on this class.
    pub fn canonical(&self) -> SignVector {
        match self.0.iter().find(|&&s| s != 0) {
            Some(&s) if s < 0 => self.negated(),
            _ => self.clone(),
        }
    }

    /// Class of segment `j` (joining entries `j - 1` and `j`), `1 ≤ j ≤ n`.
    pub fn classify(&self, j: usize) -> Result<SegmentClass> {
        if j == 0 || j >= self.0.len() {
            return Err(Error::IndexOutOfRange { index: j, len: self.0.len() });
        }
        Ok(class_from_signs(self.0[j - 1], self.0[j], j == 1))
    }

    pub fn classes(&self) -> Vec<SegmentClass> {
        (1..self.0.len()).map(|j| self.classify(j).unwrap()).collect()
    }

    /// Number of crossing segments; a singleton counts 1 iff it is on the line.
    pub fn crossing_count(&self) -> usize {
        if self.0.len() == 1 {
            return usize::from(self.0[0] == 0);
        }
        self.classes().into_iter().filter(|c| c.is_crossing()).count()
    }

    /// Number of connected components of the preimage of the line under the
    /// parametrised polyline.
    ///
    /// The parameter interval splits into vertex slots and open segment
    /// interiors. A vertex is on the line iff its sign is 0; an interior is
    /// wholly on the line iff both endpoints are, and meets it in one isolated
    /// point iff the endpoints are on strictly opposite sides.
    pub fn component_count(&self) -> usize {
        let s = &self.0;
        let mut components = 0;
        let mut in_run = false;
        for i in 0..s.len() {
            let on = s[i] == 0;
            if on && !in_run {
                components += 1;
            }
            in_run = on;
            if let Some(&next) = s.get(i + 1) {
                if s[i] == 0 && next == 0 {
                    // closed segment on the line: run continues into vertex i+1
                } else if s[i] * next == -1 {
                    components += 1;
                    in_run = true;
                } else {
                    in_run = false;
                }
            }
        }
        components
    }
}

pub fn sign_vector(list: &PointList, line: &PerturbedLine) -> SignVector {
    SignVector(list.iter().map(|p| line.side_of(p)).collect())
}

pub fn classify_segment(sv: &SignVector, j: usize) -> Result<SegmentClass> {
    sv.classify(j)
}

/// `vf(S, l)` by segment classification.
pub fn vf_on_line(list: &PointList, line: &PerturbedLine) -> usize {
    sign_vector(list, line).crossing_count()
}

/// `vf(S, l)` by counting connected pieces of the polyline on the line.
pub fn vf_components(list: &PointList, line: &PerturbedLine) -> usize {
    sign_vector(list, line).component_count()
}

/// Sign patterns of a complete perturbed-line family over a set of distinct
/// points, deduplicated up to global negation.
///
/// Every sign vector realised by any oriented line in the plane on these
/// points equals a stored pattern or its negation. Lines are kept in
/// ascending order, so the first achiever of a maximum is the
/// lexicographically least one.
#[derive(Clone, Debug)]
pub struct SignPatterns {
    points: Vec<Point>,
    lines: Vec<PerturbedLine>,
    signs: Vec<i8>,
}

impl SignPatterns {
    pub fn new(set: &PointSet) -> Self {
        let points = set.points().to_vec();
        let mut family = raw_family(&points);
        family.sort();
        family.dedup();

        let m = points.len();
        let mut seen = HashSet::new();
        let mut lines = Vec::new();
        let mut signs = Vec::new();
        for line in family {
            let pattern = SignVector(points.iter().map(|p| line.side_of(p)).collect());
            if seen.insert(pattern.canonical()) {
                signs.extend_from_slice(pattern.signs());
                lines.push(line);
            }
        }
        debug_assert_eq!(signs.len(), lines.len() * m);
        Self { points, lines, signs }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn lines(&self) -> &[PerturbedLine] {
        &self.lines
    }

    pub fn line(&self, k: usize) -> &PerturbedLine {
        &self.lines[k]
    }

    pub fn pattern(&self, k: usize) -> &[i8] {
        let m = self.points.len();
        &self.signs[k * m..(k + 1) * m]
    }

    /// Indices of the list entries within this point set.
    pub fn indices_of(&self, list: &PointList) -> Result<Vec<usize>> {
        list.iter()
            .map(|p| self.points.binary_search(p).map_err(|_| Error::PointNotInDomain(p.to_string())))
            .collect()
    }

    /// Crossing count of an index list under pattern `k`.
    pub fn count(&self, k: usize, list: &[usize]) -> usize {
        let pat = self.pattern(k);
        let mut count = usize::from(pat[list[0]] == 0);
        for w in list.windows(2) {
            let (a, b) = (pat[w[0]], pat[w[1]]);
            if a * b == -1 || (a != 0 && b == 0) {
                count += 1;
            }
        }
        count
    }

    /// `vf` of an index list and the first (least) pattern attaining it.
    pub fn vf(&self, list: &[usize]) -> (usize, usize) {
        let mut best = (0, 0);
        for k in 0..self.len() {
            let c = self.count(k, list);
            if c > best.0 {
                best = (c, k);
            }
        }
        if list.len() == 1 {
            best.0 = 1;
        }
        best
    }
}

/// Unsorted, undeduplicated candidate family over distinct points.
fn raw_family(points: &[Point]) -> Vec<PerturbedLine> {
    if points.len() == 1 {
        let p = &points[0];
        let base = Line::new(int(0), int(1), -p.y.clone()).expect("horizontal line");
        return vec![PerturbedLine::exact(base.clone()), PerturbedLine::translated(base, Sign::Plus)];
    }

    let mut bases = BTreeSet::new();
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let line = Line::through(p, q).expect("distinct points");
            // one orientation per geometric line; the other only negates patterns
            let zero = int(0);
            let lead_negative = if line.a() != &zero { line.a() < &zero } else { line.b() < &zero };
            bases.insert(if lead_negative { line.negated() } else { line });
        }
    }

    let mut family = Vec::new();
    for base in bases {
        let mut on_line: Vec<&Point> = points.iter().filter(|p| base.contains(p)).collect();
        on_line.sort_by_key(|p| base.position(p));
        family.push(PerturbedLine::exact(base.clone()));
        for s in [Sign::Minus, Sign::Plus] {
            family.push(PerturbedLine::translated(base.clone(), s));
            for p in &on_line {
                family.push(PerturbedLine::rotated(base.clone(), (*p).clone(), s).unwrap());
            }
            for w in on_line.windows(2) {
                let mid = w[0].midpoint(w[1]);
                family.push(PerturbedLine::rotated(base.clone(), mid, s).unwrap());
            }
        }
    }
    family
}

/// A finite family of perturbed lines realising every sign vector any line
/// can produce on `list` (up to global negation), one line per distinct
/// vector class, in ascending order.
pub fn candidate_lines(list: &PointList) -> Vec<PerturbedLine> {
    SignPatterns::new(&list.support()).lines().to_vec()
}

/// Maximum of `vf(S, l)` over all lines, with the least maximising line.
pub fn vf_max(list: &PointList) -> (usize, PerturbedLine) {
    let patterns = SignPatterns::new(&list.support());
    let idx = patterns.indices_of(list).expect("support contains every entry");
    let (value, k) = patterns.vf(&idx);
    (value, patterns.line(k).clone())
}

pub fn reverse(list: &PointList) -> PointList {
    list.reverse()
}

pub fn insert(list: &PointList, i: usize, p: Point) -> Result<PointList> {
    list.insert(i, p)
}

pub fn dedup_consecutive(list: &PointList) -> PointList {
    list.dedup_consecutive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{rat, Rational};

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn list(pts: &[(i64, i64)]) -> PointList {
        PointList::new(pts.iter().map(|&(x, y)| p(x, y)).collect()).unwrap()
    }

    fn nine_point_list() -> PointList {
        list(&[(1, 0), (2, 1), (3, 0), (5, 0), (4, 1), (5, -1), (6, -1), (7, 1), (8, 0)])
    }

    fn real_list(vals: &[i64]) -> PointList {
        PointList::new(vals.iter().map(|&v| p(v, 0)).collect()).unwrap()
    }

    #[test]
    fn sign_vector_examples() {
        let s = list(&[(1, 0), (2, 1)]);
        let exact = PerturbedLine::exact(Line::x_axis());
        assert_eq!(sign_vector(&s, &exact).signs(), &[0, 1]);
        let pushed = PerturbedLine::translated(Line::x_axis(), Sign::Minus);
        assert_eq!(sign_vector(&s, &pushed).signs(), &[-1, 1]);
        let three = list(&[(0, 0), (1, 0), (2, 0)]);
        let rot = PerturbedLine::rotated(Line::x_axis(), p(1, 0), Sign::Plus).unwrap();
        assert_eq!(sign_vector(&three, &rot).signs(), &[-1, 0, 1]);
    }

    #[test]
    fn rotation_tag_matches_small_rational_rotation() {
        // Turn the x-axis about (1, 0) by a small angle eps, keeping the
        // orientation continuous: normal (sin(-eps), cos(-eps)) ≈ (-eps, 1),
        // so the raw form is -eps·(x - 1) + y. Positive orientation means
        // points ahead along (1, 0) land on the positive side.
        let eps: Rational = rat(1, 1_000_000_000);
        let pts = [p(0, 0), p(1, 0), p(2, 0)];
        let signs: Vec<i8> = pts
            .iter()
            .map(|q| {
                let v = -&eps * (&q.x - int(1)) + &q.y;
                v.cmp(&int(0)) as i8
            })
            .collect();
        // the continuous rotation realises the opposite orientation
        let rot = PerturbedLine::rotated(Line::x_axis(), p(1, 0), Sign::Minus).unwrap();
        let three = PointList::new(pts.to_vec()).unwrap();
        assert_eq!(sign_vector(&three, &rot).signs(), signs.as_slice());
        let plus = PerturbedLine::rotated(Line::x_axis(), p(1, 0), Sign::Plus).unwrap();
        assert_eq!(sign_vector(&three, &plus).signs(), &[-1, 0, 1]);
        let negated: Vec<i8> = signs.iter().map(|s| -s).collect();
        assert_eq!(sign_vector(&three, &plus).signs(), negated.as_slice());
    }

    #[test]
    fn pivot_must_be_on_line() {
        assert_eq!(
            PerturbedLine::rotated(Line::x_axis(), p(1, 1), Sign::Plus),
            Err(Error::InvalidPerturbation)
        );
    }

    #[test]
    fn nine_point_classes() {
        let sv = sign_vector(&nine_point_list(), &PerturbedLine::exact(Line::x_axis()));
        use SegmentClass::*;
        assert_eq!(
            sv.classes(),
            vec![StartsOnLine, ArrivesOnLine, NonCrossing, NonCrossing, Opposite, NonCrossing, Opposite, ArrivesOnLine]
        );
        assert_eq!(sv.crossing_count(), 5);
        assert_eq!(sv.component_count(), 5);
    }

    #[test]
    fn classify_examples() {
        let sv = SignVector::new(vec![1, 1]).unwrap();
        assert_eq!(classify_segment(&sv, 1), Ok(SegmentClass::NonCrossing));
        let sv = SignVector::new(vec![0, 0]).unwrap();
        assert_eq!(classify_segment(&sv, 1), Ok(SegmentClass::StartsOnLine));
        assert!(matches!(classify_segment(&sv, 0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(classify_segment(&sv, 2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn singleton_convention() {
        let x = PerturbedLine::exact(Line::x_axis());
        assert_eq!(vf_on_line(&list(&[(1, 0)]), &x), 1);
        assert_eq!(vf_on_line(&list(&[(1, 1)]), &x), 0);
        assert_eq!(vf_components(&list(&[(1, 0)]), &x), 1);
        assert_eq!(vf_max(&list(&[(3, 3)])).0, 1);
    }

    #[test]
    fn avoiding_line_gives_zero() {
        let l = PerturbedLine::exact(Line::from_ints(0, 1, -100).unwrap());
        assert_eq!(vf_on_line(&nine_point_list(), &l), 0);
        assert_eq!(vf_components(&nine_point_list(), &l), 0);
    }

    #[test]
    fn all_on_line_is_one_component() {
        let s = real_list(&[0, 3, 1, 1, 5]);
        let x = PerturbedLine::exact(Line::x_axis());
        assert_eq!(vf_components(&s, &x), 1);
        assert_eq!(vf_on_line(&s, &x), 1);
    }

    #[test]
    fn two_point_candidates() {
        let s = list(&[(0, 0), (1, 0)]);
        let vectors: BTreeSet<SignVector> = candidate_lines(&s)
            .iter()
            .map(|l| sign_vector(&s, l).canonical())
            .collect();
        assert!(vectors.len() >= 3);
        for v in [vec![0, 0], vec![0, 1], vec![1, 0], vec![1, -1], vec![1, 1]] {
            assert!(vectors.contains(&SignVector::new(v.clone()).unwrap()), "missing {v:?}");
        }
    }

    #[test]
    fn repeated_point_candidates() {
        let s = list(&[(2, 5), (2, 5), (2, 5)]);
        let lines = candidate_lines(&s);
        let vectors: Vec<Vec<i8>> = lines.iter().map(|l| sign_vector(&s, l).signs().to_vec()).collect();
        assert_eq!(vectors, vec![vec![0, 0, 0], vec![1, 1, 1]]);
    }

    #[test]
    fn nine_point_family_contains_x_axis() {
        let f = nine_point_list();
        assert!(candidate_lines(&f).iter().any(|l| vf_on_line(&f, l) == 5));
        assert_eq!(vf_on_line(&f, &PerturbedLine::exact(Line::x_axis())), 5);
    }

    #[test]
    fn vf_max_examples() {
        assert_eq!(vf_max(&real_list(&[2, 4, 1, 1, 3, 2])).0, 4);
        assert_eq!(vf_max(&list(&[(0, 0), (3, 1)])).0, 1);
        let square = [(0, 0), (1, 0), (1, 1), (0, 1)];
        let mut pts = vec![(0, 0)];
        for _ in 0..2 {
            pts.extend_from_slice(&square[1..]);
            pts.push((0, 0));
        }
        assert_eq!(vf_max(&list(&pts)).0, 5);
    }

    #[test]
    fn vf_max_witness_achieves_value() {
        let f = nine_point_list();
        let (v, w) = vf_max(&f);
        assert_eq!(vf_on_line(&f, &w), v);
        assert!(v >= 5);
        assert!(v <= f.segment_count());
    }

    #[test]
    fn list_edits() {
        let (a, b, c, w) = (p(0, 0), p(1, 0), p(2, 0), p(9, 9));
        let s = PointList::new(vec![a.clone(), b.clone(), c.clone()]).unwrap();
        assert_eq!(reverse(&s).entries(), &[c.clone(), b.clone(), a.clone()]);
        let ab = PointList::new(vec![a.clone(), b.clone()]).unwrap();
        assert_eq!(insert(&ab, 1, w.clone()).unwrap().entries(), &[a.clone(), w.clone(), b.clone()]);
        assert!(insert(&ab, 3, w).is_err());
        let rep = PointList::new(vec![a.clone(), a.clone(), b.clone(), b.clone(), a.clone()]).unwrap();
        assert_eq!(dedup_consecutive(&rep).entries(), &[a.clone(), b, a]);
    }

    #[test]
    fn perturbed_line_json_round_trip() {
        let l = PerturbedLine::rotated(Line::x_axis(), Point::new(rat(1, 2), int(0)), Sign::Minus).unwrap();
        let json = serde_json::to_string(&l).unwrap();
        let back: PerturbedLine = serde_json::from_str(&json).unwrap();
        assert_eq!(back, l);
        let bad = json.replace("\"y\":\"0\"", "\"y\":\"1\"");
        assert!(serde_json::from_str::<PerturbedLine>(&bad).is_err());
    }
}
