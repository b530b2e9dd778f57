//! Incidence structures: projective planes, point sets, unitals and the
//! 2-design a unital induces on its own points.
//!
//! Points are labelled `0..v` internally. One-based labels only exist at
//! the I/O boundary (see [`crate::report`]).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Parameters `t-(v, k, lambda)` of a block design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DesignParams {
    pub t: usize,
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
}

impl DesignParams {
    pub fn new(t: usize, v: usize, k: usize, lambda: usize) -> Result<Self, DesignError> {
        if t == 0 || v == 0 || lambda == 0 || t > k || k > v {
            return Err(DesignError::Params { t, v, k, lambda });
        }
        Ok(Self { t, v, k, lambda })
    }

    /// Parameters of a projective plane of order `n`.
    pub fn projective_plane(n: usize) -> Self {
        Self { t: 2, v: n * n + n + 1, k: n + 1, lambda: 1 }
    }

    /// Parameters of the design induced by a unital with parameter `q`.
    pub fn unital(q: usize) -> Self {
        Self { t: 2, v: q * q * q + 1, k: q + 1, lambda: 1 }
    }
}

impl fmt::Display for DesignParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-({}, {}, {})", self.t, self.v, self.k, self.lambda)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("invalid design parameters t={t} v={v} k={k} lambda={lambda}")]
    Params { t: usize, v: usize, k: usize, lambda: usize },
    #[error("malformed incidence: line {line} contains label {label}, outside 0..{v}")]
    Malformed { line: usize, label: usize, v: usize },
    #[error("point {point} is outside 0..{v}")]
    PointOutOfRange { point: usize, v: usize },
    #[error("plane order {order} is not {q}^2")]
    NotSquareOrder { order: usize, q: usize },
    #[error("order {order} is too small for a projective plane")]
    OrderTooSmall { order: usize },
    #[error("incidence lists do not form a plane of order {order}: {count} axiom violation(s), first: {first}")]
    NotAPlane { order: usize, count: usize, first: Violation },
    #[error("point set of size {size} is not a unital with q={q}")]
    NotAUnital { size: usize, q: usize },
}

/// A single failed plane axiom, with a concrete witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    LineCount { expected: usize, found: usize },
    LineSize { line: usize, expected: usize, found: usize },
    RepeatedPoint { line: usize, point: usize },
    PointDegree { point: usize, expected: usize, found: usize },
    PairUncovered { a: usize, b: usize },
    PairCoveredTwice { a: usize, b: usize, lines: (usize, usize) },
    LinesDisjoint { a: usize, b: usize },
}

impl Violation {
    /// Short name of the violated axiom.
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::LineCount { .. } => "line count",
            Violation::LineSize { .. } => "line size",
            Violation::RepeatedPoint { .. } => "repeated point",
            Violation::PointDegree { .. } => "point degree",
            Violation::PairUncovered { .. } => "pair not covered",
            Violation::PairCoveredTwice { .. } => "pair covered twice",
            Violation::LinesDisjoint { .. } => "lines disjoint",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LineCount { expected, found } => {
                write!(f, "line count: expected {expected} lines, found {found}")
            }
            Violation::LineSize { line, expected, found } => {
                write!(f, "line size: line {line} has {found} points, expected {expected}")
            }
            Violation::RepeatedPoint { line, point } => {
                write!(f, "repeated point: point {point} listed twice on line {line}")
            }
            Violation::PointDegree { point, expected, found } => {
                write!(f, "point degree: point {point} lies on {found} lines, expected {expected}")
            }
            Violation::PairUncovered { a, b } => {
                write!(f, "pair not covered: points {a} and {b} share no line")
            }
            Violation::PairCoveredTwice { a, b, lines } => write!(
                f,
                "pair covered twice: points {a} and {b} lie on lines {} and {}",
                lines.0, lines.1
            ),
            Violation::LinesDisjoint { a, b } => {
                write!(f, "lines disjoint: lines {a} and {b} share no point")
            }
        }
    }
}

/// Outcome of [`validate_plane`]: every violated axiom, not just the first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks raw incidence lists against the axioms of a projective plane of
/// order `expected_order`.
///
/// Labels outside `0..v` are a malformed-input error rather than an axiom
/// violation. Everything else is collected into the report.
pub fn validate_plane(
    lines: &[Vec<usize>],
    expected_order: usize,
) -> Result<ValidationReport, DesignError> {
    let n = expected_order;
    let v = n * n + n + 1;
    for (li, line) in lines.iter().enumerate() {
        if let Some(&label) = line.iter().find(|&&p| p >= v) {
            return Err(DesignError::Malformed { line: li, label, v });
        }
    }

    let mut violations = Vec::new();
    if lines.len() != v {
        violations.push(Violation::LineCount { expected: v, found: lines.len() });
    }

    let mut degree = vec![0usize; v];
    for (li, line) in lines.iter().enumerate() {
        if line.len() != n + 1 {
            violations.push(Violation::LineSize { line: li, expected: n + 1, found: line.len() });
        }
        let mut seen = vec![false; v];
        for &p in line {
            if seen[p] {
                violations.push(Violation::RepeatedPoint { line: li, point: p });
            } else {
                seen[p] = true;
                degree[p] += 1;
            }
        }
    }
    for (p, &d) in degree.iter().enumerate() {
        if d != n + 1 {
            violations.push(Violation::PointDegree { point: p, expected: n + 1, found: d });
        }
    }

    // pair_line[a * v + b] = first line seen through a < b
    let mut pair_line = vec![usize::MAX; v * v];
    for (li, line) in lines.iter().enumerate() {
        let mut pts = line.clone();
        pts.sort_unstable();
        pts.dedup();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let slot = &mut pair_line[pts[i] * v + pts[j]];
                if *slot == usize::MAX {
                    *slot = li;
                } else {
                    violations.push(Violation::PairCoveredTwice {
                        a: pts[i],
                        b: pts[j],
                        lines: (*slot, li),
                    });
                }
            }
        }
    }
    for a in 0..v {
        for b in a + 1..v {
            if pair_line[a * v + b] == usize::MAX {
                violations.push(Violation::PairUncovered { a, b });
            }
        }
    }

    let masks: Vec<Vec<bool>> = lines
        .iter()
        .map(|line| {
            let mut m = vec![false; v];
            for &p in line {
                m[p] = true;
            }
            m
        })
        .collect();
    for a in 0..lines.len() {
        for b in a + 1..lines.len() {
            if !lines[b].iter().any(|&p| masks[a][p]) {
                violations.push(Violation::LinesDisjoint { a, b });
            }
        }
    }

    Ok(ValidationReport { violations })
}

/// A projective plane of order `n`: a symmetric 2-(n²+n+1, n+1, 1) design.
///
/// Immutable once built; every constructor validates the axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectivePlane {
    order: usize,
    lines: Vec<Vec<u32>>,
    point_lines: Vec<Vec<u32>>,
}

impl ProjectivePlane {
    /// Builds a plane from 0-based incidence lists, validating every axiom.
    pub fn new(order: usize, lines: Vec<Vec<usize>>) -> Result<Self, DesignError> {
        if order < 2 {
            return Err(DesignError::OrderTooSmall { order });
        }
        let report = validate_plane(&lines, order)?;
        if let Some(first) = report.violations.first() {
            return Err(DesignError::NotAPlane {
                order,
                count: report.violations.len(),
                first: first.clone(),
            });
        }
        let v = order * order + order + 1;
        let lines: Vec<Vec<u32>> = lines
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                l.into_iter().map(|p| p as u32).collect()
            })
            .collect();
        let mut point_lines = vec![Vec::with_capacity(order + 1); v];
        for (li, line) in lines.iter().enumerate() {
            for &p in line {
                point_lines[p as usize].push(li as u32);
            }
        }
        Ok(Self { order, lines, point_lines })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of points (and of lines).
    pub fn num_points(&self) -> usize {
        self.lines.len()
    }

    pub fn params(&self) -> DesignParams {
        DesignParams::projective_plane(self.order)
    }

    /// Sorted point lists, one per line.
    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }

    pub fn line(&self, i: usize) -> &[u32] {
        &self.lines[i]
    }

    /// Lines through `point`, ascending.
    pub fn lines_through(&self, point: usize) -> &[u32] {
        &self.point_lines[point]
    }

    /// `Some(q)` when the order is `q²`.
    pub fn unital_q(&self) -> Option<usize> {
        let q = (self.order as f64).sqrt().round() as usize;
        (q * q == self.order).then_some(q)
    }

    /// Lines as `usize` lists, the shape [`validate_plane`] takes.
    pub fn to_raw_lines(&self) -> Vec<Vec<usize>> {
        self.lines.iter().map(|l| l.iter().map(|&p| p as usize).collect()).collect()
    }
}

/// A sorted, duplicate-free set of point indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointSet(Vec<u32>);

impl PointSet {
    /// Sorts and deduplicates `points`, rejecting any index `>= v`.
    pub fn new(points: impl IntoIterator<Item = usize>, v: usize) -> Result<Self, DesignError> {
        let mut members = Vec::new();
        for p in points {
            if p >= v {
                return Err(DesignError::PointOutOfRange { point: p, v });
            }
            members.push(p as u32);
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self(members))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn members(&self) -> &[u32] {
        &self.0
    }

    pub fn contains(&self, p: usize) -> bool {
        self.0.binary_search(&(p as u32)).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&p| p as usize)
    }

    /// Membership mask over `0..v`.
    pub fn mask(&self, v: usize) -> Vec<bool> {
        let mut m = vec![false; v];
        for &p in &self.0 {
            m[p as usize] = true;
        }
        m
    }

    fn check_within(&self, v: usize) -> Result<(), DesignError> {
        match self.0.last() {
            Some(&p) if p as usize >= v => Err(DesignError::PointOutOfRange { point: p as usize, v }),
            _ => Ok(()),
        }
    }
}

/// For each intersection size, how many lines meet `set` in that many points.
pub fn intersection_profile(
    plane: &ProjectivePlane,
    set: &PointSet,
) -> Result<BTreeMap<usize, usize>, DesignError> {
    set.check_within(plane.num_points())?;
    let mask = set.mask(plane.num_points());
    let mut profile = BTreeMap::new();
    for line in plane.lines() {
        let hits = line.iter().filter(|&&p| mask[p as usize]).count();
        *profile.entry(hits).or_insert(0) += 1;
    }
    Ok(profile)
}

/// True iff `set` has `q³+1` points and every line meets it in 1 or `q+1`.
pub fn is_unital(plane: &ProjectivePlane, set: &PointSet, q: usize) -> Result<bool, DesignError> {
    if q < 2 || q * q != plane.order() {
        return Err(DesignError::NotSquareOrder { order: plane.order(), q });
    }
    let profile = intersection_profile(plane, set)?;
    Ok(set.len() == q * q * q + 1 && profile.keys().all(|&k| k == 1 || k == q + 1))
}

/// A verified unital of a specific plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unital {
    q: usize,
    members: PointSet,
}

impl Unital {
    /// Checks the unital property before accepting `members`.
    pub fn new(plane: &ProjectivePlane, members: PointSet, q: usize) -> Result<Self, DesignError> {
        if is_unital(plane, &members, q)? {
            Ok(Self { q, members })
        } else {
            Err(DesignError::NotAUnital { size: members.len(), q })
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn members(&self) -> &PointSet {
        &self.members
    }
}

/// The 2-(q³+1, q+1, 1) design whose blocks are the secant lines of a unital
/// restricted to it.
///
/// Points are the unital's members relabelled `0..=q³` in ascending order
/// of their plane labels; blocks follow the plane's line order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedDesign {
    pub params: DesignParams,
    /// `original[i]` is the plane label of design point `i`.
    pub original: Vec<u32>,
    pub blocks: Vec<Vec<u32>>,
}

impl InducedDesign {
    /// A design from explicit blocks over points `0..v`. Used for designs
    /// that do not come from a plane (tests, relabelled copies).
    pub fn from_blocks(params: DesignParams, blocks: Vec<Vec<u32>>) -> Self {
        let blocks = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        Self { params, original: (0..params.v as u32).collect(), blocks }
    }

    pub fn num_points(&self) -> usize {
        self.params.v
    }

    /// Exhaustive check that every pair of points lies in exactly `lambda`
    /// blocks and every block has `k` points.
    pub fn is_pairwise_balanced(&self) -> bool {
        let v = self.params.v;
        let mut cover = vec![0usize; v * v];
        for b in &self.blocks {
            if b.len() != self.params.k {
                return false;
            }
            for i in 0..b.len() {
                for j in i + 1..b.len() {
                    cover[b[i] as usize * v + b[j] as usize] += 1;
                }
            }
        }
        (0..v).all(|a| (a + 1..v).all(|b| cover[a * v + b] == self.params.lambda))
    }

    /// Copy with points relabelled by `perm` (point `i` becomes `perm[i]`)
    /// and blocks listed in sorted order.
    pub fn relabelled(&self, perm: &[u32]) -> Self {
        let mut blocks: Vec<Vec<u32>> = self
            .blocks
            .iter()
            .map(|b| {
                let mut nb: Vec<u32> = b.iter().map(|&p| perm[p as usize]).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        blocks.sort();
        Self::from_blocks(self.params, blocks)
    }
}

/// Builds the induced design of a unital.
pub fn induced_design(plane: &ProjectivePlane, unital: &Unital) -> Result<InducedDesign, DesignError> {
    let q = unital.q();
    if !is_unital(plane, unital.members(), q)? {
        return Err(DesignError::NotAUnital { size: unital.members().len(), q });
    }
    let v = plane.num_points();
    let mut rank = vec![u32::MAX; v];
    for (i, p) in unital.members().iter().enumerate() {
        rank[p] = i as u32;
    }
    let blocks: Vec<Vec<u32>> = plane
        .lines()
        .iter()
        .filter_map(|line| {
            let block: Vec<u32> =
                line.iter().map(|&p| rank[p as usize]).filter(|&r| r != u32::MAX).collect();
            (block.len() == q + 1).then_some(block)
        })
        .collect();
    Ok(InducedDesign {
        params: DesignParams::unital(q),
        original: unital.members().members().to_vec(),
        blocks,
    })
}
