//! The orbit-union unital search.
//!
//! Candidate point sets are assembled as unions of orbits of small cyclic
//! subgroups of the plane's collineation group. A backtracking search
//! picks orbits (largest first) until their sizes sum to `q³+1`, pruning
//! on line intersections and on a subset-sum bound. The heuristic is not
//! complete; every set it reports is re-verified as a unital.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::autgroup::{
    canonical_form, plane_automorphism_group, point_orbits, setwise_stabilizer, ColoredGraph, OrbitPartition, Perm,
    PermGroup,
};
use crate::design::{induced_design, DesignError, PointSet, ProjectivePlane, Unital};
use crate::isomorph::analyze_design;
use crate::report::{Provenance, UnitalRecord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("plane order {0} is not a perfect square")]
    NotSquare(usize),
    #[error("configured q = {configured} but the plane has order {order}")]
    QMismatch { configured: usize, order: usize },
    #[error("exhaustive search over {count} subsets exceeds the cap of {cap}")]
    CapExceeded { count: BigUint, cap: u64 },
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Design(#[from] DesignError),
}

/// Knobs bounding the heuristic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    /// Unital parameter; derived from the plane when absent.
    pub q: Option<usize>,
    /// Orders of the cyclic subgroups to sample. Empty selects the default:
    /// 2, 3, 5 and every prime up to 13 dividing the group order.
    pub orders: Vec<u64>,
    /// Random group elements drawn per requested order.
    pub samples_per_order: usize,
    /// Search nodes allowed per orbit family.
    pub node_budget: u64,
    /// Wall-clock budget for all families of one plane, in seconds.
    pub time_budget_secs: f64,
    pub seed: u64,
    /// Worker threads for searching families; 1 is the sequential reference.
    pub threads: usize,
    /// Line and subset-sum pruning. Only disabled for debugging.
    pub pruning: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            q: None,
            orders: Vec::new(),
            samples_per_order: 12,
            node_budget: 10_000_000,
            time_budget_secs: 60.0,
            seed: 1,
            threads: 1,
            pruning: true,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.node_budget == 0 {
            return Err(SearchError::Config("node budget must be positive".into()));
        }
        if self.time_budget_secs.is_nan() || self.time_budget_secs <= 0.0 {
            return Err(SearchError::Config("time budget must be positive".into()));
        }
        if self.threads == 0 {
            return Err(SearchError::Config("thread count must be positive".into()));
        }
        if self.orders.iter().any(|&m| m < 2) {
            return Err(SearchError::Config("subgroup orders must be at least 2".into()));
        }
        Ok(())
    }

    /// `q` for `plane`, checked against the configured value.
    pub fn resolve_q(&self, plane: &ProjectivePlane) -> Result<usize, SearchError> {
        let q = plane.unital_q().ok_or(SearchError::NotSquare(plane.order()))?;
        match self.q {
            Some(c) if c != q => Err(SearchError::QMismatch { configured: c, order: plane.order() }),
            _ => Ok(q),
        }
    }

    pub fn time_budget(&self) -> Duration {
        Duration::from_secs_f64(self.time_budget_secs)
    }
}

/// Point orbits of one subgroup of the plane's collineation group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitFamily {
    /// Human-readable description of the subgroup.
    pub label: String,
    /// Generators acting on points.
    pub generators: Vec<Perm>,
    pub subgroup_order: BigUint,
    pub orbits: Vec<PointSet>,
}

impl OrbitFamily {
    /// Every point in its own orbit.
    pub fn singletons(v: usize) -> Self {
        Self {
            label: "trivial subgroup".into(),
            generators: Vec::new(),
            subgroup_order: BigUint::from(1u32),
            orbits: (0..v).map(|p| PointSet::new([p], v).expect("in range")).collect(),
        }
    }

    /// Point orbits of `group`, whose first `v` domain points are the plane's.
    pub fn from_group(label: impl Into<String>, group: &PermGroup, v: usize) -> Self {
        let gens: Vec<Perm> = group.generators().iter().map(|g| g.restrict(v)).collect();
        let part = OrbitPartition::from_generators(v, &gens);
        Self {
            label: label.into(),
            generators: gens,
            subgroup_order: group.order().clone(),
            orbits: part
                .orbits()
                .iter()
                .map(|o| PointSet::new(o.iter().map(|&p| p as usize), v).expect("in range"))
                .collect(),
        }
    }

    /// Orbit sizes, largest first.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.orbits.iter().map(PointSet::len).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }
}

/// Random draws allowed per wanted sample before an order is given up.
const SAMPLE_ATTEMPTS: usize = 40;

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Subgroup orders tried when the configuration lists none.
pub fn default_orders(group_order: &BigUint) -> Vec<u64> {
    let mut orders: BTreeSet<u64> = [2, 3, 5].into_iter().collect();
    for p in (2..=13).filter(|&p| is_prime(p)) {
        if (group_order % BigUint::from(p)) == BigUint::from(0u32) {
            orders.insert(p);
        }
    }
    orders.into_iter().collect()
}

/// Cyclic subgroups of the requested orders, found as powers of random
/// group elements, with their point orbits. Families whose orbit
/// partitions are equivalent under a collineation are kept once, and the
/// result is ordered by orbit count.
pub fn subgroup_orbit_families(plane: &ProjectivePlane, group: &PermGroup, cfg: &SearchConfig) -> Vec<OrbitFamily> {
    let v = plane.num_points();
    let order = group.order();
    if *order == BigUint::from(1u32) {
        return vec![OrbitFamily::singletons(v)];
    }
    let orders = if cfg.orders.is_empty() { default_orders(order) } else { cfg.orders.clone() };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut families = Vec::new();
    for &m in &orders {
        if order % BigUint::from(m) != BigUint::from(0u32) {
            continue;
        }
        let mut hits = 0;
        for _ in 0..cfg.samples_per_order * SAMPLE_ATTEMPTS {
            if hits == cfg.samples_per_order {
                break;
            }
            let g = group.random_element(&mut rng);
            let o = g.order();
            if !o.is_multiple_of(m) {
                continue;
            }
            hits += 1;
            let h = g.pow(o / m).restrict(v);
            let part = OrbitPartition::from_generators(v, std::slice::from_ref(&h));
            if !seen.insert(partition_key(plane, part.orbits())) {
                continue;
            }
            families.push(OrbitFamily {
                label: format!("cyclic subgroup of order {m}"),
                generators: vec![h],
                subgroup_order: BigUint::from(m),
                orbits: part
                    .orbits()
                    .iter()
                    .map(|o| PointSet::new(o.iter().map(|&p| p as usize), v).expect("in range"))
                    .collect(),
            });
        }
    }
    // fewest orbits first: those searches are cheapest and finish inside
    // the shared time budget
    families.sort_by_key(|f| f.orbits.len());
    families
}

/// Canonical form of the plane with one extra vertex per orbit, joined to
/// the orbit's points. Equal keys mean some collineation maps one orbit
/// partition onto the other, so the two searches find the same unitals up
/// to isomorphism.
fn partition_key(plane: &ProjectivePlane, orbits: &[Vec<u32>]) -> Vec<u8> {
    let v = plane.num_points();
    let n = 2 * v + orbits.len();
    let mut edges = Vec::with_capacity(v * (plane.order() + 2));
    for (j, line) in plane.lines().iter().enumerate() {
        edges.extend(line.iter().map(|&p| (p as usize, v + j)));
    }
    for (k, orbit) in orbits.iter().enumerate() {
        edges.extend(orbit.iter().map(|&p| (p as usize, 2 * v + k)));
    }
    let colors = (0..n).map(|x| (x / v).min(2) as u32).collect();
    let graph = ColoredGraph::new(n, &edges, colors).expect("well-formed orbit graph");
    canonical_form(&graph).0.bytes
}

/// A unital found by the search, with the family orbits it is made of.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoundUnital {
    pub unital: Unital,
    /// Indices into the family's orbit list.
    pub chosen: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyOutcome {
    pub unitals: Vec<FoundUnital>,
    pub nodes: u64,
    /// The node or time budget ran out before the search finished.
    pub budget_hit: bool,
}

/// Searches unions of `family`'s orbits for unitals, using the config's
/// node and time budgets.
pub fn orbit_union_search(
    plane: &ProjectivePlane,
    family: &OrbitFamily,
    cfg: &SearchConfig,
) -> Result<FamilyOutcome, SearchError> {
    let q = cfg.resolve_q(plane)?;
    Ok(search_family(plane, family, q, cfg, Instant::now() + cfg.time_budget()))
}

fn search_family(
    plane: &ProjectivePlane,
    family: &OrbitFamily,
    q: usize,
    cfg: &SearchConfig,
    deadline: Instant,
) -> FamilyOutcome {
    let target = q * q * q + 1;
    let mut order: Vec<usize> = (0..family.orbits.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(family.orbits[i].len()), family.orbits[i].members()[0]));
    let orbits: Vec<&PointSet> = order.iter().map(|&i| &family.orbits[i]).collect();

    // reach[i]: sums <= target attainable from orbits[i..]
    let mut reach = vec![vec![false; target + 1]; orbits.len() + 1];
    reach[orbits.len()][0] = true;
    for i in (0..orbits.len()).rev() {
        let s = orbits[i].len();
        for t in 0..=target {
            reach[i][t] = reach[i + 1][t] || (t >= s && reach[i + 1][t - s]);
        }
    }

    let mut avail = vec![0u32; plane.num_points()];
    for o in &orbits {
        for p in o.iter() {
            for &l in plane.lines_through(p) {
                avail[l as usize] += 1;
            }
        }
    }
    let mut state = Backtrack {
        plane,
        q,
        target,
        orbits: &orbits,
        reach: &reach,
        count: vec![0; plane.num_points()],
        avail,
        chosen: Vec::new(),
        size: 0,
        nodes: 0,
        budget: cfg.node_budget,
        deadline,
        hit: false,
        pruning: cfg.pruning,
        found: Vec::new(),
    };
    if Instant::now() >= deadline {
        state.hit = true;
    } else if !cfg.pruning || reach[0][target] {
        state.descend(0);
    }
    let unitals = state
        .found
        .into_iter()
        .map(|(unital, chosen)| {
            let mut chosen: Vec<usize> = chosen.into_iter().map(|i| order[i]).collect();
            chosen.sort_unstable();
            FoundUnital { unital, chosen }
        })
        .collect();
    FamilyOutcome { unitals, nodes: state.nodes, budget_hit: state.hit }
}

struct Backtrack<'a> {
    plane: &'a ProjectivePlane,
    q: usize,
    target: usize,
    orbits: &'a [&'a PointSet],
    reach: &'a [Vec<bool>],
    /// Points of the partial union on each line.
    count: Vec<u32>,
    /// Points of undecided orbits on each line.
    avail: Vec<u32>,
    chosen: Vec<usize>,
    size: usize,
    nodes: u64,
    budget: u64,
    deadline: Instant,
    hit: bool,
    pruning: bool,
    found: Vec<(Unital, Vec<usize>)>,
}

impl Backtrack<'_> {
    fn descend(&mut self, i: usize) {
        if self.hit {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget || (self.nodes.is_multiple_of(4096) && Instant::now() >= self.deadline) {
            self.hit = true;
            return;
        }
        if self.size == self.target {
            self.emit();
            return;
        }
        if i == self.orbits.len() || (self.pruning && !self.reach[i][self.target - self.size]) {
            return;
        }
        let orbit = self.orbits[i];
        self.adjust(orbit, |s, l| s.avail[l] -= 1);

        if self.size + orbit.len() <= self.target {
            self.adjust(orbit, |s, l| s.count[l] += 1);
            if !self.pruning || self.lines_feasible(orbit) {
                self.chosen.push(i);
                self.size += orbit.len();
                self.descend(i + 1);
                self.size -= orbit.len();
                self.chosen.pop();
            }
            self.adjust(orbit, |s, l| s.count[l] -= 1);
        }
        if !self.pruning || self.lines_feasible(orbit) {
            self.descend(i + 1);
        }

        self.adjust(orbit, |s, l| s.avail[l] += 1);
    }

    fn adjust(&mut self, orbit: &PointSet, f: impl Fn(&mut Self, usize)) {
        for p in orbit.iter() {
            for k in 0..self.plane.lines_through(p).len() {
                let l = self.plane.lines_through(p)[k] as usize;
                f(self, l);
            }
        }
    }

    /// Line conditions on the lines through `orbit`, the only ones whose
    /// counts just changed: no line above `q+1`, every line still able to
    /// end at 1 or `q+1`.
    fn lines_feasible(&self, orbit: &PointSet) -> bool {
        let secant = self.q as u32 + 1;
        orbit.iter().all(|p| {
            self.plane.lines_through(p).iter().all(|&l| {
                let (c, a) = (self.count[l as usize], self.avail[l as usize]);
                c <= secant && !(c == 0 && a == 0) && !(c >= 2 && c < secant && c + a < secant)
            })
        })
    }

    fn emit(&mut self) {
        let points = self.chosen.iter().flat_map(|&i| self.orbits[i].iter());
        let set = PointSet::new(points, self.plane.num_points()).expect("orbit points in range");
        if let Ok(unital) = Unital::new(self.plane, set, self.q) {
            self.found.push((unital, self.chosen.clone()));
        }
    }
}

/// Default subset cap for [`exhaustive_search`]; admits PG(2,4).
pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 1_000_000;

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// Every unital of `plane`, by direct enumeration of point subsets with
/// line-count pruning. Refuses to run when `C(v, q³+1)` exceeds `cap`.
pub fn exhaustive_search(plane: &ProjectivePlane, q: usize, cap: u64) -> Result<Vec<Unital>, SearchError> {
    if q * q != plane.order() {
        return Err(SearchError::NotSquare(plane.order()));
    }
    let v = plane.num_points();
    let target = q * q * q + 1;
    let count = binomial(v, target);
    if count > BigUint::from(cap) {
        return Err(SearchError::CapExceeded { count, cap });
    }
    let mut line_count = vec![0usize; v];
    let mut chosen = Vec::with_capacity(target);
    let mut out = Vec::new();
    enumerate(plane, q, target, 0, &mut chosen, &mut line_count, &mut out);
    Ok(out)
}

fn enumerate(
    plane: &ProjectivePlane,
    q: usize,
    target: usize,
    next: usize,
    chosen: &mut Vec<usize>,
    line_count: &mut [usize],
    out: &mut Vec<Unital>,
) {
    if chosen.len() == target {
        let set = PointSet::new(chosen.iter().copied(), plane.num_points()).expect("in range");
        if let Ok(u) = Unital::new(plane, set, q) {
            out.push(u);
        }
        return;
    }
    let v = plane.num_points();
    for p in next..v {
        if v - p < target - chosen.len() {
            break;
        }
        let lines = plane.lines_through(p);
        if lines.iter().any(|&l| line_count[l as usize] == q + 1) {
            continue;
        }
        for &l in lines {
            line_count[l as usize] += 1;
        }
        chosen.push(p);
        enumerate(plane, q, target, p + 1, chosen, line_count, out);
        chosen.pop();
        for &l in lines {
            line_count[l as usize] -= 1;
        }
    }
}

/// Per-family summary kept with campaign results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub label: String,
    #[serde(with = "crate::report::decimal")]
    pub subgroup_order: BigUint,
    pub orbit_sizes: Vec<usize>,
    pub nodes: u64,
    pub budget_hit: bool,
    pub unitals_found: usize,
}

/// Result of searching one plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub plane: String,
    pub plane_order: usize,
    #[serde(with = "crate::report::decimal")]
    pub plane_group_order: BigUint,
    pub plane_orbit_count: usize,
    pub plane_orbit_sizes: Vec<usize>,
    pub seed: u64,
    pub families: Vec<FamilySummary>,
    /// Some family stopped on its budget, so "no unital found" does not
    /// mean "no unital exists" even for the sampled subgroups.
    pub budget_hit: bool,
    /// Pairwise non-isomorphic unitals, largest design group first.
    pub records: Vec<UnitalRecord>,
}

/// Full pipeline for one plane: collineation group and orbits, orbit-union
/// search over sampled cyclic subgroups, verification, isomorphism
/// reduction and group data for each surviving unital.
pub fn run_campaign(plane: &ProjectivePlane, name: &str, cfg: &SearchConfig) -> Result<CampaignReport, SearchError> {
    cfg.validate()?;
    let q = cfg.resolve_q(plane)?;
    let v = plane.num_points();
    let deadline = Instant::now() + cfg.time_budget();

    let group = plane_automorphism_group(plane);
    let orbits = point_orbits(&group, v);
    let families = subgroup_orbit_families(plane, &group, cfg);

    let outcomes: Vec<FamilyOutcome> = if cfg.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| SearchError::Config(e.to_string()))?;
        pool.install(|| families.par_iter().map(|f| search_family(plane, f, q, cfg, deadline)).collect())
    } else {
        families.iter().map(|f| search_family(plane, f, q, cfg, deadline)).collect()
    };

    // first family to reach each distinct set
    let mut distinct: BTreeMap<PointSet, usize> = BTreeMap::new();
    let mut ordered: Vec<(Unital, usize)> = Vec::new();
    for (fi, outcome) in outcomes.iter().enumerate() {
        for found in &outcome.unitals {
            if !distinct.contains_key(found.unital.members()) {
                distinct.insert(found.unital.members().clone(), fi);
                ordered.push((found.unital.clone(), fi));
            }
        }
    }

    let analyze = |(u, fi): &(Unital, usize)| {
        let design = induced_design(plane, u).expect("verified unital");
        (analyze_design(&design), *fi)
    };
    let analyses: Vec<_> = if cfg.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| SearchError::Config(e.to_string()))?;
        pool.install(|| ordered.par_iter().map(analyze).collect())
    } else {
        ordered.iter().map(analyze).collect()
    };

    let plane_group_order = group.order().clone();
    let mut seen_certs = HashSet::new();
    let mut records = Vec::new();
    for ((unital, _), (analysis, fi)) in ordered.iter().zip(analyses) {
        if !seen_certs.insert(analysis.certificate.clone()) {
            continue;
        }
        let stabilizer = setwise_stabilizer(plane, unital.members());
        records.push(UnitalRecord {
            plane: name.to_string(),
            plane_group_order: plane_group_order.clone(),
            plane_orbit_count: orbits.num_orbits(),
            unital_group_order: analysis.group.order().clone(),
            unital_orbit_count: analysis.orbits.num_orbits(),
            unital_orbit_sizes: analysis.orbits.sizes(),
            stabilizer_order: stabilizer.order().clone(),
            members: unital.members().members().to_vec(),
            certificate: analysis.certificate,
            provenance: Provenance {
                family: families[fi].label.clone(),
                family_index: fi,
                seed: cfg.seed,
                budget_hit: outcomes[fi].budget_hit,
            },
        });
    }
    records.sort_by(|a, b| b.unital_group_order.cmp(&a.unital_group_order).then_with(|| a.certificate.cmp(&b.certificate)));

    let summaries = families
        .iter()
        .zip(&outcomes)
        .map(|(f, o)| FamilySummary {
            label: f.label.clone(),
            subgroup_order: f.subgroup_order.clone(),
            orbit_sizes: f.sizes(),
            nodes: o.nodes,
            budget_hit: o.budget_hit,
            unitals_found: o.unitals.len(),
        })
        .collect();
    Ok(CampaignReport {
        plane: name.to_string(),
        plane_order: plane.order(),
        plane_group_order,
        plane_orbit_count: orbits.num_orbits(),
        plane_orbit_sizes: orbits.sizes(),
        seed: cfg.seed,
        families: summaries,
        budget_hit: outcomes.iter().any(|o| o.budget_hit),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::is_unital;
    use crate::geometry::{desarguesian_plane, hermitian_unital};

    fn unbounded() -> SearchConfig {
        SearchConfig { node_budget: u64::MAX, time_budget_secs: 3600.0, ..SearchConfig::default() }
    }

    #[test]
    fn trivial_group_gives_singletons() {
        let plane = desarguesian_plane(4).unwrap();
        let fams = subgroup_orbit_families(&plane, &PermGroup::trivial(42), &SearchConfig::default());
        assert_eq!(fams.len(), 1);
        assert_eq!(fams[0].orbits.len(), 21);
    }

    #[test]
    fn fano_has_a_point_transitive_order_seven_element() {
        let plane = desarguesian_plane(2).unwrap();
        let group = plane_automorphism_group(&plane);
        let cfg = SearchConfig { orders: vec![7], ..SearchConfig::default() };
        let fams = subgroup_orbit_families(&plane, &group, &cfg);
        assert!(!fams.is_empty());
        for f in &fams {
            assert_eq!(f.sizes(), vec![7]);
            assert!(group.contains(&extend_to_lines(&plane, &f.generators[0])));
        }
    }

    /// Lifts a point permutation that is a collineation to the incidence graph.
    fn extend_to_lines(plane: &ProjectivePlane, g: &Perm) -> Perm {
        let v = plane.num_points();
        let index: BTreeMap<Vec<u32>, usize> =
            plane.lines().iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let mut img: Vec<u32> = g.images().to_vec();
        for line in plane.lines() {
            let mut m: Vec<u32> = line.iter().map(|&p| g.apply(p)).collect();
            m.sort_unstable();
            img.push((v + index[&m]) as u32);
        }
        Perm::from_images(img).unwrap()
    }

    #[test]
    fn prime_order_families_have_orbits_of_size_one_or_p() {
        let plane = desarguesian_plane(9).unwrap();
        let group = plane_automorphism_group(&plane);
        let cfg = SearchConfig { orders: vec![3, 5, 7], ..SearchConfig::default() };
        for f in subgroup_orbit_families(&plane, &group, &cfg) {
            let p = f.subgroup_order.clone();
            assert!(f.sizes().iter().all(|&s| s == 1 || BigUint::from(s) == p), "{f:?}");
            let total: usize = f.sizes().iter().sum();
            assert_eq!(total, 91);
        }
    }

    #[test]
    fn infeasible_sizes_expand_nothing() {
        let plane = desarguesian_plane(4).unwrap();
        // five blocks of four points: no union has 9 points
        let orbits: Vec<PointSet> = (0..5).map(|i| PointSet::new(4 * i..4 * i + 4, 21).unwrap()).collect();
        let fam = OrbitFamily {
            label: "test".into(),
            generators: Vec::new(),
            subgroup_order: BigUint::from(1u32),
            orbits,
        };
        let out = orbit_union_search(&plane, &fam, &unbounded()).unwrap();
        assert!(out.unitals.is_empty());
        assert_eq!(out.nodes, 0);
        assert!(!out.budget_hit);
    }

    #[test]
    fn tiny_budget_is_flagged() {
        let plane = desarguesian_plane(4).unwrap();
        let cfg = SearchConfig { node_budget: 5, ..SearchConfig::default() };
        let out = orbit_union_search(&plane, &OrbitFamily::singletons(21), &cfg).unwrap();
        assert!(out.budget_hit);
    }

    #[test]
    fn exhaustive_refusals() {
        let fano = desarguesian_plane(2).unwrap();
        assert_eq!(exhaustive_search(&fano, 2, DEFAULT_EXHAUSTIVE_CAP).unwrap_err(), SearchError::NotSquare(2));
        let pg9 = desarguesian_plane(9).unwrap();
        assert!(matches!(
            exhaustive_search(&pg9, 3, DEFAULT_EXHAUSTIVE_CAP),
            Err(SearchError::CapExceeded { .. })
        ));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(21, 9), BigUint::from(293_930u32));
        assert_eq!(binomial(7, 0), BigUint::from(1u32));
    }

    #[test]
    fn hermitian_stabilizer_orbits_rediscover_hermitian_q3() {
        let plane = desarguesian_plane(9).unwrap();
        let h = hermitian_unital(3).unwrap();
        let stab = setwise_stabilizer(&plane, &h);
        let fam = OrbitFamily::from_group("hermitian stabilizer", &stab, plane.num_points());
        let out = orbit_union_search(&plane, &fam, &unbounded()).unwrap();
        assert!(out.unitals.iter().any(|f| f.unital.members() == &h));
        for f in &out.unitals {
            assert!(is_unital(&plane, f.unital.members(), 3).unwrap());
            let union: BTreeSet<u32> =
                f.chosen.iter().flat_map(|&i| fam.orbits[i].members().iter().copied()).collect();
            assert_eq!(union.into_iter().collect::<Vec<_>>(), f.unital.members().members());
        }
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig { threads: 0, ..SearchConfig::default() }.validate().is_err());
        assert!(SearchConfig { node_budget: 0, ..SearchConfig::default() }.validate().is_err());
        assert!(SearchConfig { orders: vec![1], ..SearchConfig::default() }.validate().is_err());
        let plane = desarguesian_plane(4).unwrap();
        assert_eq!(
            SearchConfig { q: Some(3), ..SearchConfig::default() }.resolve_q(&plane),
            Err(SearchError::QMismatch { configured: 3, order: 4 })
        );
    }
}
