//! Permutation groups via a base and strong generating set.
//!
//! The chain is built by randomized Schreier-Sims with a fixed seed, then
//! closed by a deterministic pass that sifts every Schreier generator, so
//! the resulting order is exact regardless of how the random phase went.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch { index: usize, expected: usize, found: usize },
    #[error("base point {0} is outside the permutation domain")]
    BasePoint(u32),
}

#[derive(Debug, Clone)]
struct Level {
    base: u32,
    gens: Vec<Perm>,
    orbit: Vec<u32>,
    /// `inv_trans[x]` maps `x` back to the base point.
    inv_trans: Vec<Option<Perm>>,
    trans: Vec<Option<Perm>>,
}

impl Level {
    fn new(base: u32, degree: usize) -> Self {
        let mut l = Level {
            base,
            gens: Vec::new(),
            orbit: Vec::new(),
            inv_trans: vec![None; degree],
            trans: vec![None; degree],
        };
        l.rebuild(degree);
        l
    }

    fn rebuild(&mut self, degree: usize) {
        for x in self.orbit.drain(..) {
            self.trans[x as usize] = None;
            self.inv_trans[x as usize] = None;
        }
        let b = self.base as usize;
        self.trans[b] = Some(Perm::identity(degree));
        self.inv_trans[b] = Some(Perm::identity(degree));
        self.orbit.push(self.base);
        let mut i = 0;
        while i < self.orbit.len() {
            let x = self.orbit[i];
            for s in &self.gens {
                let y = s.apply(x) as usize;
                if self.trans[y].is_none() {
                    let u = self.trans[x as usize].as_ref().unwrap().then(s);
                    self.inv_trans[y] = Some(u.inverse());
                    self.trans[y] = Some(u);
                    self.orbit.push(y as u32);
                }
            }
            i += 1;
        }
    }
}

/// A permutation group given by generators, with its stabilizer chain and
/// exact order.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    levels: Vec<Level>,
    order: BigUint,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self, GroupError> {
        Self::with_base(degree, generators, &[])
    }

    /// Builds the chain with `base_prefix` as the first base points.
    pub fn with_base(degree: usize, generators: Vec<Perm>, base_prefix: &[u32]) -> Result<Self, GroupError> {
        for (index, g) in generators.iter().enumerate() {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch { index, expected: degree, found: g.degree() });
            }
        }
        if let Some(&b) = base_prefix.iter().find(|&&b| b as usize >= degree) {
            return Err(GroupError::BasePoint(b));
        }
        let generators: Vec<Perm> = generators.into_iter().filter(|g| !g.is_identity()).collect();
        let mut group = PermGroup {
            degree,
            levels: base_prefix.iter().map(|&b| Level::new(b, degree)).collect(),
            generators,
            order: BigUint::from(1u32),
        };
        group.schreier_sims();
        group.order = group
            .levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()));
        Ok(group)
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new()).expect("no generators")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Lengths of the basic orbits; their product is the order.
    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Membership test by sifting.
    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.sift(g.clone(), 0).0.is_identity()
    }

    /// Subgroup fixing every point of `points`.
    pub fn pointwise_stabilizer(&self, points: &[u32]) -> Result<PermGroup, GroupError> {
        let rebased = PermGroup::with_base(self.degree, self.generators.clone(), points)?;
        let gens = rebased.levels.get(points.len()).map(|l| l.gens.clone()).unwrap_or_default();
        PermGroup::new(self.degree, gens)
    }

    /// Uniformly random element: one random coset representative per level.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Perm {
        let mut g = Perm::identity(self.degree);
        for level in self.levels.iter().rev() {
            let x = level.orbit[rng.random_range(0..level.orbit.len())];
            g = g.then(level.trans[x as usize].as_ref().unwrap());
        }
        g
    }

    fn sift(&self, mut h: Perm, from: usize) -> (Perm, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let x = h.apply(level.base) as usize;
            match &level.inv_trans[x] {
                Some(u) => h = h.then(u),
                None => return (h, i),
            }
        }
        let n = self.levels.len();
        (h, n)
    }

    /// Adds residue `h`, which fixes the first `j` base points.
    fn insert(&mut self, h: Perm, j: usize) {
        if j == self.levels.len() {
            let moved = (0..self.degree as u32).find(|&x| h.apply(x) != x).expect("nontrivial residue");
            self.levels.push(Level::new(moved, self.degree));
        }
        for level in &mut self.levels[..=j] {
            level.gens.push(h.clone());
            level.rebuild(self.degree);
        }
    }

    fn schreier_sims(&mut self) {
        if self.generators.is_empty() {
            return;
        }
        for g in self.generators.clone() {
            let (h, j) = self.sift(g, 0);
            if !h.is_identity() {
                self.insert(h, j);
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f5c_4e00);
        let mut streak = 0;
        while streak < 24 {
            let len = rng.random_range(1..=2 * self.generators.len() + 8);
            let mut r = Perm::identity(self.degree);
            for _ in 0..len {
                let g = &self.generators[rng.random_range(0..self.generators.len())];
                r = r.then(g);
            }
            let (h, j) = self.sift(r, 0);
            if h.is_identity() {
                streak += 1;
            } else {
                streak = 0;
                self.insert(h, j);
            }
        }

        // Deterministic closure: every Schreier generator at level i must
        // sift to the identity through the levels below it.
        let mut i = self.levels.len();
        while i > 0 {
            let lvl = i - 1;
            match self.failing_schreier_generator(lvl) {
                Some((h, j)) => {
                    self.insert(h, j);
                    i = j + 1;
                }
                None => i -= 1,
            }
        }
    }

    fn failing_schreier_generator(&self, lvl: usize) -> Option<(Perm, usize)> {
        let level = &self.levels[lvl];
        for &x in &level.orbit {
            let ux = level.trans[x as usize].as_ref().unwrap();
            for s in &level.gens {
                let y = s.apply(x) as usize;
                let schreier = ux.then(s).then(level.inv_trans[y].as_ref().unwrap());
                if schreier.is_identity() {
                    continue;
                }
                let (h, j) = self.sift(schreier, lvl + 1);
                if !h.is_identity() {
                    return Some((h, j));
                }
            }
        }
        None
    }
}

/// Exact order of the group generated by `gens` acting on `0..degree`.
pub fn group_order(degree: usize, gens: &[Perm]) -> Result<BigUint, GroupError> {
    Ok(PermGroup::new(degree, gens.to_vec())?.order().clone())
}

/// Orbits of a group action on a prefix `0..n` of the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    /// Orbits sorted ascending inside, ordered by smallest member.
    orbits: Vec<Vec<u32>>,
    orbit_id: Vec<u32>,
}

impl OrbitPartition {
    /// Orbits on `0..n` of the group generated by `gens`; `0..n` must be
    /// invariant under every generator.
    pub fn from_generators(n: usize, gens: &[Perm]) -> Self {
        let mut uf = UnionFind::new(n);
        for g in gens {
            for x in 0..n {
                uf.union(x, g.apply(x as u32) as usize);
            }
        }
        let mut by_root: Vec<Option<usize>> = vec![None; n];
        let mut orbits: Vec<Vec<u32>> = Vec::new();
        let mut orbit_id = vec![0u32; n];
        for x in 0..n {
            let r = uf.find(x);
            let id = *by_root[r].get_or_insert_with(|| {
                orbits.push(Vec::new());
                orbits.len() - 1
            });
            orbits[id].push(x as u32);
            orbit_id[x] = id as u32;
        }
        Self { orbits, orbit_id }
    }

    pub fn num_orbits(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbits(&self) -> &[Vec<u32>] {
        &self.orbits
    }

    /// Index (into [`Self::orbits`]) of the orbit containing `x`.
    pub fn orbit_index(&self, x: usize) -> usize {
        self.orbit_id[x] as usize
    }

    pub fn orbit_of(&self, x: usize) -> &[u32] {
        &self.orbits[self.orbit_index(x)]
    }

    /// Orbit sizes, largest first.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.orbits.iter().map(Vec::len).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }
}

/// Orbits of `group` restricted to the first `v` points of its domain.
pub fn point_orbits(group: &PermGroup, v: usize) -> OrbitPartition {
    assert!(group.degree() >= v, "group degree {} < {v}", group.degree());
    OrbitPartition::from_generators(v, group.generators())
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo as u32;
        }
    }
}
