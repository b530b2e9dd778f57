//! Individualization-refinement search tree.
//!
//! The tree is explored depth first. Leaves whose refinement traces and
//! relabelled graphs coincide yield automorphisms, which prune sibling
//! branches through orbit fusion and trigger backjumps to the point where
//! the two paths diverged. In canonical mode the search also keeps the
//! least leaf, ordered first by trace and then by the relabelled edge list.

use super::graph::ColoredGraph;
use super::group::UnionFind;
use super::partition::{OrderedPartition, Refiner};
use super::perm::Perm;

/// A canonical labelling and the graph encoding it produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    /// `labelling[i]` is the vertex that receives canonical label `i`.
    pub labelling: Vec<u32>,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone)]
pub(crate) struct SearchOutcome {
    pub generators: Vec<Perm>,
    pub canonical: Option<CanonicalForm>,
    #[allow(dead_code)]
    pub nodes: u64,
}

#[derive(Debug, Clone)]
struct Leaf {
    lab: Vec<u32>,
    traces: Vec<u64>,
    path: Vec<u32>,
    bytes: Option<Vec<u8>>,
}

enum Flow {
    Continue,
    /// Resume the node whose path has this length.
    JumpTo(usize),
}

struct Searcher<'a> {
    g: &'a ColoredGraph,
    canonical: bool,
    refiner: Refiner,
    first: Option<Leaf>,
    best: Option<Leaf>,
    gens: Vec<Perm>,
    nodes: u64,
    path: Vec<u32>,
    traces: Vec<u64>,
}

pub(crate) fn search(g: &ColoredGraph, canonical: bool) -> SearchOutcome {
    let n = g.num_vertices();
    let mut s = Searcher {
        g,
        canonical,
        refiner: Refiner::new(n),
        first: None,
        best: None,
        gens: Vec::new(),
        nodes: 0,
        path: Vec::new(),
        traces: Vec::new(),
    };
    let mut root = OrderedPartition::from_colors(g.colors());
    let starts: Vec<usize> = root.cell_starts().collect();
    s.refiner.refine(g, &mut root, &starts);
    s.explore(&root);
    let canonical_form = s.best.take().map(|b| CanonicalForm { labelling: b.lab, bytes: b.bytes.unwrap() });
    SearchOutcome { generators: s.gens, canonical: canonical_form, nodes: s.nodes }
}

impl Searcher<'_> {
    fn explore(&mut self, part: &OrderedPartition) -> Flow {
        self.nodes += 1;
        let Some(target) = part.target_cell() else {
            return self.leaf(part);
        };
        let depth = self.path.len();
        let mut candidates = part.cell_members(target).to_vec();
        candidates.sort_unstable();

        let mut explored: Vec<u32> = Vec::new();
        let mut orbits: Option<(usize, UnionFind)> = None;
        for &w in &candidates {
            if !explored.is_empty() && !self.gens.is_empty() {
                if orbits.as_ref().is_none_or(|(k, _)| *k != self.gens.len()) {
                    orbits = Some((self.gens.len(), self.stabilizer_orbits()));
                }
                let uf = &mut orbits.as_mut().unwrap().1;
                let rw = uf.find(w as usize);
                if explored.iter().any(|&e| uf.find(e as usize) == rw) {
                    continue;
                }
            }
            explored.push(w);

            let mut child = part.clone();
            let s = child.individualize(w as usize);
            let trace = self.refiner.refine(self.g, &mut child, &[s]);
            self.path.push(w);
            self.traces.push(trace);
            let flow = if self.keep_node() { self.explore(&child) } else { Flow::Continue };
            self.path.pop();
            self.traces.pop();
            if let Flow::JumpTo(level) = flow {
                if level < depth {
                    return flow;
                }
            }
        }
        Flow::Continue
    }

    /// Orbits of the automorphisms found so far that fix the current path.
    fn stabilizer_orbits(&self) -> UnionFind {
        let n = self.g.num_vertices();
        let mut uf = UnionFind::new(n);
        for gen in &self.gens {
            if self.path.iter().all(|&x| gen.apply(x) == x) {
                for x in 0..n {
                    uf.union(x, gen.apply(x as u32) as usize);
                }
            }
        }
        uf
    }

    fn keep_node(&self) -> bool {
        let d = self.traces.len();
        let Some(first) = &self.first else {
            return true;
        };
        if first.traces.len() >= d && first.traces[..d] == self.traces[..] {
            return true;
        }
        if !self.canonical {
            return false;
        }
        let best = self.best.as_ref().expect("best leaf set with first");
        let k = d.min(best.traces.len());
        match self.traces[..].cmp(&best.traces[..k]) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => k == d,
            std::cmp::Ordering::Greater => false,
        }
    }

    fn leaf(&mut self, part: &OrderedPartition) -> Flow {
        let lab = part.labelling().to_vec();
        let Some(first) = &self.first else {
            let bytes = self.canonical.then(|| encode_relabelled(self.g, &lab));
            let leaf = Leaf { lab, traces: self.traces.clone(), path: self.path.clone(), bytes };
            if self.canonical {
                self.best = Some(leaf.clone());
            }
            self.first = Some(leaf);
            return Flow::Continue;
        };

        if first.traces == self.traces {
            let gamma = leaf_map(&first.lab, &lab);
            if self.g.is_automorphism(&gamma) {
                let level = common_prefix(&first.path, &self.path);
                self.add_generator(gamma);
                return Flow::JumpTo(level);
            }
        }
        if !self.canonical {
            return Flow::Continue;
        }

        let best = self.best.as_ref().unwrap();
        match self.traces.cmp(&best.traces) {
            std::cmp::Ordering::Less => self.replace_best(lab, None),
            std::cmp::Ordering::Greater => {}
            std::cmp::Ordering::Equal => {
                let bytes = encode_relabelled(self.g, &lab);
                match bytes.cmp(best.bytes.as_ref().unwrap()) {
                    std::cmp::Ordering::Less => self.replace_best(lab, Some(bytes)),
                    std::cmp::Ordering::Greater => {}
                    std::cmp::Ordering::Equal => {
                        let gamma = leaf_map(&best.lab, &lab);
                        let level = common_prefix(&best.path, &self.path);
                        debug_assert!(self.g.is_automorphism(&gamma));
                        self.add_generator(gamma);
                        return Flow::JumpTo(level);
                    }
                }
            }
        }
        Flow::Continue
    }

    fn replace_best(&mut self, lab: Vec<u32>, bytes: Option<Vec<u8>>) {
        let bytes = bytes.unwrap_or_else(|| encode_relabelled(self.g, &lab));
        self.best = Some(Leaf { lab, traces: self.traces.clone(), path: self.path.clone(), bytes: Some(bytes) });
    }

    fn add_generator(&mut self, gamma: Perm) {
        if !gamma.is_identity() && !self.gens.contains(&gamma) {
            self.gens.push(gamma);
        }
    }
}

/// The permutation sending leaf `from` onto leaf `to` position by position.
fn leaf_map(from: &[u32], to: &[u32]) -> Perm {
    let mut img = vec![0u32; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        img[a as usize] = b;
    }
    Perm::from_images(img).expect("leaf labellings are bijections")
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Graph relabelled by a leaf, as bytes: vertex count, per-colour class
/// sizes, then the sorted edge list in big-endian words of the smallest
/// width that fits. Lexicographic byte order is numeric edge-list order.
pub(crate) fn encode_relabelled(g: &ColoredGraph, lab: &[u32]) -> Vec<u8> {
    let n = g.num_vertices();
    let mut canon = vec![0u32; n];
    for (i, &v) in lab.iter().enumerate() {
        canon[v as usize] = i as u32;
    }
    let width = if n <= 0x100 {
        1
    } else if n <= 0x1_0000 {
        2
    } else {
        4
    };
    let mut out = Vec::with_capacity(8 + 4 * g.num_colors() as usize + 2 * width * g.num_edges());
    out.extend_from_slice(&(n as u32).to_be_bytes());
    out.extend_from_slice(&g.num_colors().to_be_bytes());
    let mut class_sizes = vec![0u32; g.num_colors() as usize];
    for &c in g.colors() {
        class_sizes[c as usize] += 1;
    }
    for s in class_sizes {
        out.extend_from_slice(&s.to_be_bytes());
    }
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(g.num_edges());
    for v in 0..n {
        let cv = canon[v];
        for &w in g.neighbors(v) {
            let cw = canon[w as usize];
            if cv < cw {
                edges.push((cv, cw));
            }
        }
    }
    edges.sort_unstable();
    for (a, b) in edges {
        for x in [a, b] {
            out.extend_from_slice(&x.to_be_bytes()[4 - width..]);
        }
    }
    out
}
