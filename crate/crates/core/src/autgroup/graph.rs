use thiserror::Error;

use super::perm::Perm;
use crate::design::{InducedDesign, PointSet, ProjectivePlane};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("color list has {found} entries for {n} vertices")]
    ColorCount { n: usize, found: usize },
    #[error("colors must form a contiguous range starting at 0; color {0} is unused")]
    ColorGap(u32),
}

/// Undirected vertex-colored graph in compressed adjacency form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    offsets: Vec<u32>,
    adj: Vec<u32>,
    colors: Vec<u32>,
    num_colors: u32,
}

impl ColoredGraph {
    /// Builds a graph from an undirected edge list. Duplicate edges collapse.
    pub fn new(n: usize, edges: &[(usize, usize)], colors: Vec<u32>) -> Result<Self, GraphError> {
        if colors.len() != n {
            return Err(GraphError::ColorCount { n, found: colors.len() });
        }
        let num_colors = colors.iter().max().map_or(0, |&c| c + 1);
        let mut used = vec![false; num_colors as usize];
        for &c in &colors {
            used[c as usize] = true;
        }
        if let Some(gap) = used.iter().position(|&u| !u) {
            return Err(GraphError::ColorGap(gap as u32));
        }
        let mut lists = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange(a, b, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            lists[a].push(b as u32);
            lists[b].push(a as u32);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut adj = Vec::new();
        offsets.push(0);
        for mut l in lists {
            l.sort_unstable();
            l.dedup();
            adj.extend(l);
            offsets.push(adj.len() as u32);
        }
        Ok(Self { offsets, adj, colors, num_colors })
    }

    pub fn num_vertices(&self) -> usize {
        self.colors.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.len() / 2
    }

    /// Sorted neighbours of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn num_colors(&self) -> u32 {
        self.num_colors
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.neighbors(a).binary_search(&(b as u32)).is_ok()
    }

    /// Edge list with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.num_vertices())
            .flat_map(|a| self.neighbors(a).iter().filter(move |&&b| b as usize > a).map(move |&b| (a, b as usize)))
            .collect()
    }

    /// Same graph with new colors.
    pub fn recolored(&self, colors: Vec<u32>) -> Result<Self, GraphError> {
        Self::new(self.num_vertices(), &self.edges(), colors)
    }

    /// True when `perm` preserves colors and maps edges onto edges.
    pub fn is_automorphism(&self, perm: &Perm) -> bool {
        let n = self.num_vertices();
        if perm.degree() != n {
            return false;
        }
        let mut buf = Vec::new();
        for v in 0..n {
            let w = perm.apply(v as u32) as usize;
            if self.colors[v] != self.colors[w] {
                return false;
            }
            let nb = self.neighbors(v);
            let target = self.neighbors(w);
            if nb.len() != target.len() {
                return false;
            }
            buf.clear();
            buf.extend(nb.iter().map(|&x| perm.apply(x)));
            buf.sort_unstable();
            if buf != target {
                return false;
            }
        }
        true
    }
}

/// Point-line incidence graph of a plane: point `i` is vertex `i` (color
/// 0), line `j` is vertex `v + j` (color 1).
pub fn plane_to_graph(plane: &ProjectivePlane) -> ColoredGraph {
    incidence_graph(plane.num_points(), plane.lines(), None)
}

/// Plane incidence graph with the points of `set` given color 2.
pub fn plane_to_graph_marked(plane: &ProjectivePlane, set: &PointSet) -> ColoredGraph {
    incidence_graph(plane.num_points(), plane.lines(), Some(set))
}

/// Point-block incidence graph of a design: points first (color 0), then
/// blocks (color 1).
pub fn design_to_graph(design: &InducedDesign) -> ColoredGraph {
    incidence_graph(design.num_points(), &design.blocks, None)
}

fn incidence_graph(v: usize, blocks: &[Vec<u32>], marked: Option<&PointSet>) -> ColoredGraph {
    let b = blocks.len();
    let mut colors: Vec<u32> = (0..v + b).map(|i| u32::from(i >= v)).collect();
    if let Some(set) = marked.filter(|s| !s.is_empty()) {
        for p in set.iter() {
            colors[p] = 2;
        }
        // keep the color range contiguous if the set covers every point
        if set.len() == v {
            for c in colors.iter_mut().take(v) {
                *c = 0;
            }
        }
    }
    let edges: Vec<(usize, usize)> = blocks
        .iter()
        .enumerate()
        .flat_map(|(j, blk)| blk.iter().map(move |&p| (p as usize, v + j)))
        .collect();
    ColoredGraph::new(v + b, &edges, colors).expect("incidence lists are in range")
}
