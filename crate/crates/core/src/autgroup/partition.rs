use std::collections::VecDeque;

use super::graph::ColoredGraph;

/// Ordered partition of `0..n`, stored as a vertex array split into
/// contiguous cells. A cell is identified by its start position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedPartition {
    lab: Vec<u32>,
    pos: Vec<u32>,
    cell: Vec<u32>,
    len: Vec<u32>,
    ncells: usize,
}

impl OrderedPartition {
    /// One cell per color, ordered by color.
    pub fn from_colors(colors: &[u32]) -> Self {
        let k = colors.iter().max().map_or(0, |&c| c as usize + 1);
        let mut cells = vec![Vec::new(); k];
        for (v, &c) in colors.iter().enumerate() {
            cells[c as usize].push(v as u32);
        }
        Self::from_cells(&cells).expect("color classes partition the vertices")
    }

    /// The single-cell partition of `0..n`.
    pub fn unit(n: usize) -> Self {
        Self::from_cells(&[(0..n as u32).collect()]).expect("unit partition")
    }

    /// Builds a partition from explicit cells; `None` unless the nonempty
    /// cells are disjoint and cover `0..n`.
    pub fn from_cells(cells: &[Vec<u32>]) -> Option<Self> {
        let n: usize = cells.iter().map(Vec::len).sum();
        let mut lab = Vec::with_capacity(n);
        let mut pos = vec![u32::MAX; n];
        let mut cell = vec![0u32; n];
        let mut len = vec![0u32; n];
        let mut ncells = 0;
        for c in cells.iter().filter(|c| !c.is_empty()) {
            let start = lab.len() as u32;
            len[start as usize] = c.len() as u32;
            ncells += 1;
            for &v in c {
                let slot = pos.get_mut(v as usize)?;
                if *slot != u32::MAX {
                    return None;
                }
                *slot = lab.len() as u32;
                cell[v as usize] = start;
                lab.push(v);
            }
        }
        Some(Self { lab, pos, cell, len, ncells })
    }

    pub fn num_vertices(&self) -> usize {
        self.lab.len()
    }

    pub fn num_cells(&self) -> usize {
        self.ncells
    }

    pub fn is_discrete(&self) -> bool {
        self.ncells == self.lab.len()
    }

    /// Start position of the cell holding `v`.
    pub fn cell_of(&self, v: usize) -> usize {
        self.cell[v] as usize
    }

    /// Vertices of the cell starting at `start`, in storage order.
    pub fn cell_members(&self, start: usize) -> &[u32] {
        &self.lab[start..start + self.len[start] as usize]
    }

    /// Vertex at each position. For a discrete partition this is the leaf
    /// labelling: position `i` holds the vertex labelled `i`.
    pub fn labelling(&self) -> &[u32] {
        &self.lab
    }

    /// Cell starts in order.
    pub fn cell_starts(&self) -> impl Iterator<Item = usize> + '_ {
        let mut i = 0;
        std::iter::from_fn(move || {
            (i < self.lab.len()).then(|| {
                let s = i;
                i += self.len[i] as usize;
                s
            })
        })
    }

    /// Cells in order, each sorted ascending.
    pub fn cells(&self) -> Vec<Vec<u32>> {
        self.cell_starts()
            .map(|s| {
                let mut c = self.cell_members(s).to_vec();
                c.sort_unstable();
                c
            })
            .collect()
    }

    /// First non-singleton cell of maximum size.
    pub fn target_cell(&self) -> Option<usize> {
        let mut best: Option<(u32, usize)> = None;
        for s in self.cell_starts() {
            let l = self.len[s];
            if l > 1 && best.is_none_or(|(bl, _)| l > bl) {
                best = Some((l, s));
            }
        }
        best.map(|(_, s)| s)
    }

    /// Splits `v` off the front of its cell. Returns the start of the new
    /// singleton cell.
    pub fn individualize(&mut self, v: usize) -> usize {
        let c = self.cell[v] as usize;
        let l = self.len[c] as usize;
        if l == 1 {
            return c;
        }
        self.swap_positions(self.pos[v] as usize, c);
        self.len[c] = 1;
        self.len[c + 1] = (l - 1) as u32;
        for p in c + 1..c + l {
            self.cell[self.lab[p] as usize] = (c + 1) as u32;
        }
        self.ncells += 1;
        c
    }

    #[inline]
    fn swap_positions(&mut self, a: usize, b: usize) {
        let (va, vb) = (self.lab[a], self.lab[b]);
        self.lab[a] = vb;
        self.lab[b] = va;
        self.pos[vb as usize] = a as u32;
        self.pos[va as usize] = b as u32;
    }
}

/// Stable 64-bit mixing of refinement events into a trace value.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Trace(u64);

impl Trace {
    pub(crate) fn new() -> Self {
        Trace(0x243f_6a88_85a3_08d3)
    }

    #[inline]
    pub(crate) fn mix(&mut self, x: u64) {
        self.0 = (self.0.rotate_left(5) ^ x).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    }

    pub(crate) fn finish(self) -> u64 {
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

/// Scratch space for equitable refinement, reusable across calls on graphs
/// of the same size.
#[derive(Debug, Clone)]
pub(crate) struct Refiner {
    count: Vec<u32>,
    in_queue: Vec<bool>,
    touched: Vec<u32>,
    queue: VecDeque<u32>,
}

impl Refiner {
    pub(crate) fn new(n: usize) -> Self {
        Self { count: vec![0; n], in_queue: vec![false; n], touched: Vec::new(), queue: VecDeque::new() }
    }

    /// Refines `p` to its coarsest equitable refinement, starting from the
    /// given splitter cells. Returns a trace value that depends only on the
    /// sequence of splits, so isomorphic inputs give equal traces.
    pub(crate) fn refine(&mut self, g: &ColoredGraph, p: &mut OrderedPartition, splitters: &[usize]) -> u64 {
        let mut trace = Trace::new();
        for &s in splitters {
            if !self.in_queue[s] {
                self.in_queue[s] = true;
                self.queue.push_back(s as u32);
            }
        }
        while let Some(w) = self.queue.pop_front() {
            let w = w as usize;
            self.in_queue[w] = false;
            trace.mix(w as u64);
            if p.ncells == p.lab.len() {
                continue;
            }

            self.touched.clear();
            for i in w..w + p.len[w] as usize {
                for &nb in g.neighbors(p.lab[i] as usize) {
                    if self.count[nb as usize] == 0 {
                        self.touched.push(nb);
                    }
                    self.count[nb as usize] += 1;
                }
            }
            if self.touched.is_empty() {
                continue;
            }
            let count = &self.count;
            let cell = &p.cell;
            self.touched.sort_unstable_by_key(|&v| (cell[v as usize], count[v as usize], v));

            let mut gi = 0;
            while gi < self.touched.len() {
                let c = p.cell[self.touched[gi] as usize] as usize;
                let mut ge = gi;
                while ge < self.touched.len() && p.cell[self.touched[ge] as usize] as usize == c {
                    ge += 1;
                }
                self.split_cell(p, c, gi, ge, &mut trace);
                gi = ge;
            }
            for &v in &self.touched {
                self.count[v as usize] = 0;
            }
        }
        trace.mix(p.ncells as u64);
        trace.finish()
    }

    /// Splits cell `c` by the counts of `touched[gi..ge]` (its touched
    /// members, sorted by count); untouched members have count zero.
    fn split_cell(&mut self, p: &mut OrderedPartition, c: usize, gi: usize, ge: usize, trace: &mut Trace) {
        let clen = p.len[c] as usize;
        let t = ge - gi;
        let group = &self.touched[gi..ge];
        let first = self.count[group[0] as usize];
        let uniform = self.count[group[t - 1] as usize] == first;
        if clen == 1 || (t == clen && uniform) {
            trace.mix(((c as u64) << 32) | first as u64);
            return;
        }

        let tail = c + clen - t;
        for (i, &v) in group.iter().enumerate() {
            let from = p.pos[v as usize] as usize;
            p.swap_positions(from, tail + i);
        }

        // fragments as (start, len, count)
        let mut frags: Vec<(usize, usize, u32)> = Vec::new();
        if tail > c {
            frags.push((c, tail - c, 0));
        }
        let mut s = tail;
        for i in 1..=t {
            if i == t || self.count[group[i] as usize] != self.count[group[i - 1] as usize] {
                frags.push((s, tail + i - s, self.count[group[i - 1] as usize]));
                s = tail + i;
            }
        }

        trace.mix(((c as u64) << 32) | frags.len() as u64);
        for &(fs, fl, fc) in &frags {
            trace.mix(((fc as u64) << 32) | fl as u64);
            p.len[fs] = fl as u32;
            if fs != c {
                for q in fs..fs + fl {
                    p.cell[p.lab[q] as usize] = fs as u32;
                }
            }
        }
        p.ncells += frags.len() - 1;

        if self.in_queue[c] {
            for &(fs, _, _) in &frags[1..] {
                self.in_queue[fs] = true;
                self.queue.push_back(fs as u32);
            }
        } else {
            let mut largest = 0;
            for (i, f) in frags.iter().enumerate() {
                if f.1 > frags[largest].1 {
                    largest = i;
                }
            }
            for (i, &(fs, _, _)) in frags.iter().enumerate() {
                if i != largest {
                    self.in_queue[fs] = true;
                    self.queue.push_back(fs as u32);
                }
            }
        }
    }
}

/// Coarsest equitable refinement of `pi` on `g`.
pub fn refine(g: &ColoredGraph, pi: &OrderedPartition) -> OrderedPartition {
    let mut p = pi.clone();
    let starts: Vec<usize> = p.cell_starts().collect();
    Refiner::new(g.num_vertices()).refine(g, &mut p, &starts);
    p
}

/// True when every vertex of a cell has the same number of neighbours in
/// every cell.
pub fn is_equitable(g: &ColoredGraph, p: &OrderedPartition) -> bool {
    let cells = p.cells();
    let mut cell_index = vec![0usize; g.num_vertices()];
    for (i, c) in cells.iter().enumerate() {
        for &v in c {
            cell_index[v as usize] = i;
        }
    }
    let profile = |v: u32| {
        let mut counts = vec![0usize; cells.len()];
        for &nb in g.neighbors(v as usize) {
            counts[cell_index[nb as usize]] += 1;
        }
        counts
    };
    cells.iter().all(|c| {
        let first = profile(c[0]);
        c.iter().all(|&v| profile(v) == first)
    })
}
