//! Automorphism groups and canonical labelling by partition refinement,
//! individualization and backtracking.
//!
//! The search tree is the usual one: nodes are equitable ordered partitions,
//! a child individualizes one vertex of the first smallest non-singleton
//! cell and refines again. Every node carries the exact trace of its
//! refinement (which cells were split, by which counts), which is
//! label-invariant and is used for pruning.
//!
//! Automorphisms are found first, along the leftmost path: for each level,
//! every vertex of the target cell not already known to be in the orbit of
//! the chosen vertex is tried, looking for a leaf equivalent to the first
//! leaf. The generators found this way generate the full group.
//!
//! The canonical leaf is then the least leaf under the key
//! `(trace sequence, relabelled adjacency matrix)`. The second pass prunes
//! children in the same orbit of the pointwise stabilizer of the current
//! prefix, and any node whose trace sequence already exceeds the best one.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use crate::graph::{Graph, Partition};
use crate::group::PermGroup;
use crate::perm::Perm;
use crate::union_find::UnionFind;

/// Ordered partition in the nauty layout: `lab` lists vertices by position
/// and a cell is identified by its start position.
#[derive(Clone, Debug)]
struct Cells {
    lab: Vec<u32>,
    pos: Vec<u32>,
    start_of: Vec<u32>,
    len: Vec<u32>,
    count: usize,
}

impl Cells {
    fn from_ordered(n: usize, classes: &[Vec<usize>]) -> Self {
        let mut lab = Vec::with_capacity(n);
        let mut pos = vec![0u32; n];
        let mut start_of = vec![0u32; n];
        let mut len = vec![0u32; n.max(1)];
        for class in classes {
            let start = lab.len() as u32;
            len[start as usize] = class.len() as u32;
            for &v in class {
                pos[v] = lab.len() as u32;
                start_of[v] = start;
                lab.push(v as u32);
            }
        }
        Cells {
            lab,
            pos,
            start_of,
            len,
            count: classes.len(),
        }
    }

    fn n(&self) -> usize {
        self.lab.len()
    }

    fn is_discrete(&self) -> bool {
        self.count == self.n()
    }

    fn starts(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.count);
        let mut p = 0;
        while p < self.n() {
            out.push(p as u32);
            p += self.len[p] as usize;
        }
        out
    }

    fn cell(&self, start: u32) -> &[u32] {
        let s = start as usize;
        &self.lab[s..s + self.len[s] as usize]
    }

    /// First smallest non-singleton cell.
    fn target_cell(&self) -> Option<u32> {
        let mut best: Option<(u32, u32)> = None;
        let mut p = 0;
        while p < self.n() {
            let l = self.len[p];
            if l > 1 && best.is_none_or(|(_, bl)| l < bl) {
                best = Some((p as u32, l));
            }
            p += l as usize;
        }
        best.map(|(s, _)| s)
    }

    /// Moves `v` to the front of its cell as a new singleton; returns the
    /// singleton's start.
    fn individualize(&mut self, v: usize) -> u32 {
        let s = self.start_of[v] as usize;
        let l = self.len[s] as usize;
        debug_assert!(l > 1);
        let p = self.pos[v] as usize;
        let w = self.lab[s] as usize;
        self.lab.swap(s, p);
        self.pos[w] = p as u32;
        self.pos[v] = s as u32;
        self.len[s] = 1;
        self.len[s + 1] = (l - 1) as u32;
        for q in s + 1..s + l {
            self.start_of[self.lab[q] as usize] = (s + 1) as u32;
        }
        self.count += 1;
        s as u32
    }

    /// Refines to the coarsest equitable partition below the current one,
    /// using `queue` as the initial splitters. Appends the refinement trace.
    fn refine(&mut self, g: &Graph, queue: &[u32], trace: &mut Vec<u32>) {
        let n = self.n();
        let mut in_queue = vec![false; n];
        let mut queue: VecDeque<u32> = queue.iter().copied().collect();
        for &s in &queue {
            in_queue[s as usize] = true;
        }
        let mut counts = vec![0u32; n];
        let mut touched_vertices: Vec<u32> = Vec::new();
        let mut touched_cells: Vec<u32> = Vec::new();
        let mut cell_marked = vec![false; n];
        let mut seg: Vec<u32> = Vec::new();

        while let Some(w) = queue.pop_front() {
            in_queue[w as usize] = false;
            if self.is_discrete() {
                break;
            }
            let ws = w as usize;
            for p in ws..ws + self.len[ws] as usize {
                for &y in g.neighbor_slice(self.lab[p] as usize) {
                    if counts[y as usize] == 0 {
                        touched_vertices.push(y);
                    }
                    counts[y as usize] += 1;
                }
            }
            for &y in &touched_vertices {
                let s = self.start_of[y as usize];
                if !cell_marked[s as usize] {
                    cell_marked[s as usize] = true;
                    touched_cells.push(s);
                }
            }
            touched_cells.sort_unstable();
            for &s in &touched_cells {
                cell_marked[s as usize] = false;
                let su = s as usize;
                let l = self.len[su] as usize;
                if l == 1 {
                    continue;
                }
                seg.clear();
                seg.extend_from_slice(&self.lab[su..su + l]);
                seg.sort_by_key(|&v| counts[v as usize]);
                let lo = counts[seg[0] as usize];
                let hi = counts[seg[l - 1] as usize];
                if lo == hi {
                    continue;
                }
                trace.extend([w, s]);
                let mut frag_start = su;
                for i in 0..l {
                    let v = seg[i] as usize;
                    self.lab[su + i] = v as u32;
                    self.pos[v] = (su + i) as u32;
                    let c = counts[v];
                    if i > 0 && c != counts[seg[i - 1] as usize] {
                        self.close_fragment(
                            frag_start,
                            su + i,
                            &mut queue,
                            &mut in_queue,
                            trace,
                            &counts,
                        );
                        frag_start = su + i;
                        self.count += 1;
                    }
                    self.start_of[v] = frag_start as u32;
                }
                self.close_fragment(
                    frag_start,
                    su + l,
                    &mut queue,
                    &mut in_queue,
                    trace,
                    &counts,
                );
            }
            touched_cells.clear();
            for &y in &touched_vertices {
                counts[y as usize] = 0;
            }
            touched_vertices.clear();
        }
        trace.push(self.count as u32);
    }

    fn close_fragment(
        &mut self,
        start: usize,
        end: usize,
        queue: &mut VecDeque<u32>,
        in_queue: &mut [bool],
        trace: &mut Vec<u32>,
        counts: &[u32],
    ) {
        self.len[start] = (end - start) as u32;
        trace.extend([counts[self.lab[start] as usize], (end - start) as u32]);
        if !in_queue[start] {
            in_queue[start] = true;
            queue.push_back(start as u32);
        }
    }

    fn to_partition(&self) -> Partition {
        let classes = self
            .starts()
            .into_iter()
            .map(|s| self.cell(s).iter().map(|&v| v as usize).collect())
            .collect();
        Partition::from_classes(self.n(), classes).expect("cells form a partition")
    }
}

/// Coarsest equitable refinement of `p`. Classes of `p` are taken in their
/// stored order (by least element) as the initial cell order.
pub fn refine(g: &Graph, p: &Partition) -> Partition {
    assert_eq!(
        g.vertex_count(),
        p.vertex_count(),
        "partition size mismatch"
    );
    let mut cells = Cells::from_ordered(g.vertex_count(), p.classes());
    let starts = cells.starts();
    cells.refine(g, &starts, &mut Vec::new());
    cells.to_partition()
}

/// True if every vertex of a class has the same number of neighbours in
/// each class.
pub fn is_equitable(g: &Graph, p: &Partition) -> bool {
    p.classes().iter().all(|class| {
        let profile = |v: usize| {
            let mut counts = vec![0usize; p.len()];
            for w in g.neighbors(v) {
                counts[p.class_of(w)] += 1;
            }
            counts
        };
        let first = profile(class[0]);
        class.iter().all(|&v| profile(v) == first)
    })
}

/// Label-invariant starting partition: vertices keyed by degree and the
/// sorted common-neighbour counts with their neighbours.
fn initial_cells(g: &Graph) -> Cells {
    let n = g.vertex_count();
    let keys: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut c: Vec<usize> = g
                .neighbors(v)
                .map(|w| g.common_neighbor_count(v, w))
                .collect();
            c.sort_unstable();
            (g.degree(v), c)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]).then(a.cmp(&b)));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        if i > 0 && keys[order[i - 1]] == keys[v] {
            classes.last_mut().unwrap().push(v);
        } else {
            classes.push(vec![v]);
        }
    }
    Cells::from_ordered(n, &classes)
}

#[derive(Clone)]
struct Node {
    cells: Cells,
    trace: Vec<u32>,
    /// Start of the cell that was individualized to reach this node.
    via: Option<u32>,
}

impl Node {
    fn child(&self, g: &Graph, v: usize) -> Node {
        let mut cells = self.cells.clone();
        let s = cells.individualize(v);
        let mut trace = vec![s];
        cells.refine(g, &[s], &mut trace);
        Node {
            cells,
            trace,
            via: Some(s),
        }
    }
}

/// Canonical certificate of a graph.
///
/// `bytes` is the vertex count (4 bytes, big-endian) followed by the
/// row-major, bit-packed adjacency matrix of the canonically relabelled
/// graph. `labeling` sends each vertex to its canonical index.
#[derive(Clone)]
pub struct Certificate {
    bytes: Vec<u8>,
    labeling: Perm,
}

impl Certificate {
    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn labeling(&self) -> &Perm {
        &self.labeling
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.bytes)
    }
}

impl PartialEq for Certificate {
    fn eq(&self, other: &Self) -> bool {
        self.bytes == other.bytes
    }
}

impl Eq for Certificate {}

impl PartialOrd for Certificate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Certificate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bytes.cmp(&other.bytes)
    }
}

impl fmt::Debug for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hex = self.to_hex();
        write!(f, "Certificate({}…)", &hex[..hex.len().min(16)])
    }
}

fn certificate_bytes(g: &Graph, lab: &[u32]) -> Vec<u8> {
    let n = g.vertex_count();
    let mut pos = vec![0usize; n];
    for (i, &v) in lab.iter().enumerate() {
        pos[v as usize] = i;
    }
    let mut bytes = Vec::with_capacity(4 + (n * n).div_ceil(8));
    bytes.extend_from_slice(&(n as u32).to_be_bytes());
    let mut bits = vec![0u8; (n * n).div_ceil(8)];
    for (i, &v) in lab.iter().enumerate() {
        for &w in g.neighbor_slice(v as usize) {
            let bit = i * n + pos[w as usize];
            bits[bit / 8] |= 0x80 >> (bit % 8);
        }
    }
    bytes.extend(bits);
    bytes
}

fn leaf_perm(from: &[u32], to: &[u32]) -> Perm {
    let mut images = vec![0u32; from.len()];
    for (a, b) in from.iter().zip(to) {
        images[*a as usize] = *b;
    }
    Perm::from_raw(images)
}

struct Search<'a> {
    g: &'a Graph,
    first_path: Vec<Node>,
    generators: Vec<Perm>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph) -> Self {
        let mut root = Node {
            cells: initial_cells(g),
            trace: Vec::new(),
            via: None,
        };
        let starts = root.cells.starts();
        root.cells.refine(g, &starts, &mut root.trace);
        let mut first_path = vec![root];
        loop {
            let node = first_path.last().unwrap();
            let Some(t) = node.cells.target_cell() else {
                break;
            };
            let v = node.cells.cell(t)[0] as usize;
            let child = node.child(g, v);
            first_path.push(child);
        }
        Search {
            g,
            first_path,
            generators: Vec::new(),
        }
    }

    fn first_leaf(&self) -> &[u32] {
        &self.first_path.last().unwrap().cells.lab
    }

    fn find_generators(&mut self) {
        let n = self.g.vertex_count();
        for level in (0..self.first_path.len().saturating_sub(1)).rev() {
            let node = &self.first_path[level];
            let t = node.cells.target_cell().expect("internal node");
            let cell: Vec<u32> = node.cells.cell(t).to_vec();
            let chosen = cell[0] as usize;
            let mut uf = UnionFind::new(n);
            for g in &self.generators {
                for x in 0..n {
                    uf.union(x, g.apply(x));
                }
            }
            let mut failed_roots: Vec<usize> = Vec::new();
            for &w in &cell[1..] {
                let w = w as usize;
                let rw = uf.find(w);
                if rw == uf.find(chosen) || failed_roots.contains(&rw) {
                    continue;
                }
                let child = self.first_path[level].child(self.g, w);
                let found = if child.trace == self.first_path[level + 1].trace {
                    self.search_equivalent(&child, level + 1)
                } else {
                    None
                };
                match found {
                    Some(perm) => {
                        for x in 0..n {
                            uf.union(x, perm.apply(x));
                        }
                        self.generators.push(perm);
                    }
                    None => failed_roots.push(rw),
                }
            }
        }
    }

    /// Depth-first search below `node` (at `depth`) for a leaf whose
    /// correspondence with the first leaf is an automorphism.
    fn search_equivalent(&self, node: &Node, depth: usize) -> Option<Perm> {
        if node.cells.is_discrete() {
            let perm = leaf_perm(self.first_leaf(), &node.cells.lab);
            return self.g.is_automorphism(&perm).then_some(perm);
        }
        let reference = self.first_path.get(depth + 1)?;
        let t = node.cells.target_cell()?;
        if Some(t) != reference.via {
            return None;
        }
        for &x in node.cells.cell(t) {
            let child = node.child(self.g, x as usize);
            if child.trace == reference.trace {
                if let Some(p) = self.search_equivalent(&child, depth + 1) {
                    return Some(p);
                }
            }
        }
        None
    }
}

struct CanonicalSearch<'a> {
    g: &'a Graph,
    best_traces: Vec<Vec<u32>>,
    best_bytes: Vec<u8>,
    best_lab: Vec<u32>,
}

impl CanonicalSearch<'_> {
    /// Compares the trace path so far with the best leaf's; `Greater` prunes.
    fn compare_prefix(&self, path: &[&[u32]]) -> Ordering {
        for (i, t) in path.iter().enumerate() {
            match self.best_traces.get(i) {
                None => return Ordering::Greater,
                Some(b) => match (*t).cmp(b.as_slice()) {
                    Ordering::Equal => {}
                    other => return other,
                },
            }
        }
        Ordering::Equal
    }

    fn visit(&mut self, node: &Node, path: &mut Vec<Vec<u32>>, group: &PermGroup) {
        let refs: Vec<&[u32]> = path.iter().map(Vec::as_slice).collect();
        let prefix = self.compare_prefix(&refs);
        if prefix == Ordering::Greater {
            return;
        }
        if node.cells.is_discrete() {
            let bytes = certificate_bytes(self.g, &node.cells.lab);
            let better = prefix == Ordering::Less
                || path.len() < self.best_traces.len()
                || bytes < self.best_bytes;
            if better {
                self.best_traces = path.clone();
                self.best_bytes = bytes;
                self.best_lab = node.cells.lab.clone();
            }
            return;
        }
        let t = node.cells.target_cell().expect("non-discrete");
        let cell: Vec<u32> = node.cells.cell(t).to_vec();
        let mut covered = vec![false; self.g.vertex_count()];
        for &x in &cell {
            let x = x as usize;
            if covered[x] {
                continue;
            }
            let child_group = if group.is_trivial() {
                covered[x] = true;
                group.clone()
            } else {
                for y in group.orbit(x).expect("in range") {
                    covered[y] = true;
                }
                group.point_stabilizer(x).expect("in range")
            };
            let child = node.child(self.g, x);
            path.push(child.trace.clone());
            self.visit(&child, path, &child_group);
            path.pop();
        }
    }
}

/// Result of a combined automorphism / canonical-form search.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub group: PermGroup,
    pub certificate: Certificate,
}

/// Runs both passes over one search tree.
pub fn analyze(g: &Graph) -> Analysis {
    let n = g.vertex_count();
    let mut search = Search::new(g);
    search.find_generators();
    for p in &search.generators {
        assert!(g.is_automorphism(p), "search produced a non-automorphism");
    }
    let group = PermGroup::new(n, search.generators.clone()).expect("generators have degree n");

    let first_traces: Vec<Vec<u32>> = search
        .first_path
        .iter()
        .map(|nd| nd.trace.clone())
        .collect();
    let first_lab = search.first_leaf().to_vec();
    let mut canon = CanonicalSearch {
        g,
        best_bytes: certificate_bytes(g, &first_lab),
        best_traces: first_traces,
        best_lab: first_lab,
    };
    let root = search.first_path[0].clone();
    let mut path = vec![root.trace.clone()];
    canon.visit(&root, &mut path, &group);

    let mut images = vec![0usize; n];
    for (i, &v) in canon.best_lab.iter().enumerate() {
        images[v as usize] = i;
    }
    let certificate = Certificate {
        bytes: canon.best_bytes,
        labeling: Perm::from_images(images).expect("leaf is a bijection"),
    };
    Analysis { group, certificate }
}

/// Exact automorphism group, as a generator set with its stabilizer chain.
pub fn automorphism_group(g: &Graph) -> PermGroup {
    let mut search = Search::new(g);
    search.find_generators();
    for p in &search.generators {
        assert!(g.is_automorphism(p), "search produced a non-automorphism");
    }
    PermGroup::new(g.vertex_count(), search.generators).expect("generators have degree n")
}

pub fn canonical_form(g: &Graph) -> Certificate {
    analyze(g).certificate
}

/// An isomorphism `g1 → g2`, if one exists.
pub fn are_isomorphic(g1: &Graph, g2: &Graph) -> Option<Perm> {
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let c1 = canonical_form(g1);
    let c2 = canonical_form(g2);
    if c1.bytes != c2.bytes {
        return None;
    }
    let witness = c1.labeling.then(&c2.labeling.inverse());
    debug_assert!(g1.relabel(&witness).map(|h| h == *g2).unwrap_or(false));
    Some(witness)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refine_path_splits_by_degree() {
        let p = refine(&Graph::path(3), &Partition::unit(3));
        assert_eq!(p.classes(), &[vec![0, 2], vec![1]]);
    }

    #[test]
    fn refine_regular_graph_stays_unit() {
        let g = Graph::petersen();
        let p = refine(&g, &Partition::unit(10));
        assert_eq!(p.len(), 1);
        assert!(is_equitable(&g, &p));
    }

    #[test]
    fn refine_is_equitable() {
        let g = Graph::new(7, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6)]).unwrap();
        let p = refine(&g, &Partition::unit(7));
        assert!(is_equitable(&g, &p));
        assert!(!is_equitable(&g, &Partition::unit(7)));
    }

    #[test]
    fn complete_graph_group() {
        assert_eq!(automorphism_group(&Graph::complete(4)).order(), 24);
        assert_eq!(automorphism_group(&Graph::complete(6)).order(), 720);
    }

    #[test]
    fn small_groups() {
        assert_eq!(automorphism_group(&Graph::cycle(7)).order(), 14);
        assert_eq!(automorphism_group(&Graph::path(4)).order(), 2);
        assert_eq!(automorphism_group(&Graph::empty(4)).order(), 24);
        assert_eq!(automorphism_group(&Graph::petersen()).order(), 120);
        assert_eq!(
            automorphism_group(&Graph::complete_bipartite(3, 3)).order(),
            72
        );
    }

    #[test]
    fn trivial_sizes() {
        assert_eq!(automorphism_group(&Graph::empty(0)).order(), 1);
        assert_eq!(automorphism_group(&Graph::empty(1)).order(), 1);
        assert_eq!(canonical_form(&Graph::empty(1)).bytes().len(), 5);
    }

    #[test]
    fn isomorphism_with_self() {
        let g = Graph::petersen();
        let w = are_isomorphic(&g, &g).unwrap();
        assert!(g.is_automorphism(&w));
    }

    #[test]
    fn non_isomorphic_graphs() {
        assert!(are_isomorphic(&Graph::cycle(6), &Graph::complete_bipartite(3, 3)).is_none());
        let two_triangles =
            Graph::new(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(are_isomorphic(&Graph::cycle(6), &two_triangles).is_none());
    }
}
