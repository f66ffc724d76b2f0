//! Finite simple undirected graphs and vertex partitions.

use std::collections::{BTreeSet, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Perm;

/// A simple undirected graph on vertices `0..vertex_count`.
///
/// Adjacency is kept both as sorted neighbour lists and as one bit-set per
/// vertex; the bit-sets serve the common-neighbour counts in the hot loops.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    bits: Vec<FixedBitSet>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicate edges and out-of-range endpoints.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut bits = vec![FixedBitSet::with_capacity(vertex_count); vertex_count];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::Loop(u));
            }
            if bits[u].contains(v) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            bits[u].insert(v);
            bits[v].insert(u);
        }
        let adj = bits
            .iter()
            .map(|b| b.ones().map(|x| x as u32).collect())
            .collect();
        Ok(Self {
            adj,
            bits,
            edge_count: edges.len(),
        })
    }

    /// The edgeless graph.
    pub fn empty(vertex_count: usize) -> Self {
        Self::new(vertex_count, &[]).expect("no edges")
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&x| x as usize)
    }

    pub(crate) fn neighbor_slice(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.bits[u].contains(v)
    }

    /// The common valency, if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|a| a.len() == d).then_some(d)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.vertex_count() {
            for v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.vertex_count() {
            Err(Error::VertexOutOfRange {
                vertex: v,
                vertex_count: self.vertex_count(),
            })
        } else {
            Ok(())
        }
    }

    pub fn common_neighbors(&self, u: usize, v: usize) -> Result<Vec<usize>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.bits[u].intersection(&self.bits[v]).collect())
    }

    #[inline]
    pub fn common_neighbor_count(&self, u: usize, v: usize) -> usize {
        self.bits[u].intersection_count(&self.bits[v])
    }

    /// Partition by `u ~ v ⇔ u = v or |Γ(u) ∩ Γ(v)| = s`, provided `~` is an
    /// equivalence relation.
    pub fn relation_partition(&self, s: usize) -> Result<Partition> {
        let n = self.vertex_count();
        let related: Vec<Vec<usize>> = (0..n)
            .map(|u| {
                (0..n)
                    .filter(|&v| v == u || self.common_neighbor_count(u, v) == s)
                    .collect()
            })
            .collect();
        for u in 0..n {
            for &v in &related[u] {
                if related[v] != related[u] {
                    return Err(Error::NotAnEquivalence(s));
                }
            }
        }
        let classes: BTreeSet<Vec<usize>> = related.into_iter().collect();
        Partition::from_classes(n, classes.into_iter().collect())
    }

    /// The quotient graph: classes as vertices, adjacent when some edge
    /// crosses between them. Intra-class edges are dropped.
    pub fn quotient(&self, p: &Partition) -> Result<Graph> {
        if p.vertex_count() != self.vertex_count() {
            return Err(Error::InvalidPartition("vertex count mismatch"));
        }
        let mut edges = BTreeSet::new();
        for (u, v) in self.edges() {
            let (a, b) = (p.class_of(u), p.class_of(v));
            if a != b {
                edges.insert((a.min(b), a.max(b)));
            }
        }
        Graph::new(p.len(), &edges.into_iter().collect::<Vec<_>>())
    }

    /// `Some(r)` when every edge joins distinct classes and each endpoint has
    /// exactly `r` neighbours in the other endpoint's class.
    pub fn cover_index(&self, p: &Partition) -> Option<usize> {
        if p.vertex_count() != self.vertex_count() {
            return None;
        }
        let mut r = None;
        for u in 0..self.vertex_count() {
            for v in self.neighbors(u) {
                if p.class_of(u) == p.class_of(v) {
                    return None;
                }
                let count = p
                    .class(p.class_of(v))
                    .iter()
                    .filter(|&&w| self.is_adjacent(u, w))
                    .count();
                match r {
                    None => r = Some(count),
                    Some(r0) if r0 != count => return None,
                    _ => {}
                }
            }
        }
        r
    }

    fn bfs(&self, root: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].unwrap();
            for y in self.neighbors(x) {
                if dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.bfs(0).iter().all(Option::is_some)
    }

    /// Length of a shortest cycle; `None` stands for infinite girth (forests).
    pub fn girth(&self) -> Option<usize> {
        let n = self.vertex_count();
        let mut best: Option<usize> = None;
        for root in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                if best.is_some_and(|b| 2 * dist[x] + 1 >= b) {
                    break;
                }
                for y in self.neighbors(x) {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        let len = dist[x] + dist[y] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for w in self.neighbors(v) {
                if index[w] != usize::MAX && i < index[w] {
                    edges.push((i, index[w]));
                }
            }
        }
        Graph::new(vertices.len(), &edges)
    }

    /// The image graph under `p`: `{u, v}` becomes `{p(u), p(v)}`.
    pub fn relabel(&self, p: &Perm) -> Result<Graph> {
        if p.degree() != self.vertex_count() {
            return Err(Error::DegreeMismatch {
                left: self.vertex_count(),
                right: p.degree(),
            });
        }
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (p.apply(u), p.apply(v)))
            .collect();
        Graph::new(self.vertex_count(), &edges)
    }

    pub fn complement(&self) -> Graph {
        let n = self.vertex_count();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if !self.is_adjacent(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, &edges).expect("valid complement")
    }

    pub fn is_automorphism(&self, p: &Perm) -> bool {
        p.degree() == self.vertex_count()
            && (0..self.vertex_count()).all(|u| {
                let pu = p.apply(u);
                self.adj[u].len() == self.adj[pu].len()
                    && self.adj[u]
                        .iter()
                        .all(|&v| self.is_adjacent(pu, p.apply(v as usize)))
            })
    }

    pub fn to_json_value(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertex_count(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }

    /// Deterministic JSON: `{"vertices":N,"edges":[[u,v],…]}` with sorted edges.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Graph> {
        let g: GraphJson =
            serde_json::from_str(s).map_err(|_| Error::InvalidPartition("malformed graph JSON"))?;
        Graph::try_from(g)
    }

    // Named graphs.

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        Graph::empty(n).complement()
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut edges = Vec::with_capacity(a * b);
        for u in 0..a {
            for v in a..a + b {
                edges.push((u, v));
            }
        }
        Graph::new(a + b, &edges).unwrap()
    }

    /// Kneser graph on the 2-subsets of a 5-set (disjointness).
    pub fn petersen() -> Graph {
        let pairs = two_subsets(5);
        let mut edges = Vec::new();
        for (i, p) in pairs.iter().enumerate() {
            for (j, q) in pairs.iter().enumerate().skip(i + 1) {
                if p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1 {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(pairs.len(), &edges).unwrap()
    }

    pub fn petersen_complement() -> Graph {
        Graph::petersen().complement()
    }

    /// `K_4 □ K_4`: pairs over `Z_4` adjacent when they differ in one coordinate.
    pub fn hamming_2_4() -> Graph {
        Graph::z4_squared_cayley(|dx, dy| (dx == 0) != (dy == 0))
    }

    /// Cayley graph on `Z_4 × Z_4` with connection set `{±(1,0), ±(0,1), ±(1,1)}`.
    pub fn shrikhande() -> Graph {
        Graph::z4_squared_cayley(|dx, dy| {
            matches!(
                (dx, dy),
                (1, 0) | (3, 0) | (0, 1) | (0, 3) | (1, 1) | (3, 3)
            )
        })
    }

    fn z4_squared_cayley(connected: impl Fn(usize, usize) -> bool) -> Graph {
        let mut edges = Vec::new();
        for u in 0..16 {
            for v in u + 1..16 {
                let dx = (v / 4 + 4 - u / 4) % 4;
                let dy = (v % 4 + 4 - u % 4) % 4;
                if connected(dx, dy) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(16, &edges).unwrap()
    }
}

fn two_subsets(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.vertex_count())
            .field("edges", &self.edges())
            .finish()
    }
}

/// Wire form of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(g: GraphJson) -> Result<Graph> {
        let edges: Vec<_> = g.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::new(g.vertices, &edges)
    }
}

/// A partition of `0..vertex_count` into non-empty classes.
///
/// Classes are stored sorted, and ordered by their least element, so two
/// equal partitions compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.classes.serialize(s)
    }
}

impl Partition {
    pub fn from_classes(vertex_count: usize, mut classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut class_of = vec![usize::MAX; vertex_count];
        for class in &mut classes {
            if class.is_empty() {
                return Err(Error::InvalidPartition("empty class"));
            }
            class.sort_unstable();
        }
        classes.sort_unstable_by_key(|c| c[0]);
        for (i, class) in classes.iter().enumerate() {
            for &v in class {
                if v >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        vertex_count,
                    });
                }
                if class_of[v] != usize::MAX {
                    return Err(Error::InvalidPartition("classes overlap"));
                }
                class_of[v] = i;
            }
        }
        if class_of.contains(&usize::MAX) {
            return Err(Error::InvalidPartition("classes do not cover every vertex"));
        }
        Ok(Self { class_of, classes })
    }

    /// Groups vertices by equal label.
    pub fn from_labels<T: Ord>(labels: &[T]) -> Self {
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]).then(a.cmp(&b)));
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (i, &v) in order.iter().enumerate() {
            if i > 0 && labels[order[i - 1]] == labels[v] {
                classes.last_mut().unwrap().push(v);
            } else {
                classes.push(vec![v]);
            }
        }
        Self::from_classes(labels.len(), classes).expect("labels induce a partition")
    }

    /// One class holding every vertex.
    pub fn unit(vertex_count: usize) -> Self {
        Self::from_classes(vertex_count, vec![(0..vertex_count).collect()]).unwrap()
    }

    /// All singletons.
    pub fn discrete(vertex_count: usize) -> Self {
        Self::from_classes(vertex_count, (0..vertex_count).map(|v| vec![v]).collect()).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.class_of.len()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    /// The common class size, if all classes have the same size.
    pub fn uniform_size(&self) -> Option<usize> {
        let s = self.classes.first()?.len();
        self.classes.iter().all(|c| c.len() == s).then_some(s)
    }

    pub fn is_discrete(&self) -> bool {
        self.classes.len() == self.class_of.len()
    }
}
