//! Finite loopless multigraphs on dense vertex indices.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

pub type Vertex = usize;

/// Board square, 1-based, row first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coord {
    pub row: usize,
    pub col: usize,
}

impl Coord {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

/// An undirected edge class `{v, w}` with `v < w` and its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub v: Vertex,
    pub w: Vertex,
    pub mult: u32,
}

/// Immutable multigraph. Edge multiplicities live in a symmetric adjacency
/// list; `edges` holds each unordered pair once, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    labels: Option<Vec<Coord>>,
    edges: Vec<Edge>,
    adj: Vec<Vec<(Vertex, u32)>>,
    valence: Vec<u32>,
}

impl Graph {
    /// Builds a graph from an edge multiset; repeated pairs add multiplicity.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        Self::from_multiplicities(n, edges.into_iter().map(|(v, w)| (v, w, 1)))
    }

    pub fn from_multiplicities<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex, u32)>,
    {
        let mut mult: BTreeMap<(Vertex, Vertex), u32> = BTreeMap::new();
        for (v, w, m) in edges {
            for x in [v, w] {
                if x >= n {
                    return Err(Error::UnknownVertex { vertex: x, count: n });
                }
            }
            if v == w {
                return Err(Error::Loop(v));
            }
            if m == 0 {
                continue;
            }
            *mult.entry((v.min(w), v.max(w))).or_insert(0) += m;
        }
        let edges: Vec<Edge> = mult.into_iter().map(|((v, w), mult)| Edge { v, w, mult }).collect();
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.v].push((e.w, e.mult));
            adj[e.w].push((e.v, e.mult));
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        let valence = adj.iter().map(|l| l.iter().map(|&(_, m)| m).sum()).collect();
        Ok(Self { n, labels: None, edges, adj, valence })
    }

    pub fn with_labels(mut self, labels: Vec<Coord>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Format(format!("{} labels supplied for {} vertices", labels.len(), self.n)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Number of edges counted with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.edges.iter().map(|e| e.mult as u64).sum()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[Coord]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: Vertex) -> Option<Coord> {
        self.labels.as_ref().map(|l| l[v])
    }

    /// Vertex carrying the given label, if the graph is labelled.
    pub fn vertex_at(&self, c: Coord) -> Option<Vertex> {
        self.labels.as_ref()?.iter().position(|&l| l == c)
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::UnknownVertex { vertex: v, count: self.n })
        }
    }

    /// Neighbours of `v` with edge multiplicities, sorted by neighbour.
    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, u32)] {
        &self.adj[v]
    }

    /// `|E(v, w)|`.
    pub fn multiplicity(&self, v: Vertex, w: Vertex) -> u32 {
        match self.adj[v].binary_search_by_key(&w, |&(x, _)| x) {
            Ok(i) => self.adj[v][i].1,
            Err(_) => 0,
        }
    }

    pub fn valence(&self, v: Vertex) -> Result<u32> {
        self.check_vertex(v)?;
        Ok(self.valence[v])
    }

    #[inline]
    pub fn valences(&self) -> &[u32] {
        &self.valence
    }

    pub fn is_simple(&self) -> bool {
        self.edges.iter().all(|e| e.mult == 1)
    }

    pub fn isolated_vertex(&self) -> Option<Vertex> {
        self.vertices().find(|&v| self.valence[v] == 0)
    }

    /// Connected components ordered by their smallest vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = VertexSet::new(self.n);
            let mut queue = VecDeque::from([s]);
            seen[s] = true;
            while let Some(v) = queue.pop_front() {
                comp.insert(v);
                for &(w, _) in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.connected_components().len() == 1
    }

    /// Whether the subgraph induced by `s` is connected (the empty set is not).
    pub fn is_connected_set(&self, s: &VertexSet) -> bool {
        let Some(start) = s.first() else { return false };
        let mut seen = VertexSet::new(self.n);
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.adj[v] {
                if s.contains(w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == s.len()
    }

    /// Induced subgraph on `s`. The returned map sends new indices to old ones.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<Vertex>)> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        let map: Vec<Vertex> = s.iter().filter(|&v| v < self.n).collect();
        let mut back = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            back[v] = i;
        }
        let edges =
            self.edges.iter().filter(|e| s.contains(e.v) && s.contains(e.w)).map(|e| (back[e.v], back[e.w], e.mult));
        let mut g = Graph::from_multiplicities(map.len(), edges)?;
        if let Some(labels) = &self.labels {
            g.labels = Some(map.iter().map(|&v| labels[v]).collect());
        }
        Ok((g, map))
    }

    /// Number of edges (with multiplicity) with exactly one endpoint in `s`.
    pub fn boundary_size(&self, s: &VertexSet) -> u64 {
        self.edges.iter().filter(|e| s.contains(e.v) != s.contains(e.w)).map(|e| e.mult as u64).sum()
    }

    /// Bipartition by BFS 2-colouring, if one exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let sv = side[v].unwrap();
                for &(w, _) in &self.adj[v] {
                    match side[w] {
                        None => {
                            side[w] = Some(!sv);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == sv => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    /// Edge multiset equality under a vertex map `phi: V(self) -> V(other)`.
    pub fn is_isomorphic_under(&self, other: &Graph, phi: &[Vertex]) -> bool {
        if self.n != other.n || phi.len() != self.n {
            return false;
        }
        let mut seen = vec![false; other.n];
        for &p in phi {
            if p >= other.n || seen[p] {
                return false;
            }
            seen[p] = true;
        }
        self.edges.len() == other.edges.len()
            && self.edges.iter().all(|e| other.multiplicity(phi[e.v], phi[e.w]) == e.mult)
    }

    /// Whether every edge of `self` is an edge of `other` on the same vertex set.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges.iter().all(|e| other.multiplicity(e.v, e.w) >= e.mult)
    }

    /// Replaces every 2-valent vertex whose two edges go to distinct neighbours
    /// by a single edge between those neighbours, until none remain.
    ///
    /// Returns the smoothed graph and, for each of its vertices, the original index.
    #[allow(clippy::needless_range_loop)]
    pub fn smooth_two_valent(&self) -> (Graph, Vec<Vertex>) {
        let mut mult: BTreeMap<(Vertex, Vertex), u32> = self.edges.iter().map(|e| ((e.v, e.w), e.mult)).collect();
        let mut alive = vec![true; self.n];
        loop {
            let mut changed = false;
            for v in 0..self.n {
                if !alive[v] {
                    continue;
                }
                let incident: Vec<(Vertex, u32)> = mult
                    .iter()
                    .filter(|(&(a, b), _)| a == v || b == v)
                    .map(|(&(a, b), &m)| (if a == v { b } else { a }, m))
                    .collect();
                if let [(u, 1), (w, 1)] = incident[..] {
                    mult.remove(&(u.min(v), u.max(v)));
                    mult.remove(&(w.min(v), w.max(v)));
                    *mult.entry((u.min(w), u.max(w))).or_insert(0) += 1;
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let map: Vec<Vertex> = (0..self.n).filter(|&v| alive[v]).collect();
        let mut back = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            back[v] = i;
        }
        let g = Graph::from_multiplicities(map.len(), mult.into_iter().map(|((a, b), m)| (back[a], back[b], m)))
            .expect("smoothing preserves looplessness");
        let g = match &self.labels {
            Some(l) => g.with_labels(map.iter().map(|&v| l[v]).collect()).unwrap(),
            None => g,
        };
        (g, map)
    }
}

/// Small named graph families used throughout the tests and fixtures.
pub mod families {
    use super::*;

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        Graph::from_edges(a + b, (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j)))).unwrap()
    }

    /// The `m x n` grid graph with row-major coordinate labels.
    pub fn grid(m: usize, n: usize) -> Graph {
        let idx = |i: usize, j: usize| i * n + j;
        let mut edges = Vec::new();
        for i in 0..m {
            for j in 0..n {
                if j + 1 < n {
                    edges.push((idx(i, j), idx(i, j + 1)));
                }
                if i + 1 < m {
                    edges.push((idx(i, j), idx(i + 1, j)));
                }
            }
        }
        let labels = (0..m).flat_map(|i| (0..n).map(move |j| Coord::new(i + 1, j + 1))).collect();
        Graph::from_edges(m * n, edges).unwrap().with_labels(labels).unwrap()
    }

    /// A tree given by a parent array (`parents[i]` is the parent of vertex `i + 1`).
    pub fn tree_from_parents(parents: &[Vertex]) -> Graph {
        Graph::from_edges(parents.len() + 1, parents.iter().enumerate().map(|(i, &p)| (i + 1, p))).unwrap()
    }
}
