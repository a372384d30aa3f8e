//! Unit-capacity max flow between two contracted vertex sets.
//!
//! Each edge class `{v, w}` of multiplicity `k` is one residual arc pair with
//! capacity `k` in both directions. Augmentation uses breadth-first search in
//! edge-index order, so results are deterministic.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};
use crate::vertex_set::VertexSet;

/// A minimum edge cut between two vertex sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCut {
    pub size: u64,
    /// Cut edge classes; multiplicities sum to `size`.
    pub witness: Vec<Edge>,
}

#[derive(Debug, Clone)]
pub struct MaxFlow {
    pub value: u64,
    pub cut: EdgeCut,
    /// Edge-disjoint `a`-to-`b` walks, one per unit of flow.
    pub paths: Vec<Vec<Vertex>>,
}

fn check_pair(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    for s in [a, b] {
        if s.universe() != g.vertex_count() {
            return Err(Error::Domain("vertex set universe does not match the graph".into()));
        }
    }
    if !a.is_disjoint(b) {
        return Err(Error::NotSeparable);
    }
    Ok(())
}

pub fn max_flow(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<MaxFlow> {
    check_pair(g, a, b)?;
    let edges = g.edges();
    // flow[e] > 0 means flow from edges[e].v to edges[e].w.
    let mut flow = vec![0i64; edges.len()];
    let mut incident: Vec<Vec<(usize, Vertex)>> = vec![Vec::new(); g.vertex_count()];
    for (i, e) in edges.iter().enumerate() {
        incident[e.v].push((i, e.w));
        incident[e.w].push((i, e.v));
    }
    let residual = |flow: &[i64], e: usize, from: Vertex| -> i64 {
        let cap = edges[e].mult as i64;
        if edges[e].v == from {
            cap - flow[e]
        } else {
            cap + flow[e]
        }
    };

    let mut value = 0u64;
    loop {
        let mut pred: Vec<Option<(usize, Vertex)>> = vec![None; g.vertex_count()];
        let mut seen = a.clone();
        let mut queue: VecDeque<Vertex> = a.iter().collect();
        let mut hit = None;
        'bfs: while let Some(v) = queue.pop_front() {
            for &(e, w) in &incident[v] {
                if seen.contains(w) || residual(&flow, e, v) <= 0 {
                    continue;
                }
                seen.insert(w);
                pred[w] = Some((e, v));
                if b.contains(w) {
                    hit = Some(w);
                    break 'bfs;
                }
                queue.push_back(w);
            }
        }
        let Some(mut w) = hit else {
            let cut_edges: Vec<Edge> =
                edges.iter().filter(|e| seen.contains(e.v) != seen.contains(e.w)).copied().collect();
            let size = cut_edges.iter().map(|e| e.mult as u64).sum();
            debug_assert_eq!(size, value);
            let paths = decompose(g, &flow, a, b);
            return Ok(MaxFlow { value, cut: EdgeCut { size, witness: cut_edges }, paths });
        };
        while let Some((e, v)) = pred[w] {
            if edges[e].v == v {
                flow[e] += 1;
            } else {
                flow[e] -= 1;
            }
            w = v;
            if a.contains(w) {
                break;
            }
        }
        value += 1;
    }
}

/// Splits a flow into unit walks from `a` to `b`, dropping circulations.
fn decompose(g: &Graph, flow: &[i64], a: &VertexSet, b: &VertexSet) -> Vec<Vec<Vertex>> {
    let edges = g.edges();
    let mut remaining: Vec<i64> = flow.to_vec();
    let mut out: Vec<Vec<(usize, Vertex)>> = vec![Vec::new(); g.vertex_count()];
    for (i, e) in edges.iter().enumerate() {
        if flow[i] > 0 {
            out[e.v].push((i, e.w));
        } else if flow[i] < 0 {
            out[e.w].push((i, e.v));
        }
    }
    let take = |remaining: &mut [i64], e: usize, from: Vertex| -> bool {
        let r = &mut remaining[e];
        if edges[e].v == from && *r > 0 {
            *r -= 1;
            true
        } else if edges[e].w == from && *r < 0 {
            *r += 1;
            true
        } else {
            false
        }
    };
    let mut paths = Vec::new();
    for s in a.iter() {
        'walks: loop {
            let mut path = vec![s];
            let mut v = s;
            loop {
                if b.contains(v) {
                    paths.push(path);
                    continue 'walks;
                }
                let next = out[v].iter().copied().find(|&(e, _)| take(&mut remaining, e, v));
                match next {
                    Some((_, w)) => {
                        if let Some(pos) = path.iter().position(|&x| x == w) {
                            path.truncate(pos + 1);
                        } else {
                            path.push(w);
                        }
                        v = w;
                    }
                    None if path.len() == 1 => break 'walks,
                    // Flow conservation makes this unreachable for a valid flow.
                    None => break 'walks,
                }
            }
        }
    }
    // Strip leading vertices in `a` and trailing vertices in `b` beyond the first hit.
    for p in paths.iter_mut() {
        let start = p.iter().rposition(|&v| a.contains(v)).unwrap_or(0);
        p.drain(..start);
    }
    paths
}

/// Minimum number of edges whose removal separates `a` from `b`.
pub fn min_edge_cut(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<EdgeCut> {
    Ok(max_flow(g, a, b)?.cut)
}

/// A maximum family of pairwise edge-disjoint `a`-to-`b` paths.
pub fn edge_disjoint_paths(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<Vec<Vec<Vertex>>> {
    Ok(max_flow(g, a, b)?.paths)
}

/// Checks, without reference to any flow, that `paths` are walks in `g` from
/// `a` to `b` that together use each edge class at most its multiplicity.
pub fn verify_edge_disjoint_paths(g: &Graph, a: &VertexSet, b: &VertexSet, paths: &[Vec<Vertex>]) -> bool {
    let mut used = std::collections::HashMap::<(Vertex, Vertex), u32>::new();
    for p in paths {
        let (Some(&first), Some(&last)) = (p.first(), p.last()) else { return false };
        if !a.contains(first) || !b.contains(last) {
            return false;
        }
        for pair in p.windows(2) {
            let (v, w) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            let count = used.entry((v, w)).or_insert(0);
            *count += 1;
            if *count > g.multiplicity(v, w) {
                return false;
            }
        }
    }
    true
}

/// Checks that deleting `cut` leaves no path from `a` to `b`.
pub fn verify_cut(g: &Graph, a: &VertexSet, b: &VertexSet, cut: &[Edge]) -> bool {
    let removed =
        |v: Vertex, w: Vertex| cut.iter().any(|e| (e.v, e.w) == (v.min(w), v.max(w)) && e.mult >= g.multiplicity(v, w));
    let mut seen = a.clone();
    let mut stack: Vec<Vertex> = a.iter().collect();
    while let Some(v) = stack.pop() {
        if b.contains(v) {
            return false;
        }
        for &(w, _) in g.neighbors(v) {
            if !removed(v, w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    true
}
