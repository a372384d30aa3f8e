//! Divisors, firing moves, Dhar's burning algorithm and rank.
//!
//! All operations treat a disconnected graph component by component: burning
//! from `q` never leaves the component of `q`, and reduction only fires sets
//! inside that component.

use std::collections::{HashMap, VecDeque};
use std::ops::{Add, Index, IndexMut, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::vertex_set::VertexSet;

/// Firing steps allowed in one reduction before giving up with a diagnostic.
pub const ITERATION_CAP: u64 = 10_000_000;

/// Integer chip counts, one per vertex. Negative entries are debt.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Divisor {
    chips: Vec<i64>,
}

impl Divisor {
    pub fn new(chips: Vec<i64>) -> Self {
        Self { chips }
    }

    pub fn zero(n: usize) -> Self {
        Self { chips: vec![0; n] }
    }

    /// One chip on every vertex.
    pub fn ones(n: usize) -> Self {
        Self { chips: vec![1; n] }
    }

    pub fn unit(n: usize, v: Vertex) -> Self {
        let mut d = Self::zero(n);
        d.chips[v] = 1;
        d
    }

    /// Checks that the divisor lives on `g`.
    pub fn for_graph(chips: Vec<i64>, g: &Graph) -> Result<Self> {
        let d = Self::new(chips);
        d.check(g)?;
        Ok(d)
    }

    pub fn check(&self, g: &Graph) -> Result<()> {
        if self.chips.len() == g.vertex_count() {
            Ok(())
        } else {
            Err(Error::DivisorLength { expected: g.vertex_count(), got: self.chips.len() })
        }
    }

    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }

    pub fn chips(&self) -> &[i64] {
        &self.chips
    }

    pub fn into_chips(self) -> Vec<i64> {
        self.chips
    }

    pub fn degree(&self) -> i64 {
        self.chips.iter().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.chips.iter().all(|&c| c >= 0)
    }

    fn first_debt(&self) -> Option<Vertex> {
        self.chips.iter().position(|&c| c < 0)
    }

    pub fn require_effective(&self) -> Result<()> {
        match self.first_debt() {
            Some(v) => Err(Error::NotEffective(v)),
            None => Ok(()),
        }
    }

    /// Vertices holding at least one chip.
    pub fn support(&self) -> Vec<Vertex> {
        (0..self.chips.len()).filter(|&v| self.chips[v] > 0).collect()
    }
}

impl Index<Vertex> for Divisor {
    type Output = i64;

    fn index(&self, v: Vertex) -> &i64 {
        &self.chips[v]
    }
}

impl IndexMut<Vertex> for Divisor {
    fn index_mut(&mut self, v: Vertex) -> &mut i64 {
        &mut self.chips[v]
    }
}

impl Add for &Divisor {
    type Output = Divisor;

    fn add(self, rhs: &Divisor) -> Divisor {
        assert_eq!(self.len(), rhs.len(), "divisors on different graphs");
        Divisor::new(self.chips.iter().zip(&rhs.chips).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Divisor {
    type Output = Divisor;

    fn sub(self, rhs: &Divisor) -> Divisor {
        assert_eq!(self.len(), rhs.len(), "divisors on different graphs");
        Divisor::new(self.chips.iter().zip(&rhs.chips).map(|(a, b)| a - b).collect())
    }
}

/// Fire `v` once: it loses its valence, each neighbour gains the multiplicity.
pub fn fire_vertex(g: &Graph, d: &Divisor, v: Vertex) -> Result<Divisor> {
    d.check(g)?;
    g.check_vertex(v)?;
    let mut out = d.clone();
    out[v] -= g.valence(v)? as i64;
    for &(w, m) in g.neighbors(v) {
        out[w] += m as i64;
    }
    Ok(out)
}

/// Fire every vertex of `a` once.
pub fn fire_set(g: &Graph, d: &Divisor, a: &VertexSet) -> Result<Divisor> {
    d.check(g)?;
    if a.universe() != g.vertex_count() {
        return Err(Error::Domain("vertex set universe does not match the graph".into()));
    }
    let mut out = d.clone();
    fire_set_in_place(g, out.chips.as_mut_slice(), a, 1);
    Ok(out)
}

/// Fires `a` `times` times; only edges leaving `a` move chips.
pub(crate) fn fire_set_in_place(g: &Graph, chips: &mut [i64], a: &VertexSet, times: i64) {
    for v in a.iter() {
        for &(w, m) in g.neighbors(v) {
            if !a.contains(w) {
                chips[v] -= times * m as i64;
                chips[w] += times * m as i64;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DharResult {
    pub burned: VertexSet,
    pub unburned: VertexSet,
}

/// Reusable scratch space for repeated burning on one graph.
///
/// The search core calls this millions of times, so nothing here allocates
/// after construction.
pub struct Burner<'g> {
    g: &'g Graph,
    component: Vec<usize>,
    members: Vec<Vec<Vertex>>,
    burned: Vec<bool>,
    burning: Vec<i64>,
    stack: Vec<Vertex>,
    steps: u64,
}

impl<'g> Burner<'g> {
    pub fn new(g: &'g Graph) -> Self {
        let n = g.vertex_count();
        let mut component = vec![0; n];
        let mut members = Vec::new();
        for (i, c) in g.connected_components().into_iter().enumerate() {
            for v in c.iter() {
                component[v] = i;
            }
            members.push(c.to_vec());
        }
        Self {
            g,
            component,
            members,
            burned: vec![false; n],
            burning: vec![0; n],
            stack: Vec::with_capacity(n),
            steps: 0,
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    /// Vertices in the component of `v`, ascending.
    pub fn component_of(&self, v: Vertex) -> &[Vertex] {
        &self.members[self.component[v]]
    }

    /// Burns from `q`, ignoring the chips on `q` itself. Returns whether the
    /// whole component of `q` burned. Afterwards `burning[u]` is the number of
    /// edges from `u` to burned vertices for every unburned `u`.
    fn burn(&mut self, chips: &[i64], q: Vertex) -> bool {
        let comp = &self.members[self.component[q]];
        for &v in comp {
            self.burned[v] = false;
            self.burning[v] = 0;
        }
        self.burned[q] = true;
        self.stack.clear();
        self.stack.push(q);
        let mut count = 1;
        while let Some(v) = self.stack.pop() {
            for &(w, m) in self.g.neighbors(v) {
                if self.burned[w] {
                    continue;
                }
                self.burning[w] += m as i64;
                if self.burning[w] > chips[w] {
                    self.burned[w] = true;
                    count += 1;
                    self.stack.push(w);
                }
            }
        }
        count == comp.len()
    }

    /// Whether `chips` restricted to the component of `q` (and away from `q`)
    /// has no legal set-firing avoiding `q`. Requires chips >= 0 away from `q`.
    pub fn is_reduced(&mut self, chips: &[i64], q: Vertex) -> bool {
        self.burn(chips, q)
    }

    /// Dhar's algorithm on an effective divisor.
    pub fn dhar(&mut self, chips: &[i64], q: Vertex) -> DharResult {
        self.burn(chips, q);
        let n = self.g.vertex_count();
        let mut burned = VertexSet::new(n);
        for v in 0..n {
            if self.component[v] == self.component[q] && self.burned[v] {
                burned.insert(v);
            }
        }
        DharResult { unburned: burned.complement(), burned }
    }

    /// Moves `chips` to its `q`-reduced form in place. Requires every vertex
    /// other than `q` in the component of `q` to be out of debt.
    pub fn reduce(&mut self, chips: &mut [i64], q: Vertex) -> Result<()> {
        self.steps = 0;
        while !self.burn(chips, q) {
            let comp = &self.members[self.component[q]];
            let mut k = i64::MAX;
            for &u in comp {
                if !self.burned[u] && self.burning[u] > 0 {
                    k = k.min(chips[u] / self.burning[u]);
                }
            }
            debug_assert!((1..i64::MAX).contains(&k));
            for &u in comp {
                if self.burned[u] || self.burning[u] == 0 {
                    continue;
                }
                chips[u] -= k * self.burning[u];
                for &(w, m) in self.g.neighbors(u) {
                    if self.burned[w] {
                        chips[w] += k * m as i64;
                    }
                }
            }
            self.steps += 1;
            if self.steps >= ITERATION_CAP {
                return Err(Error::IterationCap(ITERATION_CAP));
            }
        }
        Ok(())
    }

    /// Fires sets of the form "closer to `q` than layer L" until every vertex
    /// other than `q` in its component is out of debt. Only `q` can end in debt.
    pub fn clear_debt_away_from(&mut self, chips: &mut [i64], q: Vertex) {
        let comp = &self.members[self.component[q]];
        let n = self.g.vertex_count();
        let mut dist = vec![usize::MAX; n];
        dist[q] = 0;
        let mut order = Vec::with_capacity(comp.len());
        let mut queue = VecDeque::from([q]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(w, _) in self.g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        let depth = dist[*order.last().unwrap()];
        for layer in (1..=depth).rev() {
            // Firing every vertex at distance < layer once pushes at least one
            // chip onto each vertex of the layer and touches nothing farther out.
            let mut inner = VertexSet::new(n);
            for &v in &order {
                if dist[v] < layer {
                    inner.insert(v);
                }
            }
            loop {
                let mut need = 0i64;
                for &v in &order {
                    if dist[v] == layer && chips[v] < 0 {
                        let gain: i64 = self
                            .g
                            .neighbors(v)
                            .iter()
                            .filter(|&&(w, _)| inner.contains(w))
                            .map(|&(_, m)| m as i64)
                            .sum();
                        need = need.max((-chips[v] + gain - 1) / gain);
                    }
                }
                if need == 0 {
                    break;
                }
                fire_set_in_place(self.g, chips, &inner, need);
            }
        }
    }

    /// `q`-reduced form of an arbitrary divisor on the component of `q`;
    /// other components are left alone. Only `q` may end up negative.
    pub fn reduce_with_debt(&mut self, chips: &mut [i64], q: Vertex) -> Result<()> {
        self.clear_debt_away_from(chips, q);
        self.reduce(chips, q)
    }

    /// Canonical representative of the class of `chips`: every component is
    /// reduced toward its smallest vertex.
    pub fn canonical(&mut self, chips: &mut [i64]) -> Result<()> {
        for c in 0..self.members.len() {
            let q = self.members[c][0];
            self.reduce_with_debt(chips, q)?;
        }
        Ok(())
    }

    /// Whether the divisor is equivalent to an effective one.
    pub fn equivalent_to_effective(&mut self, chips: &[i64]) -> Result<bool> {
        let mut work = chips.to_vec();
        self.canonical(&mut work)?;
        Ok(work.iter().all(|&c| c >= 0))
    }

    /// Positive rank test for an effective divisor. Vertices are tried in the
    /// order given by `hint` first, which lets callers put a recent failure up
    /// front. Returns the first vertex that cannot receive a chip.
    pub fn uncovered_vertex(
        &mut self,
        chips: &[i64],
        scratch: &mut Vec<i64>,
        hint: Option<Vertex>,
    ) -> Result<Option<Vertex>> {
        let n = self.g.vertex_count();
        let mut check = |this: &mut Self, v: Vertex| -> Result<bool> {
            if chips[v] > 0 {
                return Ok(true);
            }
            scratch.clear();
            scratch.extend_from_slice(chips);
            this.reduce(scratch, v)?;
            Ok(scratch[v] > 0)
        };
        if let Some(h) = hint {
            if !check(self, h)? {
                return Ok(Some(h));
            }
        }
        for v in 0..n {
            if Some(v) != hint && !check(self, v)? {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }
}

pub fn dhar(g: &Graph, d: &Divisor, q: Vertex) -> Result<DharResult> {
    d.check(g)?;
    g.check_vertex(q)?;
    d.require_effective()?;
    Ok(Burner::new(g).dhar(d.chips(), q))
}

/// The `q`-reduced divisor equivalent to an effective `d`.
pub fn reduce_toward(g: &Graph, d: &Divisor, q: Vertex) -> Result<Divisor> {
    d.check(g)?;
    g.check_vertex(q)?;
    d.require_effective()?;
    let mut chips = d.chips.clone();
    Burner::new(g).reduce(&mut chips, q)?;
    Ok(Divisor::new(chips))
}

/// The `q`-reduced representative of any divisor; only `q` may be in debt.
pub fn reduce_with_debt(g: &Graph, d: &Divisor, q: Vertex) -> Result<Divisor> {
    d.check(g)?;
    g.check_vertex(q)?;
    let mut chips = d.chips.clone();
    Burner::new(g).reduce_with_debt(&mut chips, q)?;
    Ok(Divisor::new(chips))
}

pub fn has_positive_rank(g: &Graph, d: &Divisor) -> Result<bool> {
    d.check(g)?;
    d.require_effective()?;
    let mut scratch = Vec::with_capacity(d.len());
    Ok(Burner::new(g).uncovered_vertex(d.chips(), &mut scratch, None)?.is_none() && !d.is_empty())
}

pub fn are_equivalent(g: &Graph, a: &Divisor, b: &Divisor) -> Result<bool> {
    a.check(g)?;
    b.check(g)?;
    let mut burner = Burner::new(g);
    let mut x = a.chips.clone();
    let mut y = b.chips.clone();
    burner.canonical(&mut x)?;
    burner.canonical(&mut y)?;
    Ok(x == y)
}

/// Exact rank by the recursion `r(D) = 1 + min_v r(D - v)`, memoised on
/// canonical class representatives.
pub fn rank(g: &Graph, d: &Divisor) -> Result<i64> {
    d.check(g)?;
    if d.degree() < 0 {
        return Ok(-1);
    }
    let mut burner = Burner::new(g);
    let mut memo = HashMap::new();
    let mut chips = d.chips.clone();
    burner.canonical(&mut chips)?;
    rank_rec(&mut burner, chips, &mut memo)
}

fn rank_rec(burner: &mut Burner<'_>, chips: Vec<i64>, memo: &mut HashMap<Vec<i64>, i64>) -> Result<i64> {
    if let Some(&r) = memo.get(&chips) {
        return Ok(r);
    }
    let r = if chips.iter().any(|&c| c < 0) {
        -1
    } else {
        let degree: i64 = chips.iter().sum();
        let mut best = degree;
        for v in 0..chips.len() {
            let mut next = chips.clone();
            next[v] -= 1;
            burner.canonical(&mut next)?;
            best = best.min(1 + rank_rec(burner, next, memo)?);
            if best == 0 {
                break;
            }
        }
        best
    };
    memo.insert(chips, r);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn div(v: &[i64]) -> Divisor {
        Divisor::new(v.to_vec())
    }

    #[test]
    fn fire_vertex_on_k4() {
        let g = complete(4);
        let d = fire_vertex(&g, &div(&[3, 0, 0, 0]), 0).unwrap();
        assert_eq!(d, div(&[0, 1, 1, 1]));
    }

    #[test]
    fn isolated_vertex_firing_is_identity() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let d = div(&[1, 2, 3]);
        assert_eq!(fire_vertex(&g, &d, 2).unwrap(), d);
    }

    #[test]
    fn firing_everything_is_identity() {
        let g = complete_bipartite(2, 3);
        let d = div(&[1, -2, 0, 4, 1]);
        assert_eq!(fire_set(&g, &d, &g.all()).unwrap(), d);
    }

    #[test]
    fn dhar_on_k3() {
        let g = complete(3);
        let r = dhar(&g, &div(&[2, 0, 0]), 0).unwrap();
        assert_eq!(r.burned.len(), 3);
        let r = dhar(&g, &div(&[0, 2, 2]), 0).unwrap();
        assert_eq!(r.unburned.to_vec(), vec![1, 2]);
        assert!(matches!(dhar(&g, &div(&[0, -1, 0]), 0), Err(Error::NotEffective(1))));
    }

    #[test]
    fn reduction_moves_chips_to_q() {
        let g = complete(3);
        assert_eq!(reduce_toward(&g, &div(&[0, 2, 2]), 0).unwrap(), div(&[4, 0, 0]));
        let t = path(4);
        assert_eq!(reduce_toward(&t, &div(&[0, 0, 0, 1]), 0).unwrap(), div(&[1, 0, 0, 0]));
    }

    #[test]
    fn disconnected_reduction_stays_in_component() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(reduce_toward(&g, &div(&[0, 1, 0, 1]), 0).unwrap(), div(&[1, 0, 0, 1]));
        assert!(!has_positive_rank(&g, &div(&[1, 0, 0, 0])).unwrap());
        assert!(has_positive_rank(&g, &div(&[1, 0, 1, 0])).unwrap());
    }

    #[test]
    fn positive_rank_basics() {
        let c = cycle(5);
        assert!(!has_positive_rank(&c, &div(&[1, 0, 0, 0, 0])).unwrap());
        assert!(has_positive_rank(&c, &div(&[1, 1, 0, 0, 0])).unwrap());
        assert!(!has_positive_rank(&c, &Divisor::zero(5)).unwrap());
    }

    #[test]
    fn debt_clearing() {
        let g = cycle(6);
        let d = reduce_with_debt(&g, &div(&[0, 0, -3, 1, 0, 0]), 0).unwrap();
        assert_eq!(d.degree(), -2);
        assert!((1..6).all(|v| d[v] >= 0));
        assert!(are_equivalent(&g, &d, &div(&[0, 0, -3, 1, 0, 0])).unwrap());
    }

    #[test]
    fn ranks_on_small_graphs() {
        assert_eq!(rank(&path(5), &Divisor::unit(5, 2)).unwrap(), 1);
        assert_eq!(rank(&cycle(4), &Divisor::unit(4, 0)).unwrap(), 0);
        assert_eq!(rank(&cycle(4), &div(&[-1, 0, 0, 0])).unwrap(), -1);
        assert_eq!(rank(&cycle(4), &div(&[1, 0, -1, 1])).unwrap(), 0);
        // Canonical divisor of K4 has degree 2g-2 = 4 and rank g-1 = 2.
        assert_eq!(rank(&complete(4), &div(&[1, 1, 1, 1])).unwrap(), 2);
        assert_eq!(rank(&complete(4), &div(&[5, 0, 0, 0])).unwrap(), 2);
    }

    #[test]
    fn equivalence_detects_firing() {
        let g = complete_bipartite(2, 2);
        let d = div(&[3, 1, 0, 2]);
        let e = fire_vertex(&g, &d, 1).unwrap();
        assert!(are_equivalent(&g, &d, &e).unwrap());
        assert!(!are_equivalent(&g, &d, &div(&[2, 2, 0, 2])).unwrap());
    }
}
