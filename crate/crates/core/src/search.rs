//! Exact gonality by exhaustive search over divisor classes.
//!
//! On a connected graph every class of effective divisors has exactly one
//! `q0`-reduced representative, and a positive-rank `q0`-reduced divisor has
//! a chip on `q0`. So degree `d` is feasible iff some superstable
//! configuration `c` away from `q0` with `|c| <= d - 1` makes
//! `c + (d - |c|) q0` a positive-rank divisor. Superstable configurations are
//! closed under lowering entries, which is what the generator prunes on.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chipfiring::{has_positive_rank, Burner, Divisor};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::invariants::independence_number;

#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    /// Largest degree tried on each component. Defaults to `|C| - alpha(C)`
    /// on simple components.
    pub budget: Option<u64>,
    /// Base vertex for the component containing it; other components use
    /// their smallest vertex.
    pub q0: Option<Vertex>,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Skip degrees below this value on every component without proving them
    /// infeasible. The certificate records that it relied on this.
    pub assume_lower_bound: Option<u64>,
    pub deadline: Option<Instant>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentGonality {
    pub vertices: Vec<Vertex>,
    pub gonality: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GonalityCertificate {
    pub gonality: u64,
    pub witness: Divisor,
    pub per_component: Vec<ComponentGonality>,
    /// Degrees below this were skipped on request, not refuted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assumed_lower_bound: Option<u64>,
    pub candidates_checked: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    Budget,
    Deadline,
}

/// A search that stopped before finding a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedResult {
    /// Every degree below this is proven infeasible (up to any assumed bound).
    pub lower_bound: u64,
    pub upper_bound: Option<u64>,
    pub reason: StopReason,
    pub candidates_checked: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Exact(GonalityCertificate),
    Bounded(BoundedResult),
}

impl SearchOutcome {
    pub fn exact(&self) -> Option<u64> {
        match self {
            SearchOutcome::Exact(c) => Some(c.gonality),
            SearchOutcome::Bounded(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&GonalityCertificate> {
        match self {
            SearchOutcome::Exact(c) => Some(c),
            SearchOutcome::Bounded(_) => None,
        }
    }
}

pub fn verify_gonality_le(g: &Graph, d: &Divisor) -> Result<bool> {
    has_positive_rank(g, d)
}

/// Calls `f` with every effective `q0`-reduced divisor of the given degree,
/// in lexicographic order of the chips away from `q0`.
pub fn for_each_reduced_divisor<F>(g: &Graph, q0: Vertex, degree: u64, mut f: F) -> Result<()>
where
    F: FnMut(&[i64]) -> ControlFlow<()>,
{
    g.check_vertex(q0)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut gen = Generator::new(g, q0, degree as i64);
    let _ = gen.run(0, &mut |chips: &mut [i64], used| {
        chips[q0] = degree as i64 - used;
        let flow = f(chips);
        chips[q0] = 0;
        flow
    });
    Ok(())
}

pub fn enumerate_reduced_divisors(g: &Graph, q0: Vertex, degree: u64) -> Result<Vec<Divisor>> {
    let mut out = Vec::new();
    for_each_reduced_divisor(g, q0, degree, |c| {
        out.push(Divisor::new(c.to_vec()));
        ControlFlow::Continue(())
    })?;
    // Lex order over the non-base vertices is not lex order of the whole
    // vector once the base chips are filled in, so sort.
    out.sort();
    Ok(out)
}

/// Depth-first generator of superstable configurations away from `q0` with
/// total at most `limit`.
struct Generator<'g> {
    g: &'g Graph,
    q0: Vertex,
    order: Vec<Vertex>,
    limit: i64,
    chips: Vec<i64>,
    burner: Burner<'g>,
}

impl<'g> Generator<'g> {
    fn new(g: &'g Graph, q0: Vertex, limit: i64) -> Self {
        let order = g.vertices().filter(|&v| v != q0).collect();
        Self { g, q0, order, limit, chips: vec![0; g.vertex_count()], burner: Burner::new(g) }
    }

    /// Visits completions of the current prefix `order[..depth]`.
    fn run<F>(&mut self, depth: usize, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&mut [i64], i64) -> ControlFlow<()>,
    {
        let used: i64 = self.chips.iter().sum();
        self.extend(depth, used, f)
    }

    fn extend<F>(&mut self, depth: usize, used: i64, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&mut [i64], i64) -> ControlFlow<()>,
    {
        if depth == self.order.len() {
            return f(&mut self.chips, used);
        }
        let v = self.order[depth];
        let cap = (self.g.valences()[v] as i64 - 1).min(self.limit - used);
        let mut x = 0;
        loop {
            self.chips[v] = x;
            if x > 0 && !self.burner.is_reduced(&self.chips, self.q0) {
                break;
            }
            if self.extend(depth + 1, used + x, f).is_break() {
                self.chips[v] = 0;
                return ControlFlow::Break(());
            }
            if x >= cap {
                break;
            }
            x += 1;
        }
        self.chips[v] = 0;
        ControlFlow::Continue(())
    }

    /// All superstable prefixes of the given length, in lex order.
    fn prefixes(&mut self, len: usize) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let full = std::mem::take(&mut self.order);
        self.order = full[..len].to_vec();
        let order = self.order.clone();
        let _ = self.extend(0, 0, &mut |chips: &mut [i64], _| {
            out.push(order.iter().map(|&v| chips[v]).collect());
            ControlFlow::Continue(())
        });
        self.order = full;
        out
    }
}

enum Found {
    Witness(Vec<i64>),
    OutOfTime,
}

struct Shared {
    stop: AtomicBool,
    checked: AtomicU64,
    deadline: Option<Instant>,
}

impl Shared {
    fn expired(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return true;
        }
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.stop.store(true, Ordering::Relaxed);
            return true;
        }
        false
    }
}

const PREFIX_DEPTH: usize = 4;

/// Searches one degree on a connected graph. `Ok(None)` means proven infeasible.
fn search_degree(g: &Graph, q0: Vertex, degree: u64, shared: &Shared) -> Result<Option<Found>> {
    let limit = degree as i64 - 1;
    let mut root = Generator::new(g, q0, limit);
    let depth = PREFIX_DEPTH.min(root.order.len());
    let prefixes = root.prefixes(depth);
    let head: Vec<Vertex> = root.order[..depth].to_vec();
    let result = prefixes.par_iter().find_map_first(|prefix| {
        let mut gen = Generator::new(g, q0, limit);
        for (&v, &x) in head.iter().zip(prefix) {
            gen.chips[v] = x;
        }
        if shared.expired() {
            return Some(Ok(Found::OutOfTime));
        }
        let mut burner = Burner::new(g);
        let mut scratch = Vec::with_capacity(g.vertex_count());
        let mut hint = None;
        let mut since_clock = 0u32;
        let mut found = None;
        let mut error = None;
        let _ = gen.run(depth, &mut |chips: &mut [i64], used| {
            since_clock += 1;
            if since_clock >= 256 {
                since_clock = 0;
                if shared.expired() {
                    found = Some(Found::OutOfTime);
                    return ControlFlow::Break(());
                }
            }
            chips[q0] = degree as i64 - used;
            shared.checked.fetch_add(1, Ordering::Relaxed);
            let outcome = burner.uncovered_vertex(chips, &mut scratch, hint);
            let flow = match outcome {
                Ok(None) => {
                    found = Some(Found::Witness(chips.to_vec()));
                    ControlFlow::Break(())
                }
                Ok(Some(v)) => {
                    hint = Some(v);
                    ControlFlow::Continue(())
                }
                Err(e) => {
                    error = Some(e);
                    ControlFlow::Break(())
                }
            };
            chips[q0] = 0;
            flow
        });
        match (error, found) {
            (Some(e), _) => Some(Err(e)),
            (None, Some(f)) => Some(Ok(f)),
            (None, None) => None,
        }
    });
    result.transpose()
}

/// Degree of the divisor putting `max(1, mult(w, I))` chips on each `w`
/// outside a maximum independent set `I`. Firing everything but one `v` in `I`
/// covers `v`, so that divisor has positive rank; on simple graphs its degree
/// is `|V| - alpha`.
fn independent_set_bound(g: &Graph) -> u64 {
    let (_, indep) = independence_number(g);
    g.vertices()
        .filter(|&w| !indep.contains(w))
        .map(|w| g.neighbors(w).iter().filter(|(v, _)| indep.contains(*v)).map(|&(_, m)| m).max().unwrap_or(1).max(1))
        .map(u64::from)
        .sum()
}

enum ComponentOutcome {
    Exact(u64, Vec<i64>),
    Stopped { proven_below: u64, upper: u64, reason: StopReason },
}

fn search_component(g: &Graph, q0: Vertex, opts: &SearchOptions, shared: &Shared) -> Result<ComponentOutcome> {
    let n = g.vertex_count();
    if n == 1 {
        return Ok(ComponentOutcome::Exact(1, vec![1]));
    }
    let upper = independent_set_bound(g);
    let budget = opts.budget.unwrap_or(upper);
    let start = opts.assume_lower_bound.unwrap_or(1).max(1);
    for degree in start..=budget {
        match search_degree(g, q0, degree, shared)? {
            Some(Found::Witness(chips)) => return Ok(ComponentOutcome::Exact(degree, chips)),
            Some(Found::OutOfTime) => {
                return Ok(ComponentOutcome::Stopped { proven_below: degree, upper, reason: StopReason::Deadline })
            }
            None => {}
        }
    }
    Ok(ComponentOutcome::Stopped { proven_below: budget.max(start - 1) + 1, upper, reason: StopReason::Budget })
}

/// Gonality of `g`, summed over connected components.
pub fn gonality(g: &Graph, opts: &SearchOptions) -> Result<SearchOutcome> {
    if g.vertex_count() == 0 {
        return Err(Error::Domain("gonality of the empty graph is undefined".into()));
    }
    if let Some(q) = opts.q0 {
        g.check_vertex(q)?;
    }
    let run = || gonality_inner(g, opts);
    match opts.jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

fn gonality_inner(g: &Graph, opts: &SearchOptions) -> Result<SearchOutcome> {
    let shared = Shared { stop: AtomicBool::new(false), checked: AtomicU64::new(0), deadline: opts.deadline };
    let mut witness = Divisor::zero(g.vertex_count());
    let mut per_component = Vec::new();
    let mut lower = 0;
    let mut upper = 0;
    let mut stopped = None;
    for comp in g.connected_components() {
        let (sub, map) = g.induced_subgraph(&comp)?;
        let q0 = opts.q0.and_then(|q| map.iter().position(|&v| v == q)).unwrap_or(0);
        match search_component(&sub, q0, opts, &shared)? {
            ComponentOutcome::Exact(k, chips) => {
                for (i, &c) in chips.iter().enumerate() {
                    witness[map[i]] = c;
                }
                per_component.push(ComponentGonality { vertices: map, gonality: k });
                lower += k;
                upper += k;
            }
            ComponentOutcome::Stopped { proven_below, upper: u, reason } => {
                lower += proven_below;
                upper += u;
                stopped.get_or_insert(reason);
                if reason == StopReason::Deadline {
                    shared.stop.store(true, Ordering::Relaxed);
                }
            }
        }
    }
    let candidates_checked = shared.checked.load(Ordering::Relaxed);
    Ok(match stopped {
        None => SearchOutcome::Exact(GonalityCertificate {
            gonality: lower,
            witness,
            per_component,
            assumed_lower_bound: opts.assume_lower_bound.filter(|&b| b > 1),
            candidates_checked,
        }),
        Some(reason) => SearchOutcome::Bounded(BoundedResult {
            lower_bound: lower,
            upper_bound: Some(upper),
            reason,
            candidates_checked,
        }),
    })
}

/// Gonality with default options; errors if the search has to stop.
pub fn exact_gonality(g: &Graph) -> Result<GonalityCertificate> {
    match gonality(g, &SearchOptions::default())? {
        SearchOutcome::Exact(c) => Ok(c),
        SearchOutcome::Bounded(b) => {
            Err(Error::Domain(format!("search stopped ({:?}) with gonality >= {}", b.reason, b.lower_bound)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chipfiring::reduce_toward;
    use crate::graph::families::*;

    fn gon(g: &Graph) -> u64 {
        let c = exact_gonality(g).unwrap();
        assert!(has_positive_rank(g, &c.witness).unwrap());
        assert_eq!(c.witness.degree() as u64, c.gonality);
        c.gonality
    }

    #[test]
    fn classic_families() {
        assert_eq!(gon(&path(1)), 1);
        assert_eq!(gon(&path(6)), 1);
        assert_eq!(gon(&tree_from_parents(&[0, 0, 0, 1, 1, 2])), 1);
        for n in 3..=7 {
            assert_eq!(gon(&cycle(n)), 2);
        }
        for n in 2..=6 {
            assert_eq!(gon(&complete(n)), n as u64 - 1);
        }
        for (a, b) in [(1, 3), (2, 2), (2, 4), (3, 3), (3, 4)] {
            assert_eq!(gon(&complete_bipartite(a, b)), a.min(b) as u64);
        }
    }

    #[test]
    fn components_add() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap();
        let c = exact_gonality(&g).unwrap();
        assert_eq!(c.gonality, 2 + 1 + 1);
        assert_eq!(c.per_component.len(), 3);
    }

    /// Brute-force: every effective divisor of the degree that is q0-reduced.
    fn brute_reduced(g: &Graph, q0: Vertex, degree: i64) -> Vec<Divisor> {
        fn rec(n: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if cur.len() == n - 1 {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
                return;
            }
            for x in 0..=left {
                cur.push(x);
                rec(n, left - x, cur, out);
                cur.pop();
            }
        }
        let mut all = Vec::new();
        rec(g.vertex_count(), degree, &mut Vec::new(), &mut all);
        let mut out: Vec<Divisor> =
            all.into_iter().map(Divisor::new).filter(|d| reduce_toward(g, d, q0).unwrap() == *d).collect();
        out.sort();
        out
    }

    #[test]
    fn reduced_enumeration_matches_filtering() {
        assert_eq!(enumerate_reduced_divisors(&path(3), 1, 0).unwrap(), vec![Divisor::zero(3)]);
        let p2 = enumerate_reduced_divisors(&path(2), 0, 1).unwrap();
        assert_eq!(p2, brute_reduced(&path(2), 0, 1));
        assert_eq!(p2.len(), 1);
        assert_eq!(enumerate_reduced_divisors(&cycle(4), 0, 1).unwrap().len(), 4);
        for (g, q0, d) in [(cycle(5), 2, 3), (complete(4), 0, 4), (grid(2, 3), 4, 3), (complete_bipartite(2, 3), 1, 3)]
        {
            assert_eq!(enumerate_reduced_divisors(&g, q0, d).unwrap(), brute_reduced(&g, q0, d as i64));
        }
        assert!(matches!(
            enumerate_reduced_divisors(&Graph::from_edges(2, []).unwrap(), 0, 1),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn budget_and_deadline_stop_honestly() {
        let g = complete(5);
        let out = gonality(&g, &SearchOptions { budget: Some(2), ..Default::default() }).unwrap();
        let SearchOutcome::Bounded(b) = out else { panic!("budget should stop the search") };
        assert_eq!((b.lower_bound, b.reason), (3, StopReason::Budget));
        let out = gonality(&g, &SearchOptions { deadline: Some(Instant::now()), ..Default::default() }).unwrap();
        assert!(matches!(
            out,
            SearchOutcome::Bounded(BoundedResult { reason: StopReason::Deadline, lower_bound: 1, .. })
        ));
    }

    #[test]
    fn base_vertex_does_not_matter() {
        let g = grid(3, 3);
        let a = exact_gonality(&g).unwrap().gonality;
        for q0 in 1..9 {
            let out = gonality(&g, &SearchOptions { q0: Some(q0), ..Default::default() }).unwrap();
            assert_eq!(out.exact(), Some(a));
        }
    }
}
