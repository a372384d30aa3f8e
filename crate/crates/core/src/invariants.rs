//! Independence numbers, the bounds they give on gonality, and the diagonal
//! structure of toroidal bishop's graphs.

use serde::{Deserialize, Serialize};

use crate::board::{gcd, lcm, BoardSpec, Piece};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::vertex_set::VertexSet;

/// Maximum independent set: exact, with a witness.
pub fn independence_number(g: &Graph) -> (usize, VertexSet) {
    let mut witness = VertexSet::new(g.vertex_count());
    for comp in g.connected_components() {
        let (sub, map) = g.induced_subgraph(&comp).expect("components are nonempty");
        let local = match sub.bipartition() {
            Some(sides) => bipartite_mis(&sub, &sides),
            None => Mis::new(&sub).solve(),
        };
        for v in local {
            witness.insert(map[v]);
        }
    }
    (witness.len(), witness)
}

pub fn is_independent(g: &Graph, s: &VertexSet) -> bool {
    s.iter().all(|v| g.neighbors(v).iter().all(|&(w, _)| !s.contains(w)))
}

/// Kőnig: the complement of a minimum vertex cover read off a maximum matching.
fn bipartite_mis(g: &Graph, left: &[bool]) -> Vec<Vertex> {
    let n = g.vertex_count();
    let mut mate: Vec<Option<Vertex>> = vec![None; n];
    fn augment(g: &Graph, v: Vertex, seen: &mut [bool], mate: &mut [Option<Vertex>]) -> bool {
        for &(w, _) in g.neighbors(v) {
            if seen[w] {
                continue;
            }
            seen[w] = true;
            if mate[w].is_none_or(|u| augment(g, u, seen, mate)) {
                mate[w] = Some(v);
                mate[v] = Some(w);
                return true;
            }
        }
        false
    }
    for v in 0..n {
        if left[v] && mate[v].is_none() {
            let mut seen = vec![false; n];
            augment(g, v, &mut seen, &mut mate);
        }
    }
    // Alternating reachability from unmatched left vertices.
    let mut reach = vec![false; n];
    let mut stack: Vec<Vertex> = (0..n).filter(|&v| left[v] && mate[v].is_none()).collect();
    for &v in &stack {
        reach[v] = true;
    }
    while let Some(v) = stack.pop() {
        for &(w, _) in g.neighbors(v) {
            if !reach[w] && mate[v] != Some(w) {
                reach[w] = true;
                if let Some(u) = mate[w] {
                    if !reach[u] {
                        reach[u] = true;
                        stack.push(u);
                    }
                }
            }
        }
    }
    (0..n).filter(|&v| if left[v] { reach[v] } else { !reach[v] }).collect()
}

/// Maximum clique in the complement graph, with a greedy clique-cover bound
/// (each clique of `g` holds at most one vertex of an independent set).
struct Mis {
    n: usize,
    words: usize,
    /// non-neighbours of each vertex, excluding itself
    free: Vec<Vec<u64>>,
    best: Vec<Vertex>,
    current: Vec<Vertex>,
}

impl Mis {
    fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let words = n.div_ceil(64);
        let mut free = vec![vec![0u64; words]; n];
        for (v, row) in free.iter_mut().enumerate() {
            for w in 0..n {
                if w != v && g.multiplicity(v, w) == 0 {
                    row[w / 64] |= 1 << (w % 64);
                }
            }
        }
        Self { n, words, free, best: Vec::new(), current: Vec::new() }
    }

    fn solve(mut self) -> Vec<Vertex> {
        let mut all = vec![0u64; self.words];
        for v in 0..self.n {
            all[v / 64] |= 1 << (v % 64);
        }
        self.expand(all);
        self.best
    }

    fn colour(&self, mut p: Vec<u64>) -> Vec<(Vertex, usize)> {
        let mut out = Vec::new();
        let mut k = 0;
        while p.iter().any(|&w| w != 0) {
            k += 1;
            let mut q = p.clone();
            while let Some(v) = first(&q) {
                q[v / 64] &= !(1 << (v % 64));
                p[v / 64] &= !(1 << (v % 64));
                for (qw, fw) in q.iter_mut().zip(&self.free[v]) {
                    *qw &= !fw;
                }
                out.push((v, k));
            }
        }
        out
    }

    fn expand(&mut self, mut p: Vec<u64>) {
        let order = self.colour(p.clone());
        for &(v, c) in order.iter().rev() {
            if self.current.len() + c <= self.best.len() {
                return;
            }
            self.current.push(v);
            let next: Vec<u64> = p.iter().zip(&self.free[v]).map(|(a, b)| a & b).collect();
            if next.iter().all(|&w| w == 0) {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            p[v / 64] &= !(1 << (v % 64));
        }
    }
}

fn first(words: &[u64]) -> Option<Vertex> {
    words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Independence number of the `m x n` toroidal king's graph, `2 <= m <= n`.
pub fn toroidal_king_alpha_formula(m: usize, n: usize) -> Result<usize> {
    if m < 2 || m > n {
        return Err(Error::Domain(format!("toroidal king formula needs 2 <= m <= n, got {m}x{n}")));
    }
    Ok(if m.is_multiple_of(2) || n.is_multiple_of(2) { (m / 2) * (n / 2) } else { n * (m / 2) / 2 })
}

/// Independence number of the `m x n` toroidal bishop's graph: one square per
/// s-diagonal at most, and the squares `(1, 1 + k)` reach that.
pub fn toroidal_bishop_alpha_formula(m: usize, n: usize) -> Result<usize> {
    if m == 0 || n == 0 {
        return Err(Error::Domain(format!("empty board {m}x{n}")));
    }
    Ok(crate::board::gcd(m, n))
}

/// The closed interval known to contain the independence number of the
/// `m x n` bishop's graph for `m < n`.
pub fn bishop_alpha_interval(m: usize, n: usize) -> Result<(usize, usize)> {
    if m < 2 || m >= n {
        return Err(Error::Domain(format!("bishop interval needs 2 <= m < n, got {m}x{n}")));
    }
    Ok((m + n - 2, m + n - 1))
}

/// `|V| - alpha`, an upper bound on gonality for simple graphs without isolated vertices.
pub fn gonality_upper_bound_alpha(g: &Graph) -> Result<usize> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    if let Some(v) = g.isolated_vertex() {
        return Err(Error::IsolatedVertex(v));
    }
    Ok(g.vertex_count() - independence_number(g).0)
}

/// Exact gonality `|V| - alpha` when every valence is at least `floor(|V|/2) + 1`.
pub fn high_valence_gonality(g: &Graph) -> Result<Option<usize>> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let threshold = (g.vertex_count() / 2 + 1) as u32;
    if g.valences().iter().all(|&v| v >= threshold) {
        Ok(Some(g.vertex_count() - independence_number(g).0))
    } else {
        Ok(None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagonalKind {
    /// right and up: `i + j` constant modulo `gcd(m, n)`
    S,
    /// right and down: `i - j` constant modulo `gcd(m, n)`
    D,
}

/// The s- and d-diagonals of the toroidal bishop's graph. Diagonal `k` of
/// either kind is the one through square `(1, 1 + k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalStructure {
    pub spec: BoardSpec,
    pub s_diagonals: Vec<VertexSet>,
    pub d_diagonals: Vec<VertexSet>,
}

impl DiagonalStructure {
    pub fn length(&self) -> usize {
        lcm(self.spec.rows, self.spec.cols)
    }

    pub fn diagonals(&self, kind: DiagonalKind) -> &[VertexSet] {
        match kind {
            DiagonalKind::S => &self.s_diagonals,
            DiagonalKind::D => &self.d_diagonals,
        }
    }

    /// Parity of `i + j` on the diagonal, 0 for the colour of `(1,1)`.
    /// Only defined when both sides are even, where diagonals are monochromatic.
    pub fn colour(&self, kind: DiagonalKind, k: usize) -> Result<usize> {
        if self.spec.rows % 2 == 1 || self.spec.cols % 2 == 1 {
            return Err(Error::ColourUndefined);
        }
        let v = self.diagonals(kind)[k].first().expect("diagonals are nonempty");
        let c = self.spec.coord(v);
        Ok((c.row + c.col) % 2)
    }
}

pub fn diagonal_structure(m: usize, n: usize) -> Result<DiagonalStructure> {
    if m < 2 || n < 2 {
        return Err(Error::Domain(format!("diagonals need m, n >= 2, got {m}x{n}")));
    }
    let spec = BoardSpec::torus(Piece::Bishop, m, n);
    let g = gcd(m, n);
    let mut s = vec![VertexSet::new(m * n); g];
    let mut d = vec![VertexSet::new(m * n); g];
    for v in 0..m * n {
        let c = spec.coord(v);
        let (i, j) = (c.row as i64, c.col as i64);
        let gi = g as i64;
        d[(j - i).rem_euclid(gi) as usize].insert(v);
        s[(i + j - 2).rem_euclid(gi) as usize].insert(v);
    }
    Ok(DiagonalStructure { spec, s_diagonals: s, d_diagonals: d })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub rows: usize,
    pub cols: usize,
    /// `sizes[s][d]` is the number of squares shared by s-diagonal `s` and d-diagonal `d`.
    pub sizes: Vec<Vec<usize>>,
    pub every_pair_meets: bool,
    /// Whether each s-diagonal meets every d-diagonal of its colour;
    /// `None` unless both sides are even.
    pub same_colour_pairs_meet: Option<bool>,
}

pub fn diagonal_intersections(m: usize, n: usize) -> Result<IntersectionReport> {
    let ds = diagonal_structure(m, n)?;
    let sizes: Vec<Vec<usize>> =
        ds.s_diagonals.iter().map(|s| ds.d_diagonals.iter().map(|d| s.intersection(d).len()).collect()).collect();
    let every_pair_meets = sizes.iter().flatten().all(|&k| k > 0);
    let same_colour_pairs_meet = if m.is_multiple_of(2) && n.is_multiple_of(2) {
        let mut ok = true;
        for (si, row) in sizes.iter().enumerate() {
            for (di, &k) in row.iter().enumerate() {
                if ds.colour(DiagonalKind::S, si)? == ds.colour(DiagonalKind::D, di)? && k == 0 {
                    ok = false;
                }
            }
        }
        Some(ok)
    } else {
        None
    };
    Ok(IntersectionReport { rows: m, cols: n, sizes, every_pair_meets, same_colour_pairs_meet })
}
