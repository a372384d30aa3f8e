//! Scrambles and their orders: the lower-bound certificates for gonality.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::board::{bishop_components, generate, BoardSpec, Piece};
use crate::error::{Error, Result};
use crate::flow::{max_flow, verify_edge_disjoint_paths};
use crate::graph::{Edge, Graph, Vertex};
use crate::vertex_set::VertexSet;

/// A nonempty list of nonempty connected vertex sets of one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scramble {
    vertex_count: usize,
    eggs: Vec<VertexSet>,
}

impl Scramble {
    pub fn new(g: &Graph, eggs: Vec<VertexSet>) -> Result<Self> {
        if eggs.is_empty() {
            return Err(Error::InvalidScramble("a scramble needs at least one egg".into()));
        }
        for (k, e) in eggs.iter().enumerate() {
            if e.universe() != g.vertex_count() {
                return Err(Error::InvalidScramble(format!("egg {k} is over the wrong vertex count")));
            }
            if e.is_empty() {
                return Err(Error::InvalidScramble(format!("egg {k} is empty")));
            }
            if !g.is_connected_set(e) {
                return Err(Error::InvalidScramble(format!("egg {k} is not connected")));
            }
        }
        Ok(Self { vertex_count: g.vertex_count(), eggs })
    }

    pub fn from_lists(g: &Graph, eggs: &[Vec<Vertex>]) -> Result<Self> {
        let sets = eggs
            .iter()
            .enumerate()
            .map(|(k, e)| {
                VertexSet::from_indices(g.vertex_count(), e.iter().copied())
                    .ok_or_else(|| Error::InvalidScramble(format!("egg {k} names a vertex outside the graph")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(g, sets)
    }

    pub fn eggs(&self) -> &[VertexSet] {
        &self.eggs
    }

    pub fn len(&self) -> usize {
        self.eggs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eggs.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn to_lists(&self) -> Vec<Vec<Vertex>> {
        self.eggs.iter().map(VertexSet::to_vec).collect()
    }

    fn check_graph(&self, g: &Graph) -> Result<()> {
        if g.vertex_count() == self.vertex_count {
            Ok(())
        } else {
            Err(Error::InvalidScramble(format!(
                "scramble is on {} vertices, graph has {}",
                self.vertex_count,
                g.vertex_count()
            )))
        }
    }

    /// Unordered pairs of disjoint eggs, the only pairs an egg-cut can separate.
    pub fn separable_pairs(&self) -> Vec<(usize, usize)> {
        let k = self.eggs.len();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .filter(|&(i, j)| self.eggs[i].is_disjoint(&self.eggs[j]))
            .collect()
    }
}

/// Size of a smallest vertex set meeting every egg, with one such set.
pub fn hitting_number(s: &Scramble) -> (usize, VertexSet) {
    let n = s.vertex_count;
    // Eggs containing another egg are hit for free.
    let mut eggs: Vec<&VertexSet> = Vec::new();
    let mut sorted: Vec<&VertexSet> = s.eggs.iter().collect();
    sorted.sort_by_key(|e| e.len());
    for e in sorted {
        if !eggs.iter().any(|f| f.is_subset(e)) {
            eggs.push(e);
        }
    }
    let k = eggs.len();
    let mut hits = vec![VertexSet::new(k); n];
    for (i, e) in eggs.iter().enumerate() {
        for v in e.iter() {
            hits[v].insert(i);
        }
    }

    // Greedy start: repeatedly take the vertex meeting most unhit eggs.
    let mut hit = VertexSet::new(k);
    let mut best: Vec<Vertex> = Vec::new();
    while hit.len() < k {
        let v = (0..n).max_by_key(|&v| (hits[v].difference(&hit).len(), std::cmp::Reverse(v))).unwrap();
        best.push(v);
        hit = hit.union(&hits[v]);
    }

    struct Search<'a> {
        eggs: &'a [&'a VertexSet],
        hits: &'a [VertexSet],
        best: Vec<Vertex>,
    }
    impl Search<'_> {
        /// Pairwise disjoint unhit eggs, each needing its own vertex.
        fn packing(&self, hit: &VertexSet) -> usize {
            let mut covered = VertexSet::new(self.hits.len());
            let mut count = 0;
            for (i, e) in self.eggs.iter().enumerate() {
                if !hit.contains(i) && e.is_disjoint(&covered) {
                    covered = covered.union(e);
                    count += 1;
                }
            }
            count
        }

        fn go(&mut self, hit: &VertexSet, chosen: &mut Vec<Vertex>) {
            if hit.len() == self.eggs.len() {
                if chosen.len() < self.best.len() {
                    self.best = chosen.clone();
                }
                return;
            }
            if chosen.len() + self.packing(hit) >= self.best.len() {
                return;
            }
            let target =
                (0..self.eggs.len()).filter(|&i| !hit.contains(i)).min_by_key(|&i| self.eggs[i].len()).unwrap();
            for v in self.eggs[target].iter() {
                chosen.push(v);
                self.go(&hit.union(&self.hits[v]), chosen);
                chosen.pop();
            }
        }
    }
    let mut search = Search { eggs: &eggs, hits: &hits, best };
    search.go(&VertexSet::new(k), &mut Vec::new());
    let mut witness = VertexSet::new(n);
    for &v in &search.best {
        witness.insert(v);
    }
    (witness.len(), witness)
}

/// The smallest egg-cut, or `None` (infinite) when no two eggs are disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EggCut {
    pub value: Option<u64>,
    /// Indices of the egg pair realizing the minimum.
    pub pair: Option<(usize, usize)>,
    pub witness: Vec<Edge>,
}

pub fn egg_cut_number(g: &Graph, s: &Scramble) -> Result<EggCut> {
    s.check_graph(g)?;
    let pairs = s.separable_pairs();
    let cuts = pairs
        .par_iter()
        .map(|&(i, j)| max_flow(g, &s.eggs[i], &s.eggs[j]).map(|f| (f.value, (i, j), f.cut.witness)))
        .collect::<Result<Vec<_>>>()?;
    Ok(match cuts.into_iter().min_by_key(|c| (c.0, c.1)) {
        Some((value, pair, witness)) => EggCut { value: Some(value), pair: Some(pair), witness },
        None => EggCut { value: None, pair: None, witness: Vec::new() },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScrambleOrderReport {
    pub hitting_number: usize,
    pub hitting_witness: Vec<Vertex>,
    /// `None` stands for an infinite egg-cut number.
    pub egg_cut_number: Option<u64>,
    pub cut_pair: Option<(usize, usize)>,
    pub cut_witness: Vec<Edge>,
    pub order: u64,
}

pub fn scramble_order(g: &Graph, s: &Scramble) -> Result<ScrambleOrderReport> {
    let (h, hw) = hitting_number(s);
    let cut = egg_cut_number(g, s)?;
    let order = cut.value.map_or(h as u64, |e| e.min(h as u64));
    Ok(ScrambleOrderReport {
        hitting_number: h,
        hitting_witness: hw.to_vec(),
        egg_cut_number: cut.value,
        cut_pair: cut.pair,
        cut_witness: cut.witness,
        order,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathBound {
    pub value: u64,
    pub pair: (usize, usize),
    /// Pairwise edge-disjoint paths between the two eggs of `pair`.
    pub paths: Vec<Vec<Vertex>>,
}

/// Minimum over separable egg pairs of the number of edge-disjoint paths
/// joining them. Every path found is independently checked.
pub fn edge_disjoint_path_bound(g: &Graph, s: &Scramble) -> Result<PathBound> {
    s.check_graph(g)?;
    let pairs = s.separable_pairs();
    let found = pairs
        .par_iter()
        .map(|&(i, j)| {
            let f = max_flow(g, &s.eggs[i], &s.eggs[j])?;
            if !verify_edge_disjoint_paths(g, &s.eggs[i], &s.eggs[j], &f.paths) || f.paths.len() as u64 != f.value {
                return Err(Error::Domain(format!("path family for eggs {i}, {j} failed verification")));
            }
            Ok(PathBound { value: f.value, pair: (i, j), paths: f.paths })
        })
        .collect::<Result<Vec<_>>>()?;
    found.into_iter().min_by_key(|b| (b.value, b.pair)).ok_or(Error::NoSeparablePair)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScrambleName {
    Columns,
    BishopGroups,
    KnightTriples,
    ToroidalKnightTriples,
    Uniform2,
    Fig10,
    K33,
    Fig11,
    Fig12,
    SmoothedN35,
}

impl ScrambleName {
    pub const ALL: [ScrambleName; 10] = [
        ScrambleName::Columns,
        ScrambleName::BishopGroups,
        ScrambleName::KnightTriples,
        ScrambleName::ToroidalKnightTriples,
        ScrambleName::Uniform2,
        ScrambleName::Fig10,
        ScrambleName::K33,
        ScrambleName::Fig11,
        ScrambleName::Fig12,
        ScrambleName::SmoothedN35,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScrambleName::Columns => "columns",
            ScrambleName::BishopGroups => "bishop-groups",
            ScrambleName::KnightTriples => "knight-triples",
            ScrambleName::ToroidalKnightTriples => "toroidal-knight-triples",
            ScrambleName::Uniform2 => "uniform2",
            ScrambleName::Fig10 => "fig10",
            ScrambleName::K33 => "k33",
            ScrambleName::Fig11 => "fig11",
            ScrambleName::Fig12 => "fig12",
            ScrambleName::SmoothedN35 => "smoothed-n35",
        }
    }
}

impl fmt::Display for ScrambleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScrambleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScrambleName::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Splits columns `1..=n` into runs of `width`, merging any leftover columns
/// into the last run.
fn column_groups(n: usize, width: usize) -> Vec<Vec<usize>> {
    let full = (n / width).max(1);
    let mut groups = vec![Vec::new(); full];
    for c in 1..=n {
        groups[((c - 1) / width).min(full - 1)].push(c);
    }
    groups
}

fn require(spec: &BoardSpec, name: ScrambleName, ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} scramble needs {what}, got {spec}")))
    }
}

fn squares(spec: &BoardSpec, sq: &[(usize, usize)]) -> Vec<Vertex> {
    sq.iter().map(|&(r, c)| spec.index(r, c)).collect()
}

/// A catalogued scramble together with the graph it lives on. Every name
/// but `smoothed-n35` lives on the chess graph of `spec`.
pub fn catalogue_scramble(name: ScrambleName, spec: &BoardSpec) -> Result<(Graph, Scramble)> {
    let (m, n) = (spec.rows, spec.cols);
    let is = |p: Piece, t: bool, size: Option<(usize, usize)>| {
        spec.piece == p && spec.toroidal == t && size.is_none_or(|s| s == (m, n))
    };
    let g = generate(spec);
    let eggs: Vec<Vec<Vertex>> = match name {
        ScrambleName::Columns => (1..=n).map(|c| spec.columns([c]).to_vec()).collect(),
        ScrambleName::BishopGroups => {
            require(spec, name, is(Piece::Bishop, false, None) && m >= 2 && n >= m, "a bishop board with 2 <= m <= n")?;
            let (white, _) = bishop_components(spec)?;
            column_groups(n, m).into_iter().map(|cols| spec.columns(cols).intersection(&white).to_vec()).collect()
        }
        ScrambleName::KnightTriples | ScrambleName::ToroidalKnightTriples => {
            let toroidal = name == ScrambleName::ToroidalKnightTriples;
            require(
                spec,
                name,
                is(Piece::Knight, toroidal, None) && m >= 4 && n >= 3,
                "a knight board with m >= 4, n >= 3",
            )?;
            column_groups(n, 3).into_iter().map(|cols| spec.columns(cols).to_vec()).collect()
        }
        ScrambleName::Uniform2 => g.edges().iter().map(|e| vec![e.v, e.w]).collect(),
        ScrambleName::Fig10 => {
            require(spec, name, is(Piece::King, false, Some((2, 3))), "the 2x3 king board")?;
            [&[(1, 1), (2, 1)][..], &[(1, 2)], &[(2, 2)], &[(1, 3), (2, 3)]].iter().map(|s| squares(spec, s)).collect()
        }
        ScrambleName::K33 => {
            require(spec, name, is(Piece::King, false, Some((3, 3))), "the 3x3 king board")?;
            [(1, 2), (2, 1), (2, 2), (2, 3), (3, 2)].iter().map(|&sq| squares(spec, &[sq])).collect()
        }
        ScrambleName::Fig11 => {
            require(spec, name, is(Piece::King, false, Some((3, 4))), "the 3x4 king board")?;
            let mut eggs = vec![spec.columns([1]).to_vec(), spec.columns([4]).to_vec()];
            for s in [&[(2, 2)][..], &[(2, 3)], &[(1, 2), (1, 3)], &[(3, 2), (3, 3)]] {
                eggs.push(squares(spec, s));
            }
            eggs
        }
        ScrambleName::Fig12 => {
            require(spec, name, is(Piece::King, false, Some((3, 5))), "the 3x5 king board")?;
            let mut eggs = vec![spec.columns([1]).to_vec(), spec.columns([5]).to_vec()];
            for s in [&[(2, 2)][..], &[(2, 3)], &[(2, 4)], &[(1, 2), (1, 3), (1, 4)], &[(3, 2), (3, 3), (3, 4)]] {
                eggs.push(squares(spec, s));
            }
            eggs
        }
        ScrambleName::SmoothedN35 => {
            require(spec, name, is(Piece::Knight, false, Some((3, 5))), "the 3x5 knight board")?;
            let (smooth, map) = g.smooth_two_valent();
            let index =
                |sq: (usize, usize)| map.iter().position(|&v| v == spec.index(sq.0, sq.1)).expect("kept vertex");
            let eggs: Vec<Vec<Vertex>> =
                SMOOTHED_N35_EGGS.iter().map(|e| e.iter().map(|&sq| index(sq)).collect()).collect();
            let s = Scramble::from_lists(&smooth, &eggs)?;
            return Ok((smooth, s));
        }
    };
    let s = Scramble::from_lists(&g, &eggs)?;
    Ok((g, s))
}

/// Eggs of the order-4 scramble on the smoothed 3x5 knight's graph, by square.
const SMOOTHED_N35_EGGS: [&[(usize, usize)]; 4] = [&[(1, 3)], &[(2, 3)], &[(1, 2), (3, 2)], &[(3, 3)]];
