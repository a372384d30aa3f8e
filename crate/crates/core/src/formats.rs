//! File formats: JSON for every domain value, a plain edge-list text format,
//! and text renderings of divisors on boards.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::board::BoardSpec;
use crate::chipfiring::Divisor;
use crate::error::{Error, Result};
use crate::graph::{Coord, Graph, Vertex};
use crate::scramble::Scramble;

/// On-disk form of a graph: `{"vertices": n, "edges": [[v, w, mult], ...], "labels": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: Vec<(Vertex, Vertex, u32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Coord>>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            vertices: g.vertex_count(),
            edges: g.edges().iter().map(|e| (e.v, e.w, e.mult)).collect(),
            labels: g.labels().map(<[Coord]>::to_vec),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        let g = Graph::from_multiplicities(j.vertices, j.edges)?;
        match j.labels {
            Some(l) => g.with_labels(l),
            None => Ok(g),
        }
    }
}

pub fn graph_to_json(g: &Graph) -> Result<String> {
    Ok(serde_json::to_string_pretty(&GraphJson::from(g))?)
}

pub fn graph_from_json(s: &str) -> Result<Graph> {
    serde_json::from_str::<GraphJson>(s)?.try_into()
}

/// `{"graph": ..., "eggs": [[v, ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScrambleJson {
    pub graph: GraphJson,
    pub eggs: Vec<Vec<Vertex>>,
}

pub fn scramble_to_json(g: &Graph, s: &Scramble) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ScrambleJson { graph: g.into(), eggs: s.to_lists() })?)
}

pub fn scramble_from_json(text: &str) -> Result<(Graph, Scramble)> {
    let j: ScrambleJson = serde_json::from_str(text)?;
    let g: Graph = j.graph.try_into()?;
    let s = Scramble::from_lists(&g, &j.eggs)?;
    Ok((g, s))
}

/// Reads any JSON value, accepting either a bare graph or an object with a
/// `graph` field.
pub fn graph_from_any_json(text: &str) -> Result<Graph> {
    #[derive(Deserialize)]
    struct Wrapped {
        graph: GraphJson,
    }
    match serde_json::from_str::<GraphJson>(text) {
        Ok(g) => g.try_into(),
        Err(first) => match serde_json::from_str::<Wrapped>(text) {
            Ok(w) => w.graph.try_into(),
            Err(_) => Err(first.into()),
        },
    }
}

/// Edge-list text: the first non-comment line is the vertex count, then one
/// `v w [mult]` per line. `#` starts a comment.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, first) = lines.next().ok_or_else(|| Error::Format("edge list is empty".into()))?;
    let n: usize =
        first.parse().map_err(|_| Error::Format(format!("line {ln}: expected a vertex count, got {first:?}")))?;
    let mut edges = Vec::new();
    for (ln, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<u64>().map_err(|_| Error::Format(format!("line {ln}: bad number {s:?}")));
        let (v, w, m) = match fields[..] {
            [v, w] => (num(v)?, num(w)?, 1),
            [v, w, m] => (num(v)?, num(w)?, num(m)?),
            _ => return Err(Error::Format(format!("line {ln}: expected `v w [mult]`"))),
        };
        let m = u32::try_from(m).map_err(|_| Error::Format(format!("line {ln}: multiplicity too large")))?;
        edges.push((v as usize, w as usize, m));
    }
    Graph::from_multiplicities(n, edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{}\n", g.vertex_count());
    for e in g.edges() {
        if e.mult == 1 {
            let _ = writeln!(out, "{} {}", e.v, e.w);
        } else {
            let _ = writeln!(out, "{} {} {}", e.v, e.w, e.mult);
        }
    }
    out
}

/// Chips drawn on the board, one row per line; empty squares show as `.`.
pub fn render_divisor(spec: &BoardSpec, d: &Divisor) -> Result<String> {
    if d.len() != spec.vertex_count() {
        return Err(Error::DivisorLength { expected: spec.vertex_count(), got: d.len() });
    }
    let cells: Vec<String> = d.chips().iter().map(|&c| if c == 0 { ".".into() } else { c.to_string() }).collect();
    let width = cells.iter().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for r in 1..=spec.rows {
        let row: Vec<String> = (1..=spec.cols).map(|c| format!("{:>width$}", cells[spec.index(r, c)])).collect();
        out.push_str(row.join(" ").trim_end());
        out.push('\n');
    }
    Ok(out)
}

/// Marks the vertices of each egg with a letter, `a` for the first egg.
pub fn render_scramble(spec: &BoardSpec, s: &Scramble) -> Result<String> {
    if s.vertex_count() != spec.vertex_count() {
        return Err(Error::Format("scramble does not match the board".into()));
    }
    let mut cells = vec!['.'; spec.vertex_count()];
    for (k, egg) in s.eggs().iter().enumerate() {
        let mark = char::from_digit((k % 26 + 10) as u32, 36).unwrap_or('?');
        for v in egg.iter() {
            cells[v] = if cells[v] == '.' { mark } else { '*' };
        }
    }
    let mut out = String::new();
    for r in 1..=spec.rows {
        let row: String = (1..=spec.cols).map(|c| cells[spec.index(r, c)]).collect();
        out.push_str(&row);
        out.push('\n');
    }
    Ok(out)
}
