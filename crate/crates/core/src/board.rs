//! Chess graphs and their toroidal variants.
//!
//! Square `(i, j)` with `1 <= i <= m`, `1 <= j <= n` is vertex `(i - 1) * n + (j - 1)`.
//! Toroidal boards reduce every move offset modulo `(m, n)`; moves that land
//! on the same square collapse to a single edge and moves that land back on
//! the starting square are dropped.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Coord, Graph, Vertex};
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Piece {
    King,
    Bishop,
    Knight,
    Rook,
    Queen,
}

impl Piece {
    pub const ALL: [Piece; 5] = [Piece::King, Piece::Bishop, Piece::Knight, Piece::Rook, Piece::Queen];

    pub fn name(self) -> &'static str {
        match self {
            Piece::King => "king",
            Piece::Bishop => "bishop",
            Piece::Knight => "knight",
            Piece::Rook => "rook",
            Piece::Queen => "queen",
        }
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Piece {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Piece::ALL
            .into_iter()
            .find(|p| p.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoardSpec {
    pub piece: Piece,
    pub rows: usize,
    pub cols: usize,
    pub toroidal: bool,
}

impl BoardSpec {
    pub fn new(piece: Piece, rows: usize, cols: usize, toroidal: bool) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Domain(format!("board must have at least one row and column, got {rows}x{cols}")));
        }
        Ok(Self { piece, rows, cols, toroidal })
    }

    pub fn planar(piece: Piece, rows: usize, cols: usize) -> Self {
        Self::new(piece, rows, cols, false).expect("nonempty board")
    }

    pub fn torus(piece: Piece, rows: usize, cols: usize) -> Self {
        Self::new(piece, rows, cols, true).expect("nonempty board")
    }

    pub fn vertex_count(&self) -> usize {
        self.rows * self.cols
    }

    /// Vertex index of square `(row, col)` (1-based).
    pub fn index(&self, row: usize, col: usize) -> Vertex {
        (row - 1) * self.cols + (col - 1)
    }

    pub fn coord(&self, v: Vertex) -> Coord {
        Coord::new(v / self.cols + 1, v % self.cols + 1)
    }

    pub fn transposed(&self) -> Self {
        Self { rows: self.cols, cols: self.rows, ..*self }
    }

    /// Vertices of the given 1-based columns.
    pub fn columns(&self, cols: impl IntoIterator<Item = usize>) -> VertexSet {
        let mut s = VertexSet::new(self.vertex_count());
        for c in cols {
            for r in 1..=self.rows {
                s.insert(self.index(r, c));
            }
        }
        s
    }

    fn on_board(&self, row: i64, col: i64) -> bool {
        row >= 1 && col >= 1 && row <= self.rows as i64 && col <= self.cols as i64
    }

    fn wrap(&self, row: i64, col: i64) -> (usize, usize) {
        let m = self.rows as i64;
        let n = self.cols as i64;
        (((row - 1).rem_euclid(m) + 1) as usize, ((col - 1).rem_euclid(n) + 1) as usize)
    }

    /// Every move offset available to the piece, before board clipping or wrapping.
    fn offsets(&self) -> Vec<(i64, i64)> {
        let reach = if self.toroidal { lcm(self.rows, self.cols) as i64 } else { self.rows.max(self.cols) as i64 };
        let mut out = Vec::new();
        let line = |out: &mut Vec<(i64, i64)>, di: i64, dj: i64| {
            for k in 1..=reach {
                out.push((k * di, k * dj));
            }
        };
        match self.piece {
            Piece::King => {
                for di in -1..=1 {
                    for dj in -1..=1 {
                        if (di, dj) != (0, 0) {
                            out.push((di, dj));
                        }
                    }
                }
            }
            Piece::Knight => {
                for (a, b) in [(1, 2), (2, 1)] {
                    for (sa, sb) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                        out.push((sa * a, sb * b));
                    }
                }
            }
            Piece::Bishop => {
                for (di, dj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    line(&mut out, di, dj);
                }
            }
            Piece::Rook => {
                for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                    line(&mut out, di, dj);
                }
            }
            Piece::Queen => {
                for (di, dj) in [(1, 1), (1, -1), (-1, 1), (-1, -1), (1, 0), (-1, 0), (0, 1), (0, -1)] {
                    line(&mut out, di, dj);
                }
            }
        }
        out
    }

    fn check_square(&self, row: usize, col: usize) -> Result<()> {
        if self.on_board(row as i64, col as i64) {
            Ok(())
        } else {
            Err(Error::OffBoard { row: row as i64, col: col as i64, rows: self.rows, cols: self.cols })
        }
    }

    fn neighbor_set(&self, row: usize, col: usize) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for (di, dj) in self.offsets() {
            let (r, c) = (row as i64 + di, col as i64 + dj);
            let target = if self.toroidal {
                self.wrap(r, c)
            } else if self.on_board(r, c) {
                (r as usize, c as usize)
            } else {
                continue;
            };
            if target != (row, col) {
                out.insert(target);
            }
        }
        out
    }
}

impl fmt::Display for BoardSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = if self.toroidal { "toroidal " } else { "" };
        write!(f, "{t}{} {}x{}", self.piece, self.rows, self.cols)
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Deduplicated neighbours of square `(row, col)`, sorted row-major.
pub fn piece_neighbors(spec: &BoardSpec, row: usize, col: usize) -> Result<Vec<Coord>> {
    spec.check_square(row, col)?;
    Ok(spec.neighbor_set(row, col).into_iter().map(|(r, c)| Coord::new(r, c)).collect())
}

/// The chess graph of `spec`: simple, on `rows * cols` vertices, labelled by square.
pub fn generate(spec: &BoardSpec) -> Graph {
    let mut edges = BTreeSet::new();
    for v in 0..spec.vertex_count() {
        let c = spec.coord(v);
        for (r, col) in spec.neighbor_set(c.row, c.col) {
            let w = spec.index(r, col);
            edges.insert((v.min(w), v.max(w)));
        }
    }
    let labels = (0..spec.vertex_count()).map(|v| spec.coord(v)).collect();
    Graph::from_edges(spec.vertex_count(), edges).expect("board moves never loop").with_labels(labels).unwrap()
}

/// Colour classes of a bishop's graph by parity of `i + j`; `white` holds `(1,1)`.
pub fn bishop_components(spec: &BoardSpec) -> Result<(VertexSet, VertexSet)> {
    if spec.piece != Piece::Bishop {
        return Err(Error::Domain(format!("bishop_components needs a bishop board, got {spec}")));
    }
    if spec.rows < 2 || spec.cols < 2 {
        return Err(Error::Domain(format!("bishop board {spec} is edgeless")));
    }
    if spec.toroidal && (spec.rows % 2 == 1 || spec.cols % 2 == 1) {
        return Err(Error::SingleComponent(spec.rows, spec.cols));
    }
    let mut white = VertexSet::new(spec.vertex_count());
    let mut black = VertexSet::new(spec.vertex_count());
    for v in 0..spec.vertex_count() {
        let c = spec.coord(v);
        if (c.row + c.col).is_multiple_of(2) {
            white.insert(v);
        } else {
            black.insert(v);
        }
    }
    Ok((white, black))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(r: usize, c: usize) -> Coord {
        Coord::new(r, c)
    }

    #[test]
    fn king_corner_and_interior_valence() {
        let g = generate(&BoardSpec::planar(Piece::King, 3, 3));
        assert_eq!(g.valence(0).unwrap(), 3);
        assert_eq!(g.valence(4).unwrap(), 8);
    }

    #[test]
    fn toroidal_king_adds_three_moves_on_the_edge_square() {
        // The 4x5 board square at row 1, column 2 has 5 ordinary king moves.
        let planar = BoardSpec::planar(Piece::King, 4, 5);
        let torus = BoardSpec::torus(Piece::King, 4, 5);
        assert_eq!(piece_neighbors(&planar, 1, 2).unwrap().len(), 5);
        assert_eq!(piece_neighbors(&torus, 1, 2).unwrap().len(), 8);
        let g = generate(&torus);
        assert!(g.vertices().all(|v| g.valence(v).unwrap() == 8));
    }

    #[test]
    fn small_boards() {
        let k22 = generate(&BoardSpec::planar(Piece::King, 2, 2));
        assert_eq!(k22.edge_count(), 6);
        let bt35 = generate(&BoardSpec::torus(Piece::Bishop, 3, 5));
        assert_eq!(bt35.edge_count(), 15 * 14 / 2);
    }

    #[test]
    fn knight_from_corner() {
        let spec = BoardSpec::planar(Piece::Knight, 3, 4);
        assert_eq!(piece_neighbors(&spec, 1, 1).unwrap(), vec![sq(2, 3), sq(3, 2)]);
        assert!(matches!(piece_neighbors(&spec, 4, 1), Err(Error::OffBoard { .. })));
        assert!(matches!(piece_neighbors(&spec, 0, 1), Err(Error::OffBoard { .. })));
    }

    #[test]
    fn toroidal_two_row_knight_collapses_coincident_moves() {
        // (+1, +2) and (-1, +2) land on the same square when there are two rows.
        let spec = BoardSpec::torus(Piece::Knight, 2, 6);
        assert_eq!(piece_neighbors(&spec, 1, 3).unwrap(), vec![sq(1, 2), sq(1, 4), sq(2, 1), sq(2, 5)]);
        let g = generate(&spec);
        assert!(g.is_simple());
    }

    #[test]
    fn one_row_boards_are_total() {
        let g = generate(&BoardSpec::planar(Piece::Knight, 1, 6));
        assert_eq!(g.edge_count(), 0);
        let g = generate(&BoardSpec::planar(Piece::Bishop, 1, 6));
        assert_eq!(g.edge_count(), 0);
        let g = generate(&BoardSpec::torus(Piece::Knight, 1, 4));
        assert!(g.is_simple());
        assert!(BoardSpec::new(Piece::King, 0, 3, false).is_err());
    }

    #[test]
    fn bishop_colour_classes() {
        let (w, b) = bishop_components(&BoardSpec::planar(Piece::Bishop, 3, 4)).unwrap();
        assert_eq!((w.len(), b.len()), (6, 6));
        assert!(w.contains(0));
        assert!(bishop_components(&BoardSpec::torus(Piece::Bishop, 4, 6)).is_ok());
        assert!(matches!(bishop_components(&BoardSpec::torus(Piece::Bishop, 3, 6)), Err(Error::SingleComponent(3, 6))));
    }
}
