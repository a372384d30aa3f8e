//! Explicit positive-rank divisors on chess graphs, each with its predicted
//! degree. Positive rank is always checked by the engine, never assumed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::board::{generate, BoardSpec, Piece};
use crate::chipfiring::{fire_set, has_positive_rank, Divisor};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::invariants::independence_number;
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionName {
    Kings,
    ToroidalKings,
    Bishops,
    Knights,
    KnightsSmall,
    ToroidalKnights,
    ComplementAlpha,
}

impl ConstructionName {
    pub const ALL: [ConstructionName; 7] = [
        ConstructionName::Kings,
        ConstructionName::ToroidalKings,
        ConstructionName::Bishops,
        ConstructionName::Knights,
        ConstructionName::KnightsSmall,
        ConstructionName::ToroidalKnights,
        ConstructionName::ComplementAlpha,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConstructionName::Kings => "kings",
            ConstructionName::ToroidalKings => "toroidal-kings",
            ConstructionName::Bishops => "bishops",
            ConstructionName::Knights => "knights",
            ConstructionName::KnightsSmall => "knights-small",
            ConstructionName::ToroidalKnights => "toroidal-knights",
            ConstructionName::ComplementAlpha => "complement-alpha",
        }
    }
}

impl fmt::Display for ConstructionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConstructionName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConstructionName::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub name: ConstructionName,
    /// The board, when the construction is tied to one.
    pub spec: Option<BoardSpec>,
    pub divisor: Divisor,
    pub predicted_degree: i64,
    /// `None` until [`ConstructionReport::verify`] runs the engine.
    pub verified_positive_rank: Option<bool>,
}

impl ConstructionReport {
    fn new(name: ConstructionName, spec: Option<BoardSpec>, divisor: Divisor, predicted_degree: i64) -> Self {
        Self { name, spec, divisor, predicted_degree, verified_positive_rank: None }
    }

    pub fn degree_matches(&self) -> bool {
        self.divisor.degree() == self.predicted_degree
    }

    /// Runs the positive-rank test on `g`, which must be the graph built from `spec`.
    pub fn verify_on(mut self, g: &Graph) -> Result<Self> {
        self.verified_positive_rank = Some(has_positive_rank(g, &self.divisor)?);
        Ok(self)
    }

    pub fn verify(self) -> Result<Self> {
        let spec = self.spec.ok_or_else(|| Error::Domain("construction has no board; use verify_on".into()))?;
        let g = generate(&spec);
        self.verify_on(&g)
    }
}

/// `T_k = k(k+1)/2` for `k >= 1`, and 0 otherwise.
pub fn triangular(k: i64) -> i64 {
    if k <= 0 {
        0
    } else {
        k * (k + 1) / 2
    }
}

fn place(spec: &BoardSpec, entries: impl IntoIterator<Item = ((usize, usize), i64)>) -> Divisor {
    let mut d = Divisor::zero(spec.vertex_count());
    for ((r, c), x) in entries {
        d[spec.index(r, c)] += x;
    }
    d
}

fn require_oriented(m: usize, n: usize) -> Result<()> {
    if m > n {
        Err(Error::Orientation { rows: m, cols: n })
    } else {
        Ok(())
    }
}

pub fn kings_divisor(m: usize, n: usize) -> Result<ConstructionReport> {
    require_oriented(m, n)?;
    if m < 2 {
        return Err(Error::Domain(format!("kings construction needs m >= 2, got {m}")));
    }
    let spec = BoardSpec::planar(Piece::King, m, n);
    let d = place(&spec, (1..=m).map(|i| ((i, 1), if i == 1 || i == m { 2 } else { 3 })));
    Ok(ConstructionReport::new(ConstructionName::Kings, Some(spec), d, 3 * m as i64 - 2))
}

pub fn toroidal_kings_divisor(m: usize, n: usize) -> Result<ConstructionReport> {
    require_oriented(m, n)?;
    if m < 2 {
        return Err(Error::Domain(format!("toroidal kings construction needs m >= 2, got {m}")));
    }
    let spec = BoardSpec::torus(Piece::King, m, n);
    let per = if m == 2 { 4 } else { 6 };
    let d = place(&spec, (1..=m).map(|i| ((i, 1), per)));
    Ok(ConstructionReport::new(ConstructionName::ToroidalKings, Some(spec), d, per * m as i64))
}

/// Chips on square `(i, j)` of the bishop divisor with `m` rows.
pub fn bishop_chips(m: usize, i: usize, j: usize) -> i64 {
    let (m, i, j) = (m as i64, i as i64, j as i64);
    let j = if j >= m { 2 * (m - 1) - j } else { j };
    if j < 1 {
        return 0;
    }
    triangular(j - i + 1) + triangular(i + j - m)
}

/// `m^2 (m^2 - 1) / 6`, with overflow checks.
pub fn bishop_degree_formula(m: u64) -> Result<u64> {
    let sq = m.checked_mul(m).ok_or(Error::Overflow("bishop degree"))?;
    let prod = sq.checked_mul(sq.saturating_sub(1)).ok_or(Error::Overflow("bishop degree"))?;
    Ok(prod / 6)
}

/// Chips in row `i` of the bishop divisor, as a sum of four tetrahedral terms.
pub fn bishop_row_total(m: i64, i: i64) -> i64 {
    let tet = |k: i64| if k <= 0 { 0 } else { k * (k + 1) * (k + 2) / 6 };
    tet(m - i) + tet(m - i - 1) + tet(i - 1) + tet(i - 2)
}

pub fn bishops_divisor(m: usize, n: usize) -> Result<ConstructionReport> {
    require_oriented(m, n)?;
    if m < 3 {
        return Err(Error::Domain(format!("bishops construction needs m >= 3, got {m}")));
    }
    let spec = BoardSpec::planar(Piece::Bishop, m, n);
    let predicted = bishop_degree_formula(m as u64)? as i64;
    if n < 2 * m - 3 {
        let d = Divisor::ones(spec.vertex_count());
        let deg = d.degree();
        return Ok(ConstructionReport::new(ConstructionName::Bishops, Some(spec), d, deg));
    }
    let mut entries = Vec::new();
    for i in 1..=m {
        for j in 1..=2 * m - 3 {
            entries.push(((i, j), bishop_chips(m, i, j)));
        }
    }
    Ok(ConstructionReport::new(ConstructionName::Bishops, Some(spec), place(&spec, entries), predicted))
}

pub fn knights_divisor(m: usize, n: usize) -> Result<ConstructionReport> {
    require_oriented(m, n)?;
    if m < 3 || n < 4 {
        return Err(Error::Domain(format!("knights construction needs 3 <= m <= n, n >= 4, got {m}x{n}")));
    }
    let spec = BoardSpec::planar(Piece::Knight, m, n);
    let mut entries = Vec::new();
    for i in 1..=m {
        let edge = i == 1 || i == m;
        let outer = if edge { 1 } else { 2 };
        let middle = if edge {
            3
        } else if m == 3 {
            4
        } else if i == 2 || i == m - 1 {
            5
        } else {
            6
        };
        entries.extend([((i, 1), outer), ((i, 2), middle), ((i, 3), outer)]);
    }
    let predicted = if m == 3 { 18 } else { 10 * m as i64 - 12 };
    Ok(ConstructionReport::new(ConstructionName::Knights, Some(spec), place(&spec, entries), predicted))
}

/// Degree of the knights-small construction, which for three rows and odd
/// `n` is `n - 1`.
pub fn knights_small_degree(m: usize, n: usize) -> Result<i64> {
    let n = n as i64;
    match m {
        3 if n >= 4 => Ok(2 * ((n - 1) / 2)),
        4 if n >= 4 => Ok(2 * n - 4),
        5 if n >= 5 => Ok(2 * n + n / 5),
        _ => Err(Error::Domain(format!("knights-small construction undefined for {m}x{n}"))),
    }
}

pub fn knights_small_m_divisor(m: usize, n: usize) -> Result<ConstructionReport> {
    let predicted = knights_small_degree(m, n)?;
    let spec = BoardSpec::planar(Piece::Knight, m, n);
    let top_bottom = |cols: Vec<usize>| cols.into_iter().flat_map(|c| [((1, c), 1), ((3, c), 1)]).collect::<Vec<_>>();
    let entries: Vec<((usize, usize), i64)> = match m {
        3 if n == 4 => vec![((1, 1), 1), ((3, 1), 1)],
        3 if n % 2 == 1 => top_bottom((2..n).step_by(2).collect()),
        3 => top_bottom([3, 4].into_iter().chain((7..=n).step_by(2)).collect()),
        4 => (1..=n)
            .map(|c| {
                let row = if c % 2 == 1 { 2 } else { 3 };
                let x = if c <= 2 || c + 1 >= n { 1 } else { 2 };
                ((row, c), x)
            })
            .collect(),
        _ => {
            let mut e = Vec::new();
            for c in 1..=n {
                e.push(((3, c), 1));
                // Blocks of five columns: four single chips, then a column with both.
                let row = if (c - 1) / 5 % 2 == 0 { 2 } else { 4 };
                e.push(((row, c), 1));
                if c % 5 == 0 {
                    e.push(((6 - row, c), 1));
                }
            }
            e
        }
    };
    Ok(ConstructionReport::new(ConstructionName::KnightsSmall, Some(spec), place(&spec, entries), predicted))
}

const TOROIDAL_KNIGHT_ROW: [i64; 6] = [1, 3, 1, 1, 3, 1];

pub fn toroidal_knights_divisor(m: usize, n: usize) -> Result<ConstructionReport> {
    let spec = BoardSpec::new(Piece::Knight, m, n, true)?;
    if n <= 5 {
        let d = Divisor::ones(spec.vertex_count());
        let deg = d.degree();
        return Ok(ConstructionReport::new(ConstructionName::ToroidalKnights, Some(spec), d, deg));
    }
    let scale = if m == 2 { 1 } else { 2 };
    let mut entries = Vec::new();
    for i in 1..=m {
        for (k, &x) in TOROIDAL_KNIGHT_ROW.iter().enumerate() {
            entries.push(((i, k + 1), scale * x));
        }
    }
    let predicted = if m == 2 { 20 } else { 20 * m as i64 };
    Ok(ConstructionReport::new(ConstructionName::ToroidalKnights, Some(spec), place(&spec, entries), predicted))
}

pub fn complement_of_independent_divisor(g: &Graph) -> Result<ConstructionReport> {
    if let Some(v) = g.isolated_vertex() {
        return Err(Error::IsolatedVertex(v));
    }
    let (alpha, s) = independence_number(g);
    let d = Divisor::new(g.vertices().map(|v| i64::from(!s.contains(v))).collect());
    let predicted = (g.vertex_count() - alpha) as i64;
    Ok(ConstructionReport::new(ConstructionName::ComplementAlpha, None, d, predicted))
}

/// Builds a named construction on an `m x n` board. `complement-alpha` uses
/// `piece` and `toroidal`; the other names fix their own board.
pub fn construct(
    name: ConstructionName,
    piece: Piece,
    m: usize,
    n: usize,
    toroidal: bool,
) -> Result<ConstructionReport> {
    match name {
        ConstructionName::Kings => kings_divisor(m, n),
        ConstructionName::ToroidalKings => toroidal_kings_divisor(m, n),
        ConstructionName::Bishops => bishops_divisor(m, n),
        ConstructionName::Knights => knights_divisor(m, n),
        ConstructionName::KnightsSmall => knights_small_m_divisor(m, n),
        ConstructionName::ToroidalKnights => toroidal_knights_divisor(m, n),
        ConstructionName::ComplementAlpha => {
            let spec = BoardSpec::new(piece, m, n, toroidal)?;
            let mut r = complement_of_independent_divisor(&generate(&spec))?;
            r.spec = Some(spec);
            Ok(r)
        }
    }
}

/// A sequence of set-firings together with the divisor each one should
/// produce, computed by moving chip patterns rather than by firing.
#[derive(Debug, Clone)]
pub struct TranslationSchedule {
    pub steps: Vec<VertexSet>,
    pub expected: Vec<Divisor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleCheck {
    /// Whether every intermediate divisor is effective.
    pub all_effective: bool,
    /// Step index of the first mismatch with the predicted pattern.
    pub first_mismatch: Option<usize>,
    /// Whether some intermediate divisor covers each vertex.
    pub covers_every_vertex: bool,
    pub steps: usize,
}

impl ScheduleCheck {
    pub fn holds(&self) -> bool {
        self.all_effective && self.first_mismatch.is_none()
    }
}

impl TranslationSchedule {
    pub fn check(&self, g: &Graph, start: &Divisor) -> Result<ScheduleCheck> {
        let mut d = start.clone();
        let mut all_effective = d.is_effective();
        let mut covered: Vec<bool> = d.chips().iter().map(|&c| c > 0).collect();
        let mut first_mismatch = None;
        for (k, (set, want)) in self.steps.iter().zip(&self.expected).enumerate() {
            d = fire_set(g, &d, set)?;
            all_effective &= d.is_effective();
            for (v, &c) in d.chips().iter().enumerate() {
                covered[v] |= c > 0;
            }
            if first_mismatch.is_none() && d != *want {
                first_mismatch = Some(k);
            }
        }
        Ok(ScheduleCheck {
            all_effective,
            first_mismatch,
            covers_every_vertex: covered.into_iter().all(|c| c),
            steps: self.steps.len(),
        })
    }
}

/// Moves every chip in a column range `dc` columns over; `None` if a chip
/// would leave a planar board.
fn shift_columns(spec: &BoardSpec, d: &Divisor, cols: std::ops::RangeInclusive<usize>, dc: i64) -> Option<Divisor> {
    let mut out = d.clone();
    for v in 0..spec.vertex_count() {
        if cols.contains(&spec.coord(v).col) {
            out[v] = 0;
        }
    }
    for v in 0..spec.vertex_count() {
        let c = spec.coord(v);
        if !cols.contains(&c.col) || d[v] == 0 {
            continue;
        }
        let mut col = c.col as i64 + dc;
        if spec.toroidal {
            col = (col - 1).rem_euclid(spec.cols as i64) + 1;
        } else if col < 1 || col > spec.cols as i64 {
            return None;
        }
        out[spec.index(c.row, col as usize)] += d[v];
    }
    Some(out)
}

/// The column-prefix firing schedule from the proof of positive rank of a
/// construction, run for as long as the translated pattern fits on the board.
pub fn translation_schedule(report: &ConstructionReport) -> Option<TranslationSchedule> {
    let spec = report.spec?;
    let (m, n) = (spec.rows, spec.cols);
    let mut steps = Vec::new();
    let mut expected = Vec::new();
    let mut d = report.divisor.clone();
    match report.name {
        ConstructionName::Kings | ConstructionName::Bishops | ConstructionName::Knights => {
            let (width, first) = match report.name {
                ConstructionName::Kings => (1, 1),
                ConstructionName::Bishops if n >= 2 * m - 3 => (2 * m - 3, m - 1),
                ConstructionName::Knights => (3, 2),
                _ => return None,
            };
            for t in 0.. {
                if width + t + 1 > n {
                    break;
                }
                steps.push(spec.columns(1..=first + t));
                d = shift_columns(&spec, &d, 1..=n, 1)?;
                expected.push(d.clone());
            }
        }
        ConstructionName::ToroidalKnights if n >= 6 => {
            // The two halves of the pattern move apart by one column per step.
            for t in 1.. {
                if 6 + 2 * t > n {
                    break;
                }
                let cols = (3 - t as i64..=4 + t as i64).map(|c| wrap_col(c, n));
                steps.push(spec.columns(cols));
                expected.push(toroidal_knight_spread(&spec, t));
            }
        }
        _ => return None,
    }
    if steps.is_empty() {
        None
    } else {
        Some(TranslationSchedule { steps, expected })
    }
}

fn wrap_col(c: i64, n: usize) -> usize {
    ((c - 1).rem_euclid(n as i64) + 1) as usize
}

/// The toroidal knight pattern after its halves have moved `t` columns apart.
fn toroidal_knight_spread(spec: &BoardSpec, t: usize) -> Divisor {
    let scale = if spec.rows == 2 { 1 } else { 2 };
    let n = spec.cols;
    let mut entries = Vec::new();
    for i in 1..=spec.rows {
        for (k, &x) in TOROIDAL_KNIGHT_ROW.iter().enumerate() {
            let c = k as i64 + 1;
            let c = if k < 3 { c - t as i64 } else { c + t as i64 };
            entries.push(((i, wrap_col(c, n)), scale * x));
        }
    }
    place(spec, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangular_numbers() {
        assert_eq!((-2..=4).map(triangular).collect::<Vec<_>>(), vec![0, 0, 0, 1, 3, 6, 10]);
    }

    #[test]
    fn bishop_chip_example() {
        assert_eq!(bishop_chips(5, 2, 4), 7);
        assert_eq!(bishops_divisor(3, 5).unwrap().divisor.degree(), 12);
        assert_eq!(bishops_divisor(4, 6).unwrap().divisor.degree(), 40);
        assert_eq!(bishops_divisor(5, 9).unwrap().divisor.degree(), 100);
    }

    #[test]
    fn bishop_row_sums_give_the_degree() {
        for m in 3..=30i64 {
            let total: i64 = (1..=m).map(|i| bishop_row_total(m, i)).sum();
            assert_eq!(total as u64, bishop_degree_formula(m as u64).unwrap(), "m = {m}");
            if m <= 12 {
                let direct: i64 = (1..=m as usize)
                    .flat_map(|i| (1..=2 * m as usize - 3).map(move |j| bishop_chips(m as usize, i, j)))
                    .sum();
                assert_eq!(direct, total);
            }
        }
        assert!(bishop_degree_formula(1 << 20).is_err());
    }

    #[test]
    fn degrees_match_predictions() {
        for m in 2..=6 {
            assert!(kings_divisor(m, 8).unwrap().degree_matches());
            assert!(toroidal_kings_divisor(m, 8).unwrap().degree_matches());
        }
        for m in 3..=6 {
            assert!(knights_divisor(m, 8).unwrap().degree_matches());
        }
        for (m, n) in [(3, 4), (3, 5), (3, 6), (3, 9), (3, 10), (4, 6), (4, 9), (5, 10), (5, 13)] {
            assert!(knights_small_m_divisor(m, n).unwrap().degree_matches(), "{m}x{n}");
        }
        assert_eq!(toroidal_knights_divisor(2, 8).unwrap().divisor.degree(), 20);
        assert_eq!(toroidal_knights_divisor(3, 7).unwrap().divisor.degree(), 60);
        assert!(matches!(kings_divisor(5, 3), Err(Error::Orientation { rows: 5, cols: 3 })));
    }

    #[test]
    fn names_round_trip() {
        for c in ConstructionName::ALL {
            assert_eq!(c.as_str().parse::<ConstructionName>().unwrap(), c);
        }
        assert!("queens".parse::<ConstructionName>().is_err());
    }

    fn verified(r: ConstructionReport) -> bool {
        r.verify().unwrap().verified_positive_rank == Some(true)
    }

    #[test]
    fn engine_confirms_small_constructions() {
        for (m, n) in [(2, 2), (2, 5), (3, 3), (3, 6), (4, 5)] {
            assert!(verified(kings_divisor(m, n).unwrap()), "kings {m}x{n}");
            assert!(verified(toroidal_kings_divisor(m, n).unwrap()), "toroidal kings {m}x{n}");
        }
        for (m, n) in [(3, 3), (3, 6), (4, 4), (4, 7), (5, 9)] {
            assert!(verified(bishops_divisor(m, n).unwrap()), "bishops {m}x{n}");
        }
        for (m, n) in [(3, 4), (3, 7), (4, 6), (5, 8)] {
            assert!(verified(knights_divisor(m, n).unwrap()), "knights {m}x{n}");
        }
        for (m, n) in [(3, 4), (3, 5), (3, 6), (3, 7), (3, 8), (3, 9), (4, 4), (4, 7), (4, 8), (5, 5), (5, 9), (5, 11)]
        {
            assert!(verified(knights_small_m_divisor(m, n).unwrap()), "knights-small {m}x{n}");
        }
        for (m, n) in [(2, 4), (2, 6), (2, 8), (3, 7), (4, 9)] {
            assert!(verified(toroidal_knights_divisor(m, n).unwrap()), "toroidal knights {m}x{n}");
        }
    }

    #[test]
    fn complement_of_independent_set() {
        let g = generate(&BoardSpec::planar(Piece::King, 3, 3));
        let r = complement_of_independent_divisor(&g).unwrap();
        assert_eq!(r.predicted_degree, 5);
        assert!(r.degree_matches());
        assert_eq!(r.verify_on(&g).unwrap().verified_positive_rank, Some(true));
        let isolated = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(matches!(complement_of_independent_divisor(&isolated), Err(Error::IsolatedVertex(2))));
    }

    #[test]
    fn schedules_translate_the_pattern() {
        let reports = [
            kings_divisor(3, 6).unwrap(),
            bishops_divisor(4, 9).unwrap(),
            knights_divisor(4, 8).unwrap(),
            toroidal_knights_divisor(2, 12).unwrap(),
            toroidal_knights_divisor(3, 11).unwrap(),
        ];
        for r in reports {
            let g = generate(&r.spec.unwrap());
            let sched = translation_schedule(&r).unwrap();
            let check = sched.check(&g, &r.divisor).unwrap();
            assert!(check.holds(), "{}: {check:?}", r.name);
            assert!(check.steps > 0);
        }
        let r = kings_divisor(3, 6).unwrap();
        let check = translation_schedule(&r).unwrap().check(&generate(&r.spec.unwrap()), &r.divisor).unwrap();
        assert!(check.covers_every_vertex);
    }
}
