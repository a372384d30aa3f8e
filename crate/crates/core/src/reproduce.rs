//! The reproduction driver: every catalogued claim about chess graphs,
//! recomputed and compared with the published value.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::board::{bishop_components, gcd, generate, BoardSpec, Piece};
use crate::cache::{cached, Cache};
use crate::chipfiring::{fire_set, reduce_toward, Burner, Divisor};
use crate::constructions::{construct, translation_schedule, ConstructionName};
use crate::error::{Error, Result};
use crate::graph::{families, Graph};
use crate::invariants::{
    diagonal_intersections, diagonal_structure, independence_number, toroidal_bishop_alpha_formula,
    toroidal_king_alpha_formula,
};
use crate::scramble::{
    catalogue_scramble, edge_disjoint_path_bound, egg_cut_number, scramble_order, Scramble, ScrambleName,
};
use crate::search::{gonality, GonalityCertificate, SearchOptions, SearchOutcome};
use crate::treecut::{catalogue_decomposition, column_path_decomposition, width, DecompositionName, TailRule};
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Fast,
    Full,
    Stretch,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Suite::Fast),
            "full" => Ok(Suite::Full),
            "stretch" => Ok(Suite::Stretch),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// A value stated in the literature.
    Published,
    /// A value fixed by an independent brute-force computation.
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Match,
    Mismatch,
    SkippedBudget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproductionRow {
    pub claim: String,
    pub suite: Suite,
    pub expected: i64,
    pub source: Source,
    pub computed: Option<i64>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Wall-clock time spent on the row.
    pub seconds: f64,
}

enum Outcome {
    Value(i64, Option<String>),
    /// The engine refuted the claim without producing a comparable number.
    Refuted(String),
    Skipped(String),
}

struct Ctx<'a> {
    cache: Option<&'a Cache>,
    deadline: Option<Instant>,
}

type Check = Box<dyn Fn(&Ctx) -> Result<Outcome> + Send + Sync>;

pub struct Claim {
    pub id: String,
    pub suite: Suite,
    pub source: Source,
    pub expected: i64,
    check: Check,
}

impl fmt::Debug for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Claim").field("id", &self.id).field("expected", &self.expected).finish()
    }
}

#[derive(Debug, Clone)]
pub struct ReproduceOptions {
    pub cache: Option<Cache>,
    /// Time allowed for each stretch row before it is reported as skipped.
    pub stretch_budget: Duration,
    pub jobs: Option<usize>,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        Self { cache: Cache::from_env(), stretch_budget: Duration::from_secs(600), jobs: None }
    }
}

fn claim(id: impl Into<String>, suite: Suite, expected: i64, check: Check) -> Claim {
    Claim { id: id.into(), suite, source: Source::Published, expected, check }
}

fn value(v: impl TryInto<i64>) -> Result<Outcome> {
    Ok(Outcome::Value(v.try_into().map_err(|_| Error::Overflow("reproduction value"))?, None))
}

/// Exact gonality, through the cache when one is configured.
fn cached_gonality(g: &Graph, ctx: &Ctx) -> Result<Option<GonalityCertificate>> {
    let opts = SearchOptions { deadline: ctx.deadline, ..SearchOptions::default() };
    let lookup = |c: &Cache| c.get::<GonalityCertificate>(&c.key(g, "gonality"));
    if let Some(crate::cache::Lookup::Hit(cert)) = ctx.cache.map(lookup) {
        return Ok(Some(cert));
    }
    match gonality(g, &opts)? {
        SearchOutcome::Exact(cert) => {
            let stored = cached(ctx.cache, g, "gonality", || Ok(cert.clone()))?;
            Ok(Some(stored.value))
        }
        SearchOutcome::Bounded(_) => Ok(None),
    }
}

fn gon_claim(id: String, suite: Suite, expected: i64, build: impl Fn() -> Graph + Send + Sync + 'static) -> Claim {
    claim(
        id,
        suite,
        expected,
        Box::new(move |ctx| {
            let g = build();
            Ok(match cached_gonality(&g, ctx)? {
                Some(c) => Outcome::Value(c.gonality as i64, None),
                None => Outcome::Skipped("search budget exhausted".into()),
            })
        }),
    )
}

fn board(p: Piece, m: usize, n: usize, t: bool) -> BoardSpec {
    BoardSpec::new(p, m, n, t).expect("catalogue boards are nonempty")
}

fn gonality_claims() -> Vec<Claim> {
    use Piece::*;
    let mut out = Vec::new();
    out.push(gon_claim("gon/grid-4x5".into(), Suite::Fast, 4, || families::grid(4, 5)));
    let mut boards: Vec<(Piece, usize, usize, bool, i64)> = vec![
        (King, 2, 2, false, 3),
        (King, 2, 3, false, 4),
        (King, 2, 4, false, 4),
        (King, 2, 5, false, 4),
        (King, 3, 3, false, 5),
        (King, 3, 4, false, 7),
        (Knight, 3, 3, false, 3),
        (Knight, 3, 4, false, 2),
        (Knight, 3, 5, false, 4),
        (Knight, 3, 6, false, 4),
    ];
    boards.extend((3..=6).map(|n| (Knight, 2, n, false, 4)));
    boards.extend((2..=6).map(|n| (Bishop, 2, n, false, 2)));
    for (m, n) in [(2, 2), (2, 3), (3, 3), (2, 4), (3, 4)] {
        boards.push((Bishop, m, n, true, (m * n - gcd(m, n)) as i64));
    }
    boards.extend([(King, 2, 2, true, 3), (King, 2, 3, true, 5), (King, 2, 4, true, 6)]);
    for (p, m, n, t, want) in boards {
        let spec = board(p, m, n, t);
        out.push(gon_claim(format!("gon/{}", tag(&spec)), Suite::Fast, want, move || generate(&spec)));
    }
    for (spec, want) in [(board(King, 4, 4, false), 10), (board(King, 4, 5, false), 10), (board(King, 2, 5, true), 8)] {
        out.push(gon_claim(format!("gon/{}", tag(&spec)), Suite::Stretch, want, move || generate(&spec)));
    }
    out.push(gon_claim("gon/bishop-white-3x10".into(), Suite::Stretch, 6, || {
        let spec = board(Piece::Bishop, 3, 10, false);
        let (white, _) = bishop_components(&spec).expect("bishop board");
        generate(&spec).induced_subgraph(&white).expect("white squares").0
    }));
    out
}

/// Short identifier such as `king-3x4` or `knight-t2x6`.
pub fn tag(spec: &BoardSpec) -> String {
    format!("{}-{}{}x{}", spec.piece, if spec.toroidal { "t" } else { "" }, spec.rows, spec.cols)
}

/// The published degree formula for each construction.
fn published_degree(name: ConstructionName, m: usize, n: usize, alpha_gap: Option<usize>) -> i64 {
    let (m, n) = (m as i64, n as i64);
    match name {
        ConstructionName::Kings => 3 * m - 2,
        ConstructionName::ToroidalKings => {
            if m == 2 {
                8
            } else {
                6 * m
            }
        }
        ConstructionName::Bishops => m * m * (m * m - 1) / 6,
        ConstructionName::Knights => {
            if m == 3 {
                18
            } else {
                10 * m - 12
            }
        }
        ConstructionName::KnightsSmall => match m {
            3 => 2 * ((n - 2) / 2),
            4 => 2 * n - 4,
            _ => 2 * n + n / 5,
        },
        ConstructionName::ToroidalKnights => {
            if m == 2 {
                20
            } else {
                20 * m
            }
        }
        ConstructionName::ComplementAlpha => alpha_gap.expect("alpha gap supplied") as i64,
    }
}

fn construction_claims() -> Vec<Claim> {
    use ConstructionName::*;
    let instances: Vec<(ConstructionName, usize, usize)> = vec![
        (Kings, 2, 5),
        (Kings, 3, 7),
        (Kings, 4, 10),
        (Kings, 5, 13),
        (ToroidalKings, 2, 6),
        (ToroidalKings, 3, 6),
        (ToroidalKings, 4, 8),
        (ToroidalKings, 5, 10),
        (Bishops, 3, 4),
        (Bishops, 4, 6),
        (Bishops, 5, 8),
        (Bishops, 6, 12),
        (Knights, 3, 5),
        (Knights, 4, 8),
        (Knights, 5, 10),
        (Knights, 6, 12),
        (KnightsSmall, 3, 5),
        (KnightsSmall, 3, 6),
        (KnightsSmall, 3, 7),
        (KnightsSmall, 3, 8),
        (KnightsSmall, 4, 6),
        (KnightsSmall, 4, 9),
        (KnightsSmall, 5, 7),
        (KnightsSmall, 5, 12),
        (ToroidalKnights, 2, 8),
        (ToroidalKnights, 2, 12),
        (ToroidalKnights, 3, 7),
        (ToroidalKnights, 4, 10),
        (ToroidalKnights, 5, 10),
    ];
    let mut out = Vec::new();
    for (name, m, n) in instances {
        let expected = published_degree(name, m, n, None);
        out.push(claim(
            format!("construct/{name}-{m}x{n}"),
            Suite::Full,
            expected,
            Box::new(move |_| {
                let r = construct(name, Piece::King, m, n, false)?.verify()?;
                Ok(match r.verified_positive_rank {
                    Some(true) => Outcome::Value(r.divisor.degree(), None),
                    _ => Outcome::Refuted(format!("degree-{} divisor lacks positive rank", r.divisor.degree())),
                })
            }),
        ));
    }
    for (p, m, n) in [(Piece::King, 4, 4), (Piece::Bishop, 3, 5), (Piece::Knight, 4, 4), (Piece::Rook, 3, 4)] {
        let g = generate(&board(p, m, n, false));
        let gap = g.vertex_count() - independence_number(&g).0;
        out.push(claim(
            format!("construct/complement-alpha-{p}-{m}x{n}"),
            Suite::Full,
            published_degree(ComplementAlpha, m, n, Some(gap)),
            Box::new(move |_| {
                let r = construct(ComplementAlpha, p, m, n, false)?.verify()?;
                Ok(match r.verified_positive_rank {
                    Some(true) => Outcome::Value(r.divisor.degree(), None),
                    _ => Outcome::Refuted("complement divisor lacks positive rank".into()),
                })
            }),
        ));
    }
    for (name, m, n) in [
        (Kings, 3, 8),
        (Bishops, 4, 9),
        (Knights, 4, 9),
        (Knights, 3, 7),
        (ToroidalKnights, 2, 12),
        (ToroidalKnights, 3, 12),
    ] {
        out.push(claim(
            format!("translate/{name}-{m}x{n}"),
            Suite::Full,
            1,
            Box::new(move |_| {
                let r = construct(name, Piece::King, m, n, false)?;
                let spec = r.spec.expect("board construction");
                let sched = translation_schedule(&r).ok_or_else(|| Error::Domain("no schedule".into()))?;
                let check = sched.check(&generate(&spec), &r.divisor)?;
                let note = Some(format!("{} steps", check.steps));
                Ok(Outcome::Value(i64::from(check.holds()), note))
            }),
        ));
    }
    out
}

fn order_claim(id: &str, name: ScrambleName, spec: BoardSpec, expected: i64) -> Claim {
    claim(
        format!("scramble/{id}"),
        Suite::Fast,
        expected,
        Box::new(move |_| {
            let (g, s) = catalogue_scramble(name, &spec)?;
            let r = scramble_order(&g, &s)?;
            let note = Some(format!("h = {}, e = {:?}", r.hitting_number, r.egg_cut_number));
            Ok(Outcome::Value(r.order as i64, note))
        }),
    )
}

fn width_claim(id: String, expected: i64, build: impl Fn() -> Result<u64> + Send + Sync + 'static) -> Claim {
    claim(format!("width/{id}"), Suite::Fast, expected, Box::new(move |_| value(build()?)))
}

fn certificate_claims() -> Vec<Claim> {
    use Piece::*;
    let mut out = vec![
        order_claim("fig10", ScrambleName::Fig10, board(King, 2, 3, false), 4),
        order_claim("k33", ScrambleName::K33, board(King, 3, 3, false), 5),
        order_claim("fig11", ScrambleName::Fig11, board(King, 3, 4, false), 6),
        order_claim("fig12", ScrambleName::Fig12, board(King, 3, 5, false), 7),
        order_claim("columns-king-3x7", ScrambleName::Columns, board(King, 3, 7, false), 7),
        order_claim("columns-king-t3x18", ScrambleName::Columns, board(King, 3, 18, true), 18),
        order_claim("knight-triples-4x48", ScrambleName::KnightTriples, board(Knight, 4, 48, false), 16),
        order_claim("knight-triples-5x66", ScrambleName::KnightTriples, board(Knight, 5, 66, false), 22),
        order_claim("uniform2-king-t2x5", ScrambleName::Uniform2, board(King, 2, 5, true), 8),
        order_claim("smoothed-n35", ScrambleName::SmoothedN35, board(Knight, 3, 5, false), 4),
    ];
    for (id, name, spec, expected) in [
        ("paths-knight-triples-4x48", ScrambleName::KnightTriples, board(Knight, 4, 48, false), 16),
        ("paths-toroidal-knight-triples-t5x30", ScrambleName::ToroidalKnightTriples, board(Knight, 5, 30, true), 60),
        ("paths-bishop-groups-4x12", ScrambleName::BishopGroups, board(Bishop, 4, 12, false), 10),
    ] {
        out.push(claim(
            format!("scramble/{id}"),
            Suite::Fast,
            expected,
            Box::new(move |_| {
                let (g, s) = catalogue_scramble(name, &spec)?;
                value(edge_disjoint_path_bound(&g, &s)?.value)
            }),
        ));
    }
    let fig = |name: DecompositionName, m: usize, n: usize| {
        move || -> Result<u64> {
            let (g, t) = catalogue_decomposition(name, m, n)?;
            Ok(width(&g, &t)?.width)
        }
    };
    out.push(width_claim("fig4-left".into(), 12, fig(DecompositionName::Fig4Left, 4, 5)));
    out.push(width_claim("fig4-right".into(), 4, fig(DecompositionName::Fig4Right, 4, 5)));
    out.push(width_claim("fig11".into(), 6, fig(DecompositionName::Fig11, 3, 4)));
    out.push(width_claim("fig13".into(), 8, fig(DecompositionName::Fig13, 4, 5)));
    for (m, w) in [(4, 9), (5, 12), (6, 14), (7, 15)] {
        out.push(width_claim(format!("fig14-{m}x{m}"), w, fig(DecompositionName::Fig14, m, m)));
    }
    for m in [4usize, 6] {
        out.push(width_claim(format!("bishop-white-{m}x{}", 3 * m), ((m - 1) * m * (m + 1) / 6) as i64, move || {
            let spec = board(Bishop, m, 3 * m, false);
            let (white, _) = bishop_components(&spec)?;
            let (sub, _) = generate(&spec).induced_subgraph(&white)?;
            Ok(width(&sub, &column_path_decomposition(&sub, m, TailRule::MergeIntoLast)?)?.width)
        }));
    }
    for (m, n, t, w) in [(4, 48, false, 16), (5, 66, false, 22), (5, 12, true, 60)] {
        let spec = board(Knight, m, n, t);
        out.push(width_claim(format!("{}-pairs", tag(&spec)), w, move || {
            let g = generate(&spec);
            Ok(width(&g, &column_path_decomposition(&g, 2, TailRule::MergeIntoLast)?)?.width)
        }));
    }
    out.push(claim("cross/order-le-width".to_string(), Suite::Fast, 0, Box::new(|_| value(order_width_violations()?))));
    out.push(claim(
        "cross/order-le-gonality".to_string(),
        Suite::Fast,
        0,
        Box::new(|ctx| value(order_gonality_violations(ctx)?)),
    ));
    out
}

/// Catalogued (scramble, decomposition) pairs on one graph where order exceeds width.
fn order_width_violations() -> Result<usize> {
    use Piece::*;
    let mut pairs: Vec<(ScrambleName, BoardSpec, Option<DecompositionName>, usize)> = vec![
        (ScrambleName::Fig11, board(King, 3, 4, false), Some(DecompositionName::Fig11), 0),
        (ScrambleName::Columns, board(King, 3, 4, false), Some(DecompositionName::Fig11), 0),
        (ScrambleName::Columns, board(King, 4, 5, false), Some(DecompositionName::Fig13), 0),
        (ScrambleName::KnightTriples, board(Knight, 4, 48, false), None, 2),
        (ScrambleName::KnightTriples, board(Knight, 5, 66, false), None, 2),
        (ScrambleName::ToroidalKnightTriples, board(Knight, 5, 12, true), None, 2),
        (ScrambleName::BishopGroups, board(Bishop, 4, 12, false), None, 4),
    ];
    for m in 4..=7 {
        pairs.push((ScrambleName::Columns, board(King, m, m, false), Some(DecompositionName::Fig14), 0));
    }
    let mut bad = 0;
    for (sname, spec, dname, per_bag) in pairs {
        let (g, s) = catalogue_scramble(sname, &spec)?;
        let t = match dname {
            Some(d) => catalogue_decomposition(d, spec.rows, spec.cols)?.1,
            None => column_path_decomposition(&g, per_bag, TailRule::MergeIntoLast)?,
        };
        if scramble_order(&g, &s)?.order > width(&g, &t)?.width {
            bad += 1;
        }
    }
    Ok(bad)
}

/// Catalogued scrambles whose order exceeds the computed gonality of their graph.
fn order_gonality_violations(ctx: &Ctx) -> Result<usize> {
    use Piece::*;
    let mut cases = vec![
        (ScrambleName::Fig10, board(King, 2, 3, false)),
        (ScrambleName::K33, board(King, 3, 3, false)),
        (ScrambleName::Fig11, board(King, 3, 4, false)),
        (ScrambleName::Uniform2, board(King, 2, 5, true)),
        (ScrambleName::Uniform2, board(King, 2, 4, true)),
        (ScrambleName::SmoothedN35, board(Knight, 3, 5, false)),
    ];
    cases.extend([(2, 3), (2, 5), (3, 3), (3, 4)].map(|(m, n)| (ScrambleName::Columns, board(King, m, n, false))));
    let mut bad = 0;
    for (name, spec) in cases {
        let (g, s) = catalogue_scramble(name, &spec)?;
        // Smoothing preserves scramble number, so compare with the board's gonality.
        let order = scramble_order(&g, &s)?.order;
        let gon = cached_gonality(&generate(&spec), &Ctx { cache: ctx.cache, deadline: None })?
            .expect("no deadline")
            .gonality;
        if order > gon {
            bad += 1;
        }
    }
    Ok(bad)
}

fn structure_claims() -> Vec<Claim> {
    let mut out = Vec::new();
    out.push(claim(
        "alpha/toroidal-formulas".to_string(),
        Suite::Fast,
        0,
        Box::new(|_| {
            let mut bad = 0;
            for m in 2..=6usize {
                for n in m..=36 / m {
                    let king = independence_number(&generate(&board(Piece::King, m, n, true))).0;
                    bad += usize::from(king != toroidal_king_alpha_formula(m, n)?);
                    let bishop = independence_number(&generate(&board(Piece::Bishop, m, n, true))).0;
                    bad += usize::from(bishop != toroidal_bishop_alpha_formula(m, n)?);
                }
            }
            value(bad)
        }),
    ));
    out.push(claim(
        "diagonals/structure".to_string(),
        Suite::Fast,
        0,
        Box::new(|_| {
            let mut bad = 0;
            for m in 2..=8usize {
                for n in m..=8 {
                    let ds = diagonal_structure(m, n)?;
                    let g = gcd(m, n);
                    let graph = generate(&ds.spec);
                    for kind in [crate::invariants::DiagonalKind::S, crate::invariants::DiagonalKind::D] {
                        let diags = ds.diagonals(kind);
                        let mut union = VertexSet::new(m * n);
                        for d in diags {
                            union = union.union(d);
                            // Each diagonal is a clique of size lcm(m, n) in the toroidal bishop's graph.
                            let (sub, _) = graph.induced_subgraph(d)?;
                            let k = ds.length() as u64;
                            bad += usize::from(d.len() != ds.length() || sub.edge_count() != k * (k - 1) / 2);
                        }
                        bad += usize::from(diags.len() != g || union.len() != m * n);
                        bad += usize::from(diags.iter().map(VertexSet::len).sum::<usize>() != m * n);
                    }
                    let r = diagonal_intersections(m, n)?;
                    if m % 2 == 1 || n % 2 == 1 {
                        bad += usize::from(!r.every_pair_meets);
                    } else {
                        bad += usize::from(r.same_colour_pairs_meet != Some(true));
                    }
                }
            }
            value(bad)
        }),
    ));
    out.push(claim(
        "diagonals/complete-iff-coprime".to_string(),
        Suite::Fast,
        0,
        Box::new(|_| {
            let mut bad = 0;
            for m in 2..=8usize {
                for n in m..=8 {
                    let g = generate(&board(Piece::Bishop, m, n, true));
                    let k = (m * n) as u64;
                    let complete = g.is_simple() && g.edge_count() == k * (k - 1) / 2;
                    bad += usize::from(complete != (gcd(m, n) == 1));
                }
            }
            value(bad)
        }),
    ));
    out
}

/// Graphs of at most ten vertices used by the property sweeps.
pub fn small_fixtures() -> Vec<Graph> {
    use Piece::*;
    let mut out =
        vec![families::grid(2, 5), families::cycle(6), families::complete(5), families::complete_bipartite(2, 3)];
    for (p, m, n, t) in [
        (King, 2, 2, false),
        (King, 2, 3, false),
        (King, 2, 4, false),
        (King, 2, 5, false),
        (King, 3, 3, false),
        (Knight, 2, 4, false),
        (Knight, 2, 5, false),
        (Bishop, 2, 5, false),
        (Bishop, 3, 3, true),
        (King, 2, 4, true),
        (King, 2, 5, true),
        (Rook, 2, 3, false),
    ] {
        out.push(generate(&board(p, m, n, t)));
    }
    out
}

fn property_claims() -> Vec<Claim> {
    let mut out = Vec::new();
    out.push(claim(
        "property/firing-and-reduction".to_string(),
        Suite::Fast,
        0,
        Box::new(|_| {
            let mut bad = 0usize;
            for g in small_fixtures().iter().filter(|g| g.is_connected()) {
                let n = g.vertex_count();
                let mut burner = Burner::new(g);
                // A deterministic spread of divisors: every vertex, every small chip pattern.
                for seed in 0..40u64 {
                    let chips: Vec<i64> = (0..n as u64).map(|v| ((seed * 7 + v * 13) % 5) as i64 - 1).collect();
                    let d = Divisor::new(chips);
                    let set = VertexSet::from_indices(n, (0..n).filter(|v| (seed >> (v % 6)) & 1 == 1)).unwrap();
                    let fired = fire_set(g, &d, &set)?;
                    bad += usize::from(fired.degree() != d.degree());
                    let q = (seed as usize) % n;
                    let mut a = fired.clone().into_chips();
                    let mut b = d.clone().into_chips();
                    burner.reduce_with_debt(&mut a, q)?;
                    burner.reduce_with_debt(&mut b, q)?;
                    bad += usize::from(a != b);
                    if d.is_effective() {
                        let r = reduce_toward(g, &d, q)?;
                        bad += usize::from(reduce_toward(g, &r, q)? != r);
                    }
                }
            }
            value(bad)
        }),
    ));
    out.push(claim(
        "property/menger".to_string(),
        Suite::Fast,
        0,
        Box::new(|_| {
            let mut bad = 0usize;
            for name in [ScrambleName::Fig10, ScrambleName::Fig11, ScrambleName::Fig12, ScrambleName::K33] {
                let spec = match name {
                    ScrambleName::Fig10 => board(Piece::King, 2, 3, false),
                    ScrambleName::Fig11 => board(Piece::King, 3, 4, false),
                    ScrambleName::Fig12 => board(Piece::King, 3, 5, false),
                    _ => board(Piece::King, 3, 3, false),
                };
                let (g, s) = catalogue_scramble(name, &spec)?;
                bad += usize::from(Some(edge_disjoint_path_bound(&g, &s)?.value) != egg_cut_number(&g, &s)?.value);
            }
            for g in small_fixtures() {
                let pairs: Vec<Vec<usize>> = g.vertices().map(|v| vec![v]).collect();
                let s = Scramble::from_lists(&g, &pairs)?;
                if s.separable_pairs().is_empty() {
                    continue;
                }
                bad += usize::from(Some(edge_disjoint_path_bound(&g, &s)?.value) != egg_cut_number(&g, &s)?.value);
            }
            value(bad)
        }),
    ));
    out.push(claim(
        "property/q0-independence".to_string(),
        Suite::Fast,
        0,
        Box::new(|_| {
            let mut bad = 0usize;
            for g in small_fixtures().iter().filter(|g| g.is_connected() && g.vertex_count() <= 10) {
                let base = gonality(g, &SearchOptions::default())?.exact();
                for q in g.vertices() {
                    let opts = SearchOptions { q0: Some(q), ..SearchOptions::default() };
                    bad += usize::from(gonality(g, &opts)?.exact() != base);
                }
            }
            value(bad)
        }),
    ));
    out
}

/// Every claim in `suite` and the suites below it, in a fixed order.
pub fn claims(suite: Suite) -> Vec<Claim> {
    let mut all = gonality_claims();
    all.extend(construction_claims());
    all.extend(certificate_claims());
    all.extend(structure_claims());
    all.extend(property_claims());
    all.retain(|c| c.suite <= suite);
    all
}

fn run_claim(c: &Claim, opts: &ReproduceOptions) -> ReproductionRow {
    let deadline = (c.suite == Suite::Stretch).then(|| Instant::now() + opts.stretch_budget);
    let ctx = Ctx { cache: opts.cache.as_ref(), deadline };
    let start = Instant::now();
    let (computed, status, note) = match (c.check)(&ctx) {
        Ok(Outcome::Value(v, note)) => (Some(v), if v == c.expected { Status::Match } else { Status::Mismatch }, note),
        Ok(Outcome::Refuted(why)) => (None, Status::Mismatch, Some(why)),
        Ok(Outcome::Skipped(why)) => (None, Status::SkippedBudget, Some(why)),
        Err(e) => (None, Status::Mismatch, Some(format!("error: {e}"))),
    };
    ReproductionRow {
        claim: c.id.clone(),
        suite: c.suite,
        expected: c.expected,
        source: c.source,
        computed,
        status,
        note,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn reproduce(suite: Suite, opts: &ReproduceOptions) -> Result<Vec<ReproductionRow>> {
    let list = claims(suite);
    let run = || list.par_iter().map(|c| run_claim(c, opts)).collect::<Vec<_>>();
    match opts.jobs {
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::Domain(e.to_string()))?;
            Ok(pool.install(run))
        }
        None => Ok(run()),
    }
}

/// An aligned plain-text table of rows.
pub fn render_table(rows: &[ReproductionRow]) -> String {
    let status = |s: Status| match s {
        Status::Match => "match",
        Status::Mismatch => "MISMATCH",
        Status::SkippedBudget => "skipped-budget",
    };
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            [
                r.claim.clone(),
                r.expected.to_string(),
                r.computed.map_or("-".into(), |v| v.to_string()),
                status(r.status).to_string(),
                r.note.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let header = ["claim", "expected", "computed", "status", "note"].map(String::from);
    let mut widths = [0usize; 5];
    for row in std::iter::once(&header).chain(&cells) {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(&header).chain(&cells) {
        let line: Vec<String> = row.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn all_match(rows: &[ReproductionRow]) -> bool {
    rows.iter().all(|r| r.status != Status::Mismatch)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_ids_are_unique_and_suites_nest() {
        let all = claims(Suite::Stretch);
        let mut ids: Vec<&str> = all.iter().map(|c| c.id.as_str()).collect();
        ids.sort_unstable();
        let before = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), before);
        assert!(claims(Suite::Fast).len() < claims(Suite::Full).len());
        assert!(claims(Suite::Full).len() < all.len());
    }

    #[test]
    fn status_follows_equality() {
        let c = claim("t", Suite::Fast, 3, Box::new(|_| value(3)));
        let opts = ReproduceOptions { cache: None, ..ReproduceOptions::default() };
        assert_eq!(run_claim(&c, &opts).status, Status::Match);
        let c = claim("t", Suite::Fast, 3, Box::new(|_| value(4)));
        assert_eq!(run_claim(&c, &opts).status, Status::Mismatch);
        let c = claim("t", Suite::Stretch, 3, Box::new(|_| Ok(Outcome::Skipped("slow".into()))));
        let row = run_claim(&c, &opts);
        assert_eq!((row.status, row.computed), (Status::SkippedBudget, None));
    }

    #[test]
    fn zero_budget_skips_stretch_gonality() {
        let c = gon_claim("t".into(), Suite::Stretch, 10, || generate(&board(Piece::King, 4, 4, false)));
        let opts = ReproduceOptions { cache: None, stretch_budget: Duration::ZERO, jobs: None };
        assert_eq!(run_claim(&c, &opts).status, Status::SkippedBudget);
    }

    #[test]
    fn table_is_aligned() {
        let rows = vec![ReproductionRow {
            claim: "gon/x".into(),
            suite: Suite::Fast,
            expected: 4,
            source: Source::Published,
            computed: Some(4),
            status: Status::Match,
            note: None,
            seconds: 0.0,
        }];
        let t = render_table(&rows);
        assert!(t.starts_with("claim  expected  computed  status"));
        assert!(t.lines().nth(1).unwrap().starts_with("gon/x  4         4         match"));
    }
}
