//! `chessgon`: chip-firing and gonality tools for chess graphs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use chessgon::cache::{cached, Cache};
use chessgon::chipfiring::{has_positive_rank, rank, reduce_toward};
use chessgon::constructions::{construct, ConstructionName};
use chessgon::formats::{
    graph_from_any_json, graph_to_json, parse_edge_list, render_divisor, render_scramble, scramble_from_json,
    scramble_to_json, write_edge_list,
};
use chessgon::invariants::{
    bishop_alpha_interval, diagonal_intersections, diagonal_structure, gonality_upper_bound_alpha,
    high_valence_gonality, independence_number,
};
use chessgon::reproduce::{all_match, render_table, reproduce, ReproduceOptions, Suite};
use chessgon::scramble::{catalogue_scramble, scramble_order, ScrambleName};
use chessgon::search::{gonality, SearchOptions, SearchOutcome};
use chessgon::treecut::{catalogue_decomposition, width, DecompositionName, TreeCutDecomposition};
use chessgon::{generate, BoardSpec, Divisor, Graph, Piece};

#[derive(Parser)]
#[command(name = "chessgon", version, about = "Chip-firing, gonality and scramble tools for chess graphs")]
struct Cli {
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

/// A graph, either read from a file or generated from a board.
#[derive(Args, Clone)]
struct GraphInput {
    /// Graph file: JSON, or an edge list when the extension is not `.json`.
    #[arg(long, conflicts_with_all = ["piece", "rows", "cols"])]
    graph: Option<PathBuf>,
    #[command(flatten)]
    board: BoardArgs,
}

#[derive(Args, Clone)]
struct BoardArgs {
    #[arg(long)]
    piece: Option<Piece>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    /// Wrap moves around the board edges.
    #[arg(long)]
    torus: bool,
}

impl BoardArgs {
    fn spec(&self, default_piece: Option<Piece>) -> Result<BoardSpec> {
        let (Some(rows), Some(cols)) = (self.rows, self.cols) else {
            bail!("a board needs --rows and --cols");
        };
        let piece = self.piece.or(default_piece).context("a board needs --piece")?;
        Ok(BoardSpec::new(piece, rows, cols, self.torus)?)
    }
}

impl GraphInput {
    fn load(&self) -> Result<(Graph, Option<BoardSpec>)> {
        match &self.graph {
            Some(path) => Ok((read_graph(path)?, None)),
            None => {
                let spec = self.board.spec(None)?;
                Ok((generate(&spec), Some(spec)))
            }
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Edges,
}

#[derive(Subcommand)]
enum Command {
    /// Build a chess graph.
    Gen {
        #[command(flatten)]
        board: BoardArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: GraphFormat,
    },
    /// Exact gonality with a witness divisor, or bounds if the search stops early.
    Gonality {
        #[command(flatten)]
        input: GraphInput,
        /// Largest degree tried per component.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        q0: Option<usize>,
        /// Give up after this many seconds.
        #[arg(long)]
        timeout: Option<u64>,
    },
    /// Rank of a divisor.
    Rank {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        divisor: String,
    },
    /// The q-reduced divisor equivalent to the given one.
    Reduce {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        divisor: String,
        #[arg(long)]
        q: usize,
    },
    /// Whether a divisor has rank at least 1.
    PositiveRank {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        divisor: String,
    },
    /// A catalogued positive-rank divisor.
    Construct {
        #[arg(long)]
        name: ConstructionName,
        #[command(flatten)]
        board: BoardArgs,
        /// Check positive rank with the chip-firing engine.
        #[arg(long)]
        verify: bool,
    },
    /// Hitting number, egg-cut number and order of a scramble file.
    ScrambleOrder {
        #[arg(long)]
        input: PathBuf,
    },
    /// A catalogued scramble, with its order.
    ScrambleCatalog {
        #[arg(long)]
        name: ScrambleName,
        #[command(flatten)]
        board: BoardArgs,
    },
    /// Width of a tree-cut decomposition.
    TcdWidth {
        #[command(flatten)]
        input: GraphInput,
        /// Decomposition JSON file.
        #[arg(long, conflicts_with = "name")]
        tcd: Option<PathBuf>,
        /// A catalogued decomposition on a king's board of --rows x --cols.
        #[arg(long)]
        name: Option<DecompositionName>,
    },
    /// Independence number with a maximum independent set.
    Alpha {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Diagonal structure of the toroidal bishop's graph.
    Diagonals {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
    /// Cheap gonality bounds.
    Bounds {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Recompute every catalogued claim and compare with the expected values.
    Reproduce {
        #[arg(long, default_value = "fast")]
        suite: Suite,
        #[arg(long)]
        json: bool,
        /// Seconds allowed for each stretch row.
        #[arg(long, default_value_t = 600)]
        budget: u64,
        /// Ignore the cache directory even if one is configured.
        #[arg(long)]
        no_cache: bool,
    },
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let g = if path.extension().is_some_and(|e| e == "json") {
        graph_from_any_json(&text)?
    } else {
        parse_edge_list(&text)?
    };
    Ok(g)
}

/// A divisor given inline as a JSON array, or as a path to a file holding one.
fn read_divisor(arg: &str, g: &Graph) -> Result<Divisor> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    let d: Divisor = serde_json::from_str(&text).context("divisor must be a JSON array of integers")?;
    d.check(g)?;
    Ok(d)
}

fn print(v: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn with_render(mut v: Value, spec: Option<BoardSpec>, d: &Divisor) -> Result<Value> {
    if let Some(spec) = spec {
        v["board"] = json!(render_divisor(&spec, d)?);
    }
    Ok(v)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen { board, format } => {
            let g = generate(&board.spec(None)?);
            match format {
                GraphFormat::Json => println!("{}", graph_to_json(&g)?),
                GraphFormat::Edges => print!("{}", write_edge_list(&g)),
            }
        }
        Command::Gonality { input, budget, q0, timeout } => {
            let (g, spec) = input.load()?;
            let opts = SearchOptions {
                budget,
                q0,
                jobs: cli.jobs,
                deadline: timeout.map(|s| Instant::now() + Duration::from_secs(s)),
                ..SearchOptions::default()
            };
            // Only unrestricted exact answers are worth caching.
            let cache = Cache::from_env().filter(|_| budget.is_none() && q0.is_none());
            let outcome = match cache.as_ref().map(|c| (c, c.key(&g, "gonality"))) {
                Some((c, key)) => match c.get(&key) {
                    chessgon::cache::Lookup::Hit(cert) => SearchOutcome::Exact(cert),
                    lookup => {
                        if let chessgon::cache::Lookup::Corrupt(why) = lookup {
                            eprintln!("warning: cache entry unreadable ({why}); recomputing");
                        }
                        let out = gonality(&g, &opts)?;
                        if let SearchOutcome::Exact(cert) = &out {
                            for w in cached(Some(c), &g, "gonality", || Ok(cert.clone()))?.warnings {
                                eprintln!("warning: {w}");
                            }
                        }
                        out
                    }
                },
                None => gonality(&g, &opts)?,
            };
            let mut v = serde_json::to_value(&outcome)?;
            if let SearchOutcome::Exact(cert) = &outcome {
                v = with_render(v, spec, &cert.witness)?;
            }
            print(&v)?;
        }
        Command::Rank { input, divisor } => {
            let (g, _) = input.load()?;
            let d = read_divisor(&divisor, &g)?;
            print(&json!({ "rank": rank(&g, &d)? }))?;
        }
        Command::Reduce { input, divisor, q } => {
            let (g, spec) = input.load()?;
            let d = read_divisor(&divisor, &g)?;
            let r = reduce_toward(&g, &d, q)?;
            print(&with_render(json!({ "q": q, "divisor": r }), spec, &r)?)?;
        }
        Command::PositiveRank { input, divisor } => {
            let (g, _) = input.load()?;
            let d = read_divisor(&divisor, &g)?;
            print(&json!({ "degree": d.degree(), "positive_rank": has_positive_rank(&g, &d)? }))?;
        }
        Command::Construct { name, board, verify } => {
            let (Some(rows), Some(cols)) = (board.rows, board.cols) else {
                bail!("construct needs --rows and --cols");
            };
            let piece = board.piece.unwrap_or(Piece::King);
            let mut r = construct(name, piece, rows, cols, board.torus)?;
            if verify {
                r = r.verify()?;
            }
            let (divisor, spec) = (r.divisor.clone(), r.spec);
            let mut v = serde_json::to_value(&r)?;
            v["degree"] = json!(divisor.degree());
            v["degree_matches"] = json!(r.degree_matches());
            print(&with_render(v, spec, &divisor)?)?;
        }
        Command::ScrambleOrder { input } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let (g, s) = scramble_from_json(&text)?;
            print(&serde_json::to_value(scramble_order(&g, &s)?)?)?;
        }
        Command::ScrambleCatalog { name, board } => {
            let spec = board.spec(Some(Piece::King))?;
            let (g, s) = catalogue_scramble(name, &spec)?;
            let mut v: Value = serde_json::from_str(&scramble_to_json(&g, &s)?)?;
            v["order"] = serde_json::to_value(scramble_order(&g, &s)?)?;
            if g.vertex_count() == spec.vertex_count() {
                v["board"] = json!(render_scramble(&spec, &s)?);
            }
            print(&v)?;
        }
        Command::TcdWidth { input, tcd, name } => {
            let (g, t) = match (tcd, name) {
                (Some(path), None) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    let t: TreeCutDecomposition = serde_json::from_str(&text)?;
                    (input.load()?.0, t)
                }
                (None, Some(name)) => {
                    let (Some(rows), Some(cols)) = (input.board.rows, input.board.cols) else {
                        bail!("a catalogued decomposition needs --rows and --cols");
                    };
                    catalogue_decomposition(name, rows, cols)?
                }
                _ => bail!("give exactly one of --tcd and --name"),
            };
            print(&serde_json::to_value(width(&g, &t)?)?)?;
        }
        Command::Alpha { input } => {
            let (g, _) = input.load()?;
            let (alpha, set) = independence_number(&g);
            print(&json!({ "alpha": alpha, "set": set.to_vec() }))?;
        }
        Command::Diagonals { rows, cols } => {
            let ds = diagonal_structure(rows, cols)?;
            let r = diagonal_intersections(rows, cols)?;
            let list = |sets: &[chessgon::VertexSet]| sets.iter().map(|s| s.to_vec()).collect::<Vec<_>>();
            print(&json!({
                "count": ds.s_diagonals.len(),
                "length": ds.length(),
                "s_diagonals": list(&ds.s_diagonals),
                "d_diagonals": list(&ds.d_diagonals),
                "intersections": r,
            }))?;
        }
        Command::Bounds { input } => {
            let (g, spec) = input.load()?;
            let mut v = json!({
                "vertices": g.vertex_count(),
                "upper_alpha": gonality_upper_bound_alpha(&g).ok(),
                "exact_high_valence": high_valence_gonality(&g).ok().flatten(),
            });
            if let Some(s) = spec.filter(|s| s.piece == Piece::Bishop && !s.toroidal && s.rows < s.cols) {
                v["bishop_alpha_interval"] = json!(bishop_alpha_interval(s.rows, s.cols)?);
            }
            print(&v)?;
        }
        Command::Reproduce { suite, json, budget, no_cache } => {
            let opts = ReproduceOptions {
                cache: if no_cache { None } else { Cache::from_env() },
                stretch_budget: Duration::from_secs(budget),
                jobs: cli.jobs,
            };
            let rows = reproduce(suite, &opts)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&rows)?);
            } else {
                print!("{}", render_table(&rows));
            }
            if !all_match(&rows) {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
