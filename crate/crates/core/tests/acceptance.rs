//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use chessgon::cache::{Cache, Lookup};
use chessgon::graph::families;
use chessgon::reproduce::{reproduce, ReproduceOptions, ReproductionRow, Status, Suite};

/// Exact integers throughout.
const TOLERANCE: i64 = 0;
const FAST_ROW_SECONDS: f64 = 60.0;
const FULL_ROW_SECONDS: f64 = 120.0;
const FAST_SUITE_SECONDS: f64 = 300.0;
const STRETCH_BUDGET: Duration = Duration::from_secs(600);

struct Report {
    failures: usize,
    lines: usize,
}

impl Report {
    fn line(&mut self, ok: bool, criterion: &str, detail: String) {
        self.lines += 1;
        if !ok {
            self.failures += 1;
        }
        println!("{}  {criterion}  {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn row_line(r: &mut Report, row: &ReproductionRow) {
    let limit = match row.suite {
        Suite::Fast => FAST_ROW_SECONDS,
        Suite::Full => FULL_ROW_SECONDS,
        Suite::Stretch => STRETCH_BUDGET.as_secs_f64(),
    };
    let within = row.computed.is_some_and(|c| (c - row.expected).abs() <= TOLERANCE);
    // A stretch row that runs out of budget is reported, not failed.
    let ok = match row.status {
        Status::Match => within && row.seconds <= limit,
        Status::SkippedBudget => row.suite == Suite::Stretch,
        Status::Mismatch => false,
    };
    let computed = row.computed.map_or("-".to_string(), |c| c.to_string());
    let mut detail = format!("expected {} computed {computed} in {:.2}s (limit {limit}s)", row.expected, row.seconds);
    if let Some(note) = &row.note {
        detail.push_str(&format!("; {note}"));
    }
    if row.status == Status::SkippedBudget {
        detail.push_str("; skipped-budget");
    }
    r.line(ok, &row.claim, detail);
}

fn cache_lines(r: &mut Report) {
    let dir = tempfile::tempdir().expect("temp dir");
    let cache = Cache::new(dir.path());
    let g = families::cycle(7);
    let key = cache.key(&g, "gonality");
    let first = cache.get_or_compute(&key, || Ok(2u64)).expect("compute");
    let second = cache.get_or_compute::<u64, _>(&key, || Ok(99)).expect("lookup");
    r.line(
        !first.hit && second.hit && second.value == 2,
        "cache/repeat-is-hit",
        format!("second value {}", second.value),
    );

    let bumped = Cache::new(dir.path()).with_version("next");
    let miss = matches!(bumped.get::<u64>(&bumped.key(&g, "gonality")), Lookup::Miss);
    r.line(miss, "cache/version-bump-invalidates", String::new());

    std::fs::write(dir.path().join(format!("{key}.json")), "{ torn").expect("write");
    let redo = cache.get_or_compute(&key, || Ok(2u64)).expect("recompute");
    let healed = cache.get::<u64>(&key) == Lookup::Hit(2);
    r.line(!redo.hit && !redo.warnings.is_empty() && healed, "cache/corrupt-entry-recomputed", String::new());
}

fn main() -> ExitCode {
    let mut r = Report { failures: 0, lines: 0 };
    let opts = ReproduceOptions { cache: None, stretch_budget: STRETCH_BUDGET, jobs: None };

    let start = Instant::now();
    let fast = reproduce(Suite::Fast, &opts).expect("fast suite runs");
    let fast_seconds = start.elapsed().as_secs_f64();
    let rest: Vec<ReproductionRow> = reproduce(Suite::Stretch, &opts)
        .expect("stretch suite runs")
        .into_iter()
        .filter(|row| row.suite != Suite::Fast)
        .collect();

    for row in fast.iter().chain(&rest) {
        row_line(&mut r, row);
    }
    r.line(
        fast_seconds <= FAST_SUITE_SECONDS,
        "suite/fast-runtime",
        format!("{fast_seconds:.1}s (limit {FAST_SUITE_SECONDS}s)"),
    );
    let consistent =
        fast.iter().chain(&rest).all(|row| (row.status == Status::Match) == (row.computed == Some(row.expected)));
    r.line(consistent, "suite/status-iff-equal", String::new());
    let text = serde_json::to_string(&fast).expect("serialize");
    let back: Vec<ReproductionRow> = serde_json::from_str(&text).expect("parse");
    r.line(back == fast, "suite/json-round-trip", String::new());
    cache_lines(&mut r);

    println!("{} of {} criteria passed", r.lines - r.failures, r.lines);
    if r.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
