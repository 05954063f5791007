use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncmatch::duals::balanced_critical_dual;
use ncmatch::lab::{self, gen};
use ncmatch::oracle::field::DEFAULT_PRIME;
use ncmatch::oracle::{at_most, BruteForceOracle, ExactOracle, MwpmOracle, ReplayOracle, Transcript, TutteOracle};
use ncmatch::walks::FamilySize;
use ncmatch::{dimacs, Config, Graph, Minor, OracleSession, Outcome, Stats, TraceEntry, WeightVector};
use serde_json::{json, Value};

const EXIT_NO_PM: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "nc-match", version, about = "Perfect matchings from a minimum-weight oracle")]
struct Cli {
    #[command(subcommand)]
    mode: Mode,
}

#[derive(Subcommand)]
enum Mode {
    /// Some perfect matching, or exit 2 if there is none.
    Pm(Solve),
    /// A minimum-weight perfect matching, or exit 2 if there is none.
    Mwpm(Solve),
    /// A maximum-cardinality matching.
    Maxmatching(Solve),
    /// Answers whether a perfect matching of weight at most W exists.
    Decide {
        #[arg(short = 'W', long = "bound", allow_negative_numbers = true)]
        bound: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Structural measurements as CSV, for the input graph or generated families.
    Lab(LabArgs),
}

#[derive(Args)]
struct Common {
    /// Graph file (`p edge n m` / `e u v w`); `-` reads stdin.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = OracleKind::Tutte)]
    oracle: OracleKind,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    field_prime: u64,
    #[arg(long, env = "NC_MATCH_SEED", default_value_t = 0)]
    oracle_seed: u64,
    #[arg(long, default_value_t = 3)]
    oracle_retrials: usize,
    /// Answer every query from a transcript written by `--transcript-out`.
    #[arg(long, conflicts_with = "oracle")]
    replay: Option<PathBuf>,
    /// Write every oracle query and answer as JSON.
    #[arg(long)]
    transcript_out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Solve {
    #[command(flatten)]
    common: Common,
    /// Check the output with the independent verifier; exit 3 if it fails.
    #[arg(long)]
    verify: bool,
    /// Include one record per shrinking iteration.
    #[arg(long)]
    trace: bool,
    /// Write the laminar dual support of the input as JSON (1-based vertex sets).
    #[arg(long)]
    dump_duals: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    walk_budget_scale: f64,
    #[arg(long, env = "NC_MATCH_SEED", default_value_t = 0)]
    mis_seed: u64,
    /// Members of the walk-separating weight family: `tight`, `generous` or a count.
    #[arg(long, default_value = "tight", value_parser = parse_family)]
    family_size: FamilySize,
    #[arg(long, default_value_t = 8)]
    candidate_chunk: usize,
    #[arg(long)]
    weight_cap: Option<i64>,
}

#[derive(Args)]
struct LabArgs {
    /// Measure this graph instead of generated ones.
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Family::Union)]
    family: Family,
    #[arg(long, value_delimiter = ',', default_values_t = [16, 32, 64, 128])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    samples: u64,
    #[arg(long, env = "NC_MATCH_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Brute,
    Tutte,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Union of three random perfect matchings.
    Union,
    /// Hamiltonian cycle plus n/4 odd chords.
    Chords,
    /// G(n, 3/n).
    Gnp,
    /// Planted perfect matching plus n random edges.
    Planted,
}

fn parse_family(s: &str) -> Result<FamilySize, String> {
    match s {
        "tight" => Ok(FamilySize::Tight),
        "generous" => Ok(FamilySize::Generous),
        n => n
            .parse()
            .map(FamilySize::Fixed)
            .map_err(|_| format!("expected `tight`, `generous` or a count, found `{n}`")),
    }
}

fn fail(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn read_input(path: &Path) -> Result<(Graph, WeightVector), String> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text).map_err(fail)?;
    } else {
        text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    dimacs::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).map_err(fail),
    }
}

fn session(c: &Common) -> Result<OracleSession, String> {
    let oracle: Arc<dyn MwpmOracle> = match (&c.replay, c.oracle) {
        (Some(p), _) => {
            let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            Arc::new(ReplayOracle::new(&Transcript::from_json(&text).map_err(fail)?).map_err(fail)?)
        }
        (None, OracleKind::Brute) => Arc::new(BruteForceOracle::default()),
        (None, OracleKind::Exact) => Arc::new(ExactOracle),
        (None, OracleKind::Tutte) => {
            Arc::new(TutteOracle::new(c.field_prime, c.oracle_seed, c.oracle_retrials).map_err(fail)?)
        }
    };
    let s = OracleSession::new(oracle);
    Ok(if c.transcript_out.is_some() { s.recording_queries() } else { s })
}

fn finish_session(c: &Common, s: &OracleSession) -> Result<(), String> {
    match &c.transcript_out {
        Some(p) => fs::write(p, s.transcript().to_json()).map_err(|e| format!("{}: {e}", p.display())),
        None => Ok(()),
    }
}

fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(t) => ncmatch::par::with_threads(t, f),
        None => f(),
    }
}

fn pairs(g: &Graph, edges: &[usize]) -> Value {
    edges
        .iter()
        .map(|&id| {
            let e = g.edge_by_id(id).expect("matched edges belong to the graph");
            json!([e.u + 1, e.v + 1])
        })
        .collect()
}

struct Solved {
    edges: Option<Vec<usize>>,
    stats: Stats,
    trace: Vec<TraceEntry>,
    extra: Vec<(&'static str, Value)>,
}

fn solve(mode: &str, a: &Solve) -> Result<u8, String> {
    let (g, w) = read_input(&a.common.input)?;
    let s = session(&a.common)?;
    let config = Config {
        walk_budget_scale: a.walk_budget_scale,
        family_size: a.family_size,
        mis_seed: a.mis_seed,
        weight_cap: a.weight_cap,
        candidate_chunk: a.candidate_chunk.max(1),
        trace: a.trace,
    };
    let run = || -> ncmatch::Result<Solved> {
        let from = |o: Outcome| match o {
            Outcome::Matched(m) => Solved {
                edges: Some(m.edges),
                stats: m.stats,
                trace: m.trace,
                extra: Vec::new(),
            },
            Outcome::NoPerfectMatching { stats, trace } => Solved {
                edges: None,
                stats,
                trace,
                extra: Vec::new(),
            },
        };
        match mode {
            "pm" => ncmatch::perfect_matching(&g, &s, &config).map(from),
            "mwpm" => ncmatch::min_weight_perfect_matching(&g, &w, &s, &config).map(from),
            _ => ncmatch::maximum_matching(&g, &s, &config).map(|m| Solved {
                extra: vec![("size", json!(m.edges.len())), ("doubled_weight", json!(m.doubled_weight))],
                edges: Some(m.edges),
                stats: m.stats,
                trace: m.trace,
            }),
        }
    };
    let solved = with_threads(a.common.threads, run).map_err(fail)?;
    let mut out = json!({
        "mode": mode,
        "oracle": s.oracle_name(),
        "matching": solved.edges.as_ref().map_or(json!([]), |e| pairs(&g, e)),
        "weight": solved.edges.as_ref().map(|e| w.total(e)),
        "no_perfect_matching": solved.edges.is_none(),
        "stats": solved.stats,
    });
    for (k, v) in solved.extra {
        out[k] = v;
    }
    let mut code = if solved.edges.is_none() { EXIT_NO_PM } else { 0 };
    if a.verify {
        let report = match (&solved.edges, mode) {
            (Some(e), "maxmatching") => ncmatch::verify_matching(&g, e),
            (Some(e), _) => ncmatch::verify_perfect_matching(&g, e),
            (None, _) => ncmatch::matcher::VerifyReport {
                valid: true,
                problems: Vec::new(),
            },
        };
        if !report.valid {
            code = EXIT_VERIFY;
        }
        out["verify"] = json!(report);
    }
    if a.trace {
        out["trace"] = json!(solved.trace);
    }
    if let (Some(path), Some(_)) = (&a.dump_duals, &solved.edges) {
        let zero = WeightVector::default();
        let weights = if mode == "mwpm" { &w } else { &zero };
        let minor = Minor::identity(Arc::new(g.clone()));
        let family = with_threads(a.common.threads, || balanced_critical_dual(&s, &minor, weights)).map_err(fail)?;
        let sets: Vec<Vec<usize>> = family.non_singletons().map(|s| s.iter().map(|v| v + 1).collect()).collect();
        let text = serde_json::to_string_pretty(&json!({ "sets": sets })).map_err(fail)?;
        fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    }
    finish_session(&a.common, &s)?;
    emit(&a.common.out, &format!("{}\n", serde_json::to_string_pretty(&out).map_err(fail)?))?;
    Ok(code)
}

fn decide(bound: i64, c: &Common) -> Result<u8, String> {
    let (g, w) = read_input(&c.input)?;
    let s = session(c)?;
    let query = Minor::identity(Arc::new(g)).full_query(&w);
    let yes = with_threads(c.threads, || at_most(&s, &query, bound)).map_err(fail)?;
    finish_session(c, &s)?;
    emit(&c.out, if yes { "yes\n" } else { "no\n" })?;
    Ok(0)
}

fn generate(family: Family, n: usize, seed: u64) -> Graph {
    let even = (n + n % 2).max(4);
    match family {
        Family::Union => gen::union_of_matchings(even, 3, seed),
        Family::Chords => gen::cycle_with_chords(even, even / 4, seed),
        Family::Gnp => gen::gnp(n, (3.0 / n.max(1) as f64).min(1.0), seed),
        Family::Planted => gen::planted(even, even, seed),
    }
}

fn run_lab(a: &LabArgs) -> Result<u8, String> {
    let mut rows = vec![lab::CSV_HEADER.to_string()];
    if let Some(p) = &a.input {
        let (g, _) = read_input(p)?;
        rows.push(lab::measure("file", a.seed, &g).map_err(fail)?.to_csv());
    } else {
        let name = a.family.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
        for &n in &a.sizes {
            for k in 0..a.samples {
                let seed = a.seed.wrapping_add(k);
                let g = generate(a.family, n, seed);
                rows.push(lab::measure(&name, seed, &g).map_err(fail)?.to_csv());
            }
        }
    }
    emit(&a.out, &(rows.join("\n") + "\n"))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.mode {
        Mode::Pm(a) => solve("pm", a),
        Mode::Mwpm(a) => solve("mwpm", a),
        Mode::Maxmatching(a) => solve("maxmatching", a),
        Mode::Decide { bound, common } => decide(*bound, common),
        Mode::Lab(a) => run_lab(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("nc-match: {e}");
            ExitCode::FAILURE
        }
    }
}
