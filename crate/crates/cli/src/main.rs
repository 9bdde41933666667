//! `starlex`: radius orderings, property suites and the worked quotient example
//! from the command line.
//!
//! Exit codes: 0 pass, 1 a checked claim failed, 2 bad usage or input.

mod output;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use starlex::tolerances;
use starlex::verify::suites::{self, SuiteConfig};
use starlex::verify::{
    fig1_matrices, main_theorem_sweep, rank_rows, verify_fig1, Thresholds, VerificationReport,
};
use starlex::wgraph::parse_edge_list;
use starlex::{Alpha, RootedGraph, WeightedGraph};

#[derive(Parser, Debug)]
#[command(name = "starlex", version, about = "A_alpha spectral radii of graphs with pendant paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Radii of G(p, v) for every partition p of n, ranked against shortlex order.
    Order(OrderArgs),
    /// Runs the identity and lemma suites, plus a sweep when a graph is given.
    Check(CheckArgs),
    /// Prints the matrices of the C_3 example with pendant paths [2, 2, 2, 1].
    Fig1(Fig1Args),
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Builtin graph: k1, k4e, p2..p9, c3..c9.
    #[arg(long, conflicts_with = "graph_file")]
    graph: Option<String>,
    /// Edge list file: one `u v [w]` per line, 0-based ids.
    #[arg(long)]
    graph_file: Option<PathBuf>,
    /// Root vertex.
    #[arg(long, default_value_t = 0)]
    root: usize,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Defaults to csv for `order`, json for `check`, text for `fig1`.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Args, Debug)]
struct OrderArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Total number of pendant vertices.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=60))]
    n: u64,
    /// `p/q` or a decimal in [0, 1).
    #[arg(long, value_parser = parse_alpha)]
    alpha: Alpha,
    /// Smallest gap accepted as a strict increase.
    #[arg(long, value_parser = parse_tol)]
    tol: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Caps every suite size (and the sweep n) at this value.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=60))]
    max_n: Option<u64>,
    /// Comma-separated alpha values; defaults to 0, 1/4, 1/2, 3/4.
    #[arg(long, value_parser = parse_alpha, value_delimiter = ',')]
    alpha: Vec<Alpha>,
    /// Seed of the randomized suites.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = parse_tol)]
    tol: Option<f64>,
    /// Embed every report in the JSON output, not just the summary.
    #[arg(long)]
    full: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct Fig1Args {
    #[arg(long, value_parser = parse_alpha)]
    alpha: Alpha,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_alpha(text: &str) -> Result<Alpha, String> {
    text.parse::<Alpha>().map_err(|e| e.to_string())
}

fn parse_tol(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(t) if t.is_finite() && t >= tolerances::TIE => Ok(t),
        Ok(_) => Err(format!("must be finite and at least the tie threshold {:e}", tolerances::TIE)),
        Err(e) => Err(e.to_string()),
    }
}

/// Input or environment problem; exits with 2.
#[derive(Debug)]
struct UsageError(String);

impl<E: std::error::Error> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn load_graph(args: &GraphArgs) -> Result<Option<RootedGraph>, UsageError> {
    let graph = match (&args.graph, &args.graph_file) {
        (Some(name), _) => WeightedGraph::builtin(name)
            .ok_or_else(|| UsageError(format!("unknown builtin graph '{name}'")))?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            parse_edge_list(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?
        }
        (None, None) => return Ok(None),
    };
    RootedGraph::new(graph, args.root)
        .map(Some)
        .map_err(|e| UsageError(format!("--root: {e}")))
}

fn require_graph(args: &GraphArgs) -> Result<RootedGraph, UsageError> {
    load_graph(args)?.ok_or_else(|| UsageError("one of --graph or --graph-file is required".into()))
}

fn thresholds(tol: Option<f64>) -> Thresholds {
    Thresholds {
        order_gap: tol.unwrap_or(tolerances::ORDER_GAP),
        ..Thresholds::default()
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), UsageError> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| UsageError(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn generated_at() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    generated_at: String,
    #[serde(flatten)]
    body: T,
}

fn json<T: Serialize>(body: T) -> Result<Vec<u8>, UsageError> {
    let mut bytes = serde_json::to_vec_pretty(&Envelope {
        generated_at: generated_at(),
        body,
    })?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn exit_for(passed: bool) -> ExitCode {
    ExitCode::from(if passed { 0 } else { 1 })
}

fn run_order(args: &OrderArgs) -> Result<ExitCode, UsageError> {
    let g = require_graph(&args.graph)?;
    let t = thresholds(args.tol);
    let (rows, report) = main_theorem_sweep(&g, args.n as usize, &args.alpha, &t)?;
    let ranked = rank_rows(&rows, t.tie);
    let bytes = match args.output.format.unwrap_or(Format::Csv) {
        Format::Csv => output::order_csv(&ranked)?,
        Format::Text => output::order_text(&ranked, &report),
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                rows: &'a [starlex::verify::RankedRow],
                report: &'a VerificationReport,
            }
            json(Body {
                rows: &ranked,
                report: &report,
            })?
        }
    };
    emit(args.output.out.as_deref(), &bytes)?;
    if !report.passed() {
        for f in report.failures() {
            eprintln!("violation: {f}");
        }
    }
    Ok(exit_for(report.passed()))
}

fn run_check(args: &CheckArgs) -> Result<ExitCode, UsageError> {
    let g = load_graph(&args.graph)?;
    let mut config = SuiteConfig::default();
    if let Some(max_n) = args.max_n {
        config = config.capped(max_n as usize);
    }
    if !args.alpha.is_empty() {
        config.alphas = args.alpha.clone();
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let mut reports = suites::run_all(&config)?;
    if let Some(g) = &g {
        let t = thresholds(args.tol);
        let top = args.max_n.map_or(9, |m| (m as usize).min(9));
        for alpha in &config.alphas {
            for n in 1..=top {
                reports.push(main_theorem_sweep(g, n, alpha, &t)?.1);
            }
        }
    }
    let passed = reports.iter().all(VerificationReport::passed);
    let bytes = match args.output.format.unwrap_or(Format::Json) {
        Format::Csv => output::reports_csv(&reports)?,
        Format::Text => output::reports_text(&reports),
        Format::Json => json(output::CheckSummary::new(&config, &reports, args.full))?,
    };
    emit(args.output.out.as_deref(), &bytes)?;
    for r in reports.iter().filter(|r| !r.passed()) {
        for f in r.failures() {
            eprintln!("violation in {}: {f}", r.claim);
        }
    }
    Ok(exit_for(passed))
}

fn run_fig1(args: &Fig1Args) -> Result<ExitCode, UsageError> {
    let matrices = fig1_matrices(&args.alpha)?;
    let report = verify_fig1(&args.alpha)?;
    let bytes = match args.output.format.unwrap_or(Format::Text) {
        Format::Text => output::fig1_text(&args.alpha, &matrices, &report),
        Format::Csv => output::reports_csv(std::slice::from_ref(&report))?,
        Format::Json => json(output::Fig1Body::new(&args.alpha, &matrices, &report))?,
    };
    emit(args.output.out.as_deref(), &bytes)?;
    Ok(exit_for(report.passed()))
}

fn configure_threads() -> Result<(), UsageError> {
    let Ok(value) = std::env::var("STARLEX_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| UsageError(format!("STARLEX_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Order(args) => run_order(args),
        Command::Check(args) => run_check(args),
        Command::Fig1(args) => run_fig1(args),
    });
    match result {
        Ok(code) => code,
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
