use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dyngraph::stream::{Stream, StreamMode};
use dyngraph_cli::bench::{bench, BenchRow};
use dyngraph_cli::gen::{generate, GenKind, GenParams};
use dyngraph_cli::replay::check_header;
use dyngraph_cli::{run, Algo, Checkpoint, RunConfig, RunError};

#[derive(Parser)]
#[command(
    name = "dyngraph",
    version,
    about = "Generate, replay and benchmark dynamic graph update streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic update stream.
    Gen(GenArgs),
    /// Replay a stream and check the structure against the oracles.
    Run(RunArgs),
    /// Time repeated replays of one or more streams.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long, default_value = "cc", value_parser = parse_mode)]
    mode: StreamMode,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    ops: usize,
    /// Degree bound; defaults to n - 1.
    #[arg(long)]
    delta: Option<u32>,
    /// Largest edge weight (msf streams).
    #[arg(long = "w", default_value_t = 1.0)]
    max_weight: f64,
    #[arg(long)]
    integer_weights: bool,
    #[arg(long, default_value_t = 0.5)]
    insert_prob: f64,
    /// Edge count held by a sliding window; defaults to n·delta/4.
    #[arg(long)]
    target_edges: Option<usize>,
    #[arg(long)]
    query_every: Option<usize>,
    /// Shadow estimator accuracy for adaptive scripts.
    #[arg(long, default_value_t = 0.2)]
    eps: f64,
    #[arg(long, default_value_t = 0.05)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    stream: PathBuf,
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
    #[arg(long, default_value_t = 0.05)]
    p: f64,
    #[arg(long, default_value_t = 1000)]
    check_every: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Checkpoint CSV destination; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// May be repeated; one summary row per stream.
    #[arg(long, required = true)]
    stream: Vec<PathBuf>,
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
    #[arg(long, default_value_t = 0.05)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<StreamMode, String> {
    s.parse()
}

fn output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_stream(path: &Path) -> Result<Stream, RunError> {
    let file = File::open(path).map_err(|e| RunError::Input(format!("{}: {e}", path.display())))?;
    Stream::read(BufReader::new(file))
        .map_err(|e| RunError::Input(format!("{}: {e}", path.display())))
}

fn io_err(e: io::Error) -> RunError {
    RunError::Input(e.to_string())
}

fn cmd_gen(a: GenArgs) -> Result<(), RunError> {
    let mut params = GenParams::new(
        a.kind,
        a.mode,
        a.n,
        a.ops,
        a.delta.unwrap_or(a.n.saturating_sub(1) as u32),
    );
    params.max_weight = a.max_weight;
    params.integer_weights = a.integer_weights;
    params.insert_prob = a.insert_prob;
    params.target_edges = a.target_edges;
    params.query_every = a.query_every;
    params.eps = a.eps;
    params.p = a.p;
    params.seed = a.seed;
    let stream = generate(&params).map_err(|e| RunError::Input(e.to_string()))?;
    let mut out = output(&a.out).map_err(io_err)?;
    stream.write(&mut out).map_err(io_err)?;
    out.flush().map_err(io_err)
}

fn cmd_run(a: RunArgs) -> Result<(), RunError> {
    let stream = read_stream(&a.stream)?;
    let cfg = RunConfig {
        algo: a.algo,
        eps: a.eps,
        p: a.p,
        check_every: a.check_every,
        seed: a.seed,
        verify: true,
    };
    check_header(&stream, a.algo)?;
    let mut out = output(&a.out).map_err(io_err)?;
    writeln!(out, "{}", Checkpoint::CSV_HEADER).map_err(io_err)?;
    let mut write_err = None;
    let report = run(&stream, &cfg, |cp| {
        if let Err(e) = writeln!(out, "{}", cp.csv_row()) {
            write_err.get_or_insert(e);
        }
    })?;
    if let Some(e) = write_err {
        return Err(io_err(e));
    }
    out.flush().map_err(io_err)?;
    eprintln!(
        "{}: {} steps, {} checkpoints, {} outside the error envelope ({:.2}%), work {}",
        a.algo,
        report.steps,
        report.checkpoints,
        report.misses,
        100.0 * report.miss_rate(),
        report.total_work
    );
    if report.violations.is_empty() {
        return Ok(());
    }
    for v in &report.violations {
        eprintln!("violation: {v}");
    }
    Err(RunError::Violation(format!(
        "{} hard guarantee violations",
        report.violations.len()
    )))
}

fn cmd_bench(a: BenchArgs) -> Result<(), RunError> {
    let mut cfg = RunConfig::new(a.algo);
    cfg.eps = a.eps;
    cfg.p = a.p;
    cfg.seed = a.seed;
    let mut rows = Vec::new();
    for path in &a.stream {
        let stream = read_stream(path)?;
        rows.push(bench(
            &path.display().to_string(),
            &stream,
            &cfg,
            a.repeats,
        )?);
    }
    let mut out = output(&a.out).map_err(io_err)?;
    writeln!(out, "{}", BenchRow::CSV_HEADER).map_err(io_err)?;
    for row in rows {
        writeln!(out, "{}", row.csv_row()).map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Run(a) => cmd_run(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dyngraph: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
