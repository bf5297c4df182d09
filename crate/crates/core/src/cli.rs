//! The `fastmotif` command line: `count`, `verify`, `bench` and `gen`.
//!
//! Exit codes: 0 success, 1 usage or invalid parameter, 2 input parse
//! error, 3 counter overflow, 4 invalid mode/thread combination, 5 input
//! too large for the oracle, 6 engine/oracle mismatch, 7 nondeterministic
//! census across bench runs.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::graph::{generate_random_graph, parse_edge_list, IndexedGraph, ParseOptions, ParsedGraph, Timestamp};
use crate::hare::{run_parallel, run_parallel_timed, DegreeThreshold, MotifFilter, RunConfig, DEFAULT_SHARD_TARGET};
use crate::oracle::{oracle_census, DEFAULT_MAX_EDGES};
use crate::report::{millis, write_census, write_csv, CensusReport, OutputFormat, ReportTimings};
use crate::taxonomy::{MotifCensus, MotifSignature};
use crate::triangle::TriangleMode;

pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const OVERFLOW: i32 = 3;
    pub const CONFIG: i32 = 4;
    pub const TOO_LARGE: i32 = 5;
    pub const MISMATCH: i32 = 6;
    pub const NONDETERMINISTIC: i32 = 7;
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } => exit::PARSE,
        Error::Overflow => exit::OVERFLOW,
        Error::Config(_) => exit::CONFIG,
        Error::Io(_) | Error::InvalidParameter(_) | Error::Classification(_) | Error::Consistency(_) => exit::USAGE,
    }
}

#[derive(Debug, Parser)]
#[command(name = "fastmotif", version, about = "Exact temporal motif counting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count all 36 motif classes in an edge list.
    Count(CountArgs),
    /// Compare the engine against brute-force enumeration.
    Verify(VerifyArgs),
    /// Time the pipeline across thread counts.
    Bench(BenchArgs),
    /// Write a seeded random temporal graph.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
struct EngineArgs {
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[command(flatten)]
    shared: SharedEngineArgs,
}

#[derive(Debug, Args)]
struct SharedEngineArgs {
    /// Degree above which a node is split across workers: an integer, `auto` or `inf`.
    #[arg(long, default_value = "auto")]
    degree_threshold: DegreeThreshold,
    /// `countall` or `removal` (single thread only).
    #[arg(long, default_value = "countall")]
    triangle_mode: TriangleMode,
    /// Comma-separated subset of star,pair,triangle, or `all`.
    #[arg(long, default_value = "all")]
    motifs: MotifFilter,
    /// First-edge positions per shard of a heavy node.
    #[arg(long, default_value_t = DEFAULT_SHARD_TARGET)]
    shard_target: usize,
}

impl SharedEngineArgs {
    fn config(&self, delta: Timestamp, workers: usize) -> RunConfig {
        RunConfig::new(delta)
            .workers(workers)
            .thr_d(self.degree_threshold)
            .tri_mode(self.triangle_mode)
            .motif_filter(self.motifs)
            .shard_target(self.shard_target)
    }
}

#[derive(Debug, Args)]
struct CountArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(i64).range(0..))]
    delta: i64,
    #[command(flatten)]
    engine: EngineArgs,
    /// `table`, `csv` or `json`.
    #[arg(long, default_value = "table")]
    format: OutputFormat,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(i64).range(0..))]
    delta: i64,
    /// Refuse inputs larger than this many edges.
    #[arg(long, default_value_t = DEFAULT_MAX_EDGES)]
    max_edges: usize,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(i64).range(0..))]
    delta: i64,
    /// Comma-separated thread counts.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    threads: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    repeat: usize,
    #[command(flatten)]
    engine: SharedEngineArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long)]
    edges: usize,
    #[arg(long)]
    t_max: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Parse arguments and run a subcommand, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { exit::USAGE } else { exit::OK };
        }
    };
    let result = match cli.command {
        Command::Count(a) => cmd_count(&a, stdout, stderr),
        Command::Verify(a) => cmd_verify(&a, stdout, stderr),
        Command::Bench(a) => cmd_bench(&a, stdout, stderr),
        Command::Gen(a) => cmd_gen(&a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn with_output<F>(path: Option<&Path>, stdout: &mut dyn Write, f: F) -> Result<(), Error>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => f(stdout)?,
    }
    Ok(())
}

pub fn load_edge_list(path: &Path) -> Result<ParsedGraph, Error> {
    let file = File::open(path)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    parse_edge_list(BufReader::new(file), ParseOptions::default())
}

/// Parse, index and count one input, timing every phase.
pub fn run_pipeline(input: &Path, config: &RunConfig) -> Result<CensusReport, Error> {
    config.validate()?;
    let clock = Instant::now();
    let parsed = load_edge_list(input)?;
    let ingest = clock.elapsed();

    let clock = Instant::now();
    let indexed = IndexedGraph::new(parsed.graph);
    let index = clock.elapsed();

    let (mut census, phases) = run_parallel_timed(&indexed, config)?;
    census.meta.input = input.display().to_string();

    let mut echo = BTreeMap::new();
    echo.insert("delta".into(), config.delta.to_string());
    echo.insert("threads".into(), config.workers.to_string());
    echo.insert("degree_threshold".into(), config.thr_d.to_string());
    echo.insert("triangle_mode".into(), config.tri_mode.to_string());
    echo.insert("motifs".into(), config.motif_filter.to_string());
    echo.insert("shard_target".into(), config.shard_target.to_string());
    echo.insert("self_loops_dropped".into(), parsed.self_loops_dropped.to_string());

    Ok(CensusReport {
        census,
        timings: ReportTimings {
            ingest: millis(ingest),
            index: millis(index),
            star_pair: millis(phases.star_pair),
            triangle: millis(phases.triangle),
            merge: millis(phases.merge),
        },
        config: echo,
    })
}

fn cmd_count(a: &CountArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Error> {
    let config = a.engine.shared.config(a.delta, a.engine.threads);
    let report = run_pipeline(&a.input, &config)?;
    if let Some(n) = report.config.get("self_loops_dropped").filter(|n| *n != "0") {
        let _ = writeln!(stderr, "note: dropped {n} self-loop edge(s)");
    }
    with_output(a.output.as_deref(), stdout, |w| write_census(&report, a.format, w))?;
    Ok(exit::OK)
}

/// One row of an engine/oracle comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiffRow {
    pub signature: MotifSignature,
    pub engine: u64,
    pub oracle: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub rows: Vec<DiffRow>,
}

impl VerifyOutcome {
    pub fn compare(engine: &MotifCensus, oracle: &MotifCensus) -> Self {
        let rows = oracle
            .iter()
            .map(|(signature, o)| DiffRow { signature, engine: engine.get(signature), oracle: o })
            .collect();
        VerifyOutcome { rows }
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &DiffRow> {
        self.rows.iter().filter(|r| r.engine != r.oracle)
    }

    pub fn matched(&self) -> usize {
        self.rows.len() - self.mismatches().count()
    }

    pub fn write<W: Write + ?Sized>(&self, out: &mut W) -> io::Result<()> {
        for r in self.mismatches() {
            writeln!(out, "MISMATCH {} engine={} oracle={}", r.signature, r.engine, r.oracle)?;
        }
        writeln!(out, "{}/{} match", self.matched(), self.rows.len())
    }

    pub fn exit_code(&self) -> i32 {
        if self.mismatches().next().is_none() {
            exit::OK
        } else {
            exit::MISMATCH
        }
    }
}

/// Run `engine` and the oracle on `graph`, print the per-signature diff and
/// return the verify exit code. `engine` is injectable so that a broken
/// engine can be exercised in tests.
pub fn verify_with_engine<F>(
    graph: IndexedGraph,
    delta: Timestamp,
    max_edges: usize,
    engine: F,
    out: &mut dyn Write,
) -> Result<i32, Error>
where
    F: FnOnce(&IndexedGraph) -> Result<MotifCensus, Error>,
{
    let edges = graph.graph.edge_count();
    if edges > max_edges {
        writeln!(out, "refusing to run the oracle on {edges} edges (limit {max_edges}; raise --max-edges)")?;
        return Ok(exit::TOO_LARGE);
    }
    let got = engine(&graph)?;
    let want = oracle_census(&graph.graph, delta)?;
    let outcome = VerifyOutcome::compare(&got, &want);
    outcome.write(out)?;
    Ok(outcome.exit_code())
}

fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write, _stderr: &mut dyn Write) -> Result<i32, Error> {
    let config = a.engine.shared.config(a.delta, a.engine.threads);
    config.validate()?;
    let graph = IndexedGraph::new(load_edge_list(&a.input)?.graph);
    verify_with_engine(graph, a.delta, a.max_edges, |g| run_parallel(g, &config), stdout)
}

/// FNV-1a over the census CSV; stable across runs and platforms.
pub fn census_digest(census: &MotifCensus) -> String {
    let mut csv = Vec::new();
    write_csv(census, &mut csv).expect("writing to a Vec cannot fail");
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in csv {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

fn min_median(mut xs: Vec<f64>) -> (f64, f64) {
    xs.sort_by(f64::total_cmp);
    (xs[0], xs[(xs.len() - 1) / 2])
}

fn cmd_bench(a: &BenchArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Error> {
    if a.repeat == 0 || a.threads.is_empty() {
        return Err(Error::InvalidParameter("--repeat and --threads must be non-empty".into()));
    }
    let mut reference: Option<MotifCensus> = None;
    let mut rows = Vec::new();
    for &threads in &a.threads {
        let config = a.engine.config(a.delta, threads);
        let mut runs = Vec::with_capacity(a.repeat);
        for _ in 0..a.repeat {
            let report = run_pipeline(&a.input, &config)?;
            match &reference {
                None => reference = Some(report.census.clone()),
                Some(r) if !r.same_counts(&report.census) => {
                    let _ = writeln!(stderr, "error: census with {threads} thread(s) differs from the first run");
                    return Ok(exit::NONDETERMINISTIC);
                }
                Some(_) => {}
            }
            runs.push(report.timings);
        }
        rows.push((threads, runs));
    }
    let census = reference.expect("at least one run");
    let digest = census_digest(&census);
    let total = census.total();

    with_output(a.output.as_deref(), stdout, |w| {
        writeln!(
            w,
            "threads,repeat,ingest_min_ms,ingest_median_ms,index_min_ms,index_median_ms,\
             star_pair_min_ms,star_pair_median_ms,triangle_min_ms,triangle_median_ms,\
             merge_min_ms,merge_median_ms,total_min_ms,total_median_ms,census_total,census_digest"
        )?;
        for (threads, runs) in &rows {
            write!(w, "{threads},{}", runs.len())?;
            let phases: [fn(&ReportTimings) -> f64; 6] = [
                |t| t.ingest,
                |t| t.index,
                |t| t.star_pair,
                |t| t.triangle,
                |t| t.merge,
                ReportTimings::total,
            ];
            for phase in phases {
                let (min, med) = min_median(runs.iter().map(phase).collect());
                write!(w, ",{min:.3},{med:.3}")?;
            }
            writeln!(w, ",{total},{digest}")?;
        }
        Ok(())
    })?;
    Ok(exit::OK)
}

fn cmd_gen(a: &GenArgs, stdout: &mut dyn Write) -> Result<i32, Error> {
    let graph = generate_random_graph(a.nodes, a.edges, a.t_max, a.seed)?;
    with_output(a.output.as_deref(), stdout, |w| graph.write_edge_list(w))?;
    Ok(exit::OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["fastmotif"];
        full.extend_from_slice(args);
        let code = run_with(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_capture(&[]).0, exit::USAGE);
        assert_eq!(run_capture(&["count", "--delta", "3"]).0, exit::USAGE);
        assert_eq!(run_capture(&["count", "--input", "x", "--delta", "-3"]).0, exit::USAGE);
        assert_eq!(run_capture(&["count", "--input", "x", "--delta", "3", "--format", "xml"]).0, exit::USAGE);
        assert_eq!(run_capture(&["--help"]).0, exit::OK);
    }

    #[test]
    fn diff_report() {
        let oracle = MotifCensus::zeroed();
        let mut engine = MotifCensus::zeroed();
        let sig = crate::taxonomy::valid_signatures()[0];
        engine.add(sig, 2).unwrap();
        let outcome = VerifyOutcome::compare(&engine, &oracle);
        assert_eq!(outcome.matched(), 35);
        assert_eq!(outcome.exit_code(), exit::MISMATCH);
        let mut buf = Vec::new();
        outcome.write(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains(&format!("MISMATCH {sig} engine=2 oracle=0")));
        assert!(text.ends_with("35/36 match\n"));
    }

    #[test]
    fn digest_tracks_counts() {
        let a = MotifCensus::zeroed();
        let mut b = MotifCensus::zeroed();
        assert_eq!(census_digest(&a), census_digest(&b));
        b.add(crate::taxonomy::valid_signatures()[7], 1).unwrap();
        assert_ne!(census_digest(&a), census_digest(&b));
    }

    #[test]
    fn median_of_even_count_is_lower_middle() {
        assert_eq!(min_median(vec![4.0, 1.0, 3.0, 2.0]), (1.0, 2.0));
        assert_eq!(min_median(vec![5.0]), (5.0, 5.0));
    }
}
