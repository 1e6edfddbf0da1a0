//! specx: spectral regularity analysis of finite regular graphs.
//!
//! `analyze` runs the full pipeline on one graph, `batch` on every graph6
//! record of a file, `gen` emits family members as graph6, and `convert`
//! re-encodes graph6 records canonically. Failures exit with distinct codes
//! so scripts can tell usage, parse, precondition, and numerical errors
//! apart; see `specx --help`.

mod render;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use specx_core::analysis::AnalysisError;
use specx_core::excess::{self, Verdict};
use specx_core::families::{self, FamilyError};
use specx_core::{
    analyze_graph, parse_graph6, write_graph6, AnalysisOptions, AnalysisReport, Graph,
};

const TOL_EQUALITY_ENV: &str = "SPECX_TOL_EQUALITY";

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_PRECONDITION: u8 = 4;
const EXIT_NUMERICAL: u8 = 5;

const EXIT_HELP: &str = "Exit codes:
  0  success
  1  input/output failure
  2  usage error (bad flags, tolerances, or theorem names)
  3  graph parse failure (graph6 record or family spec)
  4  analysis precondition failure (empty, irregular, or disconnected graph)
  5  numerical failure (eigensolver or recurrence breakdown)

The SPECX_TOL_EQUALITY environment variable overrides the default equality
tolerance; an explicit --tol-equality flag beats the environment.";

#[derive(Parser)]
#[command(
    name = "specx",
    version,
    about = "Spectral regularity analysis of finite regular graphs",
    after_help = EXIT_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one graph and print the full report.
    Analyze(AnalyzeArgs),
    /// Analyze every graph6 record of a file, one record per line.
    Batch(BatchArgs),
    /// Generate a graph family member and print its graph6 record.
    Gen(GenArgs),
    /// Parse graph6 records and re-encode them canonically.
    Convert(ConvertArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// graph6 record of the graph
    #[arg(long, value_name = "RECORD")]
    g6: Option<String>,
    /// family spec NAME:ARGS, e.g. odd:4 or hamming:4,3 (see `specx gen --list`)
    #[arg(long, value_name = "NAME:ARGS")]
    family: Option<String>,
}

#[derive(Args)]
struct ToleranceArgs {
    /// relative eigenvalue clustering tolerance [default: 1e-7]
    #[arg(long, value_name = "F")]
    tol_cluster: Option<f64>,
    /// relative equality tolerance [default: 1e-6 or SPECX_TOL_EQUALITY]
    #[arg(long, value_name = "F")]
    tol_equality: Option<f64>,
    /// run only the named theorem variants (repeatable)
    #[arg(long = "theorem", value_name = "NAME")]
    theorems: Vec<String>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    tol: ToleranceArgs,
    /// emit the report as JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BatchArgs {
    /// input file, one graph6 record per line (UTF-8)
    #[arg(value_name = "FILE")]
    input: PathBuf,
    #[command(flatten)]
    tol: ToleranceArgs,
    /// emit JSON lines: one object per record, then a summary object
    #[arg(long)]
    json: bool,
    /// write output here instead of stdout
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// family spec NAME:ARGS, e.g. odd:4 or hamming:4,3
    #[arg(value_name = "NAME:ARGS", required_unless_present = "list")]
    spec: Option<String>,
    /// list the registered families and exit
    #[arg(long)]
    list: bool,
    /// write the record here instead of stdout
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ConvertArgs {
    /// single graph6 record to re-encode
    #[arg(long, value_name = "RECORD", conflicts_with = "input")]
    g6: Option<String>,
    /// input file, one graph6 record per line
    #[arg(value_name = "FILE", required_unless_present = "g6")]
    input: Option<PathBuf>,
    /// write output here instead of stdout
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

/// A failure with its documented exit code class.
#[derive(Debug)]
enum Failure {
    Io(String),
    Usage(String),
    Parse(String),
    Precondition(String),
    Numerical(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => EXIT_IO,
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Precondition(_) => EXIT_PRECONDITION,
            Failure::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m)
            | Failure::Usage(m)
            | Failure::Parse(m)
            | Failure::Precondition(m)
            | Failure::Numerical(m) => m,
        }
    }
}

fn classify_analysis(err: AnalysisError) -> Failure {
    let message = err.to_string();
    match err {
        AnalysisError::EmptyGraph
        | AnalysisError::NotRegular(_)
        | AnalysisError::Disconnected(_) => Failure::Precondition(message),
        AnalysisError::Spectra(_) | AnalysisError::Orthopoly(_) => Failure::Numerical(message),
        AnalysisError::UnknownTheorem(_) => Failure::Usage(message),
    }
}

fn failure_class(err: &AnalysisError) -> &'static str {
    match err {
        AnalysisError::EmptyGraph
        | AnalysisError::NotRegular(_)
        | AnalysisError::Disconnected(_) => "precondition",
        AnalysisError::Spectra(_) | AnalysisError::Orthopoly(_) => "numerical",
        AnalysisError::UnknownTheorem(_) => "usage",
    }
}

fn classify_family(err: FamilyError) -> Failure {
    Failure::Parse(format!("invalid family spec: {err}"))
}

fn read_env_equality() -> Result<Option<f64>, Failure> {
    match std::env::var(TOL_EQUALITY_ENV) {
        Ok(raw) => {
            let value: f64 = raw.trim().parse().map_err(|_| {
                Failure::Usage(format!("{TOL_EQUALITY_ENV} must be a number, got {raw:?}"))
            })?;
            Ok(Some(value))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(std::env::VarError::NotUnicode(_)) => Err(Failure::Usage(format!(
            "{TOL_EQUALITY_ENV} must be valid UTF-8"
        ))),
    }
}

fn build_options(tol: &ToleranceArgs) -> Result<AnalysisOptions, Failure> {
    let mut opts = AnalysisOptions::default();
    if let Some(c) = tol.tol_cluster {
        if !c.is_finite() || c <= 0.0 {
            return Err(Failure::Usage(format!(
                "--tol-cluster must be a positive number, got {c}"
            )));
        }
        opts.tolerances.cluster = c;
    }
    let equality = match tol.tol_equality {
        Some(e) => Some(e),
        None => read_env_equality()?,
    };
    if let Some(e) = equality {
        if !e.is_finite() || e <= 0.0 {
            return Err(Failure::Usage(format!(
                "equality tolerance must be a positive number, got {e}"
            )));
        }
        opts.tolerances.equality = e;
    }
    if !tol.theorems.is_empty() {
        for name in &tol.theorems {
            if excess::find(name).is_none() {
                let registered: Vec<&str> = excess::registry().iter().map(|t| t.name()).collect();
                return Err(Failure::Usage(format!(
                    "unknown theorem {name:?}; registered names: {}",
                    registered.join(", ")
                )));
            }
        }
        opts.theorems = Some(tol.theorems.clone());
    }
    Ok(opts)
}

fn load_graph(source: &SourceArgs) -> Result<Graph, Failure> {
    if let Some(g6) = &source.g6 {
        parse_graph6(g6.trim()).map_err(|e| Failure::Parse(format!("invalid graph6 record: {e}")))
    } else {
        let spec = source
            .family
            .as_deref()
            .expect("clap guarantees one source");
        families::generate_spec(spec).map_err(classify_family)
    }
}

/// Writes to stdout, treating a broken pipe as a clean early exit so that
/// piping into `head` and friends does not panic.
fn write_stdout(text: &str) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(Failure::Io(format!("cannot write to stdout: {e}"))),
    }
}

fn write_text(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => write_stdout(text),
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let opts = build_options(&args.tol)?;
    let graph = load_graph(&args.source)?;
    let report = analyze_graph(&graph, &opts).map_err(classify_analysis)?;
    if args.json {
        let body = serde_json::to_string_pretty(&report).expect("report serialises");
        write_stdout(&format!("{body}\n"))
    } else {
        write_stdout(&render::report_text(&report))
    }
}

struct LineFailure {
    class: &'static str,
    message: String,
}

struct LineResult {
    line: usize,
    record: String,
    outcome: Result<Box<AnalysisReport>, LineFailure>,
}

#[derive(Serialize)]
struct JsonError<'a> {
    class: &'a str,
    message: &'a str,
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    line: usize,
    g6: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<&'a AnalysisReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<JsonError<'a>>,
}

#[derive(Serialize, Default, Clone)]
struct VerdictCounts {
    equality: usize,
    strict: usize,
    optimizer_undefined: usize,
    not_applicable: usize,
}

#[derive(Serialize, Default)]
struct BatchSummary {
    total: usize,
    analyzed: usize,
    errors: BTreeMap<String, usize>,
    distance_regular: usize,
    strongly_regular: usize,
    verdicts: BTreeMap<String, VerdictCounts>,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a BatchSummary,
}

fn summarize(results: &[LineResult]) -> BatchSummary {
    let mut summary = BatchSummary {
        total: results.len(),
        ..BatchSummary::default()
    };
    for res in results {
        match &res.outcome {
            Ok(report) => {
                summary.analyzed += 1;
                if report.intersection_array.is_some() {
                    summary.distance_regular += 1;
                }
                if report.srg.is_some() {
                    summary.strongly_regular += 1;
                }
                for outcome in &report.theorems {
                    let counts = summary
                        .verdicts
                        .entry(outcome.theorem.to_string())
                        .or_default();
                    if !outcome.applicable {
                        counts.not_applicable += 1;
                        continue;
                    }
                    for rep in &outcome.reports {
                        match rep.verdict {
                            Verdict::Equality => counts.equality += 1,
                            Verdict::Strict => counts.strict += 1,
                            Verdict::OptimizerUndefined => counts.optimizer_undefined += 1,
                        }
                    }
                }
            }
            Err(failure) => {
                *summary.errors.entry(failure.class.to_string()).or_insert(0) += 1;
            }
        }
    }
    summary
}

fn truncate_record(record: &str) -> String {
    if record.len() <= 32 {
        record.to_string()
    } else {
        format!("{}...", &record[..29])
    }
}

fn batch_line(res: &LineResult) -> String {
    match &res.outcome {
        Ok(r) => {
            let equalities: Vec<String> = r
                .theorems
                .iter()
                .flat_map(|t| t.reports.iter())
                .filter(|rep| rep.verdict == Verdict::Equality)
                .map(|rep| format!("{} j={}", rep.theorem, rep.j))
                .collect();
            format!(
                "#{} {}: n={} k={} diameter={} distinct={} drg={} srg={} equalities={} warnings={}",
                res.line,
                truncate_record(&res.record),
                r.n,
                r.degree,
                r.diameter,
                r.d + 1,
                if r.intersection_array.is_some() {
                    "yes"
                } else {
                    "no"
                },
                if r.srg.is_some() { "yes" } else { "no" },
                if equalities.is_empty() {
                    "none".to_string()
                } else {
                    equalities.join(",")
                },
                r.warnings.len(),
            )
        }
        Err(f) => format!(
            "#{} {}: {} error: {}",
            res.line,
            truncate_record(&res.record),
            f.class,
            f.message
        ),
    }
}

fn summary_text(summary: &BatchSummary) -> String {
    let failed: usize = summary.errors.values().sum();
    let mut out = format!(
        "summary: {} records, {} analyzed, {} failed\n",
        summary.total, summary.analyzed, failed
    );
    out.push_str(&format!(
        "  distance-regular: {}; strongly regular: {}\n",
        summary.distance_regular, summary.strongly_regular
    ));
    for (name, counts) in &summary.verdicts {
        out.push_str(&format!(
            "  {}: {} equality, {} strict, {} undefined, {} not applicable\n",
            name, counts.equality, counts.strict, counts.optimizer_undefined, counts.not_applicable
        ));
    }
    for (class, count) in &summary.errors {
        out.push_str(&format!("  {class} errors: {count}\n"));
    }
    out
}

fn cmd_batch(args: BatchArgs) -> Result<(), Failure> {
    let opts = build_options(&args.tol)?;
    let content = fs::read_to_string(&args.input)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", args.input.display())))?;
    let records: Vec<(usize, String)> = content
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim().to_string()))
        .filter(|(_, line)| !line.is_empty())
        .collect();

    let results: Vec<LineResult> = records
        .into_par_iter()
        .map(|(line, record)| {
            let outcome = parse_graph6(&record)
                .map_err(|e| LineFailure {
                    class: "parse",
                    message: format!("invalid graph6 record: {e}"),
                })
                .and_then(|g| {
                    analyze_graph(&g, &opts)
                        .map(Box::new)
                        .map_err(|e| LineFailure {
                            class: failure_class(&e),
                            message: e.to_string(),
                        })
                });
            LineResult {
                line,
                record,
                outcome,
            }
        })
        .collect();

    let summary = summarize(&results);
    let mut out = String::new();
    if args.json {
        for res in &results {
            let record = JsonRecord {
                line: res.line,
                g6: &res.record,
                report: res.outcome.as_ref().ok().map(|b| b.as_ref()),
                error: res.outcome.as_ref().err().map(|f| JsonError {
                    class: f.class,
                    message: &f.message,
                }),
            };
            out.push_str(&serde_json::to_string(&record).expect("record serialises"));
            out.push('\n');
        }
        out.push_str(
            &serde_json::to_string(&SummaryLine { summary: &summary }).expect("summary serialises"),
        );
        out.push('\n');
    } else {
        for res in &results {
            out.push_str(&batch_line(res));
            out.push('\n');
        }
        out.push_str(&summary_text(&summary));
    }
    write_text(&args.output, &out)
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    if args.list {
        let mut out = String::new();
        for family in families::registry() {
            out.push_str(&format!("{:<10} {}\n", family.name(), family.usage()));
        }
        return write_text(&args.output, &out);
    }
    let spec = args
        .spec
        .as_deref()
        .expect("clap requires spec without --list");
    let graph = families::generate_spec(spec).map_err(classify_family)?;
    write_text(&args.output, &format!("{}\n", write_graph6(&graph)))
}

fn cmd_convert(args: ConvertArgs) -> Result<(), Failure> {
    let records: Vec<(usize, String)> = if let Some(g6) = &args.g6 {
        vec![(1, g6.trim().to_string())]
    } else {
        let path = args
            .input
            .as_ref()
            .expect("clap requires input without --g6");
        let content = fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
        content
            .lines()
            .enumerate()
            .map(|(i, line)| (i + 1, line.trim().to_string()))
            .filter(|(_, line)| !line.is_empty())
            .collect()
    };
    let mut out = String::new();
    for (line, record) in &records {
        let graph = parse_graph6(record)
            .map_err(|e| Failure::Parse(format!("line {line}: invalid graph6 record: {e}")))?;
        out.push_str(&write_graph6(&graph));
        out.push('\n');
    }
    write_text(&args.output, &out)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Batch(args) => cmd_batch(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Convert(args) => cmd_convert(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol_args(theorems: Vec<String>) -> ToleranceArgs {
        ToleranceArgs {
            tol_cluster: None,
            tol_equality: Some(1e-6),
            theorems,
        }
    }

    #[test]
    fn unknown_theorem_is_a_usage_error() {
        let err = build_options(&tol_args(vec!["d9-dist9".into()]))
            .err()
            .unwrap();
        assert_eq!(err.exit_code(), EXIT_USAGE);
        assert!(err.message().contains("d3-dist2"));
    }

    #[test]
    fn registered_theorem_names_are_accepted() {
        let opts = build_options(&tol_args(vec!["d4-dist12".into()])).unwrap();
        assert_eq!(opts.theorems, Some(vec!["d4-dist12".to_string()]));
    }

    #[test]
    fn nonpositive_tolerances_are_rejected() {
        let mut args = tol_args(vec![]);
        args.tol_cluster = Some(0.0);
        assert_eq!(build_options(&args).err().unwrap().exit_code(), EXIT_USAGE);
        let mut args = tol_args(vec![]);
        args.tol_equality = Some(-1.0);
        assert_eq!(build_options(&args).err().unwrap().exit_code(), EXIT_USAGE);
    }

    #[test]
    fn analysis_errors_map_to_documented_codes() {
        let empty = classify_analysis(AnalysisError::EmptyGraph);
        assert_eq!(empty.exit_code(), EXIT_PRECONDITION);
        let unknown = classify_analysis(AnalysisError::UnknownTheorem("x".into()));
        assert_eq!(unknown.exit_code(), EXIT_USAGE);
    }
}
