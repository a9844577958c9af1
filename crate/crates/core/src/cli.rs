//! The `iawd` command line: `test`, `estimate` and `power`.
//!
//! Reports go to stdout as JSON; diagnostics and progress go to stderr.
//! Exit codes: 0 on success, 1 on any error, 2 when `test --gate` rejects.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::bootstrap::Procedure;
use crate::error::Error;
use crate::estimate::estimate;
use crate::family::Family;
use crate::sample::Sample;
use crate::statistic::StatKind;
use crate::study::{emit_table, run_study_with_progress, StudyConfig, TableFormat};
use crate::weight::{WeightShape, WeightSpec};

#[derive(Debug, Parser)]
#[command(name = "iawd", version, about = "Goodness-of-fit tests for independent additive weighted bias distributions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bootstrap goodness-of-fit test of one CSV column.
    Test(TestArgs),
    /// Method-of-moments estimates for one CSV column.
    Estimate(EstimateArgs),
    /// Run a power study described by a JSON config.
    Power(PowerArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// CSV file; the header row is optional.
    pub data: PathBuf,
    /// Column to read, by header name or zero-based index.
    #[arg(long, default_value = "0")]
    pub column: String,
    /// Skip empty cells and NA tokens instead of failing on them.
    #[arg(long)]
    pub drop_na: bool,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[arg(long)]
    pub family: Family,
    /// `t` (Fourier side) or `u` (Laplace side, cpgamma only). Defaults to
    /// `u` with the laplace weight and `t` otherwise.
    #[arg(long)]
    pub stat: Option<StatKind>,
    /// `gauss`, `expabs` or `laplace`. Defaults to `laplace` for `--stat u`
    /// and `gauss` otherwise.
    #[arg(long)]
    pub weight: Option<WeightShape>,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long = "B", default_value_t = 500)]
    pub b: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Exit with status 2 when the null hypothesis is rejected.
    #[arg(long)]
    pub gate: bool,
    #[command(flatten)]
    pub input: DataArgs,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub family: Family,
    #[command(flatten)]
    pub input: DataArgs,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    /// Study config (JSON).
    pub config: PathBuf,
    /// Directory for the output tables.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// File name stem; defaults to the config's file stem.
    #[arg(long)]
    pub stem: Option<String>,
    /// Comma-separated list of tsv, markdown, json.
    #[arg(long, value_delimiter = ',', default_value = "json,tsv,markdown")]
    pub format: Vec<TableFormat>,
}

/// A CLI failure: a message for stderr and exit status 1.
#[derive(Debug)]
pub struct CliError(pub String);

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn fail<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError(msg.into()))
}

fn is_na(token: &str) -> bool {
    matches!(token.to_ascii_lowercase().as_str(), "" | "na" | "n/a" | "nan" | "null")
}

/// Reads one column of a CSV file. The first row is a header when
/// `column` is a name, or when any of its fields is not a number.
pub fn read_column(path: &Path, column: &str, drop_na: bool) -> CliResult<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for r in reader.records() {
        records.push(r.map_err(|e| CliError(format!("{}: {e}", path.display())))?);
    }
    let Some(first) = records.first() else {
        return fail(format!("{} is empty", path.display()));
    };
    let by_index = column.parse::<usize>().ok();
    let has_header = by_index.is_none() || first.iter().any(|f| f.parse::<f64>().is_err());
    let idx = match by_index {
        Some(i) => i,
        None => match first.iter().position(|h| h == column) {
            Some(i) => i,
            None => return fail(format!("no column named `{column}` in {}", path.display())),
        },
    };

    let mut values = Vec::new();
    let skip = usize::from(has_header);
    for (k, rec) in records.iter().enumerate().skip(skip) {
        let line = k + 1;
        let token = rec.get(idx).unwrap_or("");
        match token.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            _ if drop_na && is_na(token) => {}
            _ if token.is_empty() => {
                return fail(format!("line {line}: empty cell in column {column} (pass --drop-na to skip)"))
            }
            _ => return fail(format!("line {line}: `{token}` is not a number")),
        }
    }
    if values.is_empty() {
        return fail(format!("no observations in column {column}"));
    }
    Ok(values)
}

fn load_sample(family: Family, input: &DataArgs) -> CliResult<Sample> {
    let values = read_column(&input.data, &input.column, input.drop_na)?;
    let sample = if family.is_discrete() {
        Sample::new_counts(values)?
    } else {
        Sample::new(values)?
    };
    Ok(sample)
}

fn params_object(family: Family, params: &[f64]) -> Map<String, Value> {
    family
        .param_names()
        .iter()
        .zip(params)
        .map(|(name, v)| (name.to_string(), json!(v)))
        .collect()
}

fn resolve_test(args: &TestArgs) -> CliResult<Procedure> {
    let (shape, stat) = match (args.weight, args.stat) {
        (Some(w), Some(s)) => (w, s),
        (Some(WeightShape::LaplaceExp), None) => (WeightShape::LaplaceExp, StatKind::U),
        (Some(w), None) => (w, StatKind::T),
        (None, Some(StatKind::U)) => (WeightShape::LaplaceExp, StatKind::U),
        (None, _) => (WeightShape::GaussFamily, StatKind::T),
    };
    Ok(Procedure::new(args.family, WeightSpec::new(shape, args.gamma)?, stat)?)
}

fn cmd_test(args: &TestArgs, out: &mut dyn Write) -> CliResult<i32> {
    let procedure = resolve_test(args)?;
    let sample = load_sample(args.family, &args.input)?;
    let o = procedure.test(&sample, args.b, args.alpha, args.seed)?;
    let params = params_object(args.family, o.estimated.as_slice());
    let mut report = Map::new();
    report.insert("statistic".into(), json!(o.statistic));
    report.insert("p_value".into(), json!(o.p_value));
    report.insert("critical_value".into(), json!(o.critical_value));
    report.insert("rejected".into(), json!(o.rejected));
    report.insert("family".into(), json!(args.family));
    report.insert("stat".into(), json!(procedure.stat));
    report.insert("weight".into(), json!(procedure.weight.shape()));
    report.insert("gamma".into(), json!(procedure.weight.gamma()));
    report.insert("B".into(), json!(o.b));
    report.insert("alpha".into(), json!(o.alpha));
    report.insert("seed".into(), json!(o.seed));
    report.insert("n".into(), json!(sample.len()));
    report.insert("redraws".into(), json!(o.redraws));
    for (name, v) in &params {
        report.insert(format!("{name}_hat"), v.clone());
    }
    report.insert("params".into(), Value::Object(params));
    write_json(out, &Value::Object(report))?;
    Ok(if args.gate && o.rejected { 2 } else { 0 })
}

fn cmd_estimate(args: &EstimateArgs, out: &mut dyn Write) -> CliResult<i32> {
    let sample = load_sample(args.family, &args.input)?;
    let spec = match estimate(args.family, &sample) {
        Ok(s) => s,
        Err(e @ Error::InvalidMomentSolution(_)) => {
            return fail(format!(
                "{e}\nsample moments: n = {}, mean = {}, variance = {}, third central moment = {}",
                sample.len(),
                sample.mean(),
                sample.variance(),
                sample.third_central()
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let report = json!({
        "family": args.family,
        "n": sample.len(),
        "params": params_object(args.family, spec.params().as_slice()),
    });
    write_json(out, &report)?;
    Ok(0)
}

fn cmd_power(args: &PowerArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError(format!("cannot read {}: {e}", args.config.display())))?;
    let cfg = StudyConfig::from_json(&text)?;
    let stem = match &args.stem {
        Some(s) => s.clone(),
        None => args
            .config
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "power".into()),
    };
    let total = cfg.rows.len() * cfg.columns()?.len();
    let done = std::sync::atomic::AtomicUsize::new(0);
    let table = run_study_with_progress(&cfg, |i, j, cell| {
        let k = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
        eprintln!("[{k}/{total}] row {i} column {j}: {}", cell.display());
    })?;
    let failed = table.rows.iter().flat_map(|r| &r.cells).filter(|c| c.rate.is_none()).count();
    if failed > 0 {
        let _ = writeln!(err, "warning: {failed} cell(s) failed and are marked ERR");
    }

    fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError(format!("cannot create {}: {e}", args.out_dir.display())))?;
    let mut written = Vec::new();
    for &format in &args.format {
        let path = args.out_dir.join(format!("{stem}.{}", format.extension()));
        fs::write(&path, emit_table(&table, format))
            .map_err(|e| CliError(format!("cannot write {}: {e}", path.display())))?;
        written.push(path.display().to_string());
    }
    write_json(
        out,
        &json!({
            "files": written,
            "config_hash": table.metadata.config_hash,
            "wall_time_secs": table.metadata.wall_time_secs,
            "failed_cells": failed,
        }),
    )?;
    Ok(0)
}

fn write_json(out: &mut dyn Write, v: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    writeln!(out, "{text}").map_err(|e| CliError(format!("cannot write report: {e}")))
}

/// Caps the rayon pool at `IAWD_THREADS` workers when set to a positive
/// number; `0` or unset leaves the default.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("IAWD_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError(format!("IAWD_THREADS must be a non-negative integer, got `{raw}`")))?;
    if threads > 0 {
        // fails only if a pool already exists, in which case it stays
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Test(a) => cmd_test(a, out),
        Command::Estimate(a) => cmd_estimate(a, out),
        Command::Power(a) => cmd_power(a, out, err),
    });
    match result {
        Ok(code) => code,
        Err(CliError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}
