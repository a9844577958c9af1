//! Declarative Monte Carlo power studies.
//!
//! A [`StudyConfig`] names a null family, a grid of weight columns and a list
//! of data-generating rows. [`run_study`] fills every (row, column) cell with
//! an empirical rejection rate and [`emit_table`] renders the result.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bootstrap::{full_bootstrap_power, warp_speed_power, FailurePolicy, PowerEstimate, Procedure};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::sampling::{RngStream, Source};
use crate::statistic::StatKind;
use crate::weight::{WeightShape, WeightSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BootstrapMode {
    /// A full bootstrap test with `B` replicates in every repetition.
    Full,
    /// One bootstrap replicate per repetition, pooled.
    WarpSpeed,
}

/// One weight shape evaluated at several values of `γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightGrid {
    pub shape: WeightShape,
    pub gammas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    #[serde(default)]
    pub title: String,
    pub null_family: Family,
    /// Statistic for every column. When absent, laplace columns use `Û` and
    /// the others `T̂`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stat: Option<StatKind>,
    pub weights: Vec<WeightGrid>,
    pub n: usize,
    pub alpha: f64,
    /// Replicates per full bootstrap test; ignored in warp-speed mode.
    #[serde(rename = "B")]
    pub b: usize,
    pub repetitions: usize,
    pub bootstrap_mode: BootstrapMode,
    /// Handling of simulated data sets without a parameter estimate.
    #[serde(default)]
    pub on_estimation_failure: FailurePolicy,
    pub rows: Vec<Source>,
    pub seed: u64,
}

/// A table column: one weight, one statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub weight: WeightSpec,
    pub stat: StatKind,
}

impl Column {
    /// `ω₁` for the exponential weight, `ω₂` for the Gaussian family,
    /// `Û` for the Laplace-side statistic.
    pub fn label(&self) -> String {
        let name = match (self.stat, self.weight.shape()) {
            (StatKind::U, _) => "U",
            (StatKind::T, WeightShape::ExpAbs) => "ω₁",
            (StatKind::T, _) => "ω₂",
        };
        format!("{name} γ={}", self.weight.gamma())
    }
}

impl StudyConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: StudyConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::InvalidConfig(format!("at `{path}`: {}", e.into_inner()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn columns(&self) -> Result<Vec<Column>> {
        let mut out = Vec::new();
        for grid in &self.weights {
            for &g in &grid.gammas {
                let weight = WeightSpec::new(grid.shape, g)?;
                let stat = self.stat.unwrap_or(match grid.shape {
                    WeightShape::LaplaceExp => StatKind::U,
                    _ => StatKind::T,
                });
                out.push(Column { weight, stat });
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.repetitions < 50 {
            return bad(format!("repetitions must be at least 50, got {}", self.repetitions));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if self.n < 2 {
            return bad(format!("n must be at least 2, got {}", self.n));
        }
        if self.bootstrap_mode == BootstrapMode::Full && self.b == 0 {
            return bad("B must be at least 1 for full bootstrap studies".into());
        }
        for col in self.columns()? {
            Procedure::new(self.null_family, col.weight, col.stat)?;
        }
        if self.null_family.is_discrete() {
            for (i, row) in self.rows.iter().enumerate() {
                if !row.is_discrete() {
                    return bad(format!(
                        "rows[{i}] ({}) is continuous but the {} null is count valued",
                        row.label(),
                        self.null_family
                    ));
                }
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    /// Rejection rate in `[0, 1]`; `None` when the cell failed.
    pub rate: Option<f64>,
    pub rejections: usize,
    pub estimation_failures: usize,
    pub redraws: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Cell {
    fn from_result(r: Result<PowerEstimate>) -> Self {
        match r {
            Ok(p) => Cell {
                rate: Some(p.rate),
                rejections: p.rejections,
                estimation_failures: p.estimation_failures,
                redraws: p.redraws,
                error: None,
            },
            Err(e) => Cell {
                rate: None,
                rejections: 0,
                estimation_failures: 0,
                redraws: 0,
                error: Some(e.to_string()),
            },
        }
    }

    /// The rate as an integer percentage, or `ERR`.
    pub fn display(&self) -> String {
        match self.rate {
            Some(r) => format!("{}", (100.0 * r).round() as i64),
            None => "ERR".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub label: String,
    pub source: Source,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub title: String,
    pub config_hash: String,
    pub wall_time_secs: f64,
    pub seed: u64,
    pub null_family: Family,
    pub n: usize,
    pub alpha: f64,
    #[serde(rename = "B")]
    pub b: usize,
    pub repetitions: usize,
    pub bootstrap_mode: BootstrapMode,
    pub on_estimation_failure: FailurePolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerTable {
    pub metadata: Metadata,
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
}

impl PowerTable {
    pub fn cell(&self, row: usize, col: usize) -> &Cell {
        &self.rows[row].cells[col]
    }
}

/// Runs every cell of the study. Equivalent to [`run_study_with_progress`]
/// with a no-op callback.
pub fn run_study(cfg: &StudyConfig) -> Result<PowerTable> {
    run_study_with_progress(cfg, |_, _, _| {})
}

/// Runs every cell of the study, calling `progress(row, column, cell)` as
/// cells complete.
///
/// All columns of row `i` share the master seed derived from `(seed, i)`, so
/// they see the same simulated data sets.
pub fn run_study_with_progress<P>(cfg: &StudyConfig, progress: P) -> Result<PowerTable>
where
    P: Fn(usize, usize, &Cell) + Sync,
{
    cfg.validate()?;
    let start = Instant::now();
    let columns = cfg.columns()?;
    let ncol = columns.len();
    let cells: Vec<Cell> = (0..cfg.rows.len() * ncol)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / ncol, k % ncol);
            let col = columns[j];
            let procedure = Procedure::new(cfg.null_family, col.weight, col.stat).expect("validated");
            let seed = RngStream::derive_seed(cfg.seed, &[i as u64]);
            let policy = cfg.on_estimation_failure;
            let result = match cfg.bootstrap_mode {
                BootstrapMode::WarpSpeed => {
                    warp_speed_power(&cfg.rows[i], &procedure, cfg.n, cfg.repetitions, cfg.alpha, seed, policy)
                }
                BootstrapMode::Full => {
                    full_bootstrap_power(&cfg.rows[i], &procedure, cfg.n, cfg.repetitions, cfg.b, cfg.alpha, seed, policy)
                }
            };
            let cell = Cell::from_result(result);
            progress(i, j, &cell);
            cell
        })
        .collect();

    let mut cells = cells.into_iter();
    let rows = cfg
        .rows
        .iter()
        .map(|source| Row {
            label: source.label(),
            source: source.clone(),
            cells: cells.by_ref().take(ncol).collect(),
        })
        .collect();
    Ok(PowerTable {
        metadata: Metadata {
            title: cfg.title.clone(),
            config_hash: cfg.hash(),
            wall_time_secs: start.elapsed().as_secs_f64(),
            seed: cfg.seed,
            null_family: cfg.null_family,
            n: cfg.n,
            alpha: cfg.alpha,
            b: cfg.b,
            repetitions: cfg.repetitions,
            bootstrap_mode: cfg.bootstrap_mode,
            on_estimation_failure: cfg.on_estimation_failure,
        },
        columns,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    Tsv,
    Markdown,
    Json,
}

impl TableFormat {
    pub fn extension(self) -> &'static str {
        match self {
            TableFormat::Tsv => "tsv",
            TableFormat::Markdown => "md",
            TableFormat::Json => "json",
        }
    }
}

impl std::str::FromStr for TableFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" => Ok(TableFormat::Tsv),
            "markdown" | "md" => Ok(TableFormat::Markdown),
            "json" => Ok(TableFormat::Json),
            other => Err(Error::InvalidConfig(format!("unknown table format `{other}`"))),
        }
    }
}

/// Renders a table. JSON keeps the raw rates and all metadata; TSV and
/// markdown show integer percentages.
pub fn emit_table(table: &PowerTable, format: TableFormat) -> String {
    let headers: Vec<String> = table.columns.iter().map(Column::label).collect();
    match format {
        TableFormat::Json => serde_json::to_string_pretty(table).expect("table serializes") + "\n",
        TableFormat::Tsv => {
            let mut out = format!("row\t{}\n", headers.join("\t"));
            for row in &table.rows {
                let cells: Vec<String> = row.cells.iter().map(Cell::display).collect();
                let _ = writeln!(out, "{}\t{}", row.label, cells.join("\t"));
            }
            out
        }
        TableFormat::Markdown => {
            let mut out = format!("| |{}|\n", headers.join("|"));
            let _ = writeln!(out, "|---|{}", "---:|".repeat(headers.len()));
            for row in &table.rows {
                let cells: Vec<String> = row.cells.iter().map(Cell::display).collect();
                let _ = writeln!(out, "|{}|{}|", row.label, cells.join("|"));
            }
            out
        }
    }
}
