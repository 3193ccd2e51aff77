//! The experiment runner behind the `kvnlab` binary.
//!
//! `kvnlab run <config> [--svg] [--output path] [--key value ...]` runs one
//! experiment from a flat `key = value` file, writing a CSV and a
//! `<csv>.meta.json` sidecar. `kvnlab compare <a> <b> --tol <t>` diffs two
//! CSVs on a shared first column.
//!
//! Exit codes: 0 success, 1 comparison failed, 2 validation error,
//! 3 numerical resolution error, 4 I/O error.

pub mod compare;
pub mod config;
pub mod experiments;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

pub use compare::{compare_tables, CompareReport};
pub use config::{Experiment, ExperimentConfig};
pub use experiments::{execute, Outcome};
pub use output::Table;

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "KVNLAB_THREADS";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::Resolution { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "kvnlab", version, about = "KvN and quantum phase-space experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the experiment described by a key = value config file.
    Run {
        config: PathBuf,
        /// CSV path; overrides the config's `output` key.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Also write an SVG polyline of the primary curve.
        #[arg(long)]
        svg: bool,
        /// Parameter overrides as `--key value`.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        overrides: Vec<String>,
    },
    /// Compare two CSV files on a shared first column.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        tol: f64,
        /// Columns to compare (default: all shared columns).
        #[arg(long)]
        column: Vec<String>,
        /// Add this file's columns to the second file before comparing.
        #[arg(long)]
        add: Option<PathBuf>,
    },
}

/// Applies `KVNLAB_THREADS` to the global worker pool. Only the first call
/// in a process has an effect.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses arguments (including the program name), runs, and returns the
/// exit code. Messages go to stdout and stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    let result = match cli.command {
        Command::Run {
            config,
            output,
            svg,
            overrides,
        } => run(&config, output.as_deref(), svg, &overrides).map(|paths| {
            for p in paths {
                println!("wrote {}", p.display());
            }
            0
        }),
        Command::Compare { a, b, tol, column, add } => {
            compare_files(&a, &b, add.as_deref(), &column, tol).map(|report| {
                println!("{report}");
                if report.pass {
                    0
                } else {
                    1
                }
            })
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Loads a config file and applies `--key value` overrides.
pub fn load_config(path: &Path, output: Option<&Path>, overrides: &[String]) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut pairs = config::parse_config_text(&text)?;
    pairs.extend(config::parse_overrides(overrides)?);
    if let Some(o) = output {
        pairs.push(("output".into(), o.display().to_string()));
    }
    ExperimentConfig::from_pairs(&pairs, None)
}

/// Runs a config file and writes its artifacts; returns the paths written.
pub fn run(config: &Path, output: Option<&Path>, svg: bool, overrides: &[String]) -> Result<Vec<PathBuf>, CliError> {
    let cfg = load_config(config, output, overrides)?;
    run_config(&cfg, svg)
}

pub fn run_config(cfg: &ExperimentConfig, svg: bool) -> Result<Vec<PathBuf>, CliError> {
    let outcome = execute(cfg)?;
    let csv_path = cfg.output.clone();
    outcome.table.write(&csv_path)?;

    let mut params = serde_json::Map::new();
    for (k, v) in &cfg.params {
        params.insert(k.clone(), json!(v));
    }
    if matches!(cfg.experiment, Experiment::TwoSlitClassical | Experiment::TwoSlitQuantum) {
        params.insert("open".into(), json!(format!("{:?}", cfg.open)));
    }
    if cfg.experiment == Experiment::KvnPostulateCheck {
        params.insert("times".into(), json!(cfg.times));
    }
    let meta = json!({
        "experiment": cfg.experiment.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "output": csv_path.display().to_string(),
        "columns": outcome.table.headers,
        "parameters": params,
        "grid": outcome.grid,
        "tolerances": outcome.tolerances,
        "results": outcome.results,
        "warnings": outcome.warnings,
    });
    let meta_path = output::sidecar_path(&csv_path);
    let text = serde_json::to_string_pretty(&meta).map_err(|e| CliError::Io(e.to_string()))?;
    output::write_text(&meta_path, &(text + "\n"))?;

    let mut written = vec![csv_path.clone(), meta_path];
    if svg {
        let svg_path = output::svg_path(&csv_path);
        output::write_text(&svg_path, &outcome.table.to_svg())?;
        written.push(svg_path);
    }
    Ok(written)
}

pub fn compare_files(
    a: &Path,
    b: &Path,
    add: Option<&Path>,
    columns: &[String],
    tol: f64,
) -> Result<CompareReport, CliError> {
    let ta = Table::read(a)?;
    let tb = Table::read(b)?;
    let tc = add.map(Table::read).transpose()?;
    compare_tables(&ta, &tb, tc.as_ref(), columns, tol)
}
