//! Command-line front end for `rabi-thermo`.

pub mod config;
pub mod diagnose;
pub mod output;

use std::path::Path;

use clap::{Parser, Subcommand};
use rabi_thermo::model::singular_couplings;
use rabi_thermo::thermometry::{critical_grid, linear_grid, sweep};
use thiserror::Error;

use config::{ConfigArgs, Format, RunConfig};
use output::{Metadata, Row, SweepDocument};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Core(#[from] rabi_thermo::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 2 for bad input, 3 for I/O, 1 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        use rabi_thermo::Error as E;
        match self {
            CliError::Invalid(_) => 2,
            CliError::Core(E::Numerical(_)) => 1,
            CliError::Core(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rabi-thermo",
    version,
    about = "Rabi-probe thermometry: phase diagnosis and coupling sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report λ_c, λ_EP, the phase, τ and fixed-point stability at --lambda.
    Diagnose(ConfigArgs),
    /// Tabulate δ²T over a grid of couplings.
    Sweep(ConfigArgs),
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Diagnose(args) => {
            let cfg = RunConfig::resolve(args.load()?)?;
            let report = diagnose::diagnose(&cfg)?;
            let text = match cfg.format {
                Format::Json => serde_json::to_string_pretty(&report).expect("serializable report") + "\n",
                Format::Csv => report.to_text(),
            };
            emit(cfg.output_path(), &text)
        }
        Command::Sweep(args) => {
            let cfg = RunConfig::resolve(args.load()?)?;
            let doc = sweep_document(&cfg)?;
            let text = match cfg.format {
                Format::Csv => doc.to_csv().map_err(|e| CliError::Invalid(e.to_string()))?,
                Format::Json => doc.to_json(),
            };
            emit(cfg.output_path(), &text)
        }
    }
}

/// Run the sweep described by `cfg`.
pub fn sweep_document(cfg: &RunConfig) -> Result<SweepDocument, CliError> {
    let base = cfg.params()?;
    let lambda_c = singular_couplings(&base)?.lambda_c;
    let grid = if cfg.relative_grid {
        critical_grid(cfg.lambda_min, cfg.lambda_max, cfg.steps)?
            .into_iter()
            .map(|x| x * lambda_c)
            .collect()
    } else {
        linear_grid(cfg.lambda_min, cfg.lambda_max, cfg.steps)?
    };
    if let Some(bad) = grid.iter().find(|l| **l < 0.0) {
        return Err(CliError::Invalid(format!("negative coupling {bad} in grid")));
    }
    let regime = cfg.regime.resolve(&base);
    let rows = sweep(&base, &grid, regime, cfg.repetitions)?;
    Ok(SweepDocument {
        metadata: Metadata {
            version: env!("CARGO_PKG_VERSION").into(),
            regime: regime.to_string(),
            lambda_c,
            config: cfg.clone(),
        },
        rows: rows.iter().map(|r| Row::new(r, &cfg.estimators)).collect(),
    })
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
