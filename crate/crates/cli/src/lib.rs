//! Command-line front end for `charevo`: evolution tables, entanglement
//! curves and maps, stage pipelines and Fock-oracle checks.

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::path::PathBuf;

use clap::Parser;

use crate::config::{Command, Format, OracleSettings, RunConfig, SweepAxis};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "charevo", version, about = "Open-system evolution of bosonic modes via characteristic functions")]
pub struct Cli {
    /// Command to run; defaults to `mode` in the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Sweep axis `name=min:max:steps`; repeat for a grid. Replaces the config sweep.
    #[arg(long = "sweep", value_name = "NAME=MIN:MAX:STEPS")]
    pub sweep: Vec<SweepAxis>,

    #[arg(long)]
    pub oracle_cutoff: Option<usize>,

    #[arg(long)]
    pub oracle_dt: Option<f64>,

    /// Tolerance for oracle-check.
    #[arg(long)]
    pub tol: Option<f64>,
}

/// Rendered output plus a tolerance failure message, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub failure: Option<String>,
}

/// Merges the config file with command-line overrides.
pub fn resolve(cli: &Cli) -> CliResult<(Command, RunConfig)> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.output.path = Some(out.clone());
    }
    if let Some(format) = cli.format {
        cfg.output.format = Some(format);
    }
    if !cli.sweep.is_empty() {
        cfg.sweep = cli.sweep.clone();
    }
    if cli.oracle_cutoff.is_some() || cli.oracle_dt.is_some() {
        let o = cfg.oracle.get_or_insert_with(OracleSettings::default);
        o.cutoff = cli.oracle_cutoff.or(o.cutoff);
        o.dt = cli.oracle_dt.or(o.dt);
    }
    if cli.tol.is_some() {
        cfg.tol = cli.tol;
    }
    cfg.validate()?;
    let command = cli
        .command
        .or(cfg.mode)
        .ok_or_else(|| CliError::Config("no command given and the config has no mode".into()))?;
    Ok((command, cfg))
}

fn render<T: serde::Serialize>(format: Format, value: &T, csv: impl FnOnce() -> String) -> CliResult<String> {
    Ok(match format {
        Format::Csv => csv(),
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
    })
}

pub fn execute(command: Command, cfg: &RunConfig) -> CliResult<Outcome> {
    let format = cfg.output.format.unwrap_or(match command {
        Command::OracleCheck | Command::Pipeline => Format::Json,
        _ => Format::Csv,
    });
    let table = match command {
        Command::Evolve => commands::evolve(cfg)?,
        Command::EofCurve => commands::eof_curve(cfg)?,
        Command::EofMap => commands::eof_map(cfg)?,
        Command::PurityCurve => commands::purity_curve(cfg)?,
        Command::Pipeline => {
            let result = commands::pipeline(cfg)?;
            let text = render(format, &result, || result.stages.to_csv())?;
            return Ok(Outcome { text, failure: None });
        }
        Command::OracleCheck => {
            let outcome = commands::oracle_check(cfg)?;
            let r = &outcome.report;
            let text = render(format, r, || {
                format!(
                    "cutoff,dt,trace_loss,max_abs_chi_error,max_purity_error\n{},{:.11e},{:.11e},{:.11e},{:.11e}\n",
                    r.cutoff, r.dt, r.trace_loss, r.max_abs_chi_error, r.max_purity_error
                )
            })?;
            let failure = (!outcome.passed()).then(|| {
                format!(
                    "oracle deviation above tolerance {:.1e}: chi {:.3e}, purity {:.3e}",
                    outcome.tol, r.max_abs_chi_error, r.max_purity_error
                )
            });
            return Ok(Outcome { text, failure });
        }
    };
    let text = match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json()? + "\n",
    };
    Ok(Outcome { text, failure: None })
}

/// Runs the command and returns the process exit status: 0 on success,
/// 2 for configuration errors, 3 when a tolerance or accuracy limit fails.
pub fn run(cli: &Cli) -> i32 {
    let result = resolve(cli).and_then(|(command, cfg)| {
        let outcome = execute(command, &cfg)?;
        match &cfg.output.path {
            Some(path) => std::fs::write(path, &outcome.text)?,
            None => print!("{}", outcome.text),
        }
        Ok(outcome)
    });
    match result {
        Ok(Outcome { failure: None, .. }) => 0,
        Ok(Outcome { failure: Some(msg), .. }) => {
            eprintln!("error: {msg}");
            3
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
