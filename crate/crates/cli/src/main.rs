//! `relgas` — relativistic ideal/interacting gas calculations from a TOML
//! configuration.
//!
//! Every subcommand reads the same configuration schema (see `config`),
//! applies `--set key=value` overrides, runs one library operation, and
//! writes the result as JSON (default) or CSV.  Exit codes: 0 success,
//! 1 usage error, 2 invalid configuration, 3 numeric failure, 4 model
//! assumption violated.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use relgas_core::Error;

use crate::config::RunConfig;

#[derive(Debug, Parser)]
#[command(
    name = "relgas",
    version,
    about = "Grand-canonical statistics of a relativistic gas on static spacetimes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
struct CommonArgs {
    /// TOML configuration file.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Override the sampler seed from the configuration.
    #[arg(long)]
    seed: Option<u64>,

    /// Write the report to this file instead of stdout.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,

    /// Report format.
    #[arg(long, value_parser = ["json", "csv"])]
    format: Option<String>,

    /// Override a configuration key, e.g. --set gas.temperature_k=300.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Finite-volume pressure, vacuum energy, and expected occupation.
    Pressure(CommonArgs),
    /// Local intensity profile along a chart radius.
    DensityProfile(CommonArgs),
    /// Relativistic vs Newtonian observables over a grid of light speeds.
    NewtonSweep(CommonArgs),
    /// Kerr tidal potential table: finite differences vs closed form.
    KerrPotential(CommonArgs),
    /// Pressure over an increasing sequence of anti-de Sitter balls.
    AdsLimit(CommonArgs),
    /// Temperature at which the gas sources its own Einstein-static dust.
    DustClosure(CommonArgs),
    /// Grand-canonical Monte Carlo run.
    Sample(CommonArgs),
    /// Uniqueness certificate for the infinite-volume Gibbs state.
    UniquenessCheck(CommonArgs),
    /// Tolman temperature profile along a chart radius.
    Tolman(CommonArgs),
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Pressure(a)
            | Command::DensityProfile(a)
            | Command::NewtonSweep(a)
            | Command::KerrPotential(a)
            | Command::AdsLimit(a)
            | Command::DustClosure(a)
            | Command::Sample(a)
            | Command::UniquenessCheck(a)
            | Command::Tolman(a) => a,
        }
    }

    fn run(&self, cfg: &RunConfig) -> relgas_core::Result<crate::output::Report> {
        match self {
            Command::Pressure(_) => commands::pressure(cfg),
            Command::DensityProfile(_) => commands::density_profile(cfg),
            Command::NewtonSweep(_) => commands::newton_sweep(cfg),
            Command::KerrPotential(_) => commands::kerr_potential(cfg),
            Command::AdsLimit(_) => commands::ads_limit(cfg),
            Command::DustClosure(_) => commands::dust_closure_cmd(cfg),
            Command::Sample(_) => commands::sample(cfg),
            Command::UniquenessCheck(_) => commands::uniqueness_check(cfg),
            Command::Tolman(_) => commands::tolman(cfg),
        }
    }
}

const EXIT_USAGE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_MODEL: u8 = 4;

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Domain(_) => EXIT_CONFIG,
        Error::Numeric { .. } | Error::Overflow { .. } => EXIT_NUMERIC,
        Error::UnsupportedLimit(_) | Error::Model(_) => EXIT_MODEL,
    }
}

/// `RELGAS_THREADS` is reserved for future parallel quadrature/sampling;
/// it is validated (a positive integer) but currently ignored — all
/// computation is single-threaded and deterministic.
fn validate_thread_env() -> relgas_core::Result<()> {
    match std::env::var("RELGAS_THREADS") {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(()),
            _ => Err(Error::domain(format!(
                "RELGAS_THREADS must be a positive integer, got {raw:?}"
            ))),
        },
        Err(_) => Ok(()),
    }
}

fn split_override(entry: &str) -> relgas_core::Result<(String, String)> {
    match entry.split_once('=') {
        Some((key, value)) if !key.trim().is_empty() => {
            Ok((key.trim().to_string(), value.trim().to_string()))
        }
        _ => Err(Error::domain(format!(
            "--set expects KEY=VALUE, got {entry:?}"
        ))),
    }
}

fn run(cli: &Cli) -> relgas_core::Result<()> {
    validate_thread_env()?;
    let args = cli.command.common();

    let mut overrides = Vec::with_capacity(args.set.len());
    for entry in &args.set {
        overrides.push(split_override(entry)?);
    }
    let mut cfg = RunConfig::load(args.config.as_deref(), &overrides)?;

    // Typed flag overrides are applied after deserialization so that e.g.
    // a purely numeric output path is not reinterpreted as a TOML number.
    if let Some(seed) = args.seed {
        cfg.sampler.get_or_insert_with(Default::default).seed = seed;
    }
    if let Some(path) = &args.output {
        cfg.output.path = Some(path.to_string_lossy().into_owned());
    }
    if let Some(format) = &args.format {
        cfg.output.format = Some(format.clone());
    }

    let report = cli.command.run(&cfg)?;
    let format = cfg.output.format.as_deref().unwrap_or("json");
    let text = report.render(format)?;
    output::emit(&text, cfg.output.path.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            // Ignore a broken pipe while printing usage text.
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
