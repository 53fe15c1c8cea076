use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use msrom::{parse_config, render, run_experiment};

#[derive(Parser)]
#[command(
    name = "msrom",
    version,
    about = "Multi-slice vs Petrov-Galerkin experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config and write the CSV report.
    Run {
        config: PathBuf,
        /// Overrides `output_path`; without either the CSV goes to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Parse and validate a config without running it.
    Validate { config: PathBuf },
    /// Compare the analytic water-filling value with brute-force enumeration.
    Oracle { n: usize, seed: u64 },
}

const ORACLE_TUPLES: usize = 200;

fn load(path: &PathBuf) -> Result<msrom::ExperimentConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text).with_context(|| format!("in {}", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run {
            config,
            output,
            quiet,
        } => {
            let cfg = load(&config)?;
            let outcome = run_experiment(&cfg)?;
            let csv = render(&outcome.rows);
            match output.or_else(|| cfg.output_path.clone()) {
                Some(path) => {
                    fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?
                }
                None => print!("{csv}"),
            }
            let unconverged = outcome.rows.iter().filter(|r| !r.converged).count();
            if !quiet {
                eprintln!("{} rows, {} unconverged", outcome.rows.len(), unconverged);
            }
            Ok(if unconverged > 0 {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Validate { config } => {
            let cfg = load(&config)?;
            println!("ok: mode {}, {} row(s)", cfg.mode.label(), cfg.rows());
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { n, seed } => {
            let sweep = msrom::oracle::oracle_sweep(n, seed, ORACLE_TUPLES)?;
            println!(
                "n = {n}: max relative deviation {:e} over {} tuples",
                sweep.max_relative_deviation, sweep.tuples
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
