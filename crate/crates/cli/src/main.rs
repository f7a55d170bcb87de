//! `robinlab run <config>` and `robinlab sweep <config>`.
//!
//! Exit codes: 0 on success, 2 when a soundness check fails, 1 on any
//! execution error.

mod config;
mod pipeline;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::ExperimentConfig;

#[derive(Parser)]
#[command(name = "robinlab", version, about = "Robin p-Laplacian experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory (overrides the config's `output`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the pipeline described by a config file.
    Run { config: PathBuf },
    /// Run the parameter grid in the config's `sweep` section.
    Sweep { config: PathBuf },
}

fn out_dir(cli_out: &Option<PathBuf>, cfg: &ExperimentConfig) -> PathBuf {
    cli_out
        .clone()
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(&cfg.name))
}

fn execute(cli: &Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker threads")?;
    }
    match &cli.command {
        Command::Run { config } => {
            let cfg = ExperimentConfig::load(config)?;
            let out = out_dir(&cli.out, &cfg);
            let outcome = pipeline::run(&cfg, &out)?;
            print!("{}", outcome.summary);
            println!("outputs: {}", out.display());
            Ok(outcome.sound)
        }
        Command::Sweep { config } => {
            let cfg = ExperimentConfig::load(config)?;
            let spec = cfg
                .sweep
                .as_ref()
                .context("schema violation at `sweep`: section required for the sweep command")?;
            let out = out_dir(&cli.out, &cfg);
            let rows = sweep::sweep(spec, &out)?;
            let failed = rows.iter().filter(|r| !r.error.is_empty()).count();
            println!("sweep: {} cells, {failed} with errors", rows.len());
            println!("outputs: {}", out.join("sweep.csv").display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(if cli.verbose { log::LevelFilter::Info } else { log::LevelFilter::Warn })
        .init();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("soundness check failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
