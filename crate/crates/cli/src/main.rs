//! `magbridge` command-line front end.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use commands::{EvolveModel, Outcome, SweepTarget};
use config::RunConfig;
use output::{write_table, Format, Meta};

#[derive(Parser)]
#[command(name = "magbridge", version, about = "Spin–magnon–photon couplings, sweeps and master-equation runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Couplings, zero-point magnetization and resonant field at one geometry.
    Couplings(Common),
    /// Grid sweep over detuning, radius and gap.
    Sweep {
        #[arg(long, value_enum)]
        target: SweepTarget,
        #[command(flatten)]
        common: Common,
    },
    /// Time evolution from the excited spin with empty modes.
    Evolve {
        #[arg(long, value_enum)]
        model: EvolveModel,
        #[command(flatten)]
        common: Common,
    },
    /// Walker characteristic-equation scan, roots and Kittel check.
    Walker(Common),
}

#[derive(Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads for sweeps.
    #[arg(long)]
    workers: Option<usize>,
    /// Exit 0 even when a run is flagged.
    #[arg(long)]
    allow_flagged: bool,
}

fn run(cli: Cli) -> Result<bool> {
    let (common, label) = match &cli.command {
        Command::Couplings(c) => (c, "couplings".to_string()),
        Command::Sweep { target, common } => (common, format!("sweep --target {target:?}").to_lowercase()),
        Command::Evolve { model, common } => (common, format!("evolve --model {model:?}").to_lowercase()),
        Command::Walker(c) => (c, "walker".to_string()),
    };
    let bytes = std::fs::read(&common.config).with_context(|| format!("reading {}", common.config.display()))?;
    let text = std::str::from_utf8(&bytes).context("configuration is not UTF-8")?;
    let cfg = RunConfig::parse(text)?;

    let Outcome { table, flags } = match &cli.command {
        Command::Couplings(_) => commands::couplings(&cfg)?,
        Command::Sweep { target, .. } => commands::sweep(&cfg, *target, common.workers)?,
        Command::Evolve { model, .. } => commands::evolve(&cfg, *model)?,
        Command::Walker(_) => commands::walker(&cfg)?,
    };

    let meta = Meta::new(label, &bytes);
    let mut buf = Vec::new();
    write_table(&mut buf, common.format, &meta, &table)?;
    match &common.out {
        Some(path) => std::fs::write(path, &buf).with_context(|| format!("writing {}", path.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&buf)?;
            stdout.flush()?;
        }
    }
    for f in &flags {
        eprintln!("warning: {f}");
    }
    Ok(flags.is_empty() || common.allow_flagged)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: run flagged (pass --allow-flagged to accept)");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
