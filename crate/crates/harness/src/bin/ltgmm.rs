use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ltgmm_harness::{execute, Command, ExperimentConfig, HarnessError, Result};

/// Long-tailed Gaussian mixture experiments.
#[derive(Parser)]
#[command(name = "ltgmm", version)]
struct Cli {
    command: Command,
    /// Config file of `key = value` lines.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override one config key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Master seed (overrides `master_seed`).
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Output directory (overrides `out_dir`).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn load(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    for pair in &cli.set {
        cfg.set_pair(pair)?;
    }
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    if let Some(dir) = &cli.out {
        cfg.out_dir = dir.clone();
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = load(cli)?;
    let files = execute(cli.command, &cfg, &mut std::io::stdout().lock())?;
    for f in files {
        eprintln!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ltgmm: {e}");
            if let HarnessError::Io { source, .. } = &e {
                if source.kind() == std::io::ErrorKind::NotFound && cli.config.is_some() {
                    eprintln!("ltgmm: check the --config path");
                }
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
