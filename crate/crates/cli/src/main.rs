mod commands;
mod config;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;
use qflow::error::Error;

/// Batch driver for the flow-simulation study: runs simulations, scaling
/// sweeps, trade-off analyses, and the validation suite. Output is files.
#[derive(Parser)]
#[command(name = "qflow", version, about)]
struct Cli {
    /// Key-value configuration file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for noise trajectories.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Also dump the built circuits as text files.
    #[arg(long, global = true)]
    dump_circuit: bool,

    /// Vertical normalization of the algorithmic-error curve.
    #[arg(long, global = true, value_parser = ["bounded", "raw"])]
    normalization: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the flow field and emit ideal/exact/truncated field CSVs
    /// plus metrics.json.
    Simulate,
    /// Analytic error and gate-count curves over a qubit range.
    Scaling {
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Algorithmic-vs-hardware-error trade-off and equilibrium point.
    Tradeoff {
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Run the cross-module invariant suite.
    Validate,
}

fn assemble_config(cli: &Cli) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path).map_err(|e| Error::InvalidConfig {
            field: "config".into(),
            reason: format!("{}: {e}", path.display()),
        })?;
        cfg.apply_file(&text)?;
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if cli.dump_circuit {
        cfg.dump_circuit = true;
    }
    if let Some(norm) = &cli.normalization {
        cfg.set("normalization", norm)?;
    }
    match &cli.command {
        Command::Scaling { n_min, n_max } | Command::Tradeoff { n_min, n_max } => {
            if let Some(n) = n_min {
                cfg.n_min = *n;
            }
            if let Some(n) = n_max {
                cfg.n_max = *n;
            }
        }
        _ => {}
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match assemble_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match &cli.command {
        Command::Simulate => commands::cmd_simulate(&cfg).map(|()| true),
        Command::Scaling { .. } => commands::cmd_scaling(&cfg).map(|()| true),
        Command::Tradeoff { .. } => commands::cmd_tradeoff(&cfg).map(|()| true),
        Command::Validate => commands::cmd_validate(),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::usage_exit_code(&e))
        }
    }
}
