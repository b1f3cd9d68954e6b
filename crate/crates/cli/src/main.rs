mod commands;
mod config;

use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use config::{RunArgs, UsageError};

#[derive(Debug, Parser)]
#[command(name = "tokennet", version, about = "Decentralization analytics for token-transfer networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write synthetic fixture files.
    Gen(GenArgs),
    /// Daily graph features, core-periphery tests and core-day counts.
    Features(RunArgs),
    /// Features recomputed after removing each day's core.
    Counterfactual(RunArgs),
    /// Multi-horizon regressions of economic outcomes on network features.
    Regress(RunArgs),
    /// SVG figures and the tables behind them.
    Plot(RunArgs),
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("kind").required(true).args(["archetype", "planted", "trajectory"])))]
pub struct GenArgs {
    /// centralized, decentralized or distributed.
    #[arg(long)]
    pub archetype: Option<String>,
    /// Two-block core-periphery graph.
    #[arg(long)]
    pub planted: bool,
    /// Dated trajectory with a coupled economic series.
    #[arg(long)]
    pub trajectory: bool,
    /// Nodes (centralized, distributed).
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Hubs (decentralized).
    #[arg(long, default_value_t = 5)]
    pub hubs: usize,
    /// Leaves per hub (decentralized).
    #[arg(long, default_value_t = 10)]
    pub per_hub: usize,
    /// Degree (distributed).
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
    #[arg(long, default_value_t = 12)]
    pub n_core: usize,
    #[arg(long, default_value_t = 88)]
    pub n_periph: usize,
    #[arg(long, default_value_t = 0.9)]
    pub p_cc: f64,
    #[arg(long, default_value_t = 0.6)]
    pub p_cp: f64,
    #[arg(long, default_value_t = 0.05)]
    pub p_pp: f64,
    /// Trajectory length in days.
    #[arg(long)]
    pub days: Option<usize>,
    /// Coupling coefficient of the trajectory's return on its regressor.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Trajectory without any coupling.
    #[arg(long, conflicts_with = "beta")]
    pub no_coupling: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out: std::path::PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Gen(a) => commands::gen(&a),
        Command::Features(a) => a.resolve().and_then(|c| commands::features(&c)),
        Command::Counterfactual(a) => a.resolve().and_then(|c| commands::counterfactual(&c)),
        Command::Regress(a) => a.resolve().and_then(|c| commands::regress(&c)),
        Command::Plot(a) => a.resolve().and_then(|c| commands::plot(&c)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.is::<UsageError>() { 2 } else { 1 })
        }
    }
}
