//! Experiment harness for gossip rank-based statistics.
//!
//! Subcommands: `spectral`, `rank`, `wilcoxon`, `trim`. Every option can
//! also come from a flat key-value config file (`--config`); flags
//! override file settings. Exit codes: 0 success, 2 invalid
//! configuration, 3 graph generation failure, 4 estimator failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ExperimentConfig, Overrides};
use gossip_rank::Error;

#[derive(Parser)]
#[command(name = "gossip-rank", version, about = "Gossip rank-based statistics experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report graph shape, connectivity, and spectral quantities.
    Spectral(CommonArgs),
    /// Estimate ranks (GoRank); one error trace per sampling mode.
    Rank(CommonArgs),
    /// Estimate the Wilcoxon statistic and run the rank-sum test.
    Wilcoxon(CommonArgs),
    /// Estimate the trimmed mean (GoTrim, adaptive and original).
    Trim(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Flat key-value config file; flags override its settings.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Graph topology: complete | ws | geometric.
    #[arg(long)]
    graph: Option<String>,
    /// Node count.
    #[arg(long)]
    n: Option<usize>,
    /// Watts-Strogatz lattice degree (even).
    #[arg(long = "ws-k")]
    ws_k: Option<usize>,
    /// Watts-Strogatz rewiring probability.
    #[arg(long = "ws-p")]
    ws_p: Option<f64>,
    /// Geometric graph connection radius.
    #[arg(long = "geo-radius")]
    geo_radius: Option<f64>,
    /// Edge sampling: async | uniform. The rank command runs both when
    /// omitted.
    #[arg(long)]
    sampling: Option<String>,
    /// Edge activations per trial.
    #[arg(long)]
    ticks: Option<u64>,
    /// Number of independent trials.
    #[arg(long)]
    trials: Option<u64>,
    /// Record the metric every this many ticks.
    #[arg(long = "record-every")]
    record_every: Option<u64>,
    /// Trimming level in [0, 1/2) (trim command).
    #[arg(long)]
    alpha: Option<f64>,
    /// Corruption fraction in (0, 1/2) (trim command).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Corruption scale factor (default 10).
    #[arg(long)]
    scale: Option<f64>,
    /// Mid-rank tie handling.
    #[arg(long)]
    ties: bool,
    /// Base seed; all randomness derives from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path (a .meta provenance sidecar is written next to it).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn resolve(self) -> Result<ExperimentConfig, String> {
        let file = match &self.config {
            Some(path) => Some(config::parse_config_file(path)?),
            None => None,
        };
        let flags = Overrides {
            graph: self.graph,
            n: self.n,
            ws_k: self.ws_k,
            ws_p: self.ws_p,
            geo_radius: self.geo_radius,
            sampling: self.sampling,
            ticks: self.ticks,
            trials: self.trials,
            record_every: self.record_every,
            alpha: self.alpha,
            epsilon: self.epsilon,
            scale: self.scale,
            ties: if self.ties { Some(true) } else { None },
            seed: self.seed,
            out: self.out,
        };
        ExperimentConfig::resolve(file, flags)
    }
}

const EXIT_INVALID_CONFIG: u8 = 2;
const EXIT_GENERATION_FAILURE: u8 = 3;
const EXIT_ESTIMATOR_FAILURE: u8 = 4;

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter(_) | Error::InvalidInput(_) => EXIT_INVALID_CONFIG,
        Error::GenerationFailure { .. } => EXIT_GENERATION_FAILURE,
        Error::EstimatorFailure { .. } => EXIT_ESTIMATOR_FAILURE,
        Error::RunFailure { source, .. } => exit_code_for(source),
    }
}

fn run(command: Command) -> Result<(), (u8, String)> {
    let (name, cfg) = match command {
        Command::Spectral(a) => ("spectral", a.resolve()),
        Command::Rank(a) => ("rank", a.resolve()),
        Command::Wilcoxon(a) => ("wilcoxon", a.resolve()),
        Command::Trim(a) => ("trim", a.resolve()),
    };
    let cfg = cfg.map_err(|e| (EXIT_INVALID_CONFIG, e))?;
    let fail = |e: Error| (exit_code_for(&e), e.to_string());
    match name {
        "spectral" => {
            let report = commands::cmd_spectral(&cfg).map_err(fail)?;
            print!("{report}");
        }
        "rank" => {
            let results = commands::cmd_rank(&cfg).map_err(fail)?;
            for (mode, agg) in results {
                println!(
                    "{} final mean error = {}",
                    mode.name(),
                    output::fmt_sig(*agg.mean.last().unwrap())
                );
            }
        }
        "wilcoxon" => {
            let report = commands::cmd_wilcoxon(&cfg).map_err(fail)?;
            println!("oracle t_n = {}", output::fmt_sig(report.t_n));
            println!(
                "final mean relative error = {}",
                output::fmt_sig(report.final_mean_error)
            );
            println!(
                "final std error = {}",
                output::fmt_sig(*report.trace.std.last().unwrap())
            );
            println!("z = {}", output::fmt_sig(report.z));
            println!("p = {}", output::fmt_sig(report.p));
        }
        "trim" => {
            let report = commands::cmd_trim(&cfg).map_err(fail)?;
            println!(
                "trimmed-mean reference = {}",
                output::fmt_sig(report.reference)
            );
            println!(
                "final adaptive error = {}",
                output::fmt_sig(*report.adaptive.mean.last().unwrap())
            );
            println!(
                "final original error = {}",
                output::fmt_sig(*report.original.mean.last().unwrap())
            );
            println!(
                "corrupted-mean baseline error = {}",
                output::fmt_sig(report.baseline_error)
            );
            println!("ties handling = {}", report.ties_enabled);
        }
        _ => unreachable!(),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
