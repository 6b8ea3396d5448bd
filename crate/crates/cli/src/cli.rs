use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "gorilla", version, about = "Fatigue-aware layout optimization for mid-air VR buttons")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// JSON run configuration; missing fields take their defaults.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Global seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads (0 = all cores). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,

    /// Relative σ of the per-sample joint-load noise.
    #[arg(long, global = true, value_name = "SIGMA")]
    pub noise: Option<f64>,

    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Also write SVG charts.
    #[arg(long, global = true)]
    pub plot: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one episode of a layout and write its trace.
    Simulate {
        /// Cells of buttons 0..n, e.g. `8,9,10`.
        #[arg(long)]
        layout: String,
    },
    /// Rank every layout by exact simulation.
    Enumerate {
        #[arg(long)]
        buttons: Option<usize>,
        /// `rl_layouts.csv` or `bo_incumbents.csv` to score against the oracle.
        #[arg(long, value_name = "CSV")]
        join: Option<PathBuf>,
    },
    /// Train or search for layouts.
    Optimize {
        #[command(subcommand)]
        method: Method,
    },
    /// Evaluate layouts over repeated noisy trials.
    Compare {
        /// Comma-separated: static, paper-bo, oracle, rl, bo, or cells like 17-16-15.
        #[arg(long)]
        layouts: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        /// Take `rl`/`bo` layouts from a previous `optimize` output directory.
        #[arg(long, value_name = "DIR")]
        from: Option<PathBuf>,
    },
    /// Train the five-button frequency-weighted task.
    FreqTask {
        #[arg(long, default_value_t = 1)]
        seeds: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum Method {
    /// Policy-gradient layout agent.
    Rl {
        #[arg(long, default_value_t = 1)]
        seeds: usize,
        #[arg(long)]
        buttons: Option<usize>,
    },
    /// Sobol-initialized Bayesian optimization.
    Bo {
        #[arg(long, default_value_t = 1)]
        seeds: usize,
        #[arg(long)]
        buttons: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate { .. } => "simulate",
            Command::Enumerate { .. } => "enumerate",
            Command::Optimize { method: Method::Rl { .. } } => "optimize rl",
            Command::Optimize { method: Method::Bo { .. } } => "optimize bo",
            Command::Compare { .. } => "compare",
            Command::FreqTask { .. } => "freq-task",
        }
    }
}
