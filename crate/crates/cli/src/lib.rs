//! Experiment runner for the `gorilla` layout optimizer: configuration,
//! orchestration, and CSV/JSON/SVG result files.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod policy_file;
pub mod runner;

use cli::{Cli, Command, Method};
use commands::Source;
use config::{RunConfig, TaskVariant};
use error::{CliError, Result};
use output::OutputDir;
use runner::Pool;

/// Applies command-line overrides and validates; nothing is written yet.
pub fn prepare(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(cli.global.config.as_deref())?;
    if let Some(seed) = cli.global.seed {
        cfg.seed = seed;
    }
    if let Some(sigma) = cli.global.noise {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(CliError::Usage(format!("noise σ must be non-negative, got {sigma}")));
        }
        cfg.env.noise.load_sigma = sigma;
    }
    if let Some(out) = &cli.global.out {
        cfg.out = out.clone();
    }
    let seeds = match &cli.command {
        Command::Simulate { layout } => {
            commands::parse_layout(layout)?;
            1
        }
        Command::Enumerate { buttons, join } => {
            if let Some(b) = buttons {
                cfg.buttons = *b;
            }
            if let Some(j) = join {
                if !j.is_file() {
                    return Err(CliError::Usage(format!("--join: {} is not a file", j.display())));
                }
            }
            if cfg.env.noise.load_sigma != 0.0 || cfg.env.noise.duration_sigma != 0.0 {
                return Err(CliError::Usage("enumerate needs noise σ = 0".into()));
            }
            1
        }
        Command::Optimize { method } => {
            let (seeds, buttons) = match method {
                Method::Rl { seeds, buttons } | Method::Bo { seeds, buttons } => (*seeds, *buttons),
            };
            if let Some(b) = buttons {
                cfg.buttons = b;
            }
            if matches!(method, Method::Bo { .. }) && cfg.task == TaskVariant::Frequency {
                return Err(CliError::Usage("BO is implemented for the sequential task only".into()));
            }
            seeds
        }
        Command::Compare { layouts, trials, from } => {
            if let Some(t) = trials {
                cfg.compare.trials = *t;
            }
            if let Some(l) = layouts {
                cfg.compare.layouts = l.split(',').map(|s| s.trim().to_string()).collect();
            }
            for name in &cfg.compare.layouts {
                if !matches!(name.as_str(), "static" | "paper-bo" | "oracle" | "rl" | "bo") {
                    commands::parse_layout(name)?;
                }
            }
            if let Some(d) = from {
                if !d.is_dir() {
                    return Err(CliError::Usage(format!("--from: {} is not a directory", d.display())));
                }
            }
            1
        }
        Command::FreqTask { seeds } => {
            cfg.task = TaskVariant::Frequency;
            *seeds
        }
    };
    if seeds == 0 {
        return Err(CliError::Usage("--seeds must be at least 1".into()));
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs a parsed command line and returns the lines to print.
pub fn run(cli: &Cli) -> Result<Vec<String>> {
    let cfg = prepare(cli)?;
    let pool = Pool::new(cli.global.jobs)?;
    let mut out = OutputDir::create(&cfg.out)?;
    let plot = cli.global.plot;
    let mut lines = Vec::new();
    match &cli.command {
        Command::Simulate { layout } => {
            let layout = commands::parse_layout(layout)?;
            let r = commands::simulate(&cfg, &layout, &mut out)?;
            let f: Vec<String> = r.per_button_effort.iter().map(|x| format!("{x:.4}")).collect();
            lines.push(format!("layout {}: F = [{}]", layout, f.join(", ")));
            lines.push(format!("total effort {:.4}", r.total_effort));
            for p in &r.penalties {
                lines.push(format!("penalty {} {}", p.kind, p.value));
            }
            lines.push(format!("reward {:.4}", r.reward));
        }
        Command::Enumerate { join, .. } => {
            let n = cfg.task_buttons();
            let table = commands::enumerate(&cfg, n, &pool, &mut out)?;
            lines.push(format!(
                "{} layouts ranked; best {} with total effort {:.4}",
                table.ranking.len(),
                table.best().layout,
                table.minimum()
            ));
            if let Some(path) = join {
                for r in commands::join_regret(&cfg, &table, n, path, &mut out)? {
                    lines.push(format!(
                        "seed {}: {} effort {:.4} regret {:.2}%",
                        r.seed,
                        output::layout_field(&r.layout),
                        r.total_effort,
                        100.0 * r.regret
                    ));
                }
            }
        }
        Command::Optimize { method: Method::Rl { seeds, .. } } => {
            let n = cfg.task_buttons();
            for r in commands::optimize_rl(&cfg, n, *seeds, &pool, &mut out, plot)? {
                lines.push(format!("seed {}: {} total effort {:.4}", r.seed, r.layout, r.total_effort));
            }
        }
        Command::Optimize { method: Method::Bo { seeds, .. } } => {
            for r in commands::optimize_bo(&cfg, cfg.buttons, *seeds, &pool, &mut out, plot)? {
                lines.push(format!(
                    "seed {}: {} total effort {:.4}",
                    r.seed, r.outcome.incumbent, r.total_effort
                ));
            }
        }
        Command::Compare { from, .. } => {
            let source = from.as_deref().map_or(Source::Fresh, Source::Dir);
            let named = commands::resolve_layouts(&cfg, &cfg.compare.layouts, &source, &pool, &mut out)?;
            let rows = commands::run_compare(&cfg, &named, cfg.compare.trials, &pool, &mut out, plot)?;
            lines.push(format!("{:<10} {:<12} {:>12} {:>10}", "layout", "cells", "mean", "std"));
            for ((name, layout), row) in named.iter().zip(&rows) {
                lines.push(format!(
                    "{:<10} {:<12} {:>12.4} {:>10.4}",
                    name,
                    output::layout_field(layout.cells()),
                    row.mean,
                    row.std
                ));
            }
        }
        Command::FreqTask { seeds } => {
            let f = commands::freq_task(&cfg, *seeds, &pool, &mut out, plot)?;
            for r in &f.runs {
                lines.push(format!("seed {}: {} expected effort {:.4}", r.seed, r.layout, r.total_effort));
            }
            if let Some(best) = &f.oracle_best {
                lines.push(format!("oracle rank-1 layout {best}"));
            }
            lines.push(format!(
                "modal layout {} in {}/{} seeds",
                f.modal_layout,
                f.modal_count,
                f.runs.len()
            ));
        }
    }
    let files = out.finish(cli.command.name(), &cfg)?;
    lines.push(format!("wrote {} files to {}", files.len() + 1, cfg.out.display()));
    Ok(lines)
}
