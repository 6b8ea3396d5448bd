//! Experiment subcommands. Each writes its CSVs into an [`OutputDir`] and
//! returns typed results for callers that want to inspect them.

use std::collections::BTreeMap;
use std::path::Path;

use gorilla_core::bayes::{bayes_opt, BOOutcome};
use gorilla_core::compare::{compare, pooled_std, static_layout, CompareRow};
use gorilla_core::oracle::{self, Objective, OracleTable};
use gorilla_core::policy::greedy_layout;
use gorilla_core::seed::{self, stream};
use gorilla_core::task::{EpisodeResult, Layout, Noise, SequenceSpec, Simulator, CELLS};
use gorilla_core::train::{train, BatchStats, FrequencyTask, LayoutEnv, SequentialTask, TrainOutcome};
use serde::Serialize;

use crate::config::{RunConfig, TaskVariant};
use crate::error::{CliError, Result};
use crate::output::{cell_columns, layout_field, num, OutputDir, Table};
use crate::plot;
use crate::policy_file;
use crate::runner::Pool;

/// Layout the paper's Bayesian-optimization baseline settled on.
pub fn paper_bo_layout() -> Layout {
    Layout::new(vec![9, 3, 17]).expect("valid cells")
}

/// Parses `8,9,10` or `8-9-10`.
pub fn parse_layout(text: &str) -> Result<Layout> {
    let cells = text
        .split([',', '-'])
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("layout {text:?}: {t:?} is not a cell index")))
        })
        .collect::<Result<Vec<_>>>()?;
    Layout::new(cells).map_err(|e| CliError::Usage(format!("layout {text:?}: {e}")))
}

fn noise_free(sim: &Simulator) -> Simulator {
    sim.with_noise(Noise::default())
}

fn layout_row(cells: &[usize]) -> impl Iterator<Item = String> + '_ {
    cells.iter().map(usize::to_string)
}

// ---------------------------------------------------------------- simulate

#[derive(Debug, Serialize)]
pub struct SimulateSummary<'a> {
    pub layout: &'a Layout,
    pub per_button_effort: &'a [f64],
    pub total_effort: f64,
    pub penalty_total: f64,
    pub penalties: &'a [gorilla_core::task::Penalty],
    pub reward: f64,
    pub press_times: &'a [f64],
    pub completed: bool,
}

pub fn simulate(cfg: &RunConfig, layout: &Layout, out: &mut OutputDir) -> Result<EpisodeResult> {
    let sim = cfg.simulator()?;
    let seq = SequenceSpec::in_order(layout.len());
    let r = sim.run_episode(layout, &seq, seed::derive(cfg.seed, stream::EPISODE_NOISE, 0), true)?;
    let names: Vec<&str> = cfg.env.muscles.groups().iter().map(|g| g.name.as_str()).collect();
    let mut t = Table::new(["t", "group", "m_active", "m_rest", "m_fatigued", "TL", "c_eff_dt", "button_index"]);
    for row in r.trace.as_deref().unwrap_or_default() {
        t.row([
            num(row.t),
            names[row.group].to_string(),
            num(row.m_active),
            num(row.m_rest),
            num(row.m_fatigued),
            num(row.load),
            num(row.c_eff_dt),
            row.button.to_string(),
        ]);
    }
    out.write_csv("trace.csv", t)?;
    out.write_json(
        "summary.json",
        &SimulateSummary {
            layout: &r.layout,
            per_button_effort: &r.per_button_effort,
            total_effort: r.total_effort,
            penalty_total: r.penalty_total(),
            penalties: &r.penalties,
            reward: r.reward,
            press_times: &r.press_times,
            completed: r.completed(),
        },
    )?;
    Ok(r)
}

// --------------------------------------------------------------- enumerate

pub fn objective(cfg: &RunConfig, buttons: usize) -> Objective {
    match cfg.task {
        TaskVariant::ThreeButton => Objective::Sequential { buttons },
        TaskVariant::Frequency => Objective::Frequency(cfg.frequency.generator.clone()),
    }
}

#[derive(Debug, Serialize)]
pub struct EnumerateSummary {
    pub buttons: usize,
    pub candidates: usize,
    pub ranked: usize,
    pub best_layout: Vec<usize>,
    pub minimum: f64,
    pub worst: f64,
    pub static_rank: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Regret {
    pub seed: u64,
    pub layout: Vec<usize>,
    pub total_effort: f64,
    pub oracle_minimum: f64,
    pub regret: f64,
    pub rank: Option<usize>,
}

pub fn enumerate(cfg: &RunConfig, buttons: usize, pool: &Pool, out: &mut OutputDir) -> Result<OracleTable> {
    let sim = cfg.simulator()?;
    let objective = objective(cfg, buttons);
    let n = objective.buttons();
    let table = oracle::enumerate(&sim, &objective, cfg.oracle_top_k, pool)?;
    let mut t = Table::new(cell_columns(n).chain(["total_effort".into(), "rank".into()]));
    for (i, e) in table.ranking.iter().enumerate() {
        t.row(layout_row(e.layout.cells()).chain([num(e.total_effort), (i + 1).to_string()]));
    }
    out.write_csv("oracle.csv", t)?;
    let mut p = Table::new(std::iter::once("from".to_string()).chain(cell_columns(CELLS)));
    for (r, row) in table.pairwise_cost.iter().enumerate() {
        let from = if r == 0 { "rest".to_string() } else { format!("c{}", r - 1) };
        p.row(std::iter::once(from).chain(row.iter().map(|&v| num(v))));
    }
    out.write_csv("pairwise.csv", p)?;
    out.write_json(
        "summary.json",
        &EnumerateSummary {
            buttons: n,
            candidates: table.candidates,
            ranked: table.ranking.len(),
            best_layout: table.best().layout.cells().to_vec(),
            minimum: table.minimum(),
            worst: table.ranking.last().map_or(f64::NAN, |e| e.total_effort),
            static_rank: table.find(&static_layout()).map(|(r, _)| r),
        },
    )?;
    Ok(table)
}

/// Joins optimizer results (`seed`, `layout` columns) with the oracle.
pub fn join_regret(
    cfg: &RunConfig,
    table: &OracleTable,
    buttons: usize,
    runs: &Path,
    out: &mut OutputDir,
) -> Result<Vec<Regret>> {
    let sim = noise_free(&cfg.simulator()?);
    let objective = objective(cfg, buttons);
    let mut reader = csv::Reader::from_path(runs).map_err(|e| CliError::Format {
        path: runs.to_path_buf(),
        message: e.to_string(),
    })?;
    let bad = |message: String| CliError::Format {
        path: runs.to_path_buf(),
        message,
    };
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| bad(format!("missing column {name:?}")))
    };
    let (seed_col, layout_col) = (col("seed")?, col("layout")?);
    let mut regrets = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let seed: u64 = rec[seed_col].parse().map_err(|e| bad(format!("seed: {e}")))?;
        let layout = parse_layout(&rec[layout_col])?;
        if layout.len() != objective.buttons() {
            return Err(bad(format!(
                "layout {layout} has {} buttons, the oracle {}",
                layout.len(),
                objective.buttons()
            )));
        }
        let effort = oracle::exact(&sim, &objective, &layout)?;
        regrets.push(Regret {
            seed,
            layout: layout.cells().to_vec(),
            total_effort: effort,
            oracle_minimum: table.minimum(),
            regret: table.regret(effort),
            rank: table.find(&layout).map(|(r, _)| r),
        });
    }
    let mut t = Table::new(["seed", "layout", "total_effort", "oracle_minimum", "regret", "rank"]);
    for r in &regrets {
        t.row([
            r.seed.to_string(),
            layout_field(&r.layout),
            num(r.total_effort),
            num(r.oracle_minimum),
            num(r.regret),
            r.rank.map_or(String::new(), |k| k.to_string()),
        ]);
    }
    out.write_csv("regret.csv", t)?;
    Ok(regrets)
}

// --------------------------------------------------------------- RL training

#[derive(Debug, Clone)]
pub struct RlRun {
    pub seed: u64,
    pub layout: Layout,
    /// Noise-free objective of the greedy layout.
    pub total_effort: f64,
    pub outcome: TrainOutcome,
}

fn write_curve(out: &mut OutputDir, name: &str, curve: &[BatchStats]) -> Result<()> {
    let mut t = Table::new([
        "batch",
        "mean_reward",
        "best_reward",
        "entropy",
        "mean_objective",
        "overlap_rate",
    ]);
    for s in curve {
        t.row([
            s.batch.to_string(),
            num(s.mean_reward),
            num(s.best_reward),
            num(s.entropy),
            num(s.mean_objective),
            num(s.overlap_rate),
        ]);
    }
    out.write_csv(name, t)?;
    Ok(())
}

fn train_seeds<E: LayoutEnv>(
    cfg: &RunConfig,
    seeds: usize,
    pool: &Pool,
    out: &mut OutputDir,
    make_env: impl Fn(u64) -> E,
    score: impl Fn(&Layout) -> Result<f64>,
    plot: bool,
) -> Result<Vec<RlRun>> {
    let mut runs = Vec::with_capacity(seeds);
    for i in 0..seeds as u64 {
        let s = cfg.seed + i;
        let env = make_env(s);
        let tcfg = gorilla_core::train::TrainConfig {
            seed: s,
            ..cfg.train.clone()
        };
        let outcome = train(&env, &tcfg, pool, |_, _| {})?;
        let layout = greedy_layout(&outcome.policy, &outcome.final_obs);
        write_curve(out, &format!("training_curve_seed{s}.csv"), &outcome.curve)?;
        out.write(
            &format!("policy_seed{s}.txt"),
            policy_file::render(&outcome.policy, &outcome.final_obs).as_bytes(),
        )?;
        let total_effort = score(&layout)?;
        runs.push(RlRun {
            seed: s,
            layout,
            total_effort,
            outcome,
        });
    }
    if plot {
        let series: Vec<(String, Vec<(f64, f64)>)> = runs
            .iter()
            .map(|r| {
                let pts = r
                    .outcome
                    .curve
                    .iter()
                    .map(|s| (s.batch as f64, s.mean_reward))
                    .collect();
                (format!("seed {}", r.seed), pts)
            })
            .collect();
        let named: Vec<(&str, Vec<(f64, f64)>)> = series.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
        out.write("training_curve.svg", plot::lines("mean reward per batch", &named).as_bytes())?;
    }
    Ok(runs)
}

fn write_runs(out: &mut OutputDir, name: &str, runs: &[RlRun], buttons: usize) -> Result<()> {
    let mut t = Table::new(
        ["seed".to_string(), "layout".to_string()]
            .into_iter()
            .chain(cell_columns(buttons))
            .chain(["total_effort".into(), "valid".into()]),
    );
    for r in runs {
        t.row(
            [r.seed.to_string(), layout_field(r.layout.cells())]
                .into_iter()
                .chain(layout_row(r.layout.cells()))
                .chain([num(r.total_effort), r.layout.is_valid().to_string()]),
        );
    }
    out.write_csv(name, t)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct RunSummary {
    seed: u64,
    layout: Vec<usize>,
    total_effort: f64,
    final_mean_reward: f64,
    final_entropy: f64,
}

fn summaries(runs: &[RlRun]) -> Vec<RunSummary> {
    runs.iter()
        .map(|r| RunSummary {
            seed: r.seed,
            layout: r.layout.cells().to_vec(),
            total_effort: r.total_effort,
            final_mean_reward: r.outcome.curve.last().map_or(f64::NAN, |s| s.mean_reward),
            final_entropy: r.outcome.curve.last().map_or(f64::NAN, |s| s.entropy),
        })
        .collect()
}

/// Trains one sequential-task policy per seed.
pub fn optimize_rl(cfg: &RunConfig, buttons: usize, seeds: usize, pool: &Pool, out: &mut OutputDir, plot: bool) -> Result<Vec<RlRun>> {
    if cfg.task == TaskVariant::Frequency {
        return freq_task(cfg, seeds, pool, out, plot).map(|f| f.runs);
    }
    let sim = cfg.simulator()?;
    let quiet = noise_free(&sim);
    let objective = Objective::Sequential { buttons };
    let runs = train_seeds(
        cfg,
        seeds,
        pool,
        out,
        |s| SequentialTask {
            sim: &sim,
            buttons,
            seed: s,
        },
        |l| Ok(oracle::exact(&quiet, &objective, l)?),
        plot,
    )?;
    write_runs(out, "rl_layouts.csv", &runs, buttons)?;
    out.write_json("summary.json", &summaries(&runs))?;
    Ok(runs)
}

// ------------------------------------------------------------------ BO

#[derive(Debug, Clone)]
pub struct BoRun {
    pub seed: u64,
    pub outcome: BOOutcome,
    /// Noise-free objective of the incumbent.
    pub total_effort: f64,
}

pub fn optimize_bo(cfg: &RunConfig, buttons: usize, seeds: usize, pool: &Pool, out: &mut OutputDir, plot: bool) -> Result<Vec<BoRun>> {
    if cfg.task == TaskVariant::Frequency {
        return Err(CliError::Usage("BO is implemented for the sequential task only".into()));
    }
    let sim = cfg.simulator()?;
    let quiet = noise_free(&sim);
    let objective = Objective::Sequential { buttons };
    let mut runs = Vec::with_capacity(seeds);
    for i in 0..seeds as u64 {
        let s = cfg.seed + i;
        let env = SequentialTask {
            sim: &sim,
            buttons,
            seed: s,
        };
        let outcome = bayes_opt(&env, &cfg.bo, s, pool)?;
        let mut t = Table::new(
            ["iter".to_string()]
                .into_iter()
                .chain(cell_columns(buttons))
                .chain(["objective".into(), "incumbent_objective".into(), "sobol".into()]),
        );
        for step in &outcome.history {
            t.row(
                [step.iter.to_string()]
                    .into_iter()
                    .chain(layout_row(step.layout.cells()))
                    .chain([
                        num(step.objective),
                        num(step.incumbent_objective),
                        step.sobol.to_string(),
                    ]),
            );
        }
        out.write_csv(&format!("bo_history_seed{s}.csv"), t)?;
        let total_effort = oracle::exact(&quiet, &objective, &outcome.incumbent)?;
        runs.push(BoRun {
            seed: s,
            outcome,
            total_effort,
        });
    }
    let mut t = Table::new(
        ["seed".to_string(), "layout".to_string()]
            .into_iter()
            .chain(cell_columns(buttons))
            .chain(["incumbent_mean".into(), "total_effort".into(), "valid".into()]),
    );
    for r in &runs {
        let cells = r.outcome.incumbent.cells();
        t.row(
            [r.seed.to_string(), layout_field(cells)]
                .into_iter()
                .chain(layout_row(cells))
                .chain([
                    num(r.outcome.incumbent_mean),
                    num(r.total_effort),
                    r.outcome.incumbent.is_valid().to_string(),
                ]),
        );
    }
    out.write_csv("bo_incumbents.csv", t)?;
    if plot {
        let series: Vec<(String, Vec<(f64, f64)>)> = runs
            .iter()
            .map(|r| {
                let pts = r
                    .outcome
                    .history
                    .iter()
                    .map(|s| (s.iter as f64, s.incumbent_objective))
                    .collect();
                (format!("seed {}", r.seed), pts)
            })
            .collect();
        let named: Vec<(&str, Vec<(f64, f64)>)> = series.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
        out.write("bo_history.svg", plot::lines("incumbent objective", &named).as_bytes())?;
    }
    #[derive(Serialize)]
    struct BoSummary {
        seed: u64,
        incumbent: Vec<usize>,
        incumbent_mean: f64,
        total_effort: f64,
    }
    let summary: Vec<BoSummary> = runs
        .iter()
        .map(|r| BoSummary {
            seed: r.seed,
            incumbent: r.outcome.incumbent.cells().to_vec(),
            incumbent_mean: r.outcome.incumbent_mean,
            total_effort: r.total_effort,
        })
        .collect();
    out.write_json("summary.json", &summary)?;
    Ok(runs)
}

// -------------------------------------------------------------- compare

/// Where `rl` and `bo` entries of a comparison come from.
pub enum Source<'a> {
    /// Train or optimize with the run's config and seed.
    Fresh,
    /// First row of `rl_layouts.csv` / `bo_incumbents.csv` in this directory.
    Dir(&'a Path),
}

fn first_layout(path: &Path) -> Result<Layout> {
    let bad = |message: String| CliError::Format {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = headers
        .iter()
        .position(|h| h == "layout")
        .ok_or_else(|| bad("missing layout column".into()))?;
    let rec = reader
        .records()
        .next()
        .ok_or_else(|| bad("no rows".into()))?
        .map_err(|e| bad(e.to_string()))?;
    parse_layout(&rec[col])
}

/// Resolves comparison entries: `static`, `paper-bo`, `oracle`, `rl`, `bo`,
/// or a literal layout such as `17-16-15`.
pub fn resolve_layouts(
    cfg: &RunConfig,
    names: &[String],
    source: &Source,
    pool: &Pool,
    scratch: &mut OutputDir,
) -> Result<Vec<(String, Layout)>> {
    let mut out = Vec::with_capacity(names.len());
    for name in names {
        let layout = match name.as_str() {
            "static" => static_layout(),
            "paper-bo" => paper_bo_layout(),
            "oracle" => {
                let sim = noise_free(&cfg.simulator()?);
                oracle::enumerate_exhaustive(&sim, cfg.buttons, pool)?.best().layout.clone()
            }
            "rl" => match source {
                Source::Dir(d) => first_layout(&d.join("rl_layouts.csv"))?,
                Source::Fresh => optimize_rl(cfg, cfg.buttons, 1, pool, scratch, false)?.remove(0).layout,
            },
            "bo" => match source {
                Source::Dir(d) => first_layout(&d.join("bo_incumbents.csv"))?,
                Source::Fresh => optimize_bo(cfg, cfg.buttons, 1, pool, scratch, false)?
                    .remove(0)
                    .outcome
                    .incumbent,
            },
            literal => parse_layout(literal)?,
        };
        out.push((name.clone(), layout));
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct Contrast {
    pub a: String,
    pub b: String,
    /// `mean(b) − mean(a)`.
    pub difference: f64,
    pub pooled_std: f64,
}

pub fn run_compare(
    cfg: &RunConfig,
    named: &[(String, Layout)],
    trials: usize,
    pool: &Pool,
    out: &mut OutputDir,
    plot: bool,
) -> Result<Vec<CompareRow>> {
    let sim = cfg.simulator()?;
    let layouts: Vec<Layout> = named.iter().map(|n| n.1.clone()).collect();
    let rows = compare(&sim, &layouts, trials, cfg.seed, pool)?;
    let mut t = Table::new(["name", "layout", "trials", "mean_effort", "std_effort", "mean_penalty"]);
    let mut per_trial = Table::new(["name", "trial", "total_effort", "penalty"]);
    for ((name, _), row) in named.iter().zip(&rows) {
        t.row([
            name.clone(),
            layout_field(row.layout.cells()),
            trials.to_string(),
            num(row.mean),
            num(row.std),
            num(row.mean_penalty),
        ]);
        for (k, (e, p)) in row.efforts.iter().zip(&row.penalties).enumerate() {
            per_trial.row([name.clone(), k.to_string(), num(*e), num(*p)]);
        }
    }
    out.write_csv("compare.csv", t)?;
    out.write_csv("compare_trials.csv", per_trial)?;
    let mut contrasts = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            contrasts.push(Contrast {
                a: named[i].0.clone(),
                b: named[j].0.clone(),
                difference: rows[j].mean - rows[i].mean,
                pooled_std: pooled_std(&rows[i], &rows[j]),
            });
        }
    }
    #[derive(Serialize)]
    struct Summary<'a> {
        trials: usize,
        noise: Noise,
        rows: Vec<(&'a str, &'a CompareRow)>,
        contrasts: Vec<Contrast>,
    }
    out.write_json(
        "summary.json",
        &Summary {
            trials,
            noise: cfg.env.noise,
            rows: named.iter().map(|n| n.0.as_str()).zip(&rows).collect(),
            contrasts,
        },
    )?;
    if plot {
        let bars: Vec<(String, f64, f64)> = named
            .iter()
            .zip(&rows)
            .map(|((n, _), r)| (n.clone(), r.mean, r.std))
            .collect();
        out.write("compare.svg", plot::bars("total effort", &bars).as_bytes())?;
    }
    Ok(rows)
}

// ------------------------------------------------------------ freq task

#[derive(Debug, Clone)]
pub struct FreqOutcome {
    pub runs: Vec<RlRun>,
    /// Highest-usage button.
    pub top_button: usize,
    /// Oracle rank-1 layout (noise-free runs only).
    pub oracle_best: Option<Layout>,
    /// Most common converged layout and how many seeds reached it.
    pub modal_layout: Layout,
    pub modal_count: usize,
}

pub fn freq_task(cfg: &RunConfig, seeds: usize, pool: &Pool, out: &mut OutputDir, plot: bool) -> Result<FreqOutcome> {
    let sim = cfg.simulator()?;
    let quiet = noise_free(&sim);
    let generator = cfg.frequency.generator.clone();
    let buttons = generator.buttons();
    let objective = Objective::Frequency(generator.clone());
    let runs = train_seeds(
        cfg,
        seeds,
        pool,
        out,
        |s| FrequencyTask {
            sim: &sim,
            generator: generator.clone(),
            reward_scale: cfg.frequency.reward_scale,
            seed: s,
        },
        |l| Ok(oracle::exact(&quiet, &objective, l)?),
        plot,
    )?;
    let probs = &generator.probabilities;
    let top_button = (0..buttons)
        .fold(0, |best, b| if probs[b] > probs[best] { b } else { best });
    let table = if sim.noise_is_off() {
        Some(oracle::enumerate(&sim, &objective, cfg.oracle_top_k, pool)?)
    } else {
        None
    };
    let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for r in &runs {
        *counts.entry(r.layout.cells().to_vec()).or_default() += 1;
    }
    let (modal, modal_count) = counts
        .iter()
        .fold((Vec::new(), 0), |acc, (k, &v)| if v > acc.1 { (k.clone(), v) } else { acc });

    let mut t = Table::new(
        ["seed".to_string(), "layout".to_string()]
            .into_iter()
            .chain(cell_columns(buttons))
            .chain([
                "expected_effort".into(),
                "oracle_rank".into(),
                "top_button_cell".into(),
                "valid".into(),
            ]),
    );
    for r in &runs {
        let rank = table.as_ref().and_then(|tb| tb.find(&r.layout)).map(|x| x.0);
        t.row(
            [r.seed.to_string(), layout_field(r.layout.cells())]
                .into_iter()
                .chain(layout_row(r.layout.cells()))
                .chain([
                    num(r.total_effort),
                    rank.map_or(String::new(), |k| k.to_string()),
                    r.layout.cells()[top_button].to_string(),
                    r.layout.is_valid().to_string(),
                ]),
        );
    }
    out.write_csv("freq_layouts.csv", t)?;
    let oracle_best = table.as_ref().map(|tb| tb.best().layout.clone());
    #[derive(Serialize)]
    struct Summary {
        probabilities: Vec<f64>,
        top_button: usize,
        oracle_best: Option<Vec<usize>>,
        oracle_expected_effort: Option<f64>,
        top_button_on_oracle_cell: Option<usize>,
        modal_layout: Vec<usize>,
        modal_count: usize,
        seeds: usize,
        runs: Vec<RunSummary>,
    }
    out.write_json(
        "summary.json",
        &Summary {
            probabilities: probs.clone(),
            top_button,
            oracle_best: oracle_best.as_ref().map(|l| l.cells().to_vec()),
            oracle_expected_effort: table.as_ref().map(OracleTable::minimum),
            top_button_on_oracle_cell: oracle_best.as_ref().map(|best| {
                runs.iter()
                    .filter(|r| r.layout.cells()[top_button] == best.cells()[top_button])
                    .count()
            }),
            modal_layout: modal.clone(),
            modal_count,
            seeds,
            runs: summaries(&runs),
        },
    )?;
    Ok(FreqOutcome {
        runs,
        top_button,
        oracle_best,
        modal_layout: Layout::new(modal)?,
        modal_count,
    })
}
