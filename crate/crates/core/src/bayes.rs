//! Sobol-initialized Bayesian optimization over button layouts.
//!
//! Layouts are points of `[0, 18)^n`; each coordinate is floored to a cell
//! index, so overlapping layouts can be proposed and are scored by the
//! environment's penalty. The surrogate sees each button's cell as
//! `(cell + 0.5) / 18`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::error::{config_err, Result};
use crate::gp::{expected_improvement, GaussianProcess, Kernel};
use crate::runner::BatchRunner;
use crate::seed::{self, stream};
use crate::sobol::{Sobol, MAX_DIMS};
use crate::task::{Layout, CELLS};
use crate::train::{Episode, LayoutEnv};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct BOConfig {
    pub n_sobol: usize,
    pub n_iterations: usize,
    /// Kernel length-scale on the unit-normalized cell coordinates.
    pub length_scale: f64,
    /// Observation-noise variance on standardized objectives.
    pub noise: f64,
    /// Uniform candidates scored by expected improvement per iteration.
    pub candidates: usize,
    /// Repeated evaluations averaged when picking the incumbent.
    pub reevaluations: usize,
    /// Distinct best-observed layouts that get re-evaluated.
    pub finalists: usize,
}

impl Default for BOConfig {
    fn default() -> Self {
        BOConfig {
            n_sobol: 15,
            n_iterations: 250,
            length_scale: 0.15,
            noise: 0.05,
            candidates: 2048,
            reevaluations: 3,
            finalists: 5,
        }
    }
}

impl BOConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_sobol == 0 || self.n_iterations == 0 || self.candidates == 0 {
            return Err(config_err!("BO evaluation counts must be positive"));
        }
        if self.reevaluations == 0 || self.finalists == 0 {
            return Err(config_err!("BO incumbent selection needs at least one evaluation"));
        }
        if !(self.length_scale > 0.0 && self.length_scale.is_finite()) {
            return Err(config_err!("kernel length-scale must be positive"));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(config_err!("observation noise must be non-negative"));
        }
        Ok(())
    }

    pub fn evaluations(&self) -> usize {
        self.n_sobol + self.n_iterations
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BOStep {
    pub iter: usize,
    pub layout: Layout,
    pub objective: f64,
    /// Best objective observed up to and including this step.
    pub incumbent_objective: f64,
    /// Whether the layout came from the initial Sobol design.
    pub sobol: bool,
}

#[derive(Debug, Clone)]
pub struct BOOutcome {
    pub incumbent: Layout,
    /// Mean objective of the incumbent over its re-evaluations.
    pub incumbent_mean: f64,
    pub history: Vec<BOStep>,
}

/// Floors each coordinate of a point in `[0, 1)^n` scaled to `[0, 18)^n`.
pub fn decode(point: &[f64]) -> Layout {
    let cells = point
        .iter()
        .map(|&u| ((u * CELLS as f64) as usize).min(CELLS - 1))
        .collect();
    Layout::new(cells).expect("floored cells are in range")
}

fn features(layout: &Layout) -> Vec<f64> {
    layout
        .cells()
        .iter()
        .map(|&c| (c as f64 + 0.5) / CELLS as f64)
        .collect()
}

/// Minimizes the environment objective with a GP surrogate and expected
/// improvement.
///
/// Evaluation `i` of the search uses episode index `i`; the incumbent
/// re-evaluations follow after the search budget.
pub fn bayes_opt<E: LayoutEnv, R: BatchRunner>(env: &E, cfg: &BOConfig, seed: u64, runner: &R) -> Result<BOOutcome> {
    cfg.validate()?;
    let dims = env.buttons();
    if dims == 0 || dims > MAX_DIMS {
        return Err(config_err!("BO supports 1..={MAX_DIMS} buttons, got {dims}"));
    }

    // Initial design: distinct layouts from a shifted Sobol sequence.
    let mut design: Vec<Layout> = Vec::with_capacity(cfg.n_sobol);
    let mut sobol = Sobol::shifted(dims, seed::derive(seed, stream::BO, 0))?;
    let max_draws = 64 * cfg.n_sobol;
    for _ in 0..max_draws {
        if design.len() == cfg.n_sobol {
            break;
        }
        let layout = decode(&sobol.next_point());
        if !design.contains(&layout) {
            design.push(layout);
        }
    }
    // Fewer distinct layouts than requested exist; repeat the sequence.
    while design.len() < cfg.n_sobol {
        design.push(decode(&sobol.next_point()));
    }

    let jobs: Vec<(usize, &Layout)> = design.iter().enumerate().collect();
    let initial = runner.map(&jobs, |&(i, layout)| env.evaluate(layout, None, Episode::solo(i as u64)));
    let mut xs: Vec<Vec<f64>> = Vec::with_capacity(cfg.evaluations());
    let mut ys: Vec<f64> = Vec::with_capacity(cfg.evaluations());
    let mut history = Vec::with_capacity(cfg.evaluations());
    let mut best = f64::INFINITY;
    for (i, (layout, eval)) in design.into_iter().zip(initial).enumerate() {
        let y = eval?.objective;
        best = best.min(y);
        xs.push(features(&layout));
        ys.push(y);
        history.push(BOStep {
            iter: i,
            layout,
            objective: y,
            incumbent_objective: best,
            sobol: true,
        });
    }

    let kernel = Kernel {
        length_scale: cfg.length_scale,
        signal_var: 1.0,
    };
    let mut rng = seed::rng(seed::derive(seed, stream::BO, 1));
    for it in 0..cfg.n_iterations {
        let gp = GaussianProcess::fit(xs.clone(), &ys, kernel, cfg.noise)?;
        let mut chosen: Option<(f64, Layout)> = None;
        let mut point = alloc::vec![0.0; dims];
        for _ in 0..cfg.candidates {
            for u in point.iter_mut() {
                *u = rng.random::<f64>();
            }
            let layout = decode(&point);
            let (mean, std) = gp.predict(&features(&layout));
            let ei = expected_improvement(mean, std, best);
            if chosen.as_ref().is_none_or(|(e, _)| ei > *e) {
                chosen = Some((ei, layout));
            }
        }
        let (_, layout) = chosen.expect("at least one candidate");
        let index = cfg.n_sobol + it;
        let y = env.evaluate(&layout, None, Episode::solo(index as u64))?.objective;
        best = best.min(y);
        xs.push(features(&layout));
        ys.push(y);
        history.push(BOStep {
            iter: index,
            layout,
            objective: y,
            incumbent_objective: best,
            sobol: false,
        });
    }

    // Incumbent: best observed means, re-evaluated and averaged.
    let mut observed: BTreeMap<Vec<usize>, (f64, usize)> = BTreeMap::new();
    for step in &history {
        let e = observed.entry(step.layout.cells().to_vec()).or_insert((0.0, 0));
        e.0 += step.objective;
        e.1 += 1;
    }
    let mut means: Vec<(f64, Vec<usize>)> = observed
        .into_iter()
        .map(|(cells, (sum, n))| (sum / n as f64, cells))
        .collect();
    means.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    means.truncate(cfg.finalists);

    let base = cfg.evaluations();
    let jobs: Vec<(usize, usize)> = (0..means.len())
        .flat_map(|f| (0..cfg.reevaluations).map(move |r| (f, r)))
        .collect();
    let finals: Vec<Layout> = means
        .iter()
        .map(|(_, c)| Layout::new(c.clone()))
        .collect::<Result<_>>()?;
    let evals = runner.map(&jobs, |&(f, r)| {
        env.evaluate(&finals[f], None, Episode::solo((base + f * cfg.reevaluations + r) as u64))
    });
    let mut sums = alloc::vec![0.0; finals.len()];
    for (&(f, _), e) in jobs.iter().zip(evals) {
        sums[f] += e?.objective;
    }
    let mut pick = 0;
    for f in 1..finals.len() {
        if sums[f] < sums[pick] {
            pick = f;
        }
    }
    Ok(BOOutcome {
        incumbent: finals[pick].clone(),
        incumbent_mean: sums[pick] / cfg.reevaluations as f64,
        history,
    })
}
