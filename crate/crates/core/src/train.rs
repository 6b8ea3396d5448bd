//! Clipped-surrogate policy-gradient training of the layout agent.
//!
//! A layout is proposed once per episode, so every episode is a one-step
//! decision: sample a layout per environment, evaluate the batch, then take a
//! few clipped policy-gradient epochs on it. The batch-mean reward is the
//! value baseline, and advantages are additionally scaled to unit spread.
//!
//! Episodes are spread over `parallel_envs` environment chains. Each chain
//! remembers the previous layout (the agent's observation) and, for the
//! frequency task, the previous episode's usage frequencies.

use alloc::vec::Vec;

use crate::error::{config_err, Error, Result};
use crate::math;
use crate::policy::{sample_layout, softmax, Observation, Parameterization, Policy};
use crate::rewards::{episode_reward_3btn, usage_frequencies, weighted_effort};
use crate::runner::BatchRunner;
use crate::seed::{self, stream};
use crate::task::{Canvas, Layout, SequenceGenerator, Simulator, CELLS};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct TrainConfig {
    pub episodes: usize,
    pub batch: usize,
    pub learning_rate: f64,
    pub clip_epsilon: f64,
    pub entropy_weight: f64,
    /// Gradient epochs per batch.
    pub update_epochs: usize,
    pub seed: u64,
    pub parallel_envs: usize,
    pub parameterization: Parameterization,
    /// All episodes of a batch share one scenario (press sequence), so the
    /// batch-mean baseline cancels the sequence-to-sequence variation.
    pub common_scenarios: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            episodes: 96_000,
            batch: 32,
            learning_rate: 3e-3,
            clip_epsilon: 0.2,
            entropy_weight: 0.01,
            update_epochs: 4,
            seed: 0,
            parallel_envs: 8,
            parameterization: Parameterization::Table,
            common_scenarios: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.episodes == 0 || self.batch == 0 || self.parallel_envs == 0 || self.update_epochs == 0 {
            return Err(config_err!("training counts must be positive"));
        }
        if self.episodes < self.batch {
            return Err(config_err!(
                "{} episodes do not fill a batch of {}",
                self.episodes,
                self.batch
            ));
        }
        if !(self.clip_epsilon > 0.0 && self.clip_epsilon < 1.0) {
            return Err(config_err!("clip epsilon must lie in (0, 1)"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(config_err!("learning rate must be positive"));
        }
        if !(self.entropy_weight >= 0.0) {
            return Err(config_err!("entropy weight must be non-negative"));
        }
        Ok(())
    }

    pub fn batches(&self) -> usize {
        self.episodes / self.batch
    }
}

/// Outcome of one evaluated episode as seen by the trainer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    /// Higher is better.
    pub reward: f64,
    /// Lower is better; effort plus penalties in effort units.
    pub objective: f64,
}

/// Identifies one evaluated episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Episode {
    /// Unique per evaluation; seeds the motor noise.
    pub index: u64,
    /// Seeds the press sequence. Episodes sharing a scenario press the same
    /// buttons.
    pub scenario: u64,
}

impl Episode {
    /// An episode with its own scenario.
    pub fn solo(index: u64) -> Self {
        Episode { index, scenario: index }
    }
}

/// An episodic environment the layout agent can be trained against.
pub trait LayoutEnv: Sync {
    fn buttons(&self) -> usize;

    fn canvas(&self) -> Canvas {
        Canvas::default()
    }

    /// Button press counts of `scenario`, when the reward depends on usage
    /// frequencies.
    fn episode_counts(&self, _scenario: u64) -> Option<Vec<usize>> {
        None
    }

    fn evaluate(&self, layout: &Layout, prev_freq: Option<&[f64]>, episode: Episode) -> Result<Evaluation>;
}

/// Fixed sequential task: buttons pressed once each, reward `−Σ F_i`.
pub struct SequentialTask<'a> {
    pub sim: &'a Simulator,
    pub buttons: usize,
    pub seed: u64,
}

impl LayoutEnv for SequentialTask<'_> {
    fn buttons(&self) -> usize {
        self.buttons
    }

    fn canvas(&self) -> Canvas {
        self.sim.config().canvas
    }

    fn evaluate(&self, layout: &Layout, _: Option<&[f64]>, episode: Episode) -> Result<Evaluation> {
        let r = self
            .sim
            .run_layout(layout, seed::derive(self.seed, stream::EPISODE_NOISE, episode.index))?;
        Ok(Evaluation {
            reward: episode_reward_3btn(&r),
            objective: r.objective(),
        })
    }
}

/// Frequency task: sampled press sequences, reward
/// `exp(−scale·(Σ π_i F_i + penalties))` with the previous episode's `π`.
pub struct FrequencyTask<'a> {
    pub sim: &'a Simulator,
    pub generator: SequenceGenerator,
    /// Converts effort units into the exponent of the reward.
    pub reward_scale: f64,
    pub seed: u64,
}

impl FrequencyTask<'_> {
    pub fn sequence(&self, scenario: u64) -> crate::task::SequenceSpec {
        self.generator
            .sample(seed::derive(self.seed, stream::SEQUENCE, scenario))
    }
}

impl LayoutEnv for FrequencyTask<'_> {
    fn buttons(&self) -> usize {
        self.generator.buttons()
    }

    fn canvas(&self) -> Canvas {
        self.sim.config().canvas
    }

    fn episode_counts(&self, scenario: u64) -> Option<Vec<usize>> {
        Some(self.sequence(scenario).counts(self.buttons()))
    }

    fn evaluate(&self, layout: &Layout, prev_freq: Option<&[f64]>, episode: Episode) -> Result<Evaluation> {
        let seq = self.sequence(episode.scenario);
        let r = self.sim.run_episode(
            layout,
            &seq,
            seed::derive(self.seed, stream::EPISODE_NOISE, episode.index),
            false,
        )?;
        let uniform = alloc::vec![0.0; self.buttons()];
        let prev = prev_freq.unwrap_or(&uniform);
        let x = weighted_effort(&r.per_button_effort, prev)? + r.penalty_total();
        Ok(Evaluation {
            reward: math::exp(-self.reward_scale * x),
            objective: x,
        })
    }
}

/// One sampled decision inside a batch.
#[derive(Debug, Clone)]
pub struct Sample {
    pub obs: Vec<f64>,
    pub layout: Layout,
    pub old_log_prob: f64,
}

/// Batch-mean baseline, scaled to unit standard deviation.
///
/// Invariant to adding a constant to, or positively rescaling, all rewards.
/// A batch without spread yields zero advantages.
pub fn advantages(rewards: &[f64]) -> Vec<f64> {
    let n = rewards.len() as f64;
    let mean = rewards.iter().sum::<f64>() / n;
    let var = rewards.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / n;
    let magnitude = rewards.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let std = math::sqrt(var);
    if !(std > 1e-12 * magnitude) || std == 0.0 {
        return alloc::vec![0.0; rewards.len()];
    }
    let scale = 1.0 / std;
    rewards.iter().map(|r| (r - mean) * scale).collect()
}

/// Gradient (ascent direction) of the clipped surrogate plus entropy bonus.
pub fn surrogate_gradient(
    policy: &Policy,
    samples: &[Sample],
    advantages: &[f64],
    clip_epsilon: f64,
    entropy_weight: f64,
) -> Result<Vec<f64>> {
    let mut grad = alloc::vec![0.0; policy.params().len()];
    let inv_n = 1.0 / samples.len() as f64;
    let mut dlogits = alloc::vec![0.0; policy.heads() * CELLS];
    for (s, &adv) in samples.iter().zip(advantages) {
        let fwd = policy.forward(&s.obs);
        let ratio = math::exp(Policy::log_prob(&fwd.logits, &s.layout) - s.old_log_prob);
        let clipped = (adv > 0.0 && ratio > 1.0 + clip_epsilon) || (adv < 0.0 && ratio < 1.0 - clip_epsilon);
        let coef = if clipped { 0.0 } else { ratio * adv * inv_n };
        for (h, (head, &cell)) in fwd.logits.chunks(CELLS).zip(s.layout.cells()).enumerate() {
            let p = softmax(head);
            let entropy: f64 = -p.iter().map(|&x| if x > 0.0 { x * math::ln(x) } else { 0.0 }).sum::<f64>();
            let out = &mut dlogits[h * CELLS..(h + 1) * CELLS];
            for c in 0..CELLS {
                let onehot = if c == cell { 1.0 } else { 0.0 };
                let log_p = if p[c] > 0.0 { math::ln(p[c]) } else { 0.0 };
                out[c] = coef * (onehot - p[c]) - entropy_weight * inv_n * p[c] * (log_p + entropy);
            }
        }
        policy.backward(&fwd, &dlogits, &mut grad);
    }
    if let Some(i) = grad.iter().position(|g| !g.is_finite()) {
        return Err(Error::Numeric(alloc::format!(
            "non-finite policy gradient at parameter {i}"
        )));
    }
    Ok(grad)
}

/// Adam, used for gradient ascent.
#[derive(Debug, Clone)]
struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
    lr: f64,
}

impl Adam {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(n: usize, lr: f64) -> Self {
        Adam {
            m: alloc::vec![0.0; n],
            v: alloc::vec![0.0; n],
            t: 0,
            lr,
        }
    }

    fn ascend(&mut self, params: &mut [f64], grad: &[f64]) {
        self.t += 1;
        let c1 = 1.0 - libm::pow(Self::BETA1, self.t as f64);
        let c2 = 1.0 - libm::pow(Self::BETA2, self.t as f64);
        for i in 0..params.len() {
            self.m[i] = Self::BETA1 * self.m[i] + (1.0 - Self::BETA1) * grad[i];
            self.v[i] = Self::BETA2 * self.v[i] + (1.0 - Self::BETA2) * grad[i] * grad[i];
            let mhat = self.m[i] / c1;
            let vhat = self.v[i] / c2;
            params[i] += self.lr * mhat / (math::sqrt(vhat) + Self::EPS);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BatchStats {
    pub batch: usize,
    pub mean_reward: f64,
    pub best_reward: f64,
    /// Mean per-head policy entropy after the update.
    pub entropy: f64,
    pub mean_objective: f64,
    /// Share of sampled layouts with overlapping buttons.
    pub overlap_rate: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub policy: Policy,
    pub curve: Vec<BatchStats>,
    /// Observation of the first environment chain after the last batch.
    pub final_obs: Observation,
}

struct Chain {
    obs: Observation,
}

/// Trains a layout policy against `env`.
///
/// `on_batch` sees the policy and statistics after every update.
pub fn train<E, R, F>(env: &E, cfg: &TrainConfig, runner: &R, mut on_batch: F) -> Result<TrainOutcome>
where
    E: LayoutEnv,
    R: BatchRunner,
    F: FnMut(&Policy, &BatchStats),
{
    cfg.validate()?;
    let buttons = env.buttons();
    let with_freq = env.episode_counts(0).is_some();
    let canvas = env.canvas();
    let initial = Observation::initial(buttons, with_freq);
    let mut policy = Policy::new(
        cfg.parameterization,
        buttons,
        initial.width(),
        seed::derive(cfg.seed, stream::INIT, 0),
    );
    let mut adam = Adam::new(policy.params().len(), cfg.learning_rate);
    let mut chains: Vec<Chain> = (0..cfg.parallel_envs)
        .map(|_| Chain {
            obs: initial.clone(),
        })
        .collect();
    let mut curve = Vec::with_capacity(cfg.batches());

    struct Job {
        layout: Layout,
        prev_freq: Option<Vec<f64>>,
        episode: Episode,
    }

    for batch in 0..cfg.batches() {
        let mut samples = Vec::with_capacity(cfg.batch);
        let mut jobs = Vec::with_capacity(cfg.batch);
        for j in 0..cfg.batch {
            let episode = (batch * cfg.batch + j) as u64;
            let chain = &mut chains[episode as usize % cfg.parallel_envs];
            let mut rng = seed::rng(seed::derive(cfg.seed, stream::POLICY_SAMPLE, episode));
            let (layout, logps) = sample_layout(&policy, &chain.obs, &mut rng);
            let prev_freq = chain.obs.frequencies.clone();
            samples.push(Sample {
                obs: chain.obs.to_vec(),
                layout: layout.clone(),
                old_log_prob: logps.iter().sum(),
            });
            let key = Episode {
                index: episode,
                scenario: if cfg.common_scenarios { batch as u64 } else { episode },
            };
            let freq = env.episode_counts(key.scenario).map(|n| usage_frequencies(&n));
            chain.obs = Observation::from_layout(&canvas, &layout, freq)?;
            jobs.push(Job {
                layout,
                prev_freq,
                episode: key,
            });
        }

        let evals = runner.map(&jobs, |job| {
            env.evaluate(&job.layout, job.prev_freq.as_deref(), job.episode)
        });
        let evals = evals.into_iter().collect::<Result<Vec<_>>>()?;
        let rewards: Vec<f64> = evals.iter().map(|e| e.reward).collect();
        let adv = advantages(&rewards);
        for _ in 0..cfg.update_epochs {
            let grad = surrogate_gradient(&policy, &samples, &adv, cfg.clip_epsilon, cfg.entropy_weight)?;
            adam.ascend(policy.params_mut(), &grad);
        }
        if policy.params().iter().any(|p| !p.is_finite()) {
            return Err(Error::Numeric(alloc::format!(
                "policy parameters diverged in batch {batch}"
            )));
        }

        let n = rewards.len() as f64;
        let stats = BatchStats {
            batch,
            mean_reward: rewards.iter().sum::<f64>() / n,
            best_reward: rewards.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            entropy: policy.entropy(&chains[0].obs),
            mean_objective: evals.iter().map(|e| e.objective).sum::<f64>() / n,
            overlap_rate: samples.iter().filter(|s| !s.layout.is_valid()).count() as f64 / n,
        };
        on_batch(&policy, &stats);
        curve.push(stats);
    }

    Ok(TrainOutcome {
        policy,
        final_obs: chains.swap_remove(0).obs,
        curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::greedy_layout;
    use crate::runner::Sequential;

    /// Reward peaks at one cell per button; overlapping layouts are penalized.
    struct Bandit {
        best: Vec<usize>,
    }

    impl LayoutEnv for Bandit {
        fn buttons(&self) -> usize {
            self.best.len()
        }

        fn evaluate(&self, layout: &Layout, _: Option<&[f64]>, _: Episode) -> Result<Evaluation> {
            let miss: f64 = layout
                .cells()
                .iter()
                .zip(&self.best)
                .map(|(&c, &b)| (c as f64 - b as f64).abs())
                .sum();
            let penalty = if layout.is_valid() { 0.0 } else { 50.0 };
            Ok(Evaluation {
                reward: -miss - penalty,
                objective: miss + penalty,
            })
        }
    }

    fn quick() -> TrainConfig {
        TrainConfig {
            episodes: 32 * 150,
            learning_rate: 0.05,
            ..TrainConfig::default()
        }
    }

    #[test]
    fn single_button_bandit_finds_best_cell() {
        let env = Bandit { best: alloc::vec![13] };
        let out = train(&env, &quick(), &Sequential, |_, _| {}).unwrap();
        assert_eq!(greedy_layout(&out.policy, &out.final_obs).cells(), &[13]);
    }

    #[test]
    fn advantages_ignore_reward_offsets() {
        let r = [1.0, -2.0, 0.5, 4.0];
        let shifted: Vec<f64> = r.iter().map(|x| x + 1234.5).collect();
        let a = advantages(&r);
        let b = advantages(&shifted);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn config_validation() {
        let bad = TrainConfig {
            clip_epsilon: 1.0,
            ..TrainConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = TrainConfig {
            batch: 0,
            ..TrainConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn training_is_reproducible() {
        let env = Bandit { best: alloc::vec![2, 9] };
        let cfg = TrainConfig {
            episodes: 32 * 20,
            ..quick()
        };
        let a = train(&env, &cfg, &Sequential, |_, _| {}).unwrap();
        let b = train(&env, &cfg, &Sequential, |_, _| {}).unwrap();
        assert_eq!(a.policy, b.policy);
        assert_eq!(a.curve, b.curve);
    }
}
