//! Canvas geometry, layouts and sequential button-press episodes.
//!
//! An episode places the buttons of a [`Layout`] on the canvas and lets the
//! simulated arm press them in sequence. The muscle bank starts rested, every
//! reach is integrated through the fatigue model, and the accumulated effort
//! per button is returned together with any penalties.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::arm::{self, ArmModel, FittsParams, Vec3, LOAD_GROUPS};
use crate::error::{config_err, domain_err, Error, Result};
use crate::fatigue::MuscleBank;
use crate::math;
use crate::seed;

/// Number of grid cells on the default canvas.
pub const CELLS: usize = 18;

/// Press reward of the motion agent.
pub const PRESS_REWARD: f64 = 5.0;
/// Extra reward for finishing a whole sequence (five-button task).
pub const SEQUENCE_BONUS: f64 = 15.0;
/// Scale of the effort regularization in the motion agent's reward.
pub const EFFORT_REWARD_SCALE: f64 = 0.01;

/// The interaction canvas and its discretization into button cells.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct Canvas {
    pub width: f64,
    pub height: f64,
    /// Distance from the user's head to the canvas plane.
    pub depth_from_head: f64,
    pub rows: usize,
    pub cols: usize,
    pub button_w: f64,
}

impl Default for Canvas {
    fn default() -> Self {
        Canvas {
            width: 0.64,
            height: 0.36,
            depth_from_head: 0.58,
            rows: 3,
            cols: 6,
            button_w: 0.10,
        }
    }
}

impl Canvas {
    pub fn cells(&self) -> usize {
        self.rows * self.cols
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows * self.cols != CELLS {
            return Err(config_err!(
                "canvas grid must have {CELLS} cells, got {}x{}",
                self.rows,
                self.cols
            ));
        }
        if !(self.width > 0.0 && self.height > 0.0 && self.button_w > 0.0) {
            return Err(config_err!("canvas dimensions must be positive"));
        }
        let pitch = (self.width / self.cols as f64).min(self.height / self.rows as f64);
        if self.button_w > pitch + 0.02 {
            return Err(config_err!(
                "button width {} does not fit a {pitch:.4} m cell",
                self.button_w
            ));
        }
        Ok(())
    }

    /// Center of cell `idx` (row-major, row 0 at the top) in the canvas plane.
    pub fn cell_center(&self, idx: usize) -> Result<Vec3> {
        if idx >= self.cells() {
            return Err(domain_err!("cell index {idx} outside 0..{}", self.cells()));
        }
        let (row, col) = (idx / self.cols, idx % self.cols);
        let x = -self.width / 2.0 + (col as f64 + 0.5) * self.width / self.cols as f64;
        let y = self.height / 2.0 - (row as f64 + 0.5) * self.height / self.rows as f64;
        Ok(Vec3::new(x, y, 0.0))
    }

    /// Cell center mapped to `[0, 1]²` over the canvas extent.
    pub fn normalized(&self, idx: usize) -> Result<(f64, f64)> {
        let c = self.cell_center(idx)?;
        Ok((c.x / self.width + 0.5, c.y / self.height + 0.5))
    }
}

/// Cells assigned to buttons, in button order.
///
/// Every index is in range by construction; distinctness is deliberately not
/// enforced (see [`validate_layout`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<usize>", into = "Vec<usize>"))]
pub struct Layout(Vec<usize>);

impl Layout {
    pub fn new(cells: Vec<usize>) -> Result<Self> {
        if cells.is_empty() {
            return Err(domain_err!("a layout needs at least one button"));
        }
        if let Some(&bad) = cells.iter().find(|&&c| c >= CELLS) {
            return Err(domain_err!("cell index {bad} outside 0..{CELLS}"));
        }
        Ok(Layout(cells))
    }

    pub fn cells(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        validate_layout(self) == LayoutCheck::Ok
    }
}

impl TryFrom<Vec<usize>> for Layout {
    type Error = Error;
    fn try_from(cells: Vec<usize>) -> Result<Self> {
        Layout::new(cells)
    }
}

impl From<Layout> for Vec<usize> {
    fn from(l: Layout) -> Vec<usize> {
        l.0
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayoutCheck {
    Ok,
    /// Cells holding more than one button, ascending.
    Overlap(Vec<usize>),
}

pub fn validate_layout(layout: &Layout) -> LayoutCheck {
    let mut seen = [0u8; CELLS];
    for &c in layout.cells() {
        seen[c] = seen[c].saturating_add(1);
    }
    let shared: Vec<usize> = (0..CELLS).filter(|&c| seen[c] > 1).collect();
    if shared.is_empty() {
        LayoutCheck::Ok
    } else {
        LayoutCheck::Overlap(shared)
    }
}

/// Per-timestep reward of the motion agent:
/// `r_task + (e^(−d) − 1) − 0.01·C_eff`, with `r_task = 5` on a press and a
/// further 15 when the press completes a sequence.
pub fn motion_reward(pressed: bool, distance: f64, c_eff: f64, sequence_done: bool) -> f64 {
    debug_assert!(distance >= 0.0);
    let mut task = if pressed { PRESS_REWARD } else { 0.0 };
    if sequence_done {
        task += SEQUENCE_BONUS;
    }
    task + (math::exp(-distance) - 1.0) - EFFORT_REWARD_SCALE * c_eff
}

/// Penalty magnitudes, in effort units.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct Penalties {
    /// Charged for every button left unpressed when a reach fails.
    pub timeout_per_button: f64,
    pub overlap: f64,
}

impl Default for Penalties {
    fn default() -> Self {
        Penalties {
            timeout_per_button: 50.0,
            overlap: 150.0,
        }
    }
}

/// Multiplicative Gaussian perturbation of the surrogate user.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct Noise {
    /// Relative σ on every load sample.
    pub load_sigma: f64,
    /// Relative σ on each reach duration.
    pub duration_sigma: f64,
}

impl Noise {
    pub fn uniform(sigma: f64) -> Self {
        Noise {
            load_sigma: sigma,
            duration_sigma: sigma,
        }
    }

    pub fn is_off(&self) -> bool {
        self.load_sigma == 0.0 && self.duration_sigma == 0.0
    }
}

/// Everything the simulated user needs besides the layout.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct EnvConfig {
    pub canvas: Canvas,
    pub arm: ArmModel,
    pub fitts: FittsParams,
    pub muscles: MuscleBank,
    pub penalties: Penalties,
    pub noise: Noise,
    /// Integration step, s.
    pub dt: f64,
    /// Simulated time allowed for a single press, s.
    pub press_timeout: f64,
    /// Resting hand position relative to the shoulder.
    pub rest_offset: Vec3,
}

impl Default for EnvConfig {
    fn default() -> Self {
        EnvConfig {
            canvas: Canvas::default(),
            arm: ArmModel::default(),
            fitts: FittsParams::default(),
            muscles: MuscleBank::default(),
            penalties: Penalties::default(),
            noise: Noise::default(),
            dt: 0.01,
            press_timeout: 15.0,
            rest_offset: Vec3::new(0.0, -0.55, 0.0),
        }
    }
}

impl EnvConfig {
    pub fn validate(&self) -> Result<()> {
        self.canvas.validate()?;
        self.arm.validate().map_err(into_config)?;
        self.fitts.validate().map_err(into_config)?;
        self.muscles.validate().map_err(into_config)?;
        if self.muscles.len() != LOAD_GROUPS {
            return Err(config_err!(
                "the arm produces {LOAD_GROUPS} loads (shoulder, elbow) but {} muscle groups are configured",
                self.muscles.len()
            ));
        }
        if !(self.dt > 0.0 && self.dt <= crate::fatigue::MAX_DT) {
            return Err(config_err!("dt must lie in (0, 0.1], got {}", self.dt));
        }
        if !(self.press_timeout > 0.0) {
            return Err(config_err!("press timeout must be positive"));
        }
        let p = &self.penalties;
        if !(p.timeout_per_button >= 0.0 && p.overlap >= 0.0) {
            return Err(config_err!("penalties must be non-negative"));
        }
        let n = &self.noise;
        if !(n.load_sigma >= 0.0 && n.duration_sigma >= 0.0) {
            return Err(config_err!("noise sigmas must be non-negative"));
        }
        Ok(())
    }

    pub fn rest_position(&self) -> Vec3 {
        self.arm.shoulder_pos + self.rest_offset
    }
}

fn into_config(e: Error) -> Error {
    match e {
        Error::InputDomain(m) => Error::Config(m),
        other => other,
    }
}

/// Order in which buttons are pressed during an episode.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SequenceSpec {
    /// One or more press sequences of button ids.
    pub sequences: Vec<Vec<usize>>,
    /// Between sequences the hand returns to rest and the muscles recover
    /// fully; otherwise both carry over.
    pub reset_between_sequences: bool,
}

impl SequenceSpec {
    /// Buttons `0..n` pressed once, in order.
    pub fn in_order(n: usize) -> Self {
        SequenceSpec {
            sequences: alloc::vec![(0..n).collect()],
            reset_between_sequences: true,
        }
    }

    pub fn presses(&self) -> usize {
        self.sequences.iter().map(Vec::len).sum()
    }

    pub fn validate(&self, buttons: usize) -> Result<()> {
        if self.presses() == 0 {
            return Err(config_err!("button sequence is empty"));
        }
        if let Some(&b) = self.sequences.iter().flatten().find(|&&b| b >= buttons) {
            return Err(config_err!("sequence references button {b} of {buttons}"));
        }
        Ok(())
    }

    /// Press counts per button.
    pub fn counts(&self, buttons: usize) -> Vec<usize> {
        let mut n = alloc::vec![0; buttons];
        for &b in self.sequences.iter().flatten() {
            if b < buttons {
                n[b] += 1;
            }
        }
        n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PenaltyKind {
    Overlap,
    Timeout,
}

impl fmt::Display for PenaltyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PenaltyKind::Overlap => "overlap",
            PenaltyKind::Timeout => "timeout",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Penalty {
    pub kind: PenaltyKind,
    pub value: f64,
    /// Button whose press failed, for timeouts.
    pub button: Option<usize>,
}

/// One integration step of one muscle group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub group: usize,
    pub m_active: f64,
    pub m_rest: f64,
    pub m_fatigued: f64,
    pub load: f64,
    pub c_eff_dt: f64,
    pub button: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EpisodeResult {
    pub layout: Layout,
    /// `F_i`: effort of all reaches ending on button `i`.
    pub per_button_effort: Vec<f64>,
    /// `F = Σ F_i`.
    pub total_effort: f64,
    pub reward: f64,
    pub penalties: Vec<Penalty>,
    /// Episode time at which each completed press ended, s.
    pub press_times: Vec<f64>,
    /// Buttons actually pressed, in order.
    pub pressed: Vec<usize>,
    #[cfg_attr(feature = "serde", serde(skip))]
    pub trace: Option<Vec<TraceRow>>,
}

impl EpisodeResult {
    pub fn penalty_total(&self) -> f64 {
        self.penalties.iter().fold(0.0, |acc, p| acc + p.value)
    }

    pub fn has_penalty(&self, kind: PenaltyKind) -> bool {
        self.penalties.iter().any(|p| p.kind == kind)
    }

    /// Effort plus penalties; the quantity every optimizer minimizes.
    pub fn objective(&self) -> f64 {
        self.total_effort + self.penalty_total()
    }

    pub fn completed(&self) -> bool {
        self.penalties.is_empty()
    }
}

/// Outcome of a single reach.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReachOutcome {
    Pressed { effort: f64, duration: f64 },
    /// Target out of reach, or the press would take longer than the timeout.
    TimedOut,
}

/// The simulated user facing one canvas.
#[derive(Debug, Clone)]
pub struct Simulator {
    config: EnvConfig,
    centers: [Vec3; CELLS],
    rest: Vec3,
}

impl Simulator {
    pub fn new(config: EnvConfig) -> Result<Self> {
        config.validate()?;
        let mut centers = [Vec3::default(); CELLS];
        for (i, c) in centers.iter_mut().enumerate() {
            *c = config.canvas.cell_center(i)?;
        }
        let rest = config.rest_position();
        arm::inverse_kinematics(&config.arm, rest)
            .map_err(|e| config_err!("rest hand position is not reachable: {e}"))?;
        Ok(Simulator {
            config,
            centers,
            rest,
        })
    }

    pub fn config(&self) -> &EnvConfig {
        &self.config
    }

    pub fn rest(&self) -> Vec3 {
        self.rest
    }

    pub fn center(&self, cell: usize) -> Vec3 {
        self.centers[cell]
    }

    pub fn noise_is_off(&self) -> bool {
        self.config.noise.is_off()
    }

    /// Copy of this simulator with a different noise level.
    pub fn with_noise(&self, noise: Noise) -> Self {
        let mut s = self.clone();
        s.config.noise = noise;
        s
    }

    /// Three-button task: buttons pressed once each, in order.
    pub fn run_layout(&self, layout: &Layout, seed: u64) -> Result<EpisodeResult> {
        self.run_episode(layout, &SequenceSpec::in_order(layout.len()), seed, false)
    }

    /// Runs one episode. Overlapping layouts are scored without simulation.
    pub fn run_episode(
        &self,
        layout: &Layout,
        seq: &SequenceSpec,
        seed: u64,
        record_trace: bool,
    ) -> Result<EpisodeResult> {
        seq.validate(layout.len())?;
        let buttons = layout.len();
        let mut result = EpisodeResult {
            layout: layout.clone(),
            per_button_effort: alloc::vec![0.0; buttons],
            total_effort: 0.0,
            reward: 0.0,
            penalties: Vec::new(),
            press_times: Vec::new(),
            pressed: Vec::new(),
            trace: record_trace.then(Vec::new),
        };
        if let LayoutCheck::Overlap(_) = validate_layout(layout) {
            result.penalties.push(Penalty {
                kind: PenaltyKind::Overlap,
                value: self.config.penalties.overlap,
                button: None,
            });
            result.reward = -result.penalty_total();
            return Ok(result);
        }

        let mut rng = seed::rng(seed);
        let mut bank = self.config.muscles.clone();
        bank.reset();
        let mut hand = self.rest;
        let mut clock = 0.0;
        let total_presses = seq.presses();
        let mut done = 0usize;
        'outer: for (k, sequence) in seq.sequences.iter().enumerate() {
            if k > 0 && seq.reset_between_sequences {
                bank.reset();
                hand = self.rest;
            }
            for &button in sequence {
                let target = self.centers[layout.cells()[button]];
                let trace = result.trace.as_mut();
                match self.reach(&mut bank, hand, target, &mut rng, clock, button, trace)? {
                    ReachOutcome::Pressed { effort, duration } => {
                        result.per_button_effort[button] += effort;
                        clock += duration;
                        result.press_times.push(clock);
                        result.pressed.push(button);
                        hand = target;
                        done += 1;
                    }
                    ReachOutcome::TimedOut => {
                        let unpressed = (total_presses - done) as f64;
                        result.penalties.push(Penalty {
                            kind: PenaltyKind::Timeout,
                            value: self.config.penalties.timeout_per_button * unpressed,
                            button: Some(button),
                        });
                        break 'outer;
                    }
                }
            }
        }
        result.total_effort = result.per_button_effort.iter().sum();
        result.reward = -result.total_effort - result.penalty_total();
        Ok(result)
    }

    /// Effort of a single reach from `from` to cell `to` with rested muscles
    /// and no noise, or `None` when the press times out.
    pub fn reach_effort(&self, from: Vec3, to: usize) -> Result<Option<f64>> {
        let mut bank = self.config.muscles.clone();
        bank.reset();
        let quiet = Noise::default();
        let mut rng = seed::rng(0);
        match self.reach_with(&mut bank, from, self.centers[to], &quiet, &mut rng, 0.0, 0, None)? {
            ReachOutcome::Pressed { effort, .. } => Ok(Some(effort)),
            ReachOutcome::TimedOut => Ok(None),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn reach(
        &self,
        bank: &mut MuscleBank,
        from: Vec3,
        to: Vec3,
        rng: &mut seed::Rng,
        clock: f64,
        button: usize,
        trace: Option<&mut Vec<TraceRow>>,
    ) -> Result<ReachOutcome> {
        let noise = self.config.noise;
        self.reach_with(bank, from, to, &noise, rng, clock, button, trace)
    }

    #[allow(clippy::too_many_arguments)]
    fn reach_with(
        &self,
        bank: &mut MuscleBank,
        from: Vec3,
        to: Vec3,
        noise: &Noise,
        rng: &mut seed::Rng,
        clock: f64,
        button: usize,
        mut trace: Option<&mut Vec<TraceRow>>,
    ) -> Result<ReachOutcome> {
        let cfg = &self.config;
        if !cfg.arm.can_reach(to) {
            return Ok(ReachOutcome::TimedOut);
        }
        let mut movement = cfg.fitts.movement_time(from.distance(to), cfg.canvas.button_w)?;
        let mut dwell = cfg.fitts.dwell;
        if noise.duration_sigma > 0.0 {
            let z: f64 = rng.sample(StandardNormal);
            let scale = (1.0 + noise.duration_sigma * z).max(0.1);
            movement *= scale;
            dwell *= scale;
        }
        if movement + dwell > cfg.press_timeout {
            return Ok(ReachOutcome::TimedOut);
        }
        let trajectory = match arm::plan_reach_timed(&cfg.arm, from, to, movement, dwell, cfg.dt) {
            Ok(t) => t,
            Err(Error::Unreachable { .. }) => return Ok(ReachOutcome::TimedOut),
            Err(e) => return Err(e),
        };
        let steps = trajectory.samples.len() - 1;
        let mut effort = 0.0;
        let mut loads = [0.0; LOAD_GROUPS];
        for (k, sample) in trajectory.samples[..steps].iter().enumerate() {
            loads.copy_from_slice(&sample.loads);
            if noise.load_sigma > 0.0 {
                for l in &mut loads {
                    let z: f64 = rng.sample(StandardNormal);
                    *l = (*l * (1.0 + noise.load_sigma * z)).clamp(0.0, 100.0);
                }
            }
            let t = clock + k as f64 * cfg.dt;
            effort += match trace.as_deref_mut() {
                Some(rows) => bank.step_with(&loads, cfg.dt, |group, g, load, c| {
                    rows.push(TraceRow {
                        t,
                        group,
                        m_active: g.state.m_active,
                        m_rest: g.state.m_rest,
                        m_fatigued: g.state.m_fatigued,
                        load,
                        c_eff_dt: c,
                        button,
                    })
                })?,
                None => bank.effort_cost(&loads, cfg.dt)?,
            };
        }
        Ok(ReachOutcome::Pressed {
            effort,
            duration: steps as f64 * cfg.dt,
        })
    }
}

/// Categorical generator of press sequences for the five-button task.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SequenceGenerator {
    /// Usage probability per button.
    pub probabilities: Vec<f64>,
    pub sequences_per_episode: usize,
    pub sequence_len: usize,
    pub reset_between_sequences: bool,
}

impl Default for SequenceGenerator {
    fn default() -> Self {
        SequenceGenerator {
            probabilities: alloc::vec![0.4, 0.25, 0.15, 0.1, 0.1],
            sequences_per_episode: 3,
            sequence_len: 3,
            reset_between_sequences: true,
        }
    }
}

impl SequenceGenerator {
    /// `top` on button 0; the remaining mass halves from button to button.
    pub fn skewed(top: f64, buttons: usize) -> Self {
        let mut p = alloc::vec![top];
        let tail = buttons - 1;
        let denom = (1u64 << tail) as f64 - 1.0;
        for k in 0..tail {
            p.push((1.0 - top) * (1u64 << (tail - 1 - k)) as f64 / denom);
        }
        SequenceGenerator {
            probabilities: p,
            ..Self::default()
        }
    }

    pub fn buttons(&self) -> usize {
        self.probabilities.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.probabilities.is_empty() {
            return Err(config_err!("sequence generator has no buttons"));
        }
        if self.probabilities.iter().any(|p| !(*p >= 0.0)) {
            return Err(config_err!("usage probabilities must be non-negative"));
        }
        let sum: f64 = self.probabilities.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(config_err!("usage probabilities sum to {sum}, expected 1"));
        }
        if self.sequences_per_episode == 0 || self.sequence_len == 0 {
            return Err(config_err!("sequence counts must be positive"));
        }
        Ok(())
    }

    fn draw(&self, rng: &mut seed::Rng) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, p) in self.probabilities.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        self.probabilities.len() - 1
    }

    pub fn sample(&self, seed: u64) -> SequenceSpec {
        let mut rng = seed::rng(seed);
        let sequences = (0..self.sequences_per_episode)
            .map(|_| (0..self.sequence_len).map(|_| self.draw(&mut rng)).collect())
            .collect();
        SequenceSpec {
            sequences,
            reset_between_sequences: self.reset_between_sequences,
        }
    }
}

/// Human-readable layout name used in reports.
pub fn describe(layout: &Layout) -> String {
    alloc::format!("({layout})")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn cell_centers() {
        let c = Canvas::default();
        assert!(close(c.cell_center(8).unwrap().y, 0.0, 1e-15));
        let p0 = c.cell_center(0).unwrap();
        assert!(close(p0.x, -0.266_666_666_7, 1e-9) && close(p0.y, 0.12, 1e-12));
        let p17 = c.cell_center(17).unwrap();
        assert!(close(p17.x, 0.266_666_666_7, 1e-9) && close(p17.y, -0.12, 1e-12));
        assert_eq!(p17.z, 0.0);
        assert!(c.cell_center(18).is_err());
    }

    #[test]
    fn normalized_coordinates_in_unit_square() {
        let c = Canvas::default();
        for i in 0..CELLS {
            let (x, y) = c.normalized(i).unwrap();
            assert!((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y));
        }
    }

    #[test]
    fn layout_validation() {
        let l = |v: &[usize]| Layout::new(v.to_vec()).unwrap();
        assert_eq!(validate_layout(&l(&[8, 9, 10])), LayoutCheck::Ok);
        assert_eq!(validate_layout(&l(&[17, 16, 15])), LayoutCheck::Ok);
        assert_eq!(
            validate_layout(&l(&[5, 5, 12])),
            LayoutCheck::Overlap(alloc::vec![5])
        );
        assert!(Layout::new(alloc::vec![0, 1, 99]).is_err());
        assert!(Layout::new(Vec::new()).is_err());
    }

    #[test]
    fn motion_reward_cases() {
        assert_eq!(motion_reward(false, 0.0, 0.0, false), 0.0);
        assert_eq!(motion_reward(true, 0.0, 0.0, false), 5.0);
        assert_eq!(motion_reward(true, 0.0, 0.0, true), 20.0);
        let r = motion_reward(false, 0.5, 10.0, false);
        assert!(close(r, libm::exp(-0.5) - 1.0 - 0.1, 1e-12));
        assert!(close(r, -0.4935, 1e-4));
    }

    #[test]
    fn overlap_short_circuits() {
        let sim = Simulator::new(EnvConfig::default()).unwrap();
        let r = sim
            .run_episode(&Layout::new(alloc::vec![5, 5, 12]).unwrap(), &SequenceSpec::in_order(3), 0, true)
            .unwrap();
        assert_eq!(r.reward, -150.0);
        assert_eq!(r.total_effort, 0.0);
        assert!(r.trace.unwrap().is_empty());
        assert!(r.pressed.is_empty());
    }

    #[test]
    fn extreme_left_times_out() {
        let sim = Simulator::new(EnvConfig::default()).unwrap();
        let r = sim.run_layout(&Layout::new(alloc::vec![17, 0, 16]).unwrap(), 0).unwrap();
        assert!(r.has_penalty(PenaltyKind::Timeout));
        assert_eq!(r.pressed, alloc::vec![0]);
        assert_eq!(r.penalty_total(), 100.0);
        assert!(close(r.reward, -r.per_button_effort[0] - 100.0, 1e-12));
    }

    #[test]
    fn effort_is_additive_and_reset_per_episode() {
        let sim = Simulator::new(EnvConfig::default()).unwrap();
        let l = Layout::new(alloc::vec![8, 9, 10]).unwrap();
        let a = sim.run_layout(&l, 1).unwrap();
        let b = sim.run_layout(&l, 2).unwrap();
        assert_eq!(a, b);
        let sum: f64 = a.per_button_effort.iter().sum();
        assert_eq!(a.total_effort, sum);
        assert_eq!(a.reward, -sum);
        assert_eq!(a.press_times.len(), 3);
    }

    #[test]
    fn config_errors() {
        let cfg = EnvConfig {
            dt: 0.0,
            ..EnvConfig::default()
        };
        assert!(matches!(Simulator::new(cfg), Err(Error::Config(_))));
        let sim = Simulator::new(EnvConfig::default()).unwrap();
        let empty = SequenceSpec {
            sequences: alloc::vec![Vec::new()],
            reset_between_sequences: true,
        };
        let l = Layout::new(alloc::vec![1, 2]).unwrap();
        assert!(matches!(sim.run_episode(&l, &empty, 0, false), Err(Error::Config(_))));
    }

    #[test]
    fn skewed_generator_sums_to_one() {
        let g = SequenceGenerator::skewed(0.6, 5);
        let sum: f64 = g.probabilities.iter().sum();
        assert!(close(sum, 1.0, 1e-12));
        assert_eq!(g.probabilities[0], 0.6);
        assert!(g.probabilities.windows(2).all(|w| w[0] > w[1]));
        g.validate().unwrap();
    }

    #[test]
    fn generated_sequences_are_reproducible() {
        let g = SequenceGenerator::default();
        let a = g.sample(42);
        assert_eq!(a, g.sample(42));
        assert_eq!(a.presses(), 9);
    }
}
