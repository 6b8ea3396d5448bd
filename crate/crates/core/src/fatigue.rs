//! Three-compartment muscle fatigue model with rest recovery (3CC-r).
//!
//! Each muscle group splits its capacity (100 %MVC) into active, resting and
//! fatigued compartments. A controller moves capacity between the resting and
//! active compartments to track the target load; active capacity fatigues at
//! rate `F` and fatigued capacity recovers at rate `R`, boosted by the rest
//! multiplier `r` whenever the target load is zero.
//!
//! The scalar effort cost combines the demanded load with the part of that
//! load which exceeds the capacity still available (`100 - M_F`).

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{domain_err, Error, Result};

/// Largest admissible integration step in seconds.
pub const MAX_DT: f64 = 0.1;

/// Compartment values of one muscle group, in %MVC.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MuscleState {
    pub m_active: f64,
    pub m_rest: f64,
    pub m_fatigued: f64,
}

impl MuscleState {
    /// Fully rested muscle: all capacity in the resting compartment.
    pub const RESTED: MuscleState = MuscleState {
        m_active: 0.0,
        m_rest: 100.0,
        m_fatigued: 0.0,
    };

    pub fn new(m_active: f64, m_rest: f64, m_fatigued: f64) -> Self {
        MuscleState {
            m_active,
            m_rest,
            m_fatigued,
        }
    }

    pub fn total(&self) -> f64 {
        self.m_active + self.m_rest + self.m_fatigued
    }

    fn is_finite(&self) -> bool {
        self.m_active.is_finite() && self.m_rest.is_finite() && self.m_fatigued.is_finite()
    }

    fn axpy(&self, k: f64, d: &Derivative) -> MuscleState {
        MuscleState {
            m_active: self.m_active + k * d.active,
            m_rest: self.m_rest + k * d.rest,
            m_fatigued: self.m_fatigued + k * d.fatigued,
        }
    }

    /// Clamps every compartment to [0, 100] and rescales so they sum to 100.
    fn renormalized(self) -> MuscleState {
        let a = self.m_active.clamp(0.0, 100.0);
        let r = self.m_rest.clamp(0.0, 100.0);
        let f = self.m_fatigued.clamp(0.0, 100.0);
        let sum = a + r + f;
        if sum <= 0.0 {
            return MuscleState::RESTED;
        }
        let k = 100.0 / sum;
        let a = a * k;
        let f = f * k;
        // Put the rounding residue in the resting compartment so the sum is
        // exact to the last ulp where possible.
        let r = (100.0 - a - f).max(0.0);
        MuscleState {
            m_active: a,
            m_rest: r,
            m_fatigued: f,
        }
    }
}

impl Default for MuscleState {
    fn default() -> Self {
        MuscleState::RESTED
    }
}

/// Rate constants of the 3CC-r model and the effort-cost weights.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FatigueParams {
    /// `F`, 1/s.
    pub fatigue_rate: f64,
    /// `R`, 1/s.
    pub recovery_rate: f64,
    /// `r`, applied to `R` while the target load is zero.
    pub rest_multiplier: f64,
    /// `LD`, 1/s.
    pub develop_rate: f64,
    /// `LR`, 1/s.
    pub relax_rate: f64,
    /// `α`, weight of the demanded load in the effort cost.
    pub effort_base_weight: f64,
    /// `β`, weight of the capacity deficit in the effort cost.
    pub effort_deficit_weight: f64,
}

impl FatigueParams {
    pub fn shoulder() -> Self {
        FatigueParams {
            fatigue_rate: 0.0146,
            recovery_rate: 0.0022,
            ..Self::common()
        }
    }

    pub fn elbow() -> Self {
        FatigueParams {
            fatigue_rate: 0.0100,
            recovery_rate: 0.0050,
            ..Self::common()
        }
    }

    fn common() -> Self {
        FatigueParams {
            fatigue_rate: 0.01,
            recovery_rate: 0.01,
            rest_multiplier: 15.0,
            develop_rate: 10.0,
            relax_rate: 10.0,
            effort_base_weight: 1.0,
            effort_deficit_weight: 5.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("fatigue_rate", self.fatigue_rate),
            ("recovery_rate", self.recovery_rate),
            ("develop_rate", self.develop_rate),
            ("relax_rate", self.relax_rate),
        ];
        for (name, v) in rates {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain_err!("{name} must be positive, got {v}"));
            }
        }
        if !(self.rest_multiplier >= 1.0 && self.rest_multiplier.is_finite()) {
            return Err(domain_err!(
                "rest_multiplier must be >= 1, got {}",
                self.rest_multiplier
            ));
        }
        if !(self.effort_base_weight >= 0.0 && self.effort_deficit_weight >= 0.0) {
            return Err(domain_err!("effort weights must be non-negative"));
        }
        Ok(())
    }

    /// Recovery rate in effect for the given target load.
    #[inline]
    pub fn effective_recovery(&self, target_load: f64) -> f64 {
        if target_load == 0.0 {
            self.rest_multiplier * self.recovery_rate
        } else {
            self.recovery_rate
        }
    }
}

impl Default for FatigueParams {
    fn default() -> Self {
        Self::shoulder()
    }
}

fn check_load(target_load: f64) -> Result<()> {
    if (0.0..=100.0).contains(&target_load) {
        Ok(())
    } else {
        Err(domain_err!("target load {target_load} %MVC outside [0, 100]"))
    }
}

/// Activation flow `C(t)` (%MVC/s) from the resting to the active compartment.
pub fn controller(state: &MuscleState, target_load: f64, params: &FatigueParams) -> Result<f64> {
    check_load(target_load)?;
    Ok(controller_unchecked(state, target_load, params))
}

#[inline]
fn controller_unchecked(state: &MuscleState, target_load: f64, params: &FatigueParams) -> f64 {
    let gap = target_load - state.m_active;
    if state.m_active < target_load {
        if state.m_rest > gap {
            params.develop_rate * gap
        } else {
            params.develop_rate * state.m_rest
        }
    } else {
        params.relax_rate * gap
    }
}

struct Derivative {
    active: f64,
    rest: f64,
    fatigued: f64,
}

#[inline]
fn derivative(s: &MuscleState, target_load: f64, recovery: f64, p: &FatigueParams) -> Derivative {
    let c = controller_unchecked(s, target_load, p);
    let fatigue = p.fatigue_rate * s.m_active;
    let recover = recovery * s.m_fatigued;
    Derivative {
        active: c - fatigue,
        rest: recover - c,
        fatigued: fatigue - recover,
    }
}

/// Effort accrued over `dt` for a load against the given (pre-step) state,
/// before group weighting.
#[inline]
pub fn effort_rate(state: &MuscleState, target_load: f64, params: &FatigueParams) -> f64 {
    let capacity = 100.0 - state.m_fatigued;
    let deficit = (target_load - capacity).max(0.0);
    params.effort_base_weight * target_load + params.effort_deficit_weight * deficit
}

/// Advances one muscle group by `dt` seconds with fixed-step RK4.
///
/// Returns the new state and the unweighted effort contribution
/// `(α·TL + β·max(0, TL − (100 − M_F)))·dt`, evaluated on the incoming state.
pub fn step(
    state: &MuscleState,
    target_load: f64,
    dt: f64,
    params: &FatigueParams,
) -> Result<(MuscleState, f64)> {
    check_load(target_load)?;
    if !(dt > 0.0 && dt <= MAX_DT) {
        return Err(domain_err!("time step {dt} s outside (0, {MAX_DT}]"));
    }
    if !state.is_finite() {
        return Err(Error::Numeric(alloc::format!(
            "non-finite muscle state {state:?}"
        )));
    }
    let recovery = params.effective_recovery(target_load);
    let k1 = derivative(state, target_load, recovery, params);
    let k2 = derivative(&state.axpy(0.5 * dt, &k1), target_load, recovery, params);
    let k3 = derivative(&state.axpy(0.5 * dt, &k2), target_load, recovery, params);
    let k4 = derivative(&state.axpy(dt, &k3), target_load, recovery, params);
    let h6 = dt / 6.0;
    let next = MuscleState {
        m_active: state.m_active + h6 * (k1.active + 2.0 * k2.active + 2.0 * k3.active + k4.active),
        m_rest: state.m_rest + h6 * (k1.rest + 2.0 * k2.rest + 2.0 * k3.rest + k4.rest),
        m_fatigued: state.m_fatigued
            + h6 * (k1.fatigued + 2.0 * k2.fatigued + 2.0 * k3.fatigued + k4.fatigued),
    };
    if !next.is_finite() {
        return Err(Error::Numeric(alloc::format!(
            "integration produced a non-finite state from {state:?}"
        )));
    }
    Ok((next.renormalized(), effort_rate(state, target_load, params) * dt))
}

/// One named muscle group inside a [`MuscleBank`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MuscleGroup {
    pub name: String,
    #[cfg_attr(feature = "serde", serde(skip, default))]
    pub state: MuscleState,
    pub params: FatigueParams,
    pub weight: f64,
}

impl MuscleGroup {
    pub fn new(name: impl Into<String>, params: FatigueParams, weight: f64) -> Self {
        MuscleGroup {
            name: name.into(),
            state: MuscleState::RESTED,
            params,
            weight,
        }
    }
}

/// Ordered set of muscle groups stepped together; loads are matched by index.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct MuscleBank {
    groups: Vec<MuscleGroup>,
}

impl MuscleBank {
    pub fn new(groups: Vec<MuscleGroup>) -> Result<Self> {
        let bank = MuscleBank { groups };
        bank.validate()?;
        Ok(bank)
    }

    /// Shoulder and elbow groups with default parameters and unit weights.
    pub fn shoulder_elbow() -> Self {
        MuscleBank {
            groups: alloc::vec![
                MuscleGroup::new("shoulder", FatigueParams::shoulder(), 1.0),
                MuscleGroup::new("elbow", FatigueParams::elbow(), 1.0),
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.groups.is_empty() {
            return Err(domain_err!("muscle bank needs at least one group"));
        }
        for g in &self.groups {
            g.params.validate()?;
            if !(g.weight > 0.0 && g.weight.is_finite()) {
                return Err(domain_err!("group {} weight must be positive", g.name));
            }
        }
        Ok(())
    }

    pub fn groups(&self) -> &[MuscleGroup] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Returns every group to the fully rested state.
    pub fn reset(&mut self) {
        for g in &mut self.groups {
            g.state = MuscleState::RESTED;
        }
    }

    /// Steps every group under its load and returns the summed, weighted
    /// effort `C_eff·dt`.
    pub fn effort_cost(&mut self, loads: &[f64], dt: f64) -> Result<f64> {
        self.step_with(loads, dt, |_, _, _, _| {})
    }

    /// Like [`effort_cost`](Self::effort_cost), calling `observe(index, group,
    /// load, weighted contribution)` after each group advances.
    pub fn step_with<F>(&mut self, loads: &[f64], dt: f64, mut observe: F) -> Result<f64>
    where
        F: FnMut(usize, &MuscleGroup, f64, f64),
    {
        if loads.len() != self.groups.len() {
            return Err(domain_err!(
                "{} loads supplied for {} muscle groups",
                loads.len(),
                self.groups.len()
            ));
        }
        let mut total = 0.0;
        for (i, (g, &load)) in self.groups.iter_mut().zip(loads).enumerate() {
            let (next, contribution) = step(&g.state, load, dt, &g.params)?;
            g.state = next;
            let weighted = g.weight * contribution;
            total += weighted;
            observe(i, g, load, weighted);
        }
        Ok(total)
    }
}

impl Default for MuscleBank {
    fn default() -> Self {
        Self::shoulder_elbow()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params_ld(ld: f64) -> FatigueParams {
        FatigueParams {
            develop_rate: ld,
            ..FatigueParams::shoulder()
        }
    }

    #[test]
    fn controller_at_rest_equilibrium_is_zero() {
        let c = controller(&MuscleState::RESTED, 0.0, &FatigueParams::shoulder()).unwrap();
        assert_eq!(c, 0.0);
    }

    #[test]
    fn controller_zero_when_active_matches_load() {
        let s = MuscleState::new(50.0, 50.0, 0.0);
        assert_eq!(controller(&s, 50.0, &FatigueParams::shoulder()).unwrap(), 0.0);
    }

    #[test]
    fn controller_develops_towards_load() {
        let c = controller(&MuscleState::RESTED, 60.0, &params_ld(10.0)).unwrap();
        assert_eq!(c, 600.0);
    }

    #[test]
    fn controller_limited_by_resting_pool() {
        let s = MuscleState::new(10.0, 20.0, 70.0);
        let c = controller(&s, 60.0, &params_ld(10.0)).unwrap();
        assert_eq!(c, 200.0);
    }

    #[test]
    fn controller_relaxes_when_overactive() {
        let s = MuscleState::new(50.0, 50.0, 0.0);
        let c = controller(&s, 20.0, &FatigueParams::shoulder()).unwrap();
        assert_eq!(c, -300.0);
    }

    #[test]
    fn controller_rejects_out_of_range_load() {
        let p = FatigueParams::shoulder();
        assert!(matches!(
            controller(&MuscleState::RESTED, 100.5, &p),
            Err(Error::InputDomain(_))
        ));
        assert!(controller(&MuscleState::RESTED, -1.0, &p).is_err());
    }

    #[test]
    fn rest_is_a_fixed_point() {
        for dt in [0.001, 0.01, 0.1] {
            let (s, c) = step(&MuscleState::RESTED, 0.0, dt, &FatigueParams::elbow()).unwrap();
            assert_eq!(s, MuscleState::RESTED);
            assert_eq!(c, 0.0);
        }
    }

    #[test]
    fn step_rejects_bad_dt_and_nan_state() {
        let p = FatigueParams::shoulder();
        assert!(step(&MuscleState::RESTED, 10.0, 0.0, &p).is_err());
        assert!(step(&MuscleState::RESTED, 10.0, 0.2, &p).is_err());
        let bad = MuscleState::new(f64::NAN, 100.0, 0.0);
        assert!(matches!(step(&bad, 10.0, 0.01, &p), Err(Error::Numeric(_))));
    }

    #[test]
    fn effort_without_deficit() {
        let mut bank = MuscleBank::new(alloc::vec![MuscleGroup::new(
            "g",
            FatigueParams::shoulder(),
            1.0
        )])
        .unwrap();
        let c = bank.effort_cost(&[50.0], 0.01).unwrap();
        assert!((c - 0.5).abs() < 1e-12);
    }

    #[test]
    fn effort_with_capacity_deficit() {
        let mut g = MuscleGroup::new("g", FatigueParams::shoulder(), 1.0);
        g.state = MuscleState::new(0.0, 40.0, 60.0);
        let mut bank = MuscleBank::new(alloc::vec![g]).unwrap();
        let c = bank.effort_cost(&[50.0], 0.01).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn effort_zero_for_zero_loads_and_mismatch_rejected() {
        let mut bank = MuscleBank::shoulder_elbow();
        assert_eq!(bank.effort_cost(&[0.0, 0.0], 0.01).unwrap(), 0.0);
        assert!(matches!(
            bank.effort_cost(&[1.0], 0.01),
            Err(Error::InputDomain(_))
        ));
    }

    #[test]
    fn bank_validation() {
        assert!(MuscleBank::new(Vec::new()).is_err());
        let g = MuscleGroup::new("g", FatigueParams::shoulder(), 0.0);
        assert!(MuscleBank::new(alloc::vec![g]).is_err());
        let p = FatigueParams {
            rest_multiplier: 0.5,
            ..FatigueParams::shoulder()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn sustained_load_fatigue_never_decreases() {
        let p = FatigueParams::shoulder();
        let mut s = MuscleState::RESTED;
        for _ in 0..60_000 {
            let (n, _) = step(&s, 80.0, 0.01, &p).unwrap();
            assert!(n.m_fatigued >= s.m_fatigued);
            s = n;
        }
        assert!(s.m_fatigued > 10.0);
    }

    #[test]
    fn rest_multiplier_speeds_recovery() {
        let start = MuscleState::new(0.0, 60.0, 40.0);
        let fast = FatigueParams::shoulder();
        let slow = FatigueParams {
            rest_multiplier: 1.0,
            ..fast
        };
        let (mut a, mut b) = (start, start);
        for _ in 0..6000 {
            a = step(&a, 0.0, 0.01, &fast).unwrap().0;
            b = step(&b, 0.0, 0.01, &slow).unwrap().0;
        }
        assert!(a.m_fatigued < b.m_fatigued);
    }
}
