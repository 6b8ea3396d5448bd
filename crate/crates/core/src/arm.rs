//! Deterministic reaching surrogate for a right arm.
//!
//! Reaches follow a straight minimum-jerk hand path timed by Fitts' law. Each
//! sample is converted to a posture of a three-joint arm (shoulder azimuth and
//! elevation, elbow flexion) and the static gravity torques at shoulder and
//! elbow are normalized into target loads for the fatigue model.
//!
//! Frame: `x` to the user's right, `y` up, `z` forward, origin at the canvas
//! center. The canvas lies in the `z = 0` plane.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
use core::ops::{Add, Mul, Sub};

use crate::error::{domain_err, Error, Result};
use crate::math;

pub const GRAVITY: f64 = 9.81;

/// Loads are produced in this group order: shoulder, elbow.
pub const LOAD_GROUPS: usize = 2;

/// Point or displacement in metres.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn norm(self) -> f64 {
        math::sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    pub fn lerp(self, other: Vec3, s: f64) -> Vec3 {
        self + (other - self) * s
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

/// Segment lengths, masses and joint strengths of the simulated arm.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ArmModel {
    /// Shoulder joint relative to the canvas center.
    pub shoulder_pos: Vec3,
    pub upper_len: f64,
    pub fore_len: f64,
    /// Grip-to-trigger extension of the controller, rigid with the forearm.
    pub tool_len: f64,
    pub upper_mass: f64,
    pub fore_mass: f64,
    /// Center of mass of each segment as a fraction of its length.
    pub com_frac: f64,
    pub tau_max_shoulder: f64,
    pub tau_max_elbow: f64,
}

impl Default for ArmModel {
    fn default() -> Self {
        ArmModel {
            shoulder_pos: Vec3::new(0.18, -0.25, -0.58),
            upper_len: 0.30,
            fore_len: 0.35,
            tool_len: 0.10,
            upper_mass: 2.0,
            fore_mass: 1.7,
            com_frac: 0.5,
            tau_max_shoulder: 40.0,
            tau_max_elbow: 20.0,
        }
    }
}

impl ArmModel {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("upper_len", self.upper_len),
            ("fore_len", self.fore_len),
            ("tool_len", self.tool_len),
            ("upper_mass", self.upper_mass),
            ("fore_mass", self.fore_mass),
            ("tau_max_shoulder", self.tau_max_shoulder),
            ("tau_max_elbow", self.tau_max_elbow),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain_err!("arm {name} must be positive, got {v}"));
            }
        }
        if !(self.com_frac > 0.0 && self.com_frac < 1.0) {
            return Err(domain_err!("com_frac must lie in (0, 1), got {}", self.com_frac));
        }
        Ok(())
    }

    /// Length of the rigid forearm-plus-controller link.
    pub fn distal_len(&self) -> f64 {
        self.fore_len + self.tool_len
    }

    /// Maximum distance from the shoulder to the controller tip.
    pub fn reach(&self) -> f64 {
        self.upper_len + self.distal_len()
    }

    pub fn can_reach(&self, target: Vec3) -> bool {
        inverse_kinematics(self, target).is_ok()
    }
}

/// Joint angles of the arm.
///
/// The arm lies in the vertical plane at `shoulder_azimuth` (measured from
/// straight ahead towards the right). `shoulder_elevation` is the upper arm's
/// angle above horizontal in that plane, and the forearm sits at
/// `shoulder_elevation + elbow_flexion`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Posture {
    pub shoulder_azimuth: f64,
    pub shoulder_elevation: f64,
    pub elbow_flexion: f64,
}

impl Posture {
    pub fn forearm_elevation(&self) -> f64 {
        self.shoulder_elevation + self.elbow_flexion
    }

    /// Joint-range check: flexion in `[0, π)`, elevation in `[−π/2, π/2]`.
    ///
    /// Every canvas cell satisfies it with the default arm. Targets low and
    /// close to the shoulder can need the upper arm swung back past
    /// straight-down, which [`inverse_kinematics`] still returns.
    pub fn is_valid(&self) -> bool {
        (0.0..PI).contains(&self.elbow_flexion)
            && (-FRAC_PI_2..=FRAC_PI_2).contains(&self.shoulder_elevation)
    }
}

/// Elbow and controller-tip positions for a posture.
pub fn forward_kinematics(arm: &ArmModel, posture: &Posture) -> (Vec3, Vec3) {
    let (sa, ca) = (math::sin(posture.shoulder_azimuth), math::cos(posture.shoulder_azimuth));
    let heading = Vec3::new(sa, 0.0, ca);
    let up = Vec3::new(0.0, 1.0, 0.0);
    let in_plane = |elev: f64| heading * math::cos(elev) + up * math::sin(elev);
    let elbow = arm.shoulder_pos + in_plane(posture.shoulder_elevation) * arm.upper_len;
    let tip = elbow + in_plane(posture.forearm_elevation()) * arm.distal_len();
    (elbow, tip)
}

/// Places the controller tip at `target`, elbow below the shoulder–target line.
pub fn inverse_kinematics(arm: &ArmModel, target: Vec3) -> Result<Posture> {
    let d = target - arm.shoulder_pos;
    let horizontal = math::sqrt(d.x * d.x + d.z * d.z);
    let dist = math::sqrt(horizontal * horizontal + d.y * d.y);
    let (l1, l2) = (arm.upper_len, arm.distal_len());
    let reach = l1 + l2;
    // A sliver of slack absorbs rounding for targets placed at exactly full reach.
    if dist > reach * (1.0 + 1e-12) || dist < (l1 - l2).abs() {
        return Err(Error::Unreachable {
            distance: dist,
            reach,
        });
    }
    let azimuth = if horizontal > 1e-12 {
        math::atan2(d.x, d.z)
    } else {
        0.0
    };
    let cos_flex = (dist * dist - l1 * l1 - l2 * l2) / (2.0 * l1 * l2);
    let flexion = math::acos(cos_flex);
    let elevation = math::atan2(d.y, horizontal)
        - math::atan2(l2 * math::sin(flexion), l1 + l2 * math::cos(flexion));
    Ok(Posture {
        shoulder_azimuth: azimuth,
        shoulder_elevation: elevation,
        elbow_flexion: flexion,
    })
}

/// Static gravity torques `(shoulder, elbow)` in N·m for a posture.
pub fn gravity_torques(arm: &ArmModel, posture: &Posture) -> (f64, f64) {
    let upper_arm = math::cos(posture.shoulder_elevation);
    let forearm = math::cos(posture.forearm_elevation());
    let (l1, l2, c) = (arm.upper_len, arm.fore_len, arm.com_frac);
    let shoulder = GRAVITY
        * (arm.upper_mass * c * l1 * upper_arm + arm.fore_mass * (l1 * upper_arm + c * l2 * forearm));
    let elbow = GRAVITY * arm.fore_mass * c * l2 * forearm;
    (shoulder, elbow)
}

/// Target loads (%MVC) for shoulder and elbow: `100·|τ|/τ_max`, clamped.
pub fn gravity_loads(arm: &ArmModel, posture: &Posture) -> [f64; LOAD_GROUPS] {
    let (shoulder, elbow) = gravity_torques(arm, posture);
    [
        (100.0 * shoulder.abs() / arm.tau_max_shoulder).clamp(0.0, 100.0),
        (100.0 * elbow.abs() / arm.tau_max_elbow).clamp(0.0, 100.0),
    ]
}

/// Fitts' law timing for a reach plus the time the button is held.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct FittsParams {
    /// Intercept, s.
    pub a: f64,
    /// Slope, s/bit.
    pub b: f64,
    /// Press hold time, s.
    pub dwell: f64,
}

impl Default for FittsParams {
    fn default() -> Self {
        FittsParams {
            a: 0.2,
            b: 0.3,
            dwell: 0.2,
        }
    }
}

impl FittsParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a >= 0.0 && self.b > 0.0 && self.dwell >= 0.0) {
            return Err(domain_err!(
                "Fitts parameters need a >= 0, b > 0, dwell >= 0 (got {self:?})"
            ));
        }
        Ok(())
    }

    /// Movement time without the dwell.
    pub fn movement_time(&self, distance: f64, width: f64) -> Result<f64> {
        if !(width > 0.0) {
            return Err(domain_err!("target width must be positive, got {width}"));
        }
        if !(distance >= 0.0) {
            return Err(domain_err!("reach distance must be non-negative, got {distance}"));
        }
        Ok(self.a + self.b * math::log2(distance / width + 1.0))
    }
}

/// Total time to reach and press a target of width `width` at `distance`.
pub fn reach_duration(distance: f64, width: f64, fitts: &FittsParams) -> Result<f64> {
    Ok(fitts.movement_time(distance, width)? + fitts.dwell)
}

/// Minimum-jerk position profile `10τ³ − 15τ⁴ + 6τ⁵` on `τ ∈ [0, 1]`.
#[inline]
pub fn min_jerk_profile(tau: f64) -> f64 {
    let t = tau.clamp(0.0, 1.0);
    let t3 = t * t * t;
    t3 * (10.0 + t * (-15.0 + 6.0 * t))
}

/// Number of uniform steps of length `dt` covering `duration`.
pub fn step_count(duration: f64, dt: f64) -> usize {
    let n = math::floor(duration / dt + 1.0 - 1e-9);
    (n as usize).max(1)
}

/// Straight-line minimum-jerk hand path sampled every `dt`.
///
/// The movement is stretched to a whole number of steps, so the returned
/// points cover `ceil(duration / dt)` intervals and end exactly at `to`.
pub fn min_jerk(from: Vec3, to: Vec3, duration: f64, dt: f64) -> Result<Vec<Vec3>> {
    if !(duration > 0.0) || !(dt > 0.0) {
        return Err(domain_err!("duration and dt must be positive"));
    }
    let n = step_count(duration, dt);
    let mut path = Vec::with_capacity(n + 1);
    for k in 0..n {
        path.push(from.lerp(to, min_jerk_profile(k as f64 / n as f64)));
    }
    path.push(to);
    Ok(path)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub hand_pos: Vec3,
    pub posture: Posture,
    pub loads: [f64; LOAD_GROUPS],
}

/// Time-stamped reach, uniform in `dt`, ending with the dwell at the target.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub dt: f64,
}

impl Trajectory {
    pub fn duration(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }

    pub fn end(&self) -> Option<Vec3> {
        self.samples.last().map(|s| s.hand_pos)
    }
}

/// Plans a reach from `from` to the press point `to` on a target of width
/// `width`, timed by Fitts' law.
pub fn plan_reach(
    arm: &ArmModel,
    from: Vec3,
    to: Vec3,
    fitts: &FittsParams,
    width: f64,
    dt: f64,
) -> Result<Trajectory> {
    let movement = fitts.movement_time(from.distance(to), width)?;
    plan_reach_timed(arm, from, to, movement, fitts.dwell, dt)
}

/// [`plan_reach`] with explicit movement and dwell times.
pub fn plan_reach_timed(
    arm: &ArmModel,
    from: Vec3,
    to: Vec3,
    movement: f64,
    dwell: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !(dt > 0.0) {
        return Err(domain_err!("dt must be positive, got {dt}"));
    }
    let path = if movement > 0.0 {
        min_jerk(from, to, movement, dt)?
    } else {
        alloc::vec![from, to]
    };
    let dwell_steps = if dwell > 0.0 { step_count(dwell, dt) } else { 0 };
    let mut samples = Vec::with_capacity(path.len() + dwell_steps);
    let target_posture = inverse_kinematics(arm, to)?;
    let target_loads = gravity_loads(arm, &target_posture);
    let last = path.len() - 1;
    for (k, p) in path.into_iter().enumerate() {
        let (posture, loads) = if k == last {
            (target_posture, target_loads)
        } else {
            let q = inverse_kinematics(arm, p)?;
            (q, gravity_loads(arm, &q))
        };
        samples.push(TrajectorySample {
            t: k as f64 * dt,
            hand_pos: p,
            posture,
            loads,
        });
    }
    for j in 1..=dwell_steps {
        samples.push(TrajectorySample {
            t: (last + j) as f64 * dt,
            hand_pos: to,
            posture: target_posture,
            loads: target_loads,
        });
    }
    Ok(Trajectory { samples, dt })
}
