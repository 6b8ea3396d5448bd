//! Episode-level rewards of the layout agent.

use alloc::vec::Vec;

use crate::error::{domain_err, Result};
use crate::math;
use crate::task::EpisodeResult;

/// Three-button reward: `−Σ F_i` minus any penalties.
pub fn episode_reward_3btn(result: &EpisodeResult) -> f64 {
    -result.per_button_effort.iter().sum::<f64>() - result.penalty_total()
}

/// Empirical usage frequencies `n_i / Σ n_j`; all zero when nothing was pressed.
pub fn usage_frequencies(counts: &[usize]) -> Vec<f64> {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return alloc::vec![0.0; counts.len()];
    }
    counts.iter().map(|&n| n as f64 / total as f64).collect()
}

/// Frequency-weighted reward `exp(−Σ π_i·F_i)` using the previous episode's
/// usage frequencies `π`.
///
/// An all-zero `π` (no previous episode) is replaced by the uniform
/// distribution.
pub fn episode_reward_freq(efforts: &[f64], prev_freq: &[f64]) -> Result<f64> {
    Ok(math::exp(-weighted_effort(efforts, prev_freq)?))
}

/// `Σ π_i·F_i` with the same fallback as [`episode_reward_freq`].
pub fn weighted_effort(efforts: &[f64], prev_freq: &[f64]) -> Result<f64> {
    if efforts.len() != prev_freq.len() || efforts.is_empty() {
        return Err(domain_err!(
            "{} efforts and {} frequencies",
            efforts.len(),
            prev_freq.len()
        ));
    }
    if prev_freq.iter().any(|p| !(*p >= 0.0)) {
        return Err(domain_err!("frequencies must be non-negative"));
    }
    let mass: f64 = prev_freq.iter().sum();
    let sum = if mass == 0.0 {
        efforts.iter().sum::<f64>() / efforts.len() as f64
    } else {
        efforts.iter().zip(prev_freq).map(|(f, p)| f * p).sum()
    };
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::task::{Layout, Penalty, PenaltyKind};

    fn result(efforts: &[f64], penalties: Vec<Penalty>) -> EpisodeResult {
        EpisodeResult {
            layout: Layout::new(alloc::vec![0, 1, 2]).unwrap(),
            per_button_effort: efforts.to_vec(),
            total_effort: efforts.iter().sum(),
            reward: 0.0,
            penalties,
            press_times: Vec::new(),
            pressed: Vec::new(),
            trace: None,
        }
    }

    #[test]
    fn three_button_reward() {
        assert_eq!(episode_reward_3btn(&result(&[0.0; 3], Vec::new())), 0.0);
        assert_eq!(episode_reward_3btn(&result(&[10.0, 5.0, 8.0], Vec::new())), -23.0);
        let overlap = Penalty {
            kind: PenaltyKind::Overlap,
            value: 150.0,
            button: None,
        };
        assert_eq!(
            episode_reward_3btn(&result(&[0.0; 3], alloc::vec![overlap])),
            -150.0
        );
    }

    #[test]
    fn frequency_reward() {
        assert_eq!(episode_reward_freq(&[0.0; 5], &[0.2; 5]).unwrap(), 1.0);
        let r = episode_reward_freq(&[2.0, 99.0, 99.0, 99.0, 99.0], &[1.0, 0.0, 0.0, 0.0, 0.0])
            .unwrap();
        assert!((r - libm::exp(-2.0)).abs() < 1e-15);
        assert!((r - 0.1353).abs() < 1e-4);
        assert!(episode_reward_freq(&[1.0; 4], &[0.2; 5]).is_err());
    }

    #[test]
    fn first_episode_falls_back_to_uniform() {
        let f = [1.0, 2.0, 3.0, 4.0, 5.0];
        let a = episode_reward_freq(&f, &[0.0; 5]).unwrap();
        let b = episode_reward_freq(&f, &[0.2; 5]).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn frequencies_from_counts() {
        let third = 1.0 / 3.0;
        assert_eq!(
            usage_frequencies(&[3, 3, 3, 0, 0]),
            alloc::vec![third, third, third, 0.0, 0.0]
        );
        assert_eq!(usage_frequencies(&[0, 0]), alloc::vec![0.0, 0.0]);
    }
}
