//! Repeated-trial comparison of fixed layouts.

use alloc::vec::Vec;

use crate::error::{domain_err, Result};
use crate::math;
use crate::runner::BatchRunner;
use crate::seed::{self, stream};
use crate::task::{Layout, Simulator};

/// The static reference layout: the middle of the centre row.
pub fn static_layout() -> Layout {
    Layout::new(alloc::vec![8, 9, 10]).expect("static cells are valid")
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CompareRow {
    pub layout: Layout,
    /// Total effort of each trial.
    pub efforts: Vec<f64>,
    /// Penalty of each trial.
    pub penalties: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation (zero for a single trial).
    pub std: f64,
    pub mean_penalty: f64,
}

/// Mean and sample standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, math::sqrt(var))
}

/// Pooled standard deviation of two groups.
pub fn pooled_std(a: &CompareRow, b: &CompareRow) -> f64 {
    let (na, nb) = (a.efforts.len() as f64, b.efforts.len() as f64);
    if na + nb <= 2.0 {
        return 0.0;
    }
    let num = (na - 1.0) * a.std * a.std + (nb - 1.0) * b.std * b.std;
    math::sqrt(num / (na + nb - 2.0))
}

/// Runs every layout `trials` times. Trial `t` uses the same noise seed for
/// all layouts, and every trial starts from rested muscles.
pub fn compare<R: BatchRunner>(
    sim: &Simulator,
    layouts: &[Layout],
    trials: usize,
    seed: u64,
    runner: &R,
) -> Result<Vec<CompareRow>> {
    if trials == 0 {
        return Err(domain_err!("compare needs at least one trial"));
    }
    let jobs: Vec<(usize, usize)> = (0..layouts.len())
        .flat_map(|l| (0..trials).map(move |t| (l, t)))
        .collect();
    let results = runner.map(&jobs, |&(l, t)| {
        sim.run_layout(&layouts[l], seed::derive(seed, stream::TRIAL, t as u64))
    });
    let mut rows: Vec<CompareRow> = layouts
        .iter()
        .map(|l| CompareRow {
            layout: l.clone(),
            efforts: Vec::with_capacity(trials),
            penalties: Vec::with_capacity(trials),
            mean: 0.0,
            std: 0.0,
            mean_penalty: 0.0,
        })
        .collect();
    for (&(l, _), r) in jobs.iter().zip(results) {
        let r = r?;
        rows[l].efforts.push(r.total_effort);
        rows[l].penalties.push(r.penalty_total());
    }
    for row in &mut rows {
        (row.mean, row.std) = mean_std(&row.efforts);
        row.mean_penalty = row.penalties.iter().sum::<f64>() / trials as f64;
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::Sequential;
    use crate::task::{EnvConfig, Noise};

    #[test]
    fn noise_free_trials_have_zero_spread() {
        let sim = Simulator::new(EnvConfig::default()).unwrap();
        let rows = compare(&sim, &[static_layout()], 4, 0, &Sequential).unwrap();
        assert_eq!(rows[0].std, 0.0);
        assert_eq!(rows[0].efforts.len(), 4);
    }

    #[test]
    fn trials_are_seeded() {
        let sim = Simulator::new(EnvConfig::default())
            .unwrap()
            .with_noise(Noise::uniform(0.1));
        let layouts = [static_layout(), Layout::new(alloc::vec![17, 16, 15]).unwrap()];
        let a = compare(&sim, &layouts, 5, 3, &Sequential).unwrap();
        let b = compare(&sim, &layouts, 5, 3, &Sequential).unwrap();
        assert_eq!(a, b);
        assert!(a[0].std > 0.0);
    }

    #[test]
    fn statistics() {
        let (m, s) = mean_std(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_eq!(m, 5.0);
        assert!((s - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
        assert_eq!(mean_std(&[3.0]), (3.0, 0.0));
    }
}
