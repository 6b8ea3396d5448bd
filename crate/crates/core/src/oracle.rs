//! Exhaustive-enumeration ground truth for layout optimizers.
//!
//! Small button counts are enumerated by full simulation. Larger ones are
//! first ranked with a zero-fatigue pairwise reach-cost approximation, and
//! only the best `top_k` assignments are simulated exactly.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{config_err, Result};
use crate::runner::BatchRunner;
use crate::task::{Layout, SequenceGenerator, SequenceSpec, Simulator, CELLS};

/// Largest number of ordered layouts enumerated by full simulation.
pub const FULL_LIMIT: usize = 100_000;

/// Default size of the exactly simulated shortlist in two-stage mode.
pub const DEFAULT_TOP_K: usize = 500;

/// What the oracle minimizes.
#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    /// Every button pressed once, in order: total effort plus penalties.
    Sequential { buttons: usize },
    /// Expected frequency-weighted effort `E[Σ p_i F_i]` (plus penalties)
    /// over the generator's sequences, with `p` the generator probabilities.
    Frequency(SequenceGenerator),
}

impl Objective {
    pub fn buttons(&self) -> usize {
        match self {
            Objective::Sequential { buttons } => *buttons,
            Objective::Frequency(g) => g.buttons(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleEntry {
    pub layout: Layout,
    /// Exact objective; includes penalties of failed episodes.
    pub total_effort: f64,
    /// Pairwise approximation, when the entry came through the pre-filter.
    pub approx: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct OracleTable {
    /// Ascending by `total_effort`, ties by cells.
    pub ranking: Vec<OracleEntry>,
    /// Row 0 is the rest pose, row `c + 1` is cell `c`. Unreachable targets
    /// cost `f64::INFINITY`.
    pub pairwise_cost: Vec<[f64; CELLS]>,
    /// Number of ordered layouts considered before any shortlist.
    pub candidates: usize,
}

impl OracleTable {
    pub fn best(&self) -> &OracleEntry {
        &self.ranking[0]
    }

    pub fn minimum(&self) -> f64 {
        self.ranking[0].total_effort
    }

    /// Rank (1-based) and entry of `layout`, if it was ranked.
    pub fn find(&self, layout: &Layout) -> Option<(usize, &OracleEntry)> {
        self.ranking
            .iter()
            .enumerate()
            .find(|(_, e)| &e.layout == layout)
            .map(|(i, e)| (i + 1, e))
    }

    /// Relative excess of `effort` over the minimum.
    pub fn regret(&self, effort: f64) -> f64 {
        (effort - self.minimum()) / self.minimum()
    }
}

/// Number of ordered assignments of `n` buttons to distinct cells.
pub fn ordered_layouts(n: usize) -> usize {
    (0..n).map(|k| CELLS.saturating_sub(k)).product()
}

/// Calls `f` on every ordered tuple of `n` distinct cells, lexicographically.
pub fn for_each_layout(n: usize, mut f: impl FnMut(&[usize])) {
    fn go(cells: &mut Vec<usize>, used: &mut [bool; CELLS], n: usize, f: &mut dyn FnMut(&[usize])) {
        if cells.len() == n {
            f(cells);
            return;
        }
        for c in 0..CELLS {
            if used[c] {
                continue;
            }
            used[c] = true;
            cells.push(c);
            go(cells, used, n, f);
            cells.pop();
            used[c] = false;
        }
    }
    if n <= CELLS {
        go(&mut Vec::with_capacity(n), &mut [false; CELLS], n, &mut f);
    }
}

/// Zero-fatigue reach efforts from rest (row 0) and from every cell.
pub fn pairwise_costs(sim: &Simulator) -> Result<Vec<[f64; CELLS]>> {
    let mut rows = Vec::with_capacity(CELLS + 1);
    for from in core::iter::once(sim.rest()).chain((0..CELLS).map(|c| sim.center(c))) {
        let mut row = [0.0; CELLS];
        for (to, slot) in row.iter_mut().enumerate() {
            *slot = sim.reach_effort(from, to)?.unwrap_or(f64::INFINITY);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Pairwise approximation of the objective for `cells`.
pub fn approximate(objective: &Objective, pair: &[[f64; CELLS]], cells: &[usize]) -> f64 {
    match objective {
        Objective::Sequential { .. } => {
            let mut cost = pair[0][cells[0]];
            for w in cells.windows(2) {
                cost += pair[w[0] + 1][w[1]];
            }
            cost
        }
        Objective::Frequency(g) => {
            // Presses are i.i.d. draws from p; the first one of a sequence
            // starts at rest and each later one at the previous button.
            let p = &g.probabilities;
            let mut first = 0.0;
            let mut later = 0.0;
            for (b, &cb) in cells.iter().enumerate() {
                let w = p[b] * p[b];
                first += w * pair[0][cb];
                for (a, &ca) in cells.iter().enumerate() {
                    later += p[a] * w * pair[ca + 1][cb];
                }
            }
            g.sequences_per_episode as f64 * (first + (g.sequence_len as f64 - 1.0) * later)
        }
    }
}

fn sequences(buttons: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = alloc::vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..buttons).map(move |b| {
                    let mut t = s.clone();
                    t.push(b);
                    t
                })
            })
            .collect();
    }
    out
}

/// Exact objective of one layout; the simulator must be noise-free.
pub fn exact(sim: &Simulator, objective: &Objective, layout: &Layout) -> Result<f64> {
    match objective {
        Objective::Sequential { .. } => Ok(sim.run_layout(layout, 0)?.objective()),
        Objective::Frequency(g) => {
            let p = &g.probabilities;
            let mut expected = 0.0;
            for seq in sequences(g.buttons(), g.sequence_len) {
                let prob: f64 = seq.iter().map(|&b| p[b]).product();
                if prob == 0.0 {
                    continue;
                }
                let spec = SequenceSpec {
                    sequences: alloc::vec![seq],
                    reset_between_sequences: true,
                };
                let r = sim.run_episode(layout, &spec, 0, false)?;
                let weighted: f64 = r.per_button_effort.iter().zip(p).map(|(f, q)| f * q).sum();
                expected += prob * (weighted + r.penalty_total());
            }
            Ok(g.sequences_per_episode as f64 * expected)
        }
    }
}

struct Ranked {
    cost: f64,
    cells: Vec<usize>,
}

impl Ranked {
    fn order(&self, other: &Self) -> Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then_with(|| self.cells.cmp(&other.cells))
    }
}

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.order(other) == Ordering::Equal
    }
}
impl Eq for Ranked {}
impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order(other)
    }
}

/// Builds the oracle table for `objective`.
///
/// Fully simulates every layout when there are at most [`FULL_LIMIT`] of
/// them, otherwise ranks all by the pairwise approximation and simulates the
/// best `top_k`.
pub fn enumerate<R: BatchRunner>(
    sim: &Simulator,
    objective: &Objective,
    top_k: usize,
    runner: &R,
) -> Result<OracleTable> {
    if !sim.noise_is_off() {
        return Err(config_err!("exhaustive enumeration needs a noise-free simulator"));
    }
    let n = objective.buttons();
    if n == 0 || n > CELLS {
        return Err(config_err!("cannot place {n} buttons on {CELLS} cells"));
    }
    if let Objective::Frequency(g) = objective {
        g.validate()?;
        if !g.reset_between_sequences {
            return Err(config_err!(
                "the frequency oracle needs independent sequences (reset between sequences)"
            ));
        }
    }
    if top_k == 0 {
        return Err(config_err!("oracle shortlist must be non-empty"));
    }
    let pair = pairwise_costs(sim)?;
    let candidates = ordered_layouts(n);

    let shortlist: Vec<(Vec<usize>, Option<f64>)> = if candidates <= FULL_LIMIT {
        let mut all = Vec::with_capacity(candidates);
        for_each_layout(n, |c| all.push((c.to_vec(), None)));
        all
    } else {
        let mut heap = BinaryHeap::with_capacity(top_k + 1);
        for_each_layout(n, |c| {
            let cost = approximate(objective, &pair, c);
            if heap.len() == top_k {
                let worst: &Ranked = heap.peek().expect("heap is full");
                if cost.total_cmp(&worst.cost) != Ordering::Less {
                    return;
                }
            }
            heap.push(Ranked {
                cost,
                cells: c.to_vec(),
            });
            if heap.len() > top_k {
                heap.pop();
            }
        });
        heap.into_sorted_vec()
            .into_iter()
            .map(|r| (r.cells, Some(r.cost)))
            .collect()
    };

    let evaluated = runner.map(&shortlist, |(cells, approx)| {
        let layout = Layout::new(cells.clone())?;
        let total_effort = exact(sim, objective, &layout)?;
        Ok(OracleEntry {
            layout,
            total_effort,
            approx: *approx,
        })
    });
    let mut ranking = evaluated.into_iter().collect::<Result<Vec<_>>>()?;
    ranking.sort_by(|a, b| {
        a.total_effort
            .total_cmp(&b.total_effort)
            .then_with(|| a.layout.cells().cmp(b.layout.cells()))
    });
    Ok(OracleTable {
        ranking,
        pairwise_cost: pair,
        candidates,
    })
}

/// Sequential-task oracle for `buttons` buttons.
pub fn enumerate_exhaustive<R: BatchRunner>(sim: &Simulator, buttons: usize, runner: &R) -> Result<OracleTable> {
    enumerate(sim, &Objective::Sequential { buttons }, DEFAULT_TOP_K, runner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::Sequential;
    use crate::task::EnvConfig;

    #[test]
    fn layout_counts() {
        assert_eq!(ordered_layouts(1), 18);
        assert_eq!(ordered_layouts(3), 4896);
        assert_eq!(ordered_layouts(5), 1_028_160);
        let mut n = 0;
        let mut last: Option<Vec<usize>> = None;
        for_each_layout(2, |c| {
            assert_ne!(c[0], c[1]);
            if let Some(prev) = &last {
                assert!(prev.as_slice() < c);
            }
            last = Some(c.to_vec());
            n += 1;
        });
        assert_eq!(n, 18 * 17);
    }

    #[test]
    fn noisy_simulator_is_rejected() {
        let sim = Simulator::new(EnvConfig::default())
            .unwrap()
            .with_noise(crate::task::Noise::uniform(0.1));
        assert!(matches!(
            enumerate_exhaustive(&sim, 1, &Sequential),
            Err(crate::Error::Config(_))
        ));
    }

    #[test]
    fn single_button_table_is_sorted_and_complete() {
        let sim = Simulator::new(EnvConfig::default()).unwrap();
        let t = enumerate_exhaustive(&sim, 1, &Sequential).unwrap();
        assert_eq!(t.ranking.len(), 18);
        assert!(t.ranking.windows(2).all(|w| w[0].total_effort <= w[1].total_effort));
        // With rested muscles a single press is exactly the rest-row reach.
        for e in &t.ranking {
            let c = e.layout.cells()[0];
            if t.pairwise_cost[0][c].is_finite() {
                assert!((e.total_effort - t.pairwise_cost[0][c]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn frequency_approximation_matches_brute_force_expectation() {
        let sim = Simulator::new(EnvConfig::default()).unwrap();
        let pair = pairwise_costs(&sim).unwrap();
        let g = SequenceGenerator::skewed(0.6, 3);
        let cells = [16, 10, 4];
        // Direct expectation over all 27 sequences of the zero-fatigue costs.
        let p = &g.probabilities;
        let mut expected = 0.0;
        for seq in sequences(3, 3) {
            let prob: f64 = seq.iter().map(|&b| p[b]).product();
            let mut from = 0;
            let mut cost = 0.0;
            for &b in &seq {
                cost += p[b] * pair[from][cells[b]];
                from = cells[b] + 1;
            }
            expected += prob * cost;
        }
        expected *= g.sequences_per_episode as f64;
        let approx = approximate(&Objective::Frequency(g), &pair, &cells);
        assert!((approx - expected).abs() < 1e-9 * expected);
    }
}
