//! Factorized categorical layout policy: one softmax head per button.

use alloc::boxed::Box;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::error::{domain_err, Result};
use crate::math;
use crate::mlp::{Activations, Mlp};
use crate::seed;
use crate::task::{Canvas, Layout, CELLS};

/// What the layout agent sees before proposing a layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    /// Normalized `(x, y)` of each button in the previous layout.
    pub coords: Vec<(f64, f64)>,
    /// Previous-episode usage frequencies (frequency task only).
    pub frequencies: Option<Vec<f64>>,
}

impl Observation {
    /// Every button at the canvas center; frequencies unknown (all zero).
    pub fn initial(buttons: usize, with_frequencies: bool) -> Self {
        Observation {
            coords: alloc::vec![(0.5, 0.5); buttons],
            frequencies: with_frequencies.then(|| alloc::vec![0.0; buttons]),
        }
    }

    pub fn from_layout(canvas: &Canvas, layout: &Layout, frequencies: Option<Vec<f64>>) -> Result<Self> {
        let coords = layout
            .cells()
            .iter()
            .map(|&c| canvas.normalized(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Observation { coords, frequencies })
    }

    pub fn width(&self) -> usize {
        2 * self.coords.len() + self.frequencies.as_ref().map_or(0, Vec::len)
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.width());
        for &(x, y) in &self.coords {
            v.push(x);
            v.push(y);
        }
        if let Some(f) = &self.frequencies {
            v.extend_from_slice(f);
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Parameterization {
    /// Free logits per head; the observation is ignored.
    #[default]
    Table,
    /// Observation-conditioned network.
    Network,
}

#[derive(Debug, Clone, PartialEq)]
enum Body {
    Table(Vec<f64>),
    Network(Box<Mlp>),
}

/// Logits computed for one observation, kept for the backward pass.
pub struct Forward {
    pub logits: Vec<f64>,
    activations: Option<Activations>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    heads: usize,
    body: Body,
}

/// Numerically stable softmax.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|z| math::exp(z - max)).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

fn log_softmax_at(logits: &[f64], idx: usize) -> f64 {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logits.iter().map(|z| math::exp(z - max)).sum();
    logits[idx] - max - math::ln(sum)
}

impl Policy {
    /// All heads uniform.
    pub fn uniform(heads: usize) -> Self {
        Policy {
            heads,
            body: Body::Table(alloc::vec![0.0; heads * CELLS]),
        }
    }

    pub fn from_logits(heads: usize, logits: Vec<f64>) -> Result<Self> {
        if heads == 0 || logits.len() != heads * CELLS {
            return Err(domain_err!(
                "expected {} logits for {heads} heads, got {}",
                heads * CELLS,
                logits.len()
            ));
        }
        if logits.iter().any(|z| !z.is_finite()) {
            return Err(domain_err!("logits must be finite"));
        }
        Ok(Policy {
            heads,
            body: Body::Table(logits),
        })
    }

    pub fn network(heads: usize, obs_width: usize, seed: u64) -> Self {
        Policy {
            heads,
            body: Body::Network(Box::new(Mlp::new(obs_width, heads * CELLS, seed))),
        }
    }

    /// Network policy with the given flat parameter vector.
    pub fn network_from_params(heads: usize, obs_width: usize, params: Vec<f64>) -> Result<Self> {
        let mut net = Mlp::new(obs_width, heads * CELLS, 0);
        if heads == 0 || params.len() != net.params().len() {
            return Err(domain_err!(
                "expected {} network parameters for {heads} heads, got {}",
                net.params().len(),
                params.len()
            ));
        }
        if params.iter().any(|z| !z.is_finite()) {
            return Err(domain_err!("network parameters must be finite"));
        }
        net.params_mut().copy_from_slice(&params);
        Ok(Policy {
            heads,
            body: Body::Network(Box::new(net)),
        })
    }

    pub fn new(kind: Parameterization, heads: usize, obs_width: usize, seed: u64) -> Self {
        match kind {
            Parameterization::Table => Self::uniform(heads),
            Parameterization::Network => Self::network(heads, obs_width, seed),
        }
    }

    pub fn heads(&self) -> usize {
        self.heads
    }

    pub fn parameterization(&self) -> Parameterization {
        match self.body {
            Body::Table(_) => Parameterization::Table,
            Body::Network(_) => Parameterization::Network,
        }
    }

    /// Observation width a network policy expects.
    pub fn input_width(&self) -> Option<usize> {
        match &self.body {
            Body::Table(_) => None,
            Body::Network(n) => Some(n.inputs()),
        }
    }

    pub fn params(&self) -> &[f64] {
        match &self.body {
            Body::Table(t) => t,
            Body::Network(n) => n.params(),
        }
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        match &mut self.body {
            Body::Table(t) => t,
            Body::Network(n) => n.params_mut(),
        }
    }

    pub fn forward(&self, obs: &[f64]) -> Forward {
        match &self.body {
            Body::Table(t) => Forward {
                logits: t.clone(),
                activations: None,
            },
            Body::Network(n) => {
                let act = n.forward(obs);
                Forward {
                    logits: act.output.clone(),
                    activations: Some(act),
                }
            }
        }
    }

    /// Adds `∂(dlogits · logits)/∂θ` to `grad`.
    pub fn backward(&self, fwd: &Forward, dlogits: &[f64], grad: &mut [f64]) {
        match &self.body {
            Body::Table(_) => {
                for (g, d) in grad.iter_mut().zip(dlogits) {
                    *g += d;
                }
            }
            Body::Network(n) => {
                let act = fwd.activations.as_ref().expect("network forward pass");
                n.backward(act, dlogits, grad);
            }
        }
    }

    /// Per-head probability vectors for an observation.
    pub fn probabilities(&self, obs: &Observation) -> Vec<Vec<f64>> {
        let fwd = self.forward(&obs.to_vec());
        fwd.logits.chunks(CELLS).map(softmax).collect()
    }

    /// Joint log-probability of `layout` under the given logits.
    pub fn log_prob(logits: &[f64], layout: &Layout) -> f64 {
        logits
            .chunks(CELLS)
            .zip(layout.cells())
            .map(|(head, &c)| log_softmax_at(head, c))
            .sum()
    }

    /// Mean per-head entropy (nats).
    pub fn entropy(&self, obs: &Observation) -> f64 {
        let probs = self.probabilities(obs);
        let total: f64 = probs
            .iter()
            .map(|p| -p.iter().filter(|&&x| x > 0.0).map(|&x| x * math::ln(x)).sum::<f64>())
            .sum();
        total / self.heads as f64
    }
}

/// Draws one cell per head. Duplicate cells are allowed.
pub fn sample_layout(policy: &Policy, obs: &Observation, rng: &mut seed::Rng) -> (Layout, Vec<f64>) {
    let probs = policy.probabilities(obs);
    let mut cells = Vec::with_capacity(policy.heads);
    let mut logps = Vec::with_capacity(policy.heads);
    for p in &probs {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut pick = CELLS - 1;
        for (c, &pc) in p.iter().enumerate() {
            acc += pc;
            if u < acc {
                pick = c;
                break;
            }
        }
        cells.push(pick);
        logps.push(math::ln(p[pick]));
    }
    (Layout::new(cells).expect("cells drawn from 0..18"), logps)
}

/// Per-head argmax, ties going to the lowest cell index.
pub fn greedy_layout(policy: &Policy, obs: &Observation) -> Layout {
    let cells = policy
        .probabilities(obs)
        .iter()
        .map(|p| {
            let mut best = 0;
            for c in 1..p.len() {
                if p[c] > p[best] {
                    best = c;
                }
            }
            best
        })
        .collect();
    Layout::new(cells).expect("argmax is a valid cell")
}

/// Probability that two or more heads pick the same cell.
pub fn overlap_probability(policy: &Policy, obs: &Observation) -> f64 {
    fn distinct(probs: &[Vec<f64>], used: &mut [bool; CELLS]) -> f64 {
        let Some((head, rest)) = probs.split_first() else {
            return 1.0;
        };
        let mut total = 0.0;
        for c in 0..CELLS {
            if used[c] || head[c] == 0.0 {
                continue;
            }
            used[c] = true;
            total += head[c] * distinct(rest, used);
            used[c] = false;
        }
        total
    }
    let probs = policy.probabilities(obs);
    1.0 - distinct(&probs, &mut [false; CELLS])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn concentrated(cells: &[usize]) -> Policy {
        let mut logits = alloc::vec![0.0; cells.len() * CELLS];
        for (h, &c) in cells.iter().enumerate() {
            logits[h * CELLS + c] = 1000.0;
        }
        Policy::from_logits(cells.len(), logits).unwrap()
    }

    #[test]
    fn uniform_sampling_is_seeded() {
        let p = Policy::uniform(3);
        let obs = Observation::initial(3, false);
        let a = sample_layout(&p, &obs, &mut seed::rng(5));
        let b = sample_layout(&p, &obs, &mut seed::rng(5));
        assert_eq!(a, b);
    }

    #[test]
    fn concentrated_policy_samples_and_argmaxes_its_mode() {
        let p = concentrated(&[17, 16, 15]);
        let obs = Observation::initial(3, false);
        let mut rng = seed::rng(1);
        for _ in 0..100 {
            assert_eq!(sample_layout(&p, &obs, &mut rng).0.cells(), &[17, 16, 15]);
        }
        assert_eq!(greedy_layout(&p, &obs).cells(), &[17, 16, 15]);
    }

    #[test]
    fn greedy_ties_go_to_lowest_cell() {
        let obs = Observation::initial(3, false);
        assert_eq!(greedy_layout(&Policy::uniform(3), &obs).cells(), &[0, 0, 0]);
    }

    #[test]
    fn heads_are_normalized() {
        let mut logits = alloc::vec![0.0; 2 * CELLS];
        for (i, z) in logits.iter_mut().enumerate() {
            *z = (i as f64 * 0.77).sin() * 30.0;
        }
        let p = Policy::from_logits(2, logits).unwrap();
        for head in p.probabilities(&Observation::initial(2, false)) {
            assert!((head.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(head.iter().all(|&x| x > 0.0));
        }
    }

    #[test]
    fn overlap_probability_of_uniform_heads() {
        let p = Policy::uniform(3);
        let obs = Observation::initial(3, false);
        let expected = 1.0 - (17.0 * 16.0) / (18.0 * 18.0);
        assert!((overlap_probability(&p, &obs) - expected).abs() < 1e-12);
        assert!(overlap_probability(&concentrated(&[4, 4, 2]), &obs) > 0.999);
    }

    #[test]
    fn log_prob_matches_sampled_head_terms() {
        let p = Policy::network(3, 6, 11);
        let obs = Observation::initial(3, false);
        let (layout, logps) = sample_layout(&p, &obs, &mut seed::rng(2));
        let fwd = p.forward(&obs.to_vec());
        let total: f64 = logps.iter().sum();
        assert!((Policy::log_prob(&fwd.logits, &layout) - total).abs() < 1e-12);
    }
}
