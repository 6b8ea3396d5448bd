//! Fixed-shape feed-forward network for the layout policy.
//!
//! `LayerNorm(input) → Linear(64) → LeakyReLU → Linear(128) → LeakyReLU →
//! Linear(128) → LeakyReLU → Linear(output)`, with hand-written
//! backpropagation. Parameters live in one flat vector so a single optimizer
//! can update them.

use alloc::vec::Vec;
use core::ops::Range;

use rand::Rng as _;

use crate::math;
use crate::seed;

pub const LATENT: usize = 64;
pub const HIDDEN: usize = 128;
const LEAK: f64 = 0.01;
const LN_EPS: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
struct Dense {
    inputs: usize,
    outputs: usize,
    weights: Range<usize>,
    bias: Range<usize>,
}

impl Dense {
    fn forward(&self, params: &[f64], x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        let w = &params[self.weights.clone()];
        let b = &params[self.bias.clone()];
        for o in 0..self.outputs {
            let row = &w[o * self.inputs..(o + 1) * self.inputs];
            out.push(b[o] + row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>());
        }
    }

    /// Accumulates parameter gradients and returns the input gradient.
    fn backward(&self, params: &[f64], x: &[f64], dout: &[f64], grad: &mut [f64]) -> Vec<f64> {
        let mut dx = alloc::vec![0.0; self.inputs];
        let w = &params[self.weights.clone()];
        for (o, &g) in dout.iter().enumerate() {
            if g == 0.0 {
                continue;
            }
            grad[self.bias.start + o] += g;
            let base = self.weights.start + o * self.inputs;
            let row = &w[o * self.inputs..(o + 1) * self.inputs];
            for i in 0..self.inputs {
                grad[base + i] += g * x[i];
                dx[i] += g * row[i];
            }
        }
        dx
    }
}

fn leaky(v: &mut [f64]) {
    for x in v {
        if *x < 0.0 {
            *x *= LEAK;
        }
    }
}

fn leaky_backward(pre_activated: &[f64], d: &mut [f64]) {
    for (g, &post) in d.iter_mut().zip(pre_activated) {
        if post < 0.0 {
            *g *= LEAK;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    inputs: usize,
    outputs: usize,
    gain: Range<usize>,
    shift: Range<usize>,
    layers: [Dense; 4],
    params: Vec<f64>,
}

/// Intermediate activations kept for the backward pass.
#[derive(Debug, Clone, Default)]
pub struct Activations {
    normalized: Vec<f64>,
    ln_out: Vec<f64>,
    hidden: [Vec<f64>; 3],
    pub output: Vec<f64>,
}

impl Mlp {
    pub fn new(inputs: usize, outputs: usize, seed: u64) -> Self {
        let mut next = 0;
        let mut take = |n: usize| {
            let r = next..next + n;
            next += n;
            r
        };
        let gain = take(inputs);
        let shift = take(inputs);
        let widths = [(inputs, LATENT), (LATENT, HIDDEN), (HIDDEN, HIDDEN), (HIDDEN, outputs)];
        let layers = widths.map(|(i, o)| Dense {
            inputs: i,
            outputs: o,
            weights: take(i * o),
            bias: take(o),
        });
        let mut params = alloc::vec![0.0; next];
        params[gain.clone()].fill(1.0);
        let mut rng = seed::rng(seed);
        for (k, layer) in layers.iter().enumerate() {
            let mut bound = 1.0 / math::sqrt(layer.inputs as f64);
            // Near-zero output layer: the initial policy is almost uniform.
            if k == 3 {
                bound *= 0.01;
            }
            for w in &mut params[layer.weights.clone()] {
                *w = rng.random_range(-bound..bound);
            }
        }
        Mlp {
            inputs,
            outputs,
            gain,
            shift,
            layers,
            params,
        }
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn forward(&self, x: &[f64]) -> Activations {
        assert_eq!(x.len(), self.inputs, "observation width");
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let inv = 1.0 / math::sqrt(var + LN_EPS);
        let normalized: Vec<f64> = x.iter().map(|v| (v - mean) * inv).collect();
        let gain = &self.params[self.gain.clone()];
        let shift = &self.params[self.shift.clone()];
        let ln_out: Vec<f64> = normalized
            .iter()
            .zip(gain.iter().zip(shift))
            .map(|(z, (g, b))| g * z + b)
            .collect();

        let mut act = Activations {
            normalized,
            ln_out,
            ..Activations::default()
        };
        let mut input = act.ln_out.clone();
        for k in 0..3 {
            let mut h = Vec::with_capacity(self.layers[k].outputs);
            self.layers[k].forward(&self.params, &input, &mut h);
            leaky(&mut h);
            act.hidden[k] = h.clone();
            input = h;
        }
        self.layers[3].forward(&self.params, &input, &mut act.output);
        act
    }

    /// Adds `∂(dout · output)/∂θ` to `grad`.
    pub fn backward(&self, act: &Activations, dout: &[f64], grad: &mut [f64]) {
        let mut d = self.layers[3].backward(&self.params, &act.hidden[2], dout, grad);
        for k in (0..3).rev() {
            leaky_backward(&act.hidden[k], &mut d);
            let x = if k == 0 { &act.ln_out } else { &act.hidden[k - 1] };
            d = self.layers[k].backward(&self.params, x, &d, grad);
        }
        for (i, g) in d.iter().enumerate() {
            grad[self.gain.start + i] += g * act.normalized[i];
            grad[self.shift.start + i] += g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backward_matches_finite_differences() {
        let mut net = Mlp::new(6, 4, 3);
        // Perturb so no parameter group is trivially zero.
        let mut rng = seed::rng(9);
        for p in net.params_mut() {
            *p += rng.random_range(-0.2..0.2);
        }
        let x = [0.1, 0.9, 0.4, 0.35, 0.7, 0.2];
        let dout = [0.3, -1.2, 0.8, 0.05];
        let act = net.forward(&x);
        let mut grad = alloc::vec![0.0; net.params().len()];
        net.backward(&act, &dout, &mut grad);

        let objective = |n: &Mlp| -> f64 {
            n.forward(&x).output.iter().zip(&dout).map(|(o, d)| o * d).sum()
        };
        let h = 1e-6;
        let stride = 7;
        for i in (0..net.params().len()).step_by(stride) {
            let orig = net.params()[i];
            net.params_mut()[i] = orig + h;
            let up = objective(&net);
            net.params_mut()[i] = orig - h;
            let down = objective(&net);
            net.params_mut()[i] = orig;
            let fd = (up - down) / (2.0 * h);
            assert!(
                (fd - grad[i]).abs() <= 1e-6 * (1.0 + fd.abs()),
                "param {i}: analytic {} vs numeric {fd}",
                grad[i]
            );
        }
    }

    #[test]
    fn initial_outputs_are_small() {
        let net = Mlp::new(6, 54, 1);
        let out = net.forward(&[0.5; 6]).output;
        assert_eq!(out.len(), 54);
        assert!(out.iter().all(|o| o.abs() < 0.1));
    }
}
