//! Sobol low-discrepancy sequence (Joe–Kuo direction numbers) with an
//! optional seeded digital shift.

use alloc::vec::Vec;

use crate::error::{domain_err, Result};
use crate::seed;

const BITS: usize = 32;

/// `(s, a, m_1..m_s)` for dimensions 2.. (new-joe-kuo-6.21201).
const PRIMITIVES: &[(u32, u32, &[u32])] = &[
    (1, 0, &[1]),
    (2, 1, &[1, 3]),
    (3, 1, &[1, 3, 1]),
    (3, 2, &[1, 1, 1]),
    (4, 1, &[1, 1, 3, 3]),
    (4, 4, &[1, 3, 5, 13]),
    (5, 2, &[1, 1, 5, 5, 17]),
    (5, 4, &[1, 1, 5, 5, 5]),
    (5, 7, &[1, 1, 7, 11, 19]),
    (5, 11, &[1, 1, 5, 1, 1]),
];

pub const MAX_DIMS: usize = PRIMITIVES.len() + 1;

#[derive(Debug, Clone)]
pub struct Sobol {
    directions: Vec<[u32; BITS]>,
    shift: Vec<u32>,
    state: Vec<u32>,
    index: u64,
}

fn directions(dim: usize) -> [u32; BITS] {
    let mut v = [0u32; BITS];
    if dim == 0 {
        for (k, d) in v.iter_mut().enumerate() {
            *d = 1 << (31 - k);
        }
        return v;
    }
    let (s, a, m) = PRIMITIVES[dim - 1];
    let s = s as usize;
    for i in 0..s {
        v[i] = m[i] << (31 - i);
    }
    for i in s..BITS {
        let mut x = v[i - s] ^ (v[i - s] >> s);
        for k in 1..s {
            if (a >> (s - 1 - k)) & 1 == 1 {
                x ^= v[i - k];
            }
        }
        v[i] = x;
    }
    v
}

impl Sobol {
    /// Unscrambled sequence starting at the origin.
    pub fn new(dims: usize) -> Result<Self> {
        Self::with_shift(dims, None)
    }

    /// Sequence XOR-shifted by a random vector drawn from `seed`.
    pub fn shifted(dims: usize, seed: u64) -> Result<Self> {
        Self::with_shift(dims, Some(seed))
    }

    fn with_shift(dims: usize, seed: Option<u64>) -> Result<Self> {
        if dims == 0 || dims > MAX_DIMS {
            return Err(domain_err!("Sobol dimension {dims} outside 1..={MAX_DIMS}"));
        }
        let shift = (0..dims)
            .map(|d| seed.map_or(0, |s| seed::derive(s, 0x50B0, d as u64) as u32))
            .collect();
        Ok(Sobol {
            directions: (0..dims).map(directions).collect(),
            shift,
            state: alloc::vec![0; dims],
            index: 0,
        })
    }

    pub fn dims(&self) -> usize {
        self.directions.len()
    }

    /// Next point in `[0, 1)^dims`.
    pub fn next_point(&mut self) -> Vec<f64> {
        if self.index > 0 {
            let c = (self.index - 1).trailing_ones() as usize;
            for (x, v) in self.state.iter_mut().zip(&self.directions) {
                *x ^= v[c.min(BITS - 1)];
            }
        }
        self.index += 1;
        self.state
            .iter()
            .zip(&self.shift)
            .map(|(&x, &s)| (x ^ s) as f64 / 4_294_967_296.0)
            .collect()
    }
}

impl Iterator for Sobol {
    type Item = Vec<f64>;
    fn next(&mut self) -> Option<Vec<f64>> {
        Some(self.next_point())
    }
}
