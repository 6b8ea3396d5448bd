//! Simulation-driven optimization of mid-air VR button layouts.
//!
//! A candidate layout places buttons on a 3×6 grid in front of a seated user.
//! A deterministic reaching model walks a right arm through the button
//! sequence, a three-compartment fatigue model turns the resulting joint
//! loads into an instantaneous effort cost, and the accumulated effort is the
//! objective that the layout optimizers minimize.
//!
//! The crate is `no_std` (with `alloc`). File formats, the command-line
//! runner and thread-pool evaluation live in the `gorilla` crate.
#![no_std]
// `!(x > 0.0)` is the idiom used throughout to reject NaN along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod arm;
pub mod bayes;
pub mod compare;
pub mod error;
pub mod fatigue;
pub mod gp;
mod math;
pub mod mlp;
pub mod oracle;
pub mod policy;
pub mod rewards;
pub mod runner;
pub mod seed;
pub mod sobol;
pub mod task;
pub mod train;

pub use error::{Error, Result};
