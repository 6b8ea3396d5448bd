//! Plain-text policy files.
//!
//! ```text
//! # gorilla layout policy
//! format 1
//! parameterization table
//! heads 3
//! cells 18
//! observation 0.5 0.5 ...
//! head 0 <18 logits>
//! head 1 <18 logits>
//! ```
//!
//! A network policy replaces the `head` lines with `inputs N` and one
//! `params` line holding the flat parameter vector. Numbers use the shortest
//! representation that reads back to the same `f64`.

use std::fmt::Write as _;
use std::path::Path;

use gorilla_core::policy::{Observation, Parameterization, Policy};
use gorilla_core::task::CELLS;

use crate::error::{CliError, Result};

const FORMAT: u32 = 1;

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(" ")
}

pub fn render(policy: &Policy, obs: &Observation) -> String {
    let mut out = String::new();
    let kind = match policy.parameterization() {
        Parameterization::Table => "table",
        Parameterization::Network => "network",
    };
    let _ = writeln!(out, "# gorilla layout policy");
    let _ = writeln!(out, "format {FORMAT}");
    let _ = writeln!(out, "parameterization {kind}");
    let _ = writeln!(out, "heads {}", policy.heads());
    let _ = writeln!(out, "cells {CELLS}");
    let _ = writeln!(out, "observation {}", join(&obs.to_vec()));
    if let Some(f) = &obs.frequencies {
        let _ = writeln!(out, "frequencies {}", f.len());
    }
    match policy.input_width() {
        None => {
            for (h, logits) in policy.params().chunks(CELLS).enumerate() {
                let _ = writeln!(out, "head {h} {}", join(logits));
            }
        }
        Some(inputs) => {
            let _ = writeln!(out, "inputs {inputs}");
            let _ = writeln!(out, "params {}", join(policy.params()));
        }
    }
    out
}

/// A policy read back from its file, with the observation it was saved with.
pub struct Saved {
    pub policy: Policy,
    pub observation: Observation,
}

pub fn parse(text: &str, path: &Path) -> Result<Saved> {
    let bad = |message: String| CliError::Format {
        path: path.to_path_buf(),
        message,
    };
    let numbers = |s: &str| -> Result<Vec<f64>> {
        s.split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|e| bad(format!("bad number {t:?}: {e}"))))
            .collect()
    };
    let mut kind = None;
    let mut heads = None;
    let mut inputs = None;
    let mut obs = None;
    let mut freq_len = 0usize;
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut params = None;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        match key {
            "format" => {
                if rest.trim() != FORMAT.to_string() {
                    return Err(bad(format!("unsupported format {rest}")));
                }
            }
            "parameterization" => kind = Some(rest.trim().to_string()),
            "heads" => heads = Some(rest.trim().parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "cells" => {
                if rest.trim() != CELLS.to_string() {
                    return Err(bad(format!("expected {CELLS} cells, found {rest}")));
                }
            }
            "inputs" => inputs = Some(rest.trim().parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "observation" => obs = Some(numbers(rest)?),
            "frequencies" => freq_len = rest.trim().parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
            "head" => {
                let (idx, logits) = rest.split_once(' ').ok_or_else(|| bad("empty head line".into()))?;
                let idx = idx.parse::<usize>().map_err(|e| bad(e.to_string()))?;
                rows.push((idx, numbers(logits)?));
            }
            "params" => params = Some(numbers(rest)?),
            other => return Err(bad(format!("unknown key {other:?}"))),
        }
    }
    let heads = heads.ok_or_else(|| bad("missing heads".into()))?;
    let obs = obs.ok_or_else(|| bad("missing observation".into()))?;
    let coords_len = obs
        .len()
        .checked_sub(freq_len)
        .filter(|n| n % 2 == 0)
        .ok_or_else(|| bad("observation width does not match".into()))?;
    let observation = Observation {
        coords: obs[..coords_len].chunks(2).map(|c| (c[0], c[1])).collect(),
        frequencies: (freq_len > 0).then(|| obs[coords_len..].to_vec()),
    };
    let policy = match kind.as_deref() {
        Some("table") => {
            rows.sort_by_key(|r| r.0);
            if rows.iter().enumerate().any(|(i, r)| r.0 != i) {
                return Err(bad("head lines must be numbered 0..heads".into()));
            }
            let logits = rows.into_iter().flat_map(|r| r.1).collect();
            Policy::from_logits(heads, logits)?
        }
        Some("network") => {
            let inputs = inputs.ok_or_else(|| bad("missing inputs".into()))?;
            let params = params.ok_or_else(|| bad("missing params".into()))?;
            Policy::network_from_params(heads, inputs, params)?
        }
        other => return Err(bad(format!("unknown parameterization {other:?}"))),
    };
    Ok(Saved { policy, observation })
}

pub fn read(path: &Path) -> Result<Saved> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse(&text, path)
}
