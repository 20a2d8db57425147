//! Plain-text process instances.
//!
//! ```text
//! # one 'space' line per X_i, listing its point weights
//! space 0.5 0.5
//! space 0.2 0.3 0.5
//! # one 'g' line per function: its values on space 0, then space 1, ...
//! g 1 -1 0 0.5 1
//! g 0 0 1 1 1
//! scale 2            (optional: sup-norm of the unnormalised family)
//! ```
//!
//! Each `g` row has Σ|Ωᵢ| entries. Values are normalised on load; `scale`
//! multiplies the stored sup-norm.

use std::fmt::Write as _;

use super::ProcessInstance;
use crate::error::{Error, Result};
use crate::measure::{FiniteSpace, Measure};

fn numbers(line: usize, fields: &[&str]) -> Result<Vec<f64>> {
    fields
        .iter()
        .map(|f| f.parse().map_err(|_| Error::parse(line, format!("cannot parse '{f}'"))))
        .collect()
}

pub fn parse_instance(text: &str) -> Result<ProcessInstance> {
    let mut spaces = Vec::new();
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut scale: Option<f64> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        match fields[0] {
            "space" => {
                if !rows.is_empty() {
                    return Err(Error::parse(line, "'space' lines must precede 'g' lines"));
                }
                let w = numbers(line, &fields[1..])?;
                spaces.push(FiniteSpace::from_weights(w).map_err(|e| Error::parse(line, e.to_string()))?);
            }
            "g" => rows.push((line, numbers(line, &fields[1..])?)),
            "scale" => {
                let s = numbers(line, &fields[1..])?;
                if s.len() != 1 || !(s[0] > 0.0) || !s[0].is_finite() {
                    return Err(Error::parse(line, "'scale' takes one positive value"));
                }
                scale = Some(s[0]);
            }
            other => return Err(Error::parse(line, format!("unknown keyword '{other}'"))),
        }
    }
    if spaces.is_empty() {
        return Err(Error::parse(0, "no 'space' lines"));
    }
    if rows.is_empty() {
        return Err(Error::parse(0, "no 'g' lines"));
    }
    let width: usize = spaces.iter().map(|s| s.len()).sum();
    let mut family = Vec::with_capacity(rows.len());
    for (line, row) in rows {
        if row.len() != width {
            return Err(Error::parse(line, format!("expected {width} values, found {}", row.len())));
        }
        let mut tables = Vec::with_capacity(spaces.len());
        let mut at = 0;
        for s in &spaces {
            tables.push(row[at..at + s.len()].to_vec());
            at += s.len();
        }
        family.push(tables);
    }
    let mut inst = ProcessInstance::new(spaces, family).map_err(|e| Error::parse(0, e.to_string()))?;
    if let Some(s) = scale {
        inst.scale *= s;
    }
    Ok(inst)
}

/// Writes normalised values with a `scale` line, so parsing restores the
/// same instance.
pub fn write_instance(inst: &ProcessInstance) -> String {
    let mut out = String::new();
    for s in inst.spaces() {
        out.push_str("space");
        for w in s.weights() {
            let _ = write!(out, " {w}");
        }
        out.push('\n');
    }
    for g in inst.family() {
        out.push('g');
        for v in g.iter().flatten() {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "scale {}", inst.scale());
    out
}
