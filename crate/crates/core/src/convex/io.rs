//! Plain-text pattern-set files.
//!
//! ```text
//! # comments and blank lines are ignored
//! sizes 2 2 3
//! weights 2 0.2 0.3 0.5     (optional: factor index, then its weights)
//! member 0 1 2               (one line per point of A, as coordinates)
//! ```
//!
//! Factors without a `weights` line are uniform.

use std::fmt::Write as _;

use super::PatternSet;
use crate::error::{Error, Result};
use crate::measure::{FiniteSpace, Measure, ProductSpace};

fn numbers<T: std::str::FromStr>(line: usize, fields: &[&str]) -> Result<Vec<T>> {
    fields
        .iter()
        .map(|f| {
            f.parse()
                .map_err(|_| Error::parse(line, format!("cannot parse '{f}'")))
        })
        .collect()
}

pub fn parse_pattern_set(text: &str) -> Result<PatternSet> {
    let mut sizes: Option<Vec<usize>> = None;
    let mut weights: Vec<(usize, usize, Vec<f64>)> = Vec::new();
    let mut members: Vec<(usize, Vec<usize>)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        match fields[0] {
            "sizes" => {
                if sizes.is_some() {
                    return Err(Error::parse(line, "duplicate 'sizes' line"));
                }
                sizes = Some(numbers(line, &fields[1..])?);
            }
            "weights" => {
                if fields.len() < 3 {
                    return Err(Error::parse(line, "'weights' needs a factor index and weights"));
                }
                let idx: usize = numbers(line, &fields[1..2])?[0];
                weights.push((line, idx, numbers(line, &fields[2..])?));
            }
            "member" => members.push((line, numbers(line, &fields[1..])?)),
            other => return Err(Error::parse(line, format!("unknown keyword '{other}'"))),
        }
    }
    let sizes = sizes.ok_or_else(|| Error::parse(0, "missing 'sizes' line"))?;
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::parse(0, "factor sizes must be positive"));
    }
    let mut factors: Vec<Option<FiniteSpace>> = vec![None; sizes.len()];
    for (line, idx, w) in weights {
        if idx >= sizes.len() || w.len() != sizes[idx] {
            return Err(Error::parse(line, "weights do not match the factor"));
        }
        if factors[idx].is_some() {
            return Err(Error::parse(line, "duplicate weights for factor"));
        }
        factors[idx] = Some(FiniteSpace::from_weights(w).map_err(|e| Error::parse(line, e.to_string()))?);
    }
    let factors = factors
        .into_iter()
        .zip(&sizes)
        .map(|(f, &s)| match f {
            Some(f) => Ok(f),
            None => FiniteSpace::uniform(s),
        })
        .collect::<Result<Vec<_>>>()?;
    let base = ProductSpace::new(factors)?;
    let mut idx = Vec::with_capacity(members.len());
    for (line, coords) in members {
        idx.push(base.index_of(&coords).map_err(|e| Error::parse(line, e.to_string()))?);
    }
    PatternSet::new(base, idx)
}

pub fn write_pattern_set(a: &PatternSet) -> String {
    let base = a.base();
    let mut out = String::new();
    let sizes: Vec<String> = base.factor_sizes().iter().map(|s| s.to_string()).collect();
    writeln!(out, "sizes {}", sizes.join(" ")).unwrap();
    for (i, f) in base.factors().iter().enumerate() {
        let w: Vec<String> = f.weights().iter().map(|w| format!("{w:?}")).collect();
        writeln!(out, "weights {i} {}", w.join(" ")).unwrap();
    }
    for &m in a.members() {
        let c: Vec<String> = base.coords(m).iter().map(|c| c.to_string()).collect();
        writeln!(out, "member {}", c.join(" ")).unwrap();
    }
    out
}
