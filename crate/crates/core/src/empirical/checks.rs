//! Bounds on the law of Z, all stated for the normalised process (U = 1).
//!
//! Exact laws are compared with a rounding slack only. Monte Carlo laws are
//! compared with `MC_SIGMAS` binomial standard errors, evaluated at the
//! bound, and their reports are marked statistical.

use super::{accurate_sum, supremum_law, LawMode, ProcessInstance, SupremumLaw};
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::report::VerificationReport;

pub const EXACT_TOL: f64 = 1e-12;
pub const MC_SIGMAS: f64 = 4.0;
const MGF_TOL: f64 = 1e-10;

fn require_nonnegative(law: &SupremumLaw) -> Result<()> {
    if !law.nonnegative {
        return Err(Error::precondition("the family takes negative values"));
    }
    Ok(())
}

fn check_r(r: f64) -> Result<()> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("deviation r = {r} must be finite and >= 0")));
    }
    Ok(())
}

fn tail_report(name: &str, law: &SupremumLaw, r: f64, lhs: f64, bound: f64) -> VerificationReport {
    let tol = if law.is_exact() {
        EXACT_TOL
    } else {
        MC_SIGMAS * law.standard_error(bound.min(1.0))
    };
    let mut report = VerificationReport::new(name, lhs, bound, tol).with_witness(format!("r = {r}"));
    if let Some(n) = law.samples {
        report = report.with_note(format!("statistical, {n} samples"));
    }
    if law.scale != 1.0 {
        report = report.with_note(format!("U = {}", law.scale));
    }
    report
}

/// log E(e^{λZ}) ≤ E(Z)(e^λ − 1) for a family with 0 ≤ g ≤ 1, on the exact law.
pub fn poisson_mgf_check(law: &SupremumLaw, lambdas: &[f64]) -> Result<Vec<VerificationReport>> {
    require_nonnegative(law)?;
    if !law.is_exact() {
        return Err(Error::precondition("the MGF check needs the exact law"));
    }
    lambdas
        .iter()
        .map(|&l| {
            if !(l >= 0.0) || !l.is_finite() {
                return Err(Error::domain(format!("lambda = {l} must be finite and >= 0")));
            }
            let rhs = law.mean_z * l.exp_m1();
            Ok(VerificationReport::new("poisson_mgf", law.log_mgf(l), rhs, MGF_TOL * (1.0 + rhs.abs()))
                .with_witness(format!("lambda = {l}"))
                .with_note("log scale"))
        })
        .collect()
}

fn bennett_h(u: f64) -> f64 {
    (1.0 + u) * u.ln_1p() - u
}

/// P(Z ≥ E(Z) + r) ≤ exp(−E(Z)·h(r/E(Z))), h(u) = (1+u)log(1+u) − u.
pub fn poisson_tail_check(law: &SupremumLaw, r_grid: &[f64]) -> Result<Vec<VerificationReport>> {
    require_nonnegative(law)?;
    r_grid
        .iter()
        .map(|&r| {
            check_r(r)?;
            let lhs = law.upper_tail(r);
            if law.mean_z <= 0.0 {
                return Ok(VerificationReport::new("poisson_tail", lhs, 1.0, EXACT_TOL)
                    .with_witness(format!("r = {r}"))
                    .with_note("skipped: E(Z) = 0"));
            }
            let bound = (-law.mean_z * bennett_h(r / law.mean_z)).exp();
            Ok(tail_report("poisson_tail", law, r, lhs, bound))
        })
        .collect()
}

/// P(|Z − E(Z)| ≥ r) ≤ 2 exp(−min(r/16, r²/80V)).
pub fn bernstein_tail_check(law: &SupremumLaw, r_grid: &[f64]) -> Result<Vec<VerificationReport>> {
    r_grid
        .iter()
        .map(|&r| {
            check_r(r)?;
            let quad = if law.v > 0.0 { r * r / (80.0 * law.v) } else if r > 0.0 { f64::INFINITY } else { 0.0 };
            let bound = 2.0 * (-(r / 16.0).min(quad)).exp();
            Ok(tail_report("bernstein_tail", law, r, law.two_sided_tail(r), bound))
        })
        .collect()
}

/// P(|Z − E(Z)| ≥ r) ≤ 3 exp(−(r/300) log(1 + r/V)).
pub fn talagrand_tail_check(law: &SupremumLaw, r_grid: &[f64]) -> Result<Vec<VerificationReport>> {
    r_grid
        .iter()
        .map(|&r| {
            check_r(r)?;
            let bound = if r == 0.0 {
                3.0
            } else if law.v > 0.0 {
                3.0 * (-(r / 300.0) * (r / law.v).ln_1p()).exp()
            } else {
                0.0
            };
            Ok(tail_report("talagrand_tail", law, r, law.two_sided_tail(r), bound))
        })
        .collect()
}

/// τ = √(4V/(5r)).
pub fn truncation_level(v: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) || !(v > 0.0) {
        return Err(Error::domain(format!("truncation level needs V > 0 and r > 0, got V = {v}, r = {r}")));
    }
    Ok((4.0 * v / (5.0 * r)).sqrt())
}

/// Z_τ¹ keeps the terms with |g| ≤ τ, Z_τ² sums |g| over the others.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationPair {
    pub tau: f64,
    /// Laws as sorted (value, probability) atoms.
    pub z1: Vec<(f64, f64)>,
    pub z2: Vec<(f64, f64)>,
    pub mean_z1: f64,
    pub mean_z2: f64,
    /// max over the sample space of |Z − Z_τ¹| − Z_τ²; nonpositive when the
    /// split is valid.
    pub max_excess: f64,
}

fn atoms(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (z, p) in v {
        match out.last_mut() {
            Some(l) if l.0 == z => l.1 += p,
            _ => out.push((z, p)),
        }
    }
    out
}

pub fn truncation_split(inst: &ProcessInstance, tau: f64) -> Result<TruncationPair> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::domain(format!("tau = {tau} must be finite and > 0")));
    }
    let rows = inst.enumerate(|x, p| {
        let (mut z, mut z1, mut z2) = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for g in inst.family() {
            let (mut s, mut keep, mut cut) = (0.0, 0.0, 0.0);
            for (table, &xi) in g.iter().zip(x) {
                let v = table[xi];
                s += v;
                if v.abs() <= tau {
                    keep += v;
                } else {
                    cut += v.abs();
                }
            }
            z = z.max(s);
            z1 = z1.max(keep);
            z2 = z2.max(cut);
        }
        (z, z1, z2, p)
    })?;
    let max_excess = rows
        .iter()
        .map(|r| (r.0 - r.1).abs() - r.2)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(TruncationPair {
        tau,
        mean_z1: accurate_sum(rows.iter().map(|r| r.3 * r.1)),
        mean_z2: accurate_sum(rows.iter().map(|r| r.3 * r.2)),
        z1: atoms(rows.iter().map(|r| (r.1, r.3)).collect()),
        z2: atoms(rows.iter().map(|r| (r.2, r.3)).collect()),
        max_excess,
    })
}

const SYMMETRY_TOL: f64 = 1e-12;

/// V ≤ U·E(Z) + 8 max_k Σᵢ E(g_k(Xᵢ)²) for a centred family closed under
/// negation, on the exact law.
pub fn symmetrization_v_bound(inst: &ProcessInstance) -> Result<VerificationReport> {
    let family = inst.family();
    for (k, g) in family.iter().enumerate() {
        for (i, (table, space)) in g.iter().zip(inst.spaces()).enumerate() {
            let mean: f64 = table.iter().zip(space.weights()).map(|(v, w)| v * w).sum();
            if mean.abs() > SYMMETRY_TOL {
                return Err(Error::precondition_with(
                    "family is not centred",
                    format!("E g_{k}(X_{i}) = {mean}"),
                ));
            }
        }
        let negated = family.iter().any(|h| {
            h.iter()
                .zip(g)
                .all(|(th, tg)| th.iter().zip(tg).all(|(a, b)| (a + b).abs() <= SYMMETRY_TOL))
        });
        if !negated {
            return Err(Error::precondition_with(
                "family is not closed under negation",
                format!("-g_{k} is missing"),
            ));
        }
    }
    let law = supremum_law(inst, LawMode::Exact)?;
    let second = family
        .iter()
        .map(|g| {
            g.iter()
                .zip(inst.spaces())
                .map(|(t, s)| t.iter().zip(s.weights()).map(|(v, w)| w * v * v).sum::<f64>())
                .sum::<f64>()
        })
        .fold(0.0f64, f64::max);
    let rhs = law.mean_z + 8.0 * second;
    let mut report = VerificationReport::new("symmetrization_v", law.v, rhs, EXACT_TOL * (1.0 + rhs));
    if inst.scale() != 1.0 {
        report = report.with_note(format!("U = {}", inst.scale()));
    }
    Ok(report)
}
