//! Suprema Z = max_k Σᵢ g_k(Xᵢ) of finite empirical processes: exact laws by
//! enumeration, Monte Carlo laws at scale, and the Poisson, Bernstein-type
//! and final tail bounds.

mod checks;
mod io;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::{FiniteSpace, Measure};
use crate::rng::{stream, LabRng};

pub use checks::{
    bernstein_tail_check, poisson_mgf_check, poisson_tail_check, symmetrization_v_bound,
    talagrand_tail_check, truncation_level, truncation_split, TruncationPair, EXACT_TOL,
    MC_SIGMAS,
};
pub use io::{parse_instance, write_instance};

/// Largest product space enumerated in exact mode.
pub const MAX_EXACT_POINTS: usize = 1 << 20;
/// Monte Carlo draws per random stream.
pub const MC_CHUNK: usize = 1 << 14;

const ENUM_CHUNK: usize = 1 << 12;

/// Laws of X₁, …, X_n and a finite family g_1, …, g_N, with `g_k` given as
/// a table per coordinate space. Values are normalised so that max |g| = 1;
/// `scale` is the original sup-norm U.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessInstance {
    spaces: Vec<FiniteSpace>,
    // family[k][i][s] = g_k(s) on space i, normalised
    family: Vec<Vec<Vec<f64>>>,
    scale: f64,
}

impl ProcessInstance {
    pub fn new(spaces: Vec<FiniteSpace>, family: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        if spaces.is_empty() {
            return Err(Error::domain("need at least one sample space"));
        }
        if family.is_empty() {
            return Err(Error::domain("need at least one function in the family"));
        }
        for (k, g) in family.iter().enumerate() {
            if g.len() != spaces.len() {
                return Err(Error::Mismatch(format!(
                    "g_{k} has {} tables for {} spaces",
                    g.len(),
                    spaces.len()
                )));
            }
            for (i, (table, space)) in g.iter().zip(&spaces).enumerate() {
                if table.len() != space.len() {
                    return Err(Error::Mismatch(format!(
                        "g_{k} on space {i} has {} values, space has {} points",
                        table.len(),
                        space.len()
                    )));
                }
                if table.iter().any(|v| !v.is_finite()) {
                    return Err(Error::domain(format!("g_{k} on space {i} is not finite")));
                }
            }
        }
        let sup = family.iter().flatten().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        let scale = if sup > 0.0 { sup } else { 1.0 };
        let family = family
            .into_iter()
            .map(|g| g.into_iter().map(|t| t.into_iter().map(|v| v / scale).collect()).collect())
            .collect();
        Ok(Self {
            spaces,
            family,
            scale,
        })
    }

    /// One function, the same table on every coordinate: g(s) = values[s].
    pub fn iid(space: FiniteSpace, n: usize, tables: &[Vec<f64>]) -> Result<Self> {
        let family = tables.iter().map(|t| vec![t.clone(); n]).collect();
        Self::new(vec![space; n], family)
    }

    pub fn spaces(&self) -> &[FiniteSpace] {
        &self.spaces
    }

    /// Normalised tables, `family()[k][i][s]`.
    pub fn family(&self) -> &[Vec<Vec<f64>>] {
        &self.family
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn n(&self) -> usize {
        self.spaces.len()
    }

    pub fn family_size(&self) -> usize {
        self.family.len()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.family.iter().flatten().flatten().all(|&v| v >= 0.0)
    }

    /// Π |Ωᵢ|, saturating.
    pub fn points(&self) -> u128 {
        self.spaces
            .iter()
            .fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
    }

    /// Z, W = max_k Σ g_k², for one configuration.
    pub(crate) fn evaluate(&self, x: &[usize]) -> (f64, f64) {
        let mut z = f64::NEG_INFINITY;
        let mut w = f64::NEG_INFINITY;
        for g in &self.family {
            let (mut s, mut q) = (0.0, 0.0);
            for (table, &xi) in g.iter().zip(x) {
                let v = table[xi];
                s += v;
                q += v * v;
            }
            z = z.max(s);
            w = w.max(q);
        }
        (z, w)
    }

    /// Runs `visit(x, probability)` over every configuration in a fixed
    /// chunked order, reducing chunk results in index order.
    pub(crate) fn enumerate<T, F>(&self, visit: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&[usize], f64) -> T + Sync,
    {
        let total = self.points();
        if total > MAX_EXACT_POINTS as u128 {
            return Err(Error::Size {
                what: "exact enumeration points",
                requested: total,
                limit: MAX_EXACT_POINTS as u128,
            });
        }
        let total = total as usize;
        let sizes: Vec<usize> = self.spaces.iter().map(|s| s.len()).collect();
        let chunks = total.div_ceil(ENUM_CHUNK);
        let parts: Vec<Vec<T>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * ENUM_CHUNK;
                let end = (start + ENUM_CHUNK).min(total);
                let mut x = vec![0usize; sizes.len()];
                let mut rest = start;
                for i in (0..sizes.len()).rev() {
                    x[i] = rest % sizes[i];
                    rest /= sizes[i];
                }
                let mut out = Vec::with_capacity(end - start);
                for _ in start..end {
                    let p: f64 = x
                        .iter()
                        .zip(&self.spaces)
                        .map(|(&xi, s)| s.weights()[xi])
                        .product();
                    out.push(visit(&x, p));
                    for i in (0..sizes.len()).rev() {
                        x[i] += 1;
                        if x[i] < sizes[i] {
                            break;
                        }
                        x[i] = 0;
                    }
                }
                out
            })
            .collect();
        Ok(parts.into_iter().flatten().collect())
    }

    fn sample_into(&self, rng: &mut LabRng, cumulative: &[Vec<f64>], x: &mut [usize]) {
        for (xi, cum) in x.iter_mut().zip(cumulative) {
            let u: f64 = rng.random();
            *xi = cum.partition_point(|&c| c <= u).min(cum.len() - 1);
        }
    }
}

/// How to obtain the law of Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawMode {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

/// Law of Z (atoms sorted by value) with E(Z) and V = E(W).
#[derive(Debug, Clone, PartialEq)]
pub struct SupremumLaw {
    pub atoms: Vec<(f64, f64)>,
    pub mean_z: f64,
    pub v: f64,
    /// Standard deviations of Z and W (used for Monte Carlo standard errors).
    pub sd_z: f64,
    pub sd_w: f64,
    /// `None` for the exact law.
    pub samples: Option<usize>,
    pub nonnegative: bool,
    pub scale: f64,
}

/// Slack applied when comparing a deviation against a threshold, so that
/// exact ties count as reaching it.
const TIE_TOL: f64 = 1e-9;

impl SupremumLaw {
    pub fn is_exact(&self) -> bool {
        self.samples.is_none()
    }

    /// P(|Z − E(Z)| ≥ r).
    pub fn two_sided_tail(&self, r: f64) -> f64 {
        let cut = r - TIE_TOL * (1.0 + r.abs());
        self.atoms
            .iter()
            .filter(|(z, _)| (z - self.mean_z).abs() >= cut)
            .map(|(_, p)| p)
            .sum::<f64>()
            .min(1.0)
    }

    /// P(Z ≥ E(Z) + r).
    pub fn upper_tail(&self, r: f64) -> f64 {
        let cut = self.mean_z + r - TIE_TOL * (1.0 + (self.mean_z + r).abs());
        self.atoms
            .iter()
            .filter(|(z, _)| *z >= cut)
            .map(|(_, p)| p)
            .sum::<f64>()
            .min(1.0)
    }

    /// log E(e^{λZ}).
    pub fn log_mgf(&self, lambda: f64) -> f64 {
        let top = self
            .atoms
            .iter()
            .map(|(z, _)| lambda * z)
            .fold(f64::NEG_INFINITY, f64::max);
        let s: f64 = self.atoms.iter().map(|(z, p)| p * (lambda * z - top).exp()).sum();
        top + s.ln()
    }

    /// Binomial standard error of a probability estimate at level `p`; zero
    /// for the exact law.
    pub fn standard_error(&self, p: f64) -> f64 {
        match self.samples {
            None => 0.0,
            Some(n) => (p.clamp(0.0, 1.0) * (1.0 - p.clamp(0.0, 1.0)) / n as f64).sqrt(),
        }
    }

    pub fn statistics(&self, r_grid: &[f64]) -> SupStatistics {
        SupStatistics {
            mean_z: self.mean_z,
            v: self.v,
            tail: r_grid.iter().map(|&r| (r, self.two_sided_tail(r))).collect(),
        }
    }
}

/// E(Z), V and P(|Z − E(Z)| ≥ r) on a grid of r.
#[derive(Debug, Clone, PartialEq)]
pub struct SupStatistics {
    pub mean_z: f64,
    pub v: f64,
    pub tail: Vec<(f64, f64)>,
}

/// Neumaier-compensated sum.
pub(crate) fn accurate_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for x in values {
        let t = s + x;
        c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
        s = t;
    }
    s + c
}

fn merge_atoms(mut atoms: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
    for (z, p) in atoms {
        match out.last_mut() {
            Some(last) if last.0 == z => last.1 += p,
            _ => out.push((z, p)),
        }
    }
    out
}

pub fn supremum_law(inst: &ProcessInstance, mode: LawMode) -> Result<SupremumLaw> {
    let (atoms, mean_z, v, sd_z, sd_w, samples) = match mode {
        LawMode::Exact => {
            let rows = inst.enumerate(|x, p| {
                let (z, w) = inst.evaluate(x);
                (z, w, p)
            })?;
            let mean_z = accurate_sum(rows.iter().map(|r| r.2 * r.0));
            let v = accurate_sum(rows.iter().map(|r| r.2 * r.1));
            let var_z = accurate_sum(rows.iter().map(|r| r.2 * (r.0 - mean_z).powi(2)));
            let var_w = accurate_sum(rows.iter().map(|r| r.2 * (r.1 - v).powi(2)));
            let atoms = merge_atoms(rows.into_iter().map(|r| (r.0, r.2)).collect());
            (atoms, mean_z, v, var_z.sqrt(), var_w.sqrt(), None)
        }
        LawMode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::invalid("Monte Carlo needs at least one sample"));
            }
            let cumulative: Vec<Vec<f64>> = inst
                .spaces
                .iter()
                .map(|s| {
                    s.weights()
                        .iter()
                        .scan(0.0, |acc, w| {
                            *acc += w;
                            Some(*acc)
                        })
                        .collect()
                })
                .collect();
            let chunks = samples.div_ceil(MC_CHUNK);
            let draws: Vec<Vec<(f64, f64)>> = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut rng = stream(seed, c as u64);
                    let count = MC_CHUNK.min(samples - c * MC_CHUNK);
                    let mut x = vec![0usize; inst.n()];
                    (0..count)
                        .map(|_| {
                            inst.sample_into(&mut rng, &cumulative, &mut x);
                            inst.evaluate(&x)
                        })
                        .collect()
                })
                .collect();
            let draws: Vec<(f64, f64)> = draws.into_iter().flatten().collect();
            let n = draws.len() as f64;
            let mean_z = draws.iter().map(|d| d.0).sum::<f64>() / n;
            let v = draws.iter().map(|d| d.1).sum::<f64>() / n;
            let var_z = draws.iter().map(|d| (d.0 - mean_z).powi(2)).sum::<f64>() / n;
            let var_w = draws.iter().map(|d| (d.1 - v).powi(2)).sum::<f64>() / n;
            let atoms = merge_atoms(draws.into_iter().map(|d| (d.0, 1.0 / n)).collect());
            (atoms, mean_z, v, var_z.sqrt(), var_w.sqrt(), Some(samples))
        }
    };
    Ok(SupremumLaw {
        atoms,
        mean_z,
        v,
        sd_z,
        sd_w,
        samples,
        nonnegative: inst.is_nonnegative(),
        scale: inst.scale,
    })
}

/// Shape of a seeded random family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// Values in [0, 1].
    Nonnegative,
    /// Values in [−1, 1].
    Signed,
    /// Centred under each law and closed under negation.
    Symmetric,
}

/// Seeded instance with `n` spaces of 2..=`max_support` points (shrunk so the
/// product stays within `max_points`) and `family_size` functions.
pub fn random_instance(
    rng: &mut LabRng,
    n: usize,
    family_size: usize,
    max_support: usize,
    max_points: usize,
    kind: FamilyKind,
) -> Result<ProcessInstance> {
    if n == 0 || family_size == 0 || max_support < 2 {
        return Err(Error::invalid("need n >= 1, a nonempty family and supports of >= 2 points"));
    }
    let mut sizes: Vec<usize> = (0..n).map(|_| rng.random_range(2..=max_support)).collect();
    while sizes.iter().map(|&s| s as u128).product::<u128>() > max_points as u128 {
        let i = (0..n).max_by_key(|&i| (sizes[i], i)).unwrap();
        if sizes[i] == 2 {
            return Err(Error::invalid(format!("2^{n} exceeds the point budget {max_points}")));
        }
        sizes[i] -= 1;
    }
    let spaces = sizes
        .iter()
        .map(|&s| FiniteSpace::from_weights(normalized((0..s).map(|_| rng.random_range(0.05..1.0)).collect())))
        .collect::<Result<Vec<_>>>()?;
    let mut family = Vec::with_capacity(family_size);
    match kind {
        FamilyKind::Nonnegative | FamilyKind::Signed => {
            let lo = if kind == FamilyKind::Signed { -1.0 } else { 0.0 };
            for _ in 0..family_size {
                let g = sizes
                    .iter()
                    .map(|&s| {
                        (0..s)
                            .map(|_| match rng.random_range(0..5) {
                                0 => lo,
                                1 => 1.0,
                                _ => rng.random_range(lo..=1.0),
                            })
                            .collect()
                    })
                    .collect();
                family.push(g);
            }
        }
        FamilyKind::Symmetric => {
            for _ in 0..family_size.div_ceil(2) {
                let g: Vec<Vec<f64>> = spaces
                    .iter()
                    .map(|space| {
                        let raw: Vec<f64> = (0..space.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
                        let mean: f64 = raw.iter().zip(space.weights()).map(|(v, w)| v * w).sum();
                        let centred: Vec<f64> = raw.iter().map(|v| v - mean).collect();
                        let m = centred.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                        let scaled: Vec<f64> = centred.iter().map(|v| if m > 0.0 { v / m } else { 0.0 }).collect();
                        // rescaling amplifies the rounding left in the mean; remove it again
                        let drift: f64 = scaled.iter().zip(space.weights()).map(|(v, w)| v * w).sum();
                        scaled.iter().map(|v| v - drift).collect()
                    })
                    .collect();
                let neg = g.iter().map(|t| t.iter().map(|v| -v).collect()).collect();
                family.push(g);
                family.push(neg);
            }
        }
    }
    ProcessInstance::new(spaces, family)
}

fn normalized(w: Vec<f64>) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}
