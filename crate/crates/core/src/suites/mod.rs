//! Seeded verification sweeps, one per module.
//!
//! Instance `k` of a suite draws from `stream(derive_seed(seed, suite), k)`,
//! so a sweep is reproducible regardless of how rayon schedules it. Records
//! are returned sorted by instance id.

mod convex;
mod cube;
mod empirical;
mod entropy;
mod gauss;
mod l1l2;
mod transport;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::rng::{derive_seed, stream, LabRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Entropy,
    Cube,
    Gauss,
    Convex,
    L1l2,
    Transport,
    Empirical,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Entropy,
        Suite::Cube,
        Suite::Gauss,
        Suite::Convex,
        Suite::L1l2,
        Suite::Transport,
        Suite::Empirical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Entropy => "entropy",
            Suite::Cube => "cube",
            Suite::Gauss => "gauss",
            Suite::Convex => "convex",
            Suite::L1l2 => "l1l2",
            Suite::Transport => "transport",
            Suite::Empirical => "empirical",
        }
    }

    /// Number of randomized instances in the default sweep.
    pub fn default_instances(self) -> usize {
        match self {
            Suite::Entropy | Suite::Cube | Suite::L1l2 => 10_000,
            Suite::Gauss | Suite::Convex | Suite::Transport | Suite::Empirical => 1_000,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown suite '{s}'")))
    }
}

/// Parameters of one sweep. `None` means the suite's default range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Fixes the dimension-like parameter of the suite (see [`run_suite`]).
    pub n: Option<usize>,
    /// Fixes the Bernoulli parameter where the suite has one.
    pub p: Option<f64>,
    /// Number of randomized instances.
    pub instances: Option<usize>,
    /// Monte Carlo sample count.
    pub samples: Option<usize>,
    /// Replaces every report tolerance.
    pub tol: Option<f64>,
}

impl SuiteConfig {
    pub fn seeded(seed: u64) -> Self {
        Self { seed, n: None, p: None, instances: None, samples: None, tol: None }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.tol {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::invalid(format!("tolerance {t} must be positive")));
            }
        }
        if let Some(p) = self.p {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::invalid(format!("p = {p} must lie in (0, 1)")));
            }
        }
        if self.instances == Some(0) {
            return Err(Error::invalid("instance count must be positive"));
        }
        if self.samples == Some(0) {
            return Err(Error::invalid("sample count must be positive"));
        }
        Ok(())
    }

    fn count(&self, suite: Suite) -> usize {
        self.instances.unwrap_or_else(|| suite.default_instances())
    }

    fn rng(&self, suite: Suite, id: usize) -> LabRng {
        stream(derive_seed(self.seed, suite.name()), id as u64)
    }

    fn n_within(&self, suite: Suite, lo: usize, hi: usize) -> Result<Option<usize>> {
        match self.n {
            Some(n) if n < lo || n > hi => Err(Error::invalid(format!(
                "suite {suite} takes n in {lo}..={hi}, got {n}"
            ))),
            other => Ok(other),
        }
    }

    fn refuse_p(&self, suite: Suite) -> Result<()> {
        match self.p {
            Some(_) => Err(Error::invalid(format!("suite {suite} has no p parameter"))),
            None => Ok(()),
        }
    }
}

/// Reports produced by one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub id: usize,
    pub label: String,
    pub reports: Vec<VerificationReport>,
}

impl InstanceRecord {
    fn new(id: usize, label: impl Into<String>, reports: Vec<VerificationReport>) -> Self {
        Self { id, label: label.into(), reports }
    }
}

/// A finished sweep. `probes` are deliberately out-of-hypothesis runs that
/// are expected to fail at least once; they do not count as violations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRun {
    pub suite: Suite,
    pub instances: Vec<InstanceRecord>,
    pub probes: Vec<InstanceRecord>,
}

impl SuiteRun {
    pub fn reports(&self) -> impl Iterator<Item = &VerificationReport> {
        self.instances.iter().flat_map(|r| &r.reports)
    }

    pub fn report_count(&self) -> usize {
        self.instances.iter().map(|r| r.reports.len()).sum()
    }

    pub fn failures(&self) -> usize {
        self.reports().filter(|r| !r.pass).count()
    }

    pub fn probe_failures(&self) -> usize {
        self.probes.iter().flat_map(|r| &r.reports).filter(|r| !r.pass).count()
    }

    /// Smallest `margin + tolerance`; negative exactly when something failed.
    pub fn min_slack(&self) -> f64 {
        self.reports().map(|r| r.margin + r.tolerance).fold(f64::INFINITY, f64::min)
    }

    pub fn min_margin(&self) -> f64 {
        self.reports().map(|r| r.margin).fold(f64::INFINITY, f64::min)
    }

    /// Reports whose name starts with `prefix`.
    pub fn named<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a VerificationReport> {
        self.reports().filter(move |r| r.name.starts_with(prefix))
    }
}

/// Runs one suite.
///
/// | suite | `n` | `p` |
/// |---|---|---|
/// | entropy | number of factors, 1..=10 | two-point factors `(1-p, p)` |
/// | cube | cube dimension, 1..=12 | bias |
/// | gauss | quadrature order, 16..=256 | refused |
/// | convex | cube dimension, 1..=10 | bias of the base |
/// | l1l2 | cube dimension, 1..=10 | bias |
/// | transport | largest support, 1..=256 | refused |
/// | empirical | number of coordinates, 1..=12 | two-point coordinates |
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteRun> {
    cfg.validate()?;
    let mut run = match suite {
        Suite::Entropy => entropy::run(cfg)?,
        Suite::Cube => cube::run(cfg)?,
        Suite::Gauss => gauss::run(cfg)?,
        Suite::Convex => convex::run(cfg)?,
        Suite::L1l2 => l1l2::run(cfg)?,
        Suite::Transport => transport::run(cfg)?,
        Suite::Empirical => empirical::run(cfg)?,
    };
    if let Some(t) = cfg.tol {
        for rec in &mut run.instances {
            for r in &mut rec.reports {
                r.retolerate(t);
            }
        }
    }
    Ok(run)
}

fn sweep<F>(count: usize, f: F) -> Result<Vec<InstanceRecord>>
where
    F: Fn(usize) -> Result<InstanceRecord> + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

/// A report that `|value| <= tol`.
fn agreement(name: &str, value: f64, tol: f64) -> VerificationReport {
    VerificationReport::new(name, value.abs(), 0.0, tol)
}

const P_GRID: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
