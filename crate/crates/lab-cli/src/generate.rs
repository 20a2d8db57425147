use conclab::convex::{write_pattern_set, PatternSet};
use conclab::empirical::{random_instance, write_instance, FamilyKind};
use conclab::measure::{FiniteSpace, Measure, ProductSpace};
use conclab::rng::{derive_seed, stream};
use conclab::transport::{write_measure, DiscreteMeasure, MAX_SUPPORT};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Largest cube dimension for generated pattern sets.
pub const MAX_PATTERN_DIMENSION: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    /// A subset of {0,1}^n, for the convex-distance parser.
    #[value(name = "pattern_set")]
    PatternSet,
    /// A discrete measure on the line or in low dimension.
    Measure,
    /// A family of functions on a product space, for the empirical parser.
    Process,
}

impl InstanceKind {
    fn label(self) -> &'static str {
        match self {
            InstanceKind::PatternSet => "pattern_set",
            InstanceKind::Measure => "measure",
            InstanceKind::Process => "process",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerateParams {
    /// Cube dimension, support size or number of coordinates.
    pub n: usize,
    /// Membership probability of each point (pattern sets).
    pub density: f64,
    /// Bias of every two-point factor (pattern sets).
    pub p: Option<f64>,
    /// Ambient dimension (measures).
    pub dim: usize,
    /// Number of functions (processes).
    pub family: usize,
    /// Points per coordinate space (processes).
    pub support: usize,
    pub signed: bool,
    pub seed: u64,
}

impl GenerateParams {
    pub fn new(n: usize, seed: u64) -> Self {
        Self { n, density: 0.3, p: None, dim: 1, family: 4, support: 2, signed: false, seed }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Deterministic instance file for `(kind, params)`.
pub fn generate(kind: InstanceKind, params: &GenerateParams) -> Result<String, CliError> {
    if params.n == 0 {
        return Err(invalid("n must be positive"));
    }
    let mut rng = stream(derive_seed(params.seed, kind.label()), 0);
    match kind {
        InstanceKind::PatternSet => {
            if params.n > MAX_PATTERN_DIMENSION {
                return Err(invalid(format!("pattern sets take n <= {MAX_PATTERN_DIMENSION}")));
            }
            if !(params.density > 0.0 && params.density <= 1.0) {
                return Err(invalid(format!("density {} must lie in (0, 1]", params.density)));
            }
            let factor = match params.p {
                Some(p) if p > 0.0 && p < 1.0 => FiniteSpace::from_weights(vec![1.0 - p, p])?,
                Some(p) => return Err(invalid(format!("p = {p} must lie in (0, 1)"))),
                None => FiniteSpace::uniform(2)?,
            };
            let base = ProductSpace::power(factor, params.n)?;
            let mut members: Vec<usize> =
                (0..base.len()).filter(|_| rng.random_bool(params.density)).collect();
            if members.is_empty() {
                members.push(rng.random_range(0..base.len()));
            }
            Ok(write_pattern_set(&PatternSet::new(base, members)?))
        }
        InstanceKind::Measure => {
            if params.n > MAX_SUPPORT {
                return Err(invalid(format!("measures take n <= {MAX_SUPPORT}")));
            }
            if params.dim == 0 {
                return Err(invalid("dim must be positive"));
            }
            let support = (0..params.n)
                .map(|_| (0..params.dim).map(|_| rng.random_range(-3.0..3.0)).collect())
                .collect();
            let masses = (0..params.n).map(|_| rng.random_range(0.05..1.0)).collect();
            Ok(write_measure(&DiscreteMeasure::normalized(support, masses)?))
        }
        InstanceKind::Process => {
            let kind = if params.signed { FamilyKind::Signed } else { FamilyKind::Nonnegative };
            let inst = random_instance(&mut rng, params.n, params.family, params.support, usize::MAX, kind)?;
            Ok(write_instance(&inst))
        }
    }
}
