use rand::Rng;

use super::{agreement, sweep, InstanceRecord, Suite, SuiteConfig, SuiteRun};
use crate::error::Result;
use crate::measure::{
    entropy_duality_gap, tensorization_bound, FieldFunction, FiniteSpace, Measure, ProductSpace,
    TensorizationVariant,
};
use crate::rng::LabRng;

const MAX_POINTS: usize = 1 << 10;
const DUALITY_TOL: f64 = 1e-9;

fn random_weights(rng: &mut LabRng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / s).collect()
}

fn random_space(rng: &mut LabRng, cfg: &SuiteConfig, factors: Option<usize>) -> Result<ProductSpace> {
    let count = factors.unwrap_or_else(|| rng.random_range(1..=6));
    let mut spaces = Vec::with_capacity(count);
    let mut points = 1usize;
    for i in 0..count {
        let left = count - i - 1;
        // keep room for at least two points in every remaining factor
        let room = (MAX_POINTS / points) >> left;
        let size = match cfg.p {
            Some(_) => 2,
            None => rng.random_range(2..=4usize.min(room.max(2))),
        };
        let w = match cfg.p {
            Some(p) => vec![1.0 - p, p],
            None => random_weights(rng, size),
        };
        points *= size;
        spaces.push(FiniteSpace::from_weights(w)?);
    }
    ProductSpace::new(spaces)
}

fn instance(cfg: &SuiteConfig, id: usize, factors: Option<usize>) -> Result<InstanceRecord> {
    let mut rng = cfg.rng(Suite::Entropy, id);
    let space = random_space(&mut rng, cfg, factors)?;
    let positive = id % 2 == 0;
    let mut values: Vec<f64> = (0..space.len())
        .map(|_| {
            if positive {
                rng.random_range(-4.0f64..2.0).exp()
            } else if rng.random_bool(0.3) {
                0.0
            } else {
                rng.random_range(0.0..3.0)
            }
        })
        .collect();
    if values.iter().all(|&v| v == 0.0) {
        values[0] = 1.0;
    }
    let f = FieldFunction::new(&space, values)?;
    let mut reports = TensorizationVariant::ALL
        .iter()
        .map(|&v| tensorization_bound(&f, v))
        .collect::<Result<Vec<_>>>()?;
    if positive {
        reports.push(agreement("entropy_duality_gap", entropy_duality_gap(&f)?, DUALITY_TOL));
    }
    let label = format!(
        "sizes={:?} {}",
        space.factor_sizes(),
        if positive { "positive" } else { "nonnegative" }
    );
    Ok(InstanceRecord::new(id, label, reports))
}

pub(super) fn run(cfg: &SuiteConfig) -> Result<SuiteRun> {
    let factors = cfg.n_within(Suite::Entropy, 1, 10)?;
    Ok(SuiteRun {
        suite: Suite::Entropy,
        instances: sweep(cfg.count(Suite::Entropy), |id| instance(cfg, id, factors))?,
        probes: Vec::new(),
    })
}
