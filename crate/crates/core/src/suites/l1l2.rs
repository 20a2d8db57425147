use rand::Rng;

use super::{sweep, InstanceRecord, Suite, SuiteConfig, SuiteRun, P_GRID};
use crate::cube::{BiasedCube, CubeFunction};
use crate::error::Result;
use crate::influence::{default_constant, kkl_check, l1l2_bound, CubeSet, L1L2Form};

/// Seeded monotone sets per dimension in the influence sweep.
const MONOTONE_PER_N: usize = 8;

fn instance(cfg: &SuiteConfig, id: usize, n: Option<usize>) -> Result<InstanceRecord> {
    let mut rng = cfg.rng(Suite::L1l2, id);
    let n = n.unwrap_or_else(|| rng.random_range(1..=8));
    let p = cfg.p.unwrap_or(P_GRID[id % P_GRID.len()]);
    let cube = BiasedCube::new(n, p)?;
    let values: Vec<f64> = match id % 3 {
        0 => (0..cube.len()).map(|_| rng.random_range(-1.0..1.0)).collect(),
        1 => {
            let density = rng.random_range(0.05..0.95);
            (0..cube.len()).map(|_| f64::from(u8::from(rng.random_bool(density)))).collect()
        }
        _ => {
            // few active coordinates, so the log-ratio terms matter
            let k = rng.random_range(1..=n);
            let w: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
            (0..cube.len())
                .map(|x| (0..k).map(|i| w[i] * cube.sign(x, i)).product::<f64>().tanh())
                .collect()
        }
    };
    let f = CubeFunction::new(&cube, values)?;
    let reports = vec![
        l1l2_bound(&f, L1L2Form::SemigroupForm)?,
        l1l2_bound(&f, L1L2Form::OriginalForm)?,
    ];
    Ok(InstanceRecord::new(id, format!("n={n} p={p}"), reports))
}

/// Named sets at `p = 1/2`, in a fixed order.
fn influence_sets(cfg: &SuiteConfig) -> Result<Vec<(String, usize, Vec<bool>)>> {
    let mut out = Vec::new();
    for n in 2..=9 {
        let cube = BiasedCube::new(n, 0.5)?;
        let mut push = |name: String, a: &CubeSet<'_>| {
            let members = (0..cube.len()).map(|x| a.contains(x)).collect();
            out.push((name, n, members));
        };
        push(format!("dictator n={n}"), &CubeSet::dictator(&cube, 0)?);
        push(format!("parity n={n}"), &CubeSet::parity(&cube));
        if n % 2 == 1 {
            push(format!("majority n={n}"), &CubeSet::majority(&cube)?);
        }
        for k in 0..MONOTONE_PER_N {
            let mut rng = cfg.rng(Suite::L1l2, 1_000_000 + 100 * n + k);
            let a = CubeSet::random_monotone(&cube, &mut rng);
            let alpha = a.measure();
            if alpha > 0.0 && alpha < 1.0 {
                push(format!("monotone n={n} #{k}"), &a);
            }
        }
    }
    Ok(out)
}

pub(super) fn run(cfg: &SuiteConfig) -> Result<SuiteRun> {
    let n = cfg.n_within(Suite::L1l2, 1, 10)?;
    let count = cfg.count(Suite::L1l2);
    let mut instances = sweep(count, |id| instance(cfg, id, n))?;
    let k = default_constant(0.5);
    for (j, (label, n, members)) in influence_sets(cfg)?.into_iter().enumerate() {
        let cube = BiasedCube::new(n, 0.5)?;
        let a = CubeSet::new(&cube, members)?;
        let reports = kkl_check(&a, k)?.to_vec();
        instances.push(InstanceRecord::new(count + j, label, reports));
    }
    Ok(SuiteRun { suite: Suite::L1l2, instances, probes: Vec::new() })
}
