use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cube::{BiasedCube, CubeFunction};
use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::rng::LabRng;

/// A subset `A` of the cube.
#[derive(Debug, Clone)]
pub struct CubeSet<'c> {
    cube: &'c BiasedCube,
    members: Vec<bool>,
}

impl<'c> CubeSet<'c> {
    pub fn new(cube: &'c BiasedCube, members: Vec<bool>) -> Result<Self> {
        if members.len() != cube.len() {
            return Err(Error::Mismatch(format!(
                "{} membership flags for {} points",
                members.len(),
                cube.len()
            )));
        }
        Ok(Self { cube, members })
    }

    pub fn from_predicate(cube: &'c BiasedCube, keep: impl Fn(&[f64]) -> bool) -> Self {
        let members = (0..cube.len()).map(|k| keep(&cube.signs(k))).collect();
        Self { cube, members }
    }

    /// `{x : x_i = +1}`.
    pub fn dictator(cube: &'c BiasedCube, i: usize) -> Result<Self> {
        cube.check_coordinate(i)?;
        Ok(Self::from_predicate(cube, |x| x[i] > 0.0))
    }

    /// `{x : Π x_i = +1}`.
    pub fn parity(cube: &'c BiasedCube) -> Self {
        Self::from_predicate(cube, |x| x.iter().product::<f64>() > 0.0)
    }

    /// `{x : Σ x_i > 0}`, for odd `n`.
    pub fn majority(cube: &'c BiasedCube) -> Result<Self> {
        if cube.n() % 2 == 0 {
            return Err(Error::invalid("majority needs an odd dimension"));
        }
        Ok(Self::from_predicate(cube, |x| x.iter().sum::<f64>() > 0.0))
    }

    /// The up-set generated by a few seeded random points: `x ∈ A` when
    /// `x >= g` coordinatewise for some generator `g`.
    pub fn random_monotone(cube: &'c BiasedCube, rng: &mut LabRng) -> Self {
        let n = cube.n();
        let count = rng.random_range(1..=n.max(1) + 1);
        let gens: Vec<usize> = (0..count).map(|_| rng.random_range(0..cube.len())).collect();
        let members = (0..cube.len())
            .map(|x| gens.iter().any(|&g| x & g == g))
            .collect();
        Self { cube, members }
    }

    pub fn cube(&self) -> &'c BiasedCube {
        self.cube
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members[x]
    }

    /// `μ(A)`.
    pub fn measure(&self) -> f64 {
        self.cube
            .weights()
            .iter()
            .zip(&self.members)
            .filter(|(_, &m)| m)
            .map(|(w, _)| w)
            .sum()
    }

    pub fn indicator(&self) -> CubeFunction<'c> {
        CubeFunction::from_fn(self.cube, |k| if self.members[k] { 1.0 } else { 0.0 })
            .expect("indicator is finite")
    }

    /// Whether `x ∈ A` and `x <= y` imply `y ∈ A`.
    pub fn is_monotone(&self) -> bool {
        (0..self.cube.len()).all(|x| {
            !self.members[x]
                || (0..self.cube.n()).all(|i| self.members[x | self.cube.flip(0, i)])
        })
    }
}

/// `I_i(A) = μ(x ∈ A, U_i x ∉ A)` for every coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfluenceProfile {
    pub influences: Vec<f64>,
}

impl InfluenceProfile {
    pub fn max(&self) -> f64 {
        self.influences.iter().cloned().fold(0.0, f64::max)
    }
}

pub fn influences(a: &CubeSet<'_>) -> InfluenceProfile {
    let cube = a.cube();
    let w = cube.weights();
    let influences = (0..cube.n())
        .map(|i| {
            (0..cube.len())
                .filter(|&x| a.contains(x) && !a.contains(cube.flip(x, i)))
                .map(|x| w[x])
                .sum()
        })
        .collect();
    InfluenceProfile { influences }
}

/// The summed inequality `α(1-α) <= 2K Σ I_i / log(e/√(2 I_i))` and the
/// maximal-influence bound `max I_i >= α(1-α) log n / (8 K n)`, at `p = 1/2`.
pub fn kkl_check(a: &CubeSet<'_>, k: f64) -> Result<[VerificationReport; 2]> {
    let cube = a.cube();
    if (cube.p() - 0.5).abs() > 1e-12 {
        return Err(Error::precondition("influence bounds are stated for p = 1/2"));
    }
    let alpha = a.measure();
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("degenerate set: μ(A) = {alpha}")));
    }
    let prof = influences(a);
    let spread = alpha * (1.0 - alpha);
    let summed: f64 = prof
        .influences
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v / (1.0 - 0.5 * (2.0 * v).ln()))
        .sum();
    let n = cube.n() as f64;
    let threshold = spread * n.ln() / (8.0 * k * n);
    Ok([
        VerificationReport::new("kkl_summed", spread, 2.0 * k * summed, 1e-12)
            .with_note(format!("K = {k}")),
        VerificationReport::new("kkl_max_influence", threshold, prof.max(), 1e-12)
            .with_note(format!("K = {k}")),
    ])
}
