use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{build_hull, min_norm_point, HullInstance, MinNormResult, PatternSet};
use crate::error::Result;
use crate::measure::{Measure, ProductSpace};
use crate::report::VerificationReport;

/// Slack for exact-enumeration comparisons.
pub const ENUM_TOL: f64 = 1e-10;

/// Exponent constant `c` in `∫ e^{c d_A²} dP <= 1/P(A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentConstant {
    /// `c = 1/4`, the sharp form of the inequality.
    Quarter,
    /// `c = 1/14`, the constant reached by the entropy method.
    Fourteenth,
}

impl MomentConstant {
    pub fn value(self) -> f64 {
        match self {
            MomentConstant::Quarter => 0.25,
            MomentConstant::Fourteenth => 1.0 / 14.0,
        }
    }

    fn label(self) -> &'static str {
        match self {
            MomentConstant::Quarter => "1/4",
            MomentConstant::Fourteenth => "1/14",
        }
    }
}

/// `d_a(x, y) = Σ a_i 1_{x_i ≠ y_i}`.
pub fn weighted_hamming(base: &ProductSpace, weights: &[f64], x: usize, y: usize) -> f64 {
    (0..base.dimension())
        .filter(|&i| base.coord(x, i) != base.coord(y, i))
        .map(|i| weights[i])
        .sum()
}

/// `F_A(x)` evaluated at the unit weight vector read off the min-norm
/// point, `a = z/|z|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualDistance {
    /// `min_{y ∈ A} d_a(x, y)` at the certificate weights.
    pub value: f64,
    pub weights: Vec<f64>,
    /// `d_A(x) = |z|`.
    pub distance: f64,
    pub certificate: f64,
}

pub fn dual_distance(a: &PatternSet, x: usize) -> Result<DualDistance> {
    let hull = build_hull(a, x)?;
    Ok(dual_from_solve(a, x, &min_norm_point(&hull)))
}

fn dual_from_solve(a: &PatternSet, x: usize, r: &MinNormResult) -> DualDistance {
    if r.distance == 0.0 {
        return DualDistance {
            value: 0.0,
            weights: vec![0.0; r.point.len()],
            distance: 0.0,
            certificate: r.certificate,
        };
    }
    let weights: Vec<f64> = r.point.iter().map(|z| z / r.distance).collect();
    let value = a
        .members()
        .iter()
        .map(|&y| weighted_hamming(a.base(), &weights, x, y))
        .fold(f64::INFINITY, f64::min);
    DualDistance {
        value,
        weights,
        distance: r.distance,
        certificate: r.certificate,
    }
}

/// Deterministic nonnegative unit vectors in ℝ^n from a Kronecker sequence
/// (fractional parts of multiples of square roots of primes), plus the
/// coordinate axes and the diagonal.
pub fn orthant_grid(n: usize, count: usize) -> Vec<Vec<f64>> {
    const PRIMES: [f64; 16] = [
        2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0, 31.0, 37.0, 41.0, 43.0, 47.0, 53.0,
    ];
    let mut out = Vec::with_capacity(count + n + 1);
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        out.push(e);
    }
    out.push(vec![1.0 / (n as f64).sqrt(); n]);
    for k in 1..=count {
        let v: Vec<f64> = (0..n)
            .map(|i| {
                let alpha = PRIMES[i % PRIMES.len()].sqrt() * (1 + i / PRIMES.len()) as f64;
                (k as f64 * alpha).fract()
            })
            .collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            out.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    out
}

/// `max_{a ∈ grid} min_v ⟨a, v⟩`, a lower bound for `d_A(x)`.
pub fn grid_lower_bound(hull: &HullInstance, grid: &[Vec<f64>]) -> f64 {
    let verts = hull.vertices();
    grid.iter()
        .map(|a| {
            verts
                .iter()
                .map(|v| a.iter().zip(v).map(|(p, q)| p * q).sum::<f64>())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// `d_A` and `F_A` at every point of the base space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceProfile {
    pub distance: Vec<f64>,
    pub dual: Vec<f64>,
    /// Smallest certificate value over all solves.
    pub min_certificate: f64,
    /// Whether every solve produced a valid certificate.
    pub certificates_ok: bool,
    /// `P(A)`.
    pub probability: f64,
}

impl DistanceProfile {
    /// `max_x |F_A(x) - d_A(x)|`.
    pub fn identity_error(&self) -> f64 {
        self.distance
            .iter()
            .zip(&self.dual)
            .map(|(d, f)| (d - f).abs())
            .fold(0.0, f64::max)
    }

    fn moment(&self, weights: &[f64], c: f64) -> f64 {
        weights
            .iter()
            .zip(&self.distance)
            .map(|(w, d)| w * (c * d * d).exp())
            .sum()
    }
}

pub fn distance_profile(a: &PatternSet) -> Result<DistanceProfile> {
    let n = a.base().len();
    let solved: Vec<(DualDistance, bool)> = (0..n)
        .into_par_iter()
        .map(|x| {
            let hull = build_hull(a, x)?;
            let r = min_norm_point(&hull);
            Ok((dual_from_solve(a, x, &r), r.certificate_holds()))
        })
        .collect::<Result<_>>()?;
    Ok(DistanceProfile {
        distance: solved.iter().map(|(d, _)| d.distance).collect(),
        dual: solved.iter().map(|(d, _)| d.value).collect(),
        min_certificate: solved
            .iter()
            .map(|(d, _)| d.certificate)
            .fold(f64::INFINITY, f64::min),
        certificates_ok: solved.iter().all(|(_, ok)| *ok),
        probability: a.probability(),
    })
}

/// `∫ e^{c d_A²} dP <= 1/P(A)` by enumeration.
pub fn convex_distance_moment(
    a: &PatternSet,
    profile: &DistanceProfile,
    c: MomentConstant,
) -> VerificationReport {
    let lhs = profile.moment(a.base().weights(), c.value());
    let rhs = 1.0 / profile.probability;
    VerificationReport::new(
        format!("convex_moment_{}", c.label()),
        lhs,
        rhs,
        ENUM_TOL * rhs,
    )
}

/// `∫ e^{d_A²/14} dP <= e^{M_2/10}` and `<= e^{4/(5P(A))}`, where
/// `M_2 = ∫ d_A² dP`.
pub fn intermediate_bounds(a: &PatternSet, profile: &DistanceProfile) -> [VerificationReport; 2] {
    let w = a.base().weights();
    let lhs = profile.moment(w, 1.0 / 14.0);
    let m2: f64 = w.iter().zip(&profile.distance).map(|(w, d)| w * d * d).sum();
    let by_m2 = (m2 / 10.0).exp();
    let by_pa = (4.0 / (5.0 * profile.probability)).exp();
    [
        VerificationReport::new("convex_intermediate_m2", lhs, by_m2, ENUM_TOL * by_m2),
        VerificationReport::new("convex_intermediate_pa", lhs, by_pa, ENUM_TOL * by_pa),
    ]
}

/// `max d_A(x)² - d_A(y)² <= 1` over `y` differing from `x` in one
/// coordinate.
pub fn square_lipschitz_check(a: &PatternSet, profile: &DistanceProfile) -> VerificationReport {
    let base = a.base();
    let sizes = base.factor_sizes();
    let mut worst = f64::NEG_INFINITY;
    let mut witness = (0, 0);
    for x in 0..base.len() {
        let dx = profile.distance[x].powi(2);
        for (i, &s) in sizes.iter().enumerate() {
            for c in 0..s {
                let y = base.with_coord(x, i, c);
                let gap = dx - profile.distance[y].powi(2);
                if gap > worst {
                    worst = gap;
                    witness = (x, y);
                }
            }
        }
    }
    VerificationReport::new("convex_square_lipschitz", worst, 1.0, 1e-8)
        .with_witness(format!("x={} y={}", witness.0, witness.1))
}
