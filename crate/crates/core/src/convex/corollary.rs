use crate::error::{Error, Result};
use crate::linalg::largest_eigenvalue_psd;
use crate::measure::{FieldFunction, FiniteSpace, Measure, ProductSpace};
use crate::report::VerificationReport;

/// Slack when comparing `|F - M|` against `r` and when checking hypotheses.
pub const CORNER_TOL: f64 = 1e-12;

/// How the hypothesis of the concentration corollary is certified.
pub enum CorollaryMode<'a> {
    /// `F(x) <= F(y) + d_{a(x)}(x, y)` for all `x, y`, with the caller
    /// supplying the weights `a(x) >= 0`, `|a(x)| <= 1`.
    WeightedHamming {
        witness: &'a (dyn Fn(usize) -> Vec<f64> + Sync),
    },
    /// `F` is the restriction of a convex 1-Lipschitz function on ℝ^n to the
    /// grid given by `embedding[i][c] ∈ [0, 1]`, the position of point `c`
    /// of factor `i`.
    ConvexLipschitz {
        embedding: &'a [Vec<f64>],
        function: &'a (dyn Fn(&[f64]) -> f64 + Sync),
    },
}

/// Smallest `M` with `P(F <= M) >= 1/2`.
pub fn median(weights: &[f64], values: &[f64]) -> f64 {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut acc = 0.0;
    let mut k = 0;
    while k < order.len() {
        let v = values[order[k]];
        while k < order.len() && values[order[k]] == v {
            acc += weights[order[k]];
            k += 1;
        }
        if acc >= 0.5 - CORNER_TOL {
            return v;
        }
    }
    values[order[order.len() - 1]]
}

fn check_weighted_hamming(
    f: &FieldFunction<'_, ProductSpace>,
    witness: &(dyn Fn(usize) -> Vec<f64> + Sync),
) -> Result<()> {
    let space = f.space();
    let vals = f.values();
    for x in 0..space.len() {
        let a = witness(x);
        if a.len() != space.dimension() {
            return Err(Error::Mismatch(format!(
                "witness at {x} has {} weights for {} coordinates",
                a.len(),
                space.dimension()
            )));
        }
        let norm2: f64 = a.iter().map(|v| v * v).sum();
        if a.iter().any(|&v| v < 0.0) || norm2 > 1.0 + 1e-12 {
            return Err(Error::precondition_with(
                "witness weights must be nonnegative with |a| <= 1",
                format!("x={x}"),
            ));
        }
        for y in 0..space.len() {
            let d = super::weighted_hamming(space, &a, x, y);
            if vals[x] > vals[y] + d + CORNER_TOL * (1.0 + vals[x].abs()) {
                return Err(Error::precondition_with(
                    "F(x) <= F(y) + d_a(x,y) fails",
                    format!("x={x} y={y}"),
                ));
            }
        }
    }
    Ok(())
}

fn check_convex_lipschitz(
    f: &FieldFunction<'_, ProductSpace>,
    embedding: &[Vec<f64>],
    function: &(dyn Fn(&[f64]) -> f64 + Sync),
) -> Result<()> {
    let space = f.space();
    if embedding.len() != space.dimension()
        || embedding
            .iter()
            .zip(space.factor_sizes())
            .any(|(e, s)| e.len() != s)
    {
        return Err(Error::Mismatch("embedding does not match the factor sizes".into()));
    }
    if embedding.iter().flatten().any(|&t| !(0.0..=1.0).contains(&t)) {
        return Err(Error::precondition("embedding must lie in [0, 1]"));
    }
    let point = |k: usize| -> Vec<f64> {
        (0..space.dimension())
            .map(|i| embedding[i][space.coord(k, i)])
            .collect()
    };
    let pts: Vec<Vec<f64>> = (0..space.len()).map(point).collect();
    let vals = f.values();
    for (k, p) in pts.iter().enumerate() {
        let v = function(p);
        if (v - vals[k]).abs() > CORNER_TOL * (1.0 + v.abs()) {
            return Err(Error::precondition_with(
                "table disagrees with the convex function",
                format!("x={k}"),
            ));
        }
    }
    for x in 0..pts.len() {
        for y in x + 1..pts.len() {
            let dist = pts[x]
                .iter()
                .zip(&pts[y])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if (vals[x] - vals[y]).abs() > dist + CORNER_TOL {
                return Err(Error::precondition_with(
                    "F is not 1-Lipschitz on the grid",
                    format!("x={x} y={y}"),
                ));
            }
            let mid: Vec<f64> = pts[x].iter().zip(&pts[y]).map(|(a, b)| 0.5 * (a + b)).collect();
            if function(&mid) > 0.5 * (vals[x] + vals[y]) + CORNER_TOL * (1.0 + vals[x].abs()) {
                return Err(Error::precondition_with(
                    "F is not midpoint convex on the grid",
                    format!("x={x} y={y}"),
                ));
            }
        }
    }
    Ok(())
}

/// `P(|F - M| >= r) <= 4 e^{-r²/4}` for each `r`, with `M` the median,
/// after certifying the corollary's hypothesis by enumeration.
pub fn corollary_concentration(
    f: &FieldFunction<'_, ProductSpace>,
    mode: CorollaryMode<'_>,
    r_grid: &[f64],
) -> Result<Vec<VerificationReport>> {
    let label = match mode {
        CorollaryMode::WeightedHamming { witness } => {
            check_weighted_hamming(f, witness)?;
            "weighted_hamming"
        }
        CorollaryMode::ConvexLipschitz {
            embedding,
            function,
        } => {
            check_convex_lipschitz(f, embedding, function)?;
            "convex_lipschitz"
        }
    };
    if let Some(r) = r_grid.iter().find(|r| !(**r >= 0.0)) {
        return Err(Error::invalid(format!("deviation {r} must be nonnegative")));
    }
    let w = f.space().weights();
    let m = median(w, f.values());
    Ok(r_grid
        .iter()
        .map(|&r| {
            let tail: f64 = w
                .iter()
                .zip(f.values())
                .filter(|(_, &v)| (v - m).abs() >= r - CORNER_TOL)
                .map(|(w, _)| w)
                .sum();
            let bound = 4.0 * (-r * r / 4.0).exp();
            VerificationReport::new(format!("convex_corollary_{label}"), tail, bound, 1e-12)
                .with_witness(format!("r={r} median={m}"))
        })
        .collect())
}

/// `‖Σ ε_i v_i‖` for independent fair `ε_i ∈ {0, 1}` and fixed `v_i`,
/// rescaled by `σ`, `σ² = sup_{|ξ| <= 1} Σ ⟨ξ, v_i⟩²`.
#[derive(Debug, Clone)]
pub struct BernoulliNorm {
    space: ProductSpace,
    vectors: Vec<Vec<f64>>,
    sigma: f64,
}

impl BernoulliNorm {
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let n = vectors.len();
        if n == 0 {
            return Err(Error::invalid("need at least one vector"));
        }
        let dim = vectors[0].len();
        if dim == 0 || vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::Mismatch("vectors must share a positive dimension".into()));
        }
        let mut cov = vec![0.0; dim * dim];
        for v in &vectors {
            for r in 0..dim {
                for c in 0..dim {
                    cov[r * dim + c] += v[r] * v[c];
                }
            }
        }
        let sigma = largest_eigenvalue_psd(&cov, dim).max(0.0).sqrt();
        if !(sigma > 0.0) {
            return Err(Error::invalid("vectors span nothing; σ = 0"));
        }
        let space = ProductSpace::power(FiniteSpace::uniform(2)?, n)?;
        Ok(Self {
            space,
            vectors,
            sigma,
        })
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    fn sum(&self, x: usize) -> Vec<f64> {
        let dim = self.vectors[0].len();
        let mut s = vec![0.0; dim];
        for (i, v) in self.vectors.iter().enumerate() {
            if self.space.coord(x, i) == 1 {
                for (a, b) in s.iter_mut().zip(v) {
                    *a += b;
                }
            }
        }
        s
    }

    /// `‖S(x)‖ / σ` at every point.
    pub fn values(&self) -> Vec<f64> {
        (0..self.space.len())
            .map(|x| self.sum(x).iter().map(|v| v * v).sum::<f64>().sqrt() / self.sigma)
            .collect()
    }

    /// `a_i(x) = |⟨S/|S|, v_i⟩| / σ`, which certifies
    /// `F(x) <= F(y) + d_a(x, y)`.
    pub fn witness(&self, x: usize) -> Vec<f64> {
        let s = self.sum(x);
        let norm = s.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return vec![0.0; self.vectors.len()];
        }
        self.vectors
            .iter()
            .map(|v| (v.iter().zip(&s).map(|(a, b)| a * b).sum::<f64>() / norm).abs() / self.sigma)
            .collect()
    }
}
