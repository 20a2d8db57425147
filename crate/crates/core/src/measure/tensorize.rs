use serde::{Deserialize, Serialize};

use super::functional::{
    entropy_of, entropy_or_zero, mean_of, variance_of, variational_entropy_of, FieldFunction,
    CHECK_TOL,
};
use super::space::{FiniteSpace, Measure, ProductSpace};
use crate::error::Result;
use crate::report::VerificationReport;

/// Which sub-additivity bound to evaluate on a product space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorizationVariant {
    /// `Ent_P(f) <= Σ_i ∫ Ent_{μ_i}(f_i) dP`.
    Entropy,
    /// `Var_P(f) <= Σ_i ∫ Var_{μ_i}(f_i) dP`.
    EfronStein,
    /// Conditional entropies replaced by the half double integral of
    /// `(f(x_i) - f(y_i))(log f(x_i) - log f(y_i))`.
    Symmetrized,
    /// Conditional entropies written variationally with `c_i` the slice mean.
    Variational,
}

impl TensorizationVariant {
    pub const ALL: [TensorizationVariant; 4] = [
        TensorizationVariant::Entropy,
        TensorizationVariant::EfronStein,
        TensorizationVariant::Symmetrized,
        TensorizationVariant::Variational,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TensorizationVariant::Entropy => "tensorization_entropy",
            TensorizationVariant::EfronStein => "tensorization_efron_stein",
            TensorizationVariant::Symmetrized => "tensorization_symmetrized",
            TensorizationVariant::Variational => "tensorization_variational",
        }
    }
}

/// One conditional slice `f_i`: the function of coordinate `i` with every
/// other coordinate frozen at `complement`.
#[derive(Debug, Clone)]
pub struct ConditionalSlice<'s> {
    /// Frozen coordinates (entry `i` is 0 and meaningless).
    pub complement: Vec<usize>,
    /// Product weight of the frozen coordinates.
    pub weight: f64,
    pub function: FieldFunction<'s, FiniteSpace>,
}

/// Visits every slice along coordinate `i` in lexicographic order of the
/// complement, reusing one buffer.
fn for_each_slice(
    space: &ProductSpace,
    values: &[f64],
    i: usize,
    mut visit: impl FnMut(usize, f64, &[f64]) -> Result<()>,
) -> Result<()> {
    let stride = space.stride(i);
    let size = space.factors()[i].len();
    let weights = space.weights();
    let mut buf = vec![0.0; size];
    for base in 0..space.len() {
        if space.coord(base, i) != 0 {
            continue;
        }
        let mut comp = 0.0;
        for (k, slot) in buf.iter_mut().enumerate() {
            let idx = base + k * stride;
            *slot = values[idx];
            comp += weights[idx];
        }
        visit(base, comp, &buf)?;
    }
    Ok(())
}

/// Splits `f` into its slices along coordinate `i`. The slices partition the
/// value table.
pub fn conditional_slices<'s>(
    f: &FieldFunction<'s, ProductSpace>,
    i: usize,
) -> Result<Vec<ConditionalSlice<'s>>> {
    let space = f.space();
    space.check_factor(i)?;
    let factor = &space.factors()[i];
    let mut out = Vec::new();
    for_each_slice(space, f.values(), i, |base, weight, vals| {
        out.push(ConditionalSlice {
            complement: space.coords(base),
            weight,
            function: FieldFunction::new(factor, vals.to_vec())?,
        });
        Ok(())
    })?;
    Ok(out)
}

fn symmetrized_slice(weights: &[f64], values: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (a, (&wa, &fa)) in weights.iter().zip(values).enumerate() {
        for (&wb, &fb) in weights.iter().zip(values).skip(a + 1) {
            if fa == fb || wa == 0.0 || wb == 0.0 {
                continue;
            }
            if fa == 0.0 || fb == 0.0 {
                return f64::INFINITY;
            }
            // Ordered pairs with f(x) >= f(y): each unordered pair once.
            acc += wa * wb * (fa - fb) * (fa.ln() - fb.ln());
        }
    }
    acc
}

/// Right-hand side of the chosen tensorization bound.
pub fn tensorization_rhs(
    f: &FieldFunction<'_, ProductSpace>,
    variant: TensorizationVariant,
) -> Result<f64> {
    let space = f.space();
    let mut total = 0.0;
    for i in 0..space.dimension() {
        let wi = space.factors()[i].weights();
        let mi: f64 = wi.iter().sum();
        debug_assert!((mi - 1.0).abs() < 1e-9);
        for_each_slice(space, f.values(), i, |_, comp, vals| {
            let term = match variant {
                TensorizationVariant::Entropy => entropy_or_zero(wi, vals)?,
                TensorizationVariant::EfronStein => variance_of(wi, vals),
                TensorizationVariant::Symmetrized => symmetrized_slice(wi, vals),
                TensorizationVariant::Variational => {
                    let c = mean_of(wi, vals);
                    if c == 0.0 {
                        0.0
                    } else {
                        variational_entropy_of(wi, vals, c)?
                    }
                }
            };
            total += comp * term;
            Ok(())
        })?;
    }
    Ok(total)
}

/// Checks one tensorization bound by exhaustive enumeration.
pub fn tensorization_bound(
    f: &FieldFunction<'_, ProductSpace>,
    variant: TensorizationVariant,
) -> Result<VerificationReport> {
    let w = f.space().weights();
    let lhs = match variant {
        TensorizationVariant::EfronStein => variance_of(w, f.values()),
        _ => entropy_of(w, f.values())?,
    };
    let rhs = tensorization_rhs(f, variant)?;
    Ok(VerificationReport::new(variant.name(), lhs, rhs, CHECK_TOL))
}
