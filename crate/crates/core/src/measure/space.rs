use std::collections::HashSet;

use crate::error::{Error, Result};

/// Weights within this distance of summing to one are renormalised;
/// anything further away is rejected.
pub const NORMALIZATION_SLACK: f64 = 1e-9;

/// Largest product space the lab will enumerate.
pub const MAX_PRODUCT_POINTS: usize = 1 << 22;

/// Anything carrying a probability vector over an ordered point set.
pub trait Measure {
    fn weights(&self) -> &[f64];

    fn len(&self) -> usize {
        self.weights().len()
    }

    fn is_empty(&self) -> bool {
        self.weights().is_empty()
    }
}

/// Checks nonnegativity and total mass, renormalising float noise away.
pub(crate) fn normalize_weights(mut weights: Vec<f64>) -> Result<Vec<f64>> {
    if weights.is_empty() {
        return Err(Error::domain("a probability space needs at least one point"));
    }
    if let Some((i, w)) = weights
        .iter()
        .enumerate()
        .find(|(_, w)| !w.is_finite() || **w < 0.0)
    {
        return Err(Error::domain(format!("weight {i} is {w}, expected a finite value >= 0")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_SLACK {
        return Err(Error::domain(format!("weights sum to {total}, not 1")));
    }
    for w in &mut weights {
        *w /= total;
    }
    Ok(weights)
}

/// A finite probability space: ordered, distinct labels with weights.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpace {
    labels: Vec<String>,
    weights: Vec<f64>,
}

impl FiniteSpace {
    pub fn new(labels: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::Mismatch(format!(
                "{} labels for {} weights",
                labels.len(),
                weights.len()
            )));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::domain(format!("duplicate point label {dup:?}")));
        }
        let weights = normalize_weights(weights)?;
        Ok(Self { labels, weights })
    }

    /// Space with labels `"0"`, `"1"`, ... in weight order.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let labels = (0..weights.len()).map(|i| i.to_string()).collect();
        Self::new(labels, weights)
    }

    pub fn uniform(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::domain("a probability space needs at least one point"));
        }
        Self::from_weights(vec![1.0 / size as f64; size])
    }

    /// Two-point space `{-1, +1}` with mass `p` on `+1`.
    pub fn bernoulli_signs(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("bernoulli parameter {p} outside (0, 1)")));
        }
        Self::new(vec!["-1".into(), "+1".into()], vec![1.0 - p, p])
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

impl Measure for FiniteSpace {
    fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Product of finite spaces, enumerated lexicographically in factor point
/// order (the last factor varies fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpace {
    factors: Vec<FiniteSpace>,
    strides: Vec<usize>,
    weights: Vec<f64>,
}

impl ProductSpace {
    pub fn new(factors: Vec<FiniteSpace>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::domain("a product space needs at least one factor"));
        }
        let mut total: u128 = 1;
        for f in &factors {
            total = total.saturating_mul(f.len() as u128);
        }
        if total > MAX_PRODUCT_POINTS as u128 {
            return Err(Error::Size {
                what: "product space points",
                requested: total,
                limit: MAX_PRODUCT_POINTS as u128,
            });
        }
        let n = factors.len();
        let mut strides = vec![1usize; n];
        for i in (0..n - 1).rev() {
            strides[i] = strides[i + 1] * factors[i + 1].len();
        }
        let mut weights = vec![1.0f64];
        for f in &factors {
            let mut next = Vec::with_capacity(weights.len() * f.len());
            for w in &weights {
                next.extend(f.weights().iter().map(|v| w * v));
            }
            weights = next;
        }
        Ok(Self {
            factors,
            strides,
            weights,
        })
    }

    /// `n` copies of the same factor.
    pub fn power(factor: FiniteSpace, n: usize) -> Result<Self> {
        Self::new(vec![factor; n])
    }

    pub fn factors(&self) -> &[FiniteSpace] {
        &self.factors
    }

    pub fn dimension(&self) -> usize {
        self.factors.len()
    }

    pub fn factor_sizes(&self) -> Vec<usize> {
        self.factors.iter().map(FiniteSpace::len).collect()
    }

    pub fn stride(&self, i: usize) -> usize {
        self.strides[i]
    }

    /// Coordinate of factor `i` in the tuple at `index`.
    pub fn coord(&self, index: usize, i: usize) -> usize {
        (index / self.strides[i]) % self.factors[i].len()
    }

    pub fn coords(&self, index: usize) -> Vec<usize> {
        (0..self.dimension()).map(|i| self.coord(index, i)).collect()
    }

    pub fn index_of(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.dimension() {
            return Err(Error::Mismatch(format!(
                "tuple of length {} in a {}-fold product",
                coords.len(),
                self.dimension()
            )));
        }
        let mut index = 0;
        for (i, &c) in coords.iter().enumerate() {
            let len = self.factors[i].len();
            if c >= len {
                return Err(Error::IndexOutOfRange { index: c, len });
            }
            index += c * self.strides[i];
        }
        Ok(index)
    }

    /// Index of the tuple obtained from `index` by setting coordinate `i` to `c`.
    pub fn with_coord(&self, index: usize, i: usize, c: usize) -> usize {
        let old = self.coord(index, i);
        index - old * self.strides[i] + c * self.strides[i]
    }

    pub fn check_factor(&self, i: usize) -> Result<()> {
        if i >= self.dimension() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.dimension(),
            });
        }
        Ok(())
    }
}

impl Measure for ProductSpace {
    fn weights(&self) -> &[f64] {
        &self.weights
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_within_slack_are_normalised() {
        let s = FiniteSpace::from_weights(vec![0.5, 0.5 + 5e-10]).unwrap();
        let total: f64 = s.weights().iter().sum();
        assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn bad_weights_are_rejected() {
        assert!(FiniteSpace::from_weights(vec![0.5, 0.6]).is_err());
        assert!(FiniteSpace::from_weights(vec![1.5, -0.5]).is_err());
        assert!(FiniteSpace::from_weights(vec![]).is_err());
        assert!(FiniteSpace::new(vec!["a".into(), "a".into()], vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn product_is_lexicographic() {
        let a = FiniteSpace::from_weights(vec![0.25, 0.75]).unwrap();
        let b = FiniteSpace::from_weights(vec![0.1, 0.2, 0.7]).unwrap();
        let p = ProductSpace::new(vec![a, b]).unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(p.coords(0), vec![0, 0]);
        assert_eq!(p.coords(1), vec![0, 1]);
        assert_eq!(p.coords(3), vec![1, 0]);
        assert_eq!(p.index_of(&[1, 2]).unwrap(), 5);
        assert!((p.weights()[5] - 0.75 * 0.7).abs() < 1e-15);
        assert_eq!(p.with_coord(5, 0, 0), 2);
    }

    #[test]
    fn oversized_product_is_rejected() {
        let f = FiniteSpace::uniform(2).unwrap();
        assert!(matches!(ProductSpace::power(f, 23), Err(Error::Size { .. })));
    }
}
