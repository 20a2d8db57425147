use serde::{Deserialize, Serialize};

/// Outcome of checking one inequality instance `lhs <= rhs`.
///
/// `pass` is derived, never set directly: it holds exactly when
/// `lhs <= rhs + tolerance`. A NaN on either side fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let margin = rhs - lhs;
        Self {
            name: name.into(),
            lhs,
            rhs,
            margin,
            tolerance,
            pass: holds(lhs, rhs, tolerance),
            witness: None,
            note: None,
        }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(match self.note.take() {
            Some(prev) => format!("{prev}; {}", note.into()),
            None => note.into(),
        });
        self
    }

    /// Re-evaluates `pass` under a different tolerance.
    pub fn retolerate(&mut self, tolerance: f64) {
        self.tolerance = tolerance;
        self.pass = holds(self.lhs, self.rhs, tolerance);
    }
}

fn holds(lhs: f64, rhs: f64, tolerance: f64) -> bool {
    if lhs.is_nan() || rhs.is_nan() {
        return false;
    }
    if rhs == f64::INFINITY || lhs == f64::NEG_INFINITY {
        return true;
    }
    lhs <= rhs + tolerance
}
