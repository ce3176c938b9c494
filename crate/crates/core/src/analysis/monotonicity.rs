use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default relative tolerance for monotonicity classification.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Monotonicity {
    NonDecreasing,
    NonIncreasing,
    Constant,
    NonMonotone,
}

impl Monotonicity {
    pub fn is_nondecreasing(self) -> bool {
        matches!(self, Monotonicity::NonDecreasing | Monotonicity::Constant)
    }

    pub fn is_nonincreasing(self) -> bool {
        matches!(self, Monotonicity::NonIncreasing | Monotonicity::Constant)
    }

    pub fn id(self) -> &'static str {
        match self {
            Monotonicity::NonDecreasing => "NonDecreasing",
            Monotonicity::NonIncreasing => "NonIncreasing",
            Monotonicity::Constant => "Constant",
            Monotonicity::NonMonotone => "NonMonotone",
        }
    }

    pub fn from_id(id: &str) -> Option<Monotonicity> {
        [
            Monotonicity::NonDecreasing,
            Monotonicity::NonIncreasing,
            Monotonicity::Constant,
            Monotonicity::NonMonotone,
        ]
        .into_iter()
        .find(|m| m.id() == id)
    }
}

impl fmt::Display for Monotonicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Classification of a sampled sequence, with the largest rise and fall.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotonicityVerdict {
    pub classification: Monotonicity,
    /// Largest positive consecutive difference (0 if none).
    pub max_up: f64,
    /// Largest negative consecutive difference, as a positive number (0 if none).
    pub max_down: f64,
    /// Left end of the step with the largest rise.
    pub witness_up: Option<f64>,
    /// Left end of the step with the largest fall.
    pub witness_down: Option<f64>,
    /// Absolute threshold actually applied, `rel_tol * max|value|`.
    pub threshold: f64,
}

/// Classifies `(x, value)` samples with strictly increasing `x`.
///
/// A step counts against a direction only when it exceeds
/// `rel_tol * max|value|` in the opposite direction.
pub fn classify_monotonicity(samples: &[(f64, f64)], rel_tol: f64) -> Result<MonotonicityVerdict> {
    if samples.len() < 3 {
        return Err(Error::TooFewSamples(samples.len()));
    }
    let mut scale = 0.0f64;
    for (i, &(x, v)) in samples.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::InvalidSample { index: i, value: x });
        }
        if !v.is_finite() {
            return Err(Error::InvalidSample { index: i, value: v });
        }
        if i > 0 && x <= samples[i - 1].0 {
            return Err(Error::InvalidSample { index: i, value: x });
        }
        scale = scale.max(v.abs());
    }
    let threshold = rel_tol * scale;
    let (mut max_up, mut max_down) = (0.0f64, 0.0f64);
    let (mut witness_up, mut witness_down) = (None, None);
    for w in samples.windows(2) {
        let d = w[1].1 - w[0].1;
        if d > max_up {
            max_up = d;
            witness_up = Some(w[0].0);
        } else if -d > max_down {
            max_down = -d;
            witness_down = Some(w[0].0);
        }
    }
    let rises = max_up > threshold;
    let falls = max_down > threshold;
    let classification = match (rises, falls) {
        (false, false) => Monotonicity::Constant,
        (true, false) => Monotonicity::NonDecreasing,
        (false, true) => Monotonicity::NonIncreasing,
        (true, true) => Monotonicity::NonMonotone,
    };
    Ok(MonotonicityVerdict {
        classification,
        max_up,
        max_down,
        witness_up,
        witness_down,
        threshold,
    })
}
