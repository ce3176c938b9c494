use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance on prefix and total sums.
pub const MAJORIZATION_TOL: f64 = 1e-12;

/// Outcome of comparing two vectors under majorization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizationResult {
    /// `x` is majorized by `y`: ascending prefix sums of `x` dominate those of `y`.
    pub x_majorized_by_y: bool,
    pub y_majorized_by_x: bool,
    pub sums_equal: bool,
    /// Ascending prefix sums `(x, y)` for each prefix length.
    pub partial_sums: Vec<(f64, f64)>,
}

fn ascending_prefix_sums(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// Compares `x` and `y` under majorization. Unequal totals make both
/// relations false rather than an error.
pub fn check_majorization(x: &[f64], y: &[f64]) -> Result<MajorizationResult> {
    if x.len() != y.len() {
        return Err(Error::VectorLength {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::VectorLength { left: 0, right: 0 });
    }
    let px = ascending_prefix_sums(x);
    let py = ascending_prefix_sums(y);
    let n = px.len();
    let sums_equal = (px[n - 1] - py[n - 1]).abs() <= MAJORIZATION_TOL;
    let mut x_by_y = sums_equal;
    let mut y_by_x = sums_equal;
    for k in 0..n - 1 {
        if px[k] < py[k] - MAJORIZATION_TOL {
            x_by_y = false;
        }
        if py[k] < px[k] - MAJORIZATION_TOL {
            y_by_x = false;
        }
    }
    Ok(MajorizationResult {
        x_majorized_by_y: x_by_y,
        y_majorized_by_x: y_by_x,
        sums_equal,
        partial_sums: px.into_iter().zip(py).collect(),
    })
}

/// Ordered cones of non-negative vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Cone {
    /// Non-negative and nondecreasing.
    EPlus,
    /// Non-negative and nonincreasing.
    DPlus,
}

impl Cone {
    pub fn label(self) -> &'static str {
        match self {
            Cone::EPlus => "E+",
            Cone::DPlus => "D+",
        }
    }
}

pub fn check_cone_membership(v: &[f64], cone: Cone) -> bool {
    if v.iter().any(|&x| !(x >= 0.0)) {
        return false;
    }
    v.windows(2).all(|w| match cone {
        Cone::EPlus => w[0] <= w[1],
        Cone::DPlus => w[0] >= w[1],
    })
}
