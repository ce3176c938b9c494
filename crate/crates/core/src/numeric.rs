//! Small numerical helpers shared by the evaluation modules.

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of an iterator of values.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().collect::<CompensatedSum>().value()
}

/// Step used by every central-difference derivative in the crate.
pub fn difference_step(t: f64) -> f64 {
    1e-5 * t.abs().max(1.0)
}

/// Central difference of `f` at `t`, falling back to a forward difference
/// when the left stencil point would not exceed `lower`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, t: f64, lower: f64) -> f64 {
    let h = difference_step(t);
    if t - h > lower {
        (f(t + h) - f(t - h)) / (2.0 * h)
    } else {
        (f(t + h) - f(t)) / h
    }
}

/// Bisection for the smallest `x` in `[lo, hi]` with `pred(x)` true, assuming
/// `pred` is monotone (false then true). Stops when the bracket is narrower than
/// `tol` or cannot shrink further in floating point.
pub fn bisect<P: Fn(f64) -> bool>(pred: P, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    for _ in 0..400 {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Format with 17 significant digits in scientific notation. Non-finite values
/// have no stable textual form and render as an empty string.
pub fn format_sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}
