//! Monotonicity hypotheses on the baseline distribution.

use crate::analysis::{classify_monotonicity, Grid, MonotonicityVerdict, DEFAULT_REL_TOL};
use crate::baseline::{BaselineModel, DEFAULT_FLOOR};
use crate::error::{Error, Result};

fn classify(model: &BaselineModel, grid: &Grid, f: impl Fn(f64) -> Option<f64>) -> Result<MonotonicityVerdict> {
    let c = model.support_low();
    let samples: Vec<(f64, f64)> = grid
        .points()
        .into_iter()
        .filter(|&t| t > c)
        .filter_map(|t| f(t).filter(|v| v.is_finite()).map(|v| (t, v)))
        .collect();
    if samples.len() < 3 {
        return Err(Error::InsufficientDomain { usable: samples.len() });
    }
    classify_monotonicity(&samples, DEFAULT_REL_TOL)
}

/// Classifies `t h(t)` with `h = f / F`.
pub fn check_t_rhr_decreasing(model: &BaselineModel, grid: &Grid) -> Result<MonotonicityVerdict> {
    classify(model, grid, |t| model.rhr_with_floor(t, DEFAULT_FLOOR).ok().map(|h| t * h))
}

/// Classifies `t f'(t) / f(t)`.
pub fn check_t_logpdf_slope_decreasing(model: &BaselineModel, grid: &Grid) -> Result<MonotonicityVerdict> {
    classify(model, grid, |t| {
        (model.pdf(t) > 0.0).then(|| model.score(t).ok().map(|s| t * s)).flatten()
    })
}

/// Classifies `f'(t) / f(t)`.
pub fn check_logpdf_slope_increasing(model: &BaselineModel, grid: &Grid) -> Result<MonotonicityVerdict> {
    classify(model, grid, |t| (model.pdf(t) > 0.0).then(|| model.score(t).ok()).flatten())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{Monotonicity, DEFAULT_POINTS};

    fn grid(m: &BaselineModel) -> Grid {
        Grid::for_baseline(m, DEFAULT_POINTS).unwrap()
    }

    #[test]
    fn t_rhr_decreasing_for_catalog_baselines() {
        for m in [
            BaselineModel::lt_exponential(2.0, 2.0).unwrap(),
            BaselineModel::lt_burr12(5.0, 1.5, 2.0).unwrap(),
            BaselineModel::lt_lomax(5.0, 6.0).unwrap(),
        ] {
            let v = check_t_rhr_decreasing(&m, &grid(&m)).unwrap();
            assert_eq!(v.classification, Monotonicity::NonIncreasing, "{m}");
        }
    }

    #[test]
    fn t_rhr_linear_growth_is_nondecreasing() {
        // F(t) = t / 10 on (0, 10): h(t) = 1/t, so t h(t) = 1; with F = (t/10)^2, t h = 2.
        // Using F = exp(t - 10) on (0, 10] via a fine table gives h = 1 and t h = t.
        let pts: Vec<(f64, f64)> = (0..=400)
            .map(|i| {
                let t = i as f64 * 0.025;
                (t, if i == 0 { 0.0 } else { (t - 10.0).exp() })
            })
            .collect();
        let m = BaselineModel::tabulated(&pts).unwrap();
        let g = Grid::linear(1.0, 9.9, 200).unwrap();
        let v = check_t_rhr_decreasing(&m, &g).unwrap();
        assert_eq!(v.classification, Monotonicity::NonDecreasing);
    }

    #[test]
    fn t_score_for_lomax_and_pareto() {
        let m = BaselineModel::lt_lomax(5.0, 6.0).unwrap();
        assert_eq!(
            check_t_logpdf_slope_decreasing(&m, &grid(&m)).unwrap().classification,
            Monotonicity::NonIncreasing
        );
        let m = BaselineModel::lt_lomax(3.0, 2.0).unwrap();
        assert_eq!(
            check_t_logpdf_slope_decreasing(&m, &grid(&m)).unwrap().classification,
            Monotonicity::NonIncreasing
        );
        let p = BaselineModel::pareto(3.0, 5.0).unwrap();
        assert_eq!(
            check_t_logpdf_slope_decreasing(&p, &grid(&p)).unwrap().classification,
            Monotonicity::Constant
        );
    }

    #[test]
    fn score_increasing() {
        let m = BaselineModel::loglogistic(0.9).unwrap();
        let g = Grid::linear(1e-3, 100.0, DEFAULT_POINTS).unwrap();
        assert_eq!(
            check_logpdf_slope_increasing(&m, &g).unwrap().classification,
            Monotonicity::NonDecreasing
        );
        let m = BaselineModel::loglogistic(4.0).unwrap();
        assert!(!check_logpdf_slope_increasing(&m, &grid(&m)).unwrap().classification.is_nondecreasing());
        let p = BaselineModel::pareto(3.0, 5.0).unwrap();
        assert_eq!(
            check_logpdf_slope_increasing(&p, &grid(&p)).unwrap().classification,
            Monotonicity::NonDecreasing
        );
    }
}
