//! Exponentiated location-scale components.

use serde::Serialize;

use crate::baseline::{BaselineModel, DEFAULT_FLOOR};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::quadrature::{adaptive_simpson, integrate_left_singular, QuadratureConfig};

const QUANTILE_TOL: f64 = 1e-10;

/// Shape, location and scale of one component, without the baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElsParams {
    pub alpha: f64,
    pub sigma: f64,
    pub lambda: f64,
}

impl ElsParams {
    pub fn new(alpha: f64, sigma: f64, lambda: f64) -> Self {
        ElsParams { alpha, sigma, lambda }
    }
}

/// One subpopulation: `F^alpha((x - sigma) / lambda)` above `sigma + c * lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElsComponent {
    baseline: BaselineModel,
    params: ElsParams,
}

impl ElsComponent {
    /// Validates `alpha > 0`, `lambda > 0` and a finite `sigma`.
    /// A negative `sigma` is accepted; see [`ElsComponent::has_negative_location`].
    pub fn new(baseline: BaselineModel, alpha: f64, sigma: f64, lambda: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "must be a finite positive number",
            });
        }
        if !sigma.is_finite() {
            return Err(Error::InvalidParameter {
                name: "sigma",
                value: sigma,
                reason: "must be finite",
            });
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "must be a finite positive number",
            });
        }
        Ok(ElsComponent {
            baseline,
            params: ElsParams { alpha, sigma, lambda },
        })
    }

    pub fn from_params(baseline: BaselineModel, p: ElsParams) -> Result<Self> {
        Self::new(baseline, p.alpha, p.sigma, p.lambda)
    }

    pub fn baseline(&self) -> &BaselineModel {
        &self.baseline
    }

    pub fn params(&self) -> ElsParams {
        self.params
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha
    }

    pub fn sigma(&self) -> f64 {
        self.params.sigma
    }

    pub fn lambda(&self) -> f64 {
        self.params.lambda
    }

    /// True when the location is negative; such components are allowed but
    /// fall outside the non-negative location used by every catalog scenario.
    pub fn has_negative_location(&self) -> bool {
        self.params.sigma < 0.0
    }

    /// Support start `sigma + c * lambda`.
    pub fn support_start(&self) -> f64 {
        self.params.sigma + self.baseline.support_low() * self.params.lambda
    }

    fn standardize(&self, x: f64) -> f64 {
        (x - self.params.sigma) / self.params.lambda
    }

    /// Baseline offset `(x - support_start) / lambda`.
    fn offset(&self, x: f64) -> f64 {
        (x - self.support_start()) / self.params.lambda
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.cdf_above(x - self.support_start())
    }

    /// CDF at `support_start + d`.
    pub fn cdf_above(&self, d: f64) -> f64 {
        if d.is_nan() {
            return f64::NAN;
        }
        if d <= 0.0 {
            return 0.0;
        }
        let base = self.baseline.cdf_above(d / self.params.lambda);
        if self.params.alpha == 1.0 {
            base
        } else {
            base.powf(self.params.alpha)
        }
    }

    pub fn sf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        let d = x - self.support_start();
        if d <= 0.0 {
            return 1.0;
        }
        let s = self.baseline.sf_above(d / self.params.lambda);
        if self.params.alpha == 1.0 {
            return s;
        }
        // 1 - (1 - S)^alpha without cancellation when S is small
        -(self.params.alpha * (-s).ln_1p()).exp_m1()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.pdf_above(x - self.support_start())
    }

    /// Density at `support_start + d`.
    pub fn pdf_above(&self, d: f64) -> f64 {
        if d.is_nan() {
            return f64::NAN;
        }
        if d <= 0.0 {
            return 0.0;
        }
        let u = d / self.params.lambda;
        let f = self.baseline.pdf_above(u);
        if f == 0.0 {
            return 0.0;
        }
        let ElsParams { alpha, lambda, .. } = self.params;
        let pow = if alpha == 1.0 {
            1.0
        } else {
            self.baseline.cdf_above(u).powf(alpha - 1.0)
        };
        (alpha / lambda) * pow * f
    }

    /// Integral of the density from the support start to `upper`.
    ///
    /// Integrates in offset coordinates so that mass packed against the
    /// support start (small `alpha`) is not lost to rounding of `x`.
    pub fn integrate_pdf(&self, upper: f64) -> Result<f64> {
        let span = upper - self.support_start();
        if span <= 0.0 {
            return Ok(0.0);
        }
        let cfg = QuadratureConfig::default();
        let median = self.quantile(0.5, QUANTILE_TOL) - self.support_start();
        let mut width = (median / 8.0).max(1e-9 * span).min(span);
        let mut left = 0.0;
        let mut total = CompensatedSum::new();
        let mut failed = false;
        let mut first = true;
        while left < span {
            let right = if span - left <= 2.0 * width { span } else { left + width };
            let piece = if first {
                integrate_left_singular(|d| self.pdf_above(d), left, right, 20.0, &cfg)
            } else {
                adaptive_simpson(|d| self.pdf_above(d), left, right, &cfg)
            };
            match piece {
                Ok(v) => total.add(v),
                Err(Error::Quadrature { estimate }) => {
                    failed = true;
                    total.add(estimate);
                }
                Err(e) => return Err(e),
            }
            first = false;
            left = right;
            width *= 2.0;
        }
        if failed {
            Err(Error::Quadrature {
                estimate: total.value(),
            })
        } else {
            Ok(total.value())
        }
    }

    /// Derivative of the component density, for `x` above the support start.
    pub fn pdf_derivative(&self, x: f64) -> Result<f64> {
        self.check_domain("component density derivative", x)?;
        let t = self.standardize(x);
        let ElsParams { alpha, lambda, .. } = self.params;
        let big_f = self.baseline.cdf(t);
        let f = self.baseline.pdf(t);
        let df = self.baseline.pdf_derivative(t)?;
        if big_f == 0.0 {
            return Ok(0.0);
        }
        // d/dx [(a/l) F^{a-1} f] = (a/l^2) F^{a-2} [(a-1) f^2 + F f']
        Ok((alpha / (lambda * lambda))
            * big_f.powf(alpha - 2.0)
            * ((alpha - 1.0) * f * f + big_f * df))
    }

    /// Reversed hazard rate `(alpha/lambda) * h(t)` with the default floor.
    pub fn rhr(&self, x: f64) -> Result<f64> {
        self.rhr_with_floor(x, DEFAULT_FLOOR)
    }

    pub fn rhr_with_floor(&self, x: f64, floor: f64) -> Result<f64> {
        self.check_domain("component reversed hazard rate", x)?;
        let u = self.offset(x);
        let big_f = self.baseline.cdf_above(u);
        if big_f <= floor {
            return Err(Error::UndefinedPoint {
                x,
                value: big_f,
                floor,
            });
        }
        Ok(self.params.alpha / self.params.lambda * self.baseline.pdf_above(u) / big_f)
    }

    fn check_domain(&self, what: &'static str, x: f64) -> Result<()> {
        let s = self.support_start();
        if x.is_finite() && x > s {
            Ok(())
        } else {
            Err(Error::Domain { what, t: x, support: s })
        }
    }

    /// Smallest `x` with `cdf(x) >= p`, by bisection to absolute tolerance `tol`.
    pub fn quantile(&self, p: f64, tol: f64) -> f64 {
        // F^alpha(t) >= p  <=>  F(t) >= p^{1/alpha}
        let q = p.powf(1.0 / self.params.alpha);
        let t = self.baseline.quantile(q, tol / self.params.lambda);
        self.params.sigma + self.params.lambda * t
    }
}
