//! Finite mixtures of ELS components and the two-subpopulation outlier model.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::baseline::DEFAULT_FLOOR;
use crate::els::ElsComponent;
use crate::error::{Error, Result};
use crate::numeric::{bisect, compensated_sum, CompensatedSum};

/// Tolerance on `|sum(r) - 1|` under [`WeightPolicy::StrictUnit`].
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Absolute x-tolerance for quantile bisection.
pub const QUANTILE_TOL: f64 = 1e-10;

/// How mixing weights that do not sum to one are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum WeightPolicy {
    /// Weights must sum to 1 within [`WEIGHT_SUM_TOL`].
    #[default]
    #[serde(rename = "strict")]
    StrictUnit,
    /// Weights are divided by their sum; the raw sum is kept.
    #[serde(rename = "autonorm")]
    AutoNormalize,
}

impl WeightPolicy {
    pub fn id(self) -> &'static str {
        match self {
            WeightPolicy::StrictUnit => "strict",
            WeightPolicy::AutoNormalize => "autonorm",
        }
    }

    pub fn from_id(id: &str) -> Option<WeightPolicy> {
        match id {
            "strict" => Some(WeightPolicy::StrictUnit),
            "autonorm" => Some(WeightPolicy::AutoNormalize),
            _ => None,
        }
    }
}

impl fmt::Display for WeightPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Weighted list of ELS components.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMixture {
    components: Vec<ElsComponent>,
    weights: Vec<f64>,
    raw_weights: Vec<f64>,
    policy: WeightPolicy,
    raw_sum: f64,
}

impl FiniteMixture {
    pub fn new(components: Vec<ElsComponent>, weights: Vec<f64>, policy: WeightPolicy) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyMixture);
        }
        if components.len() != weights.len() {
            return Err(Error::LengthMismatch {
                weights: weights.len(),
                components: components.len(),
            });
        }
        for &w in &weights {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "weight",
                    value: w,
                    reason: "mixing weights must be finite and strictly positive",
                });
            }
        }
        let raw_sum = compensated_sum(weights.iter().copied());
        let normalized = match policy {
            WeightPolicy::StrictUnit => {
                if (raw_sum - 1.0).abs() > WEIGHT_SUM_TOL {
                    return Err(Error::WeightSum { sum: raw_sum });
                }
                weights.clone()
            }
            WeightPolicy::AutoNormalize => weights.iter().map(|w| w / raw_sum).collect(),
        };
        Ok(FiniteMixture {
            components,
            weights: normalized,
            raw_weights: weights,
            policy,
            raw_sum,
        })
    }

    /// Single-component mixture with weight 1.
    pub fn single(component: ElsComponent) -> Self {
        FiniteMixture {
            components: vec![component],
            weights: vec![1.0],
            raw_weights: vec![1.0],
            policy: WeightPolicy::StrictUnit,
            raw_sum: 1.0,
        }
    }

    pub fn components(&self) -> &[ElsComponent] {
        &self.components
    }

    /// Effective (normalized) weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weights as supplied, before any normalization.
    pub fn raw_weights(&self) -> &[f64] {
        &self.raw_weights
    }

    pub fn policy(&self) -> WeightPolicy {
        self.policy
    }

    pub fn raw_sum(&self) -> f64 {
        self.raw_sum
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.alpha()).collect()
    }

    pub fn sigmas(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.sigma()).collect()
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.lambda()).collect()
    }

    /// Warnings worth surfacing to a user, such as rescaled weights.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.policy == WeightPolicy::AutoNormalize && (self.raw_sum - 1.0).abs() > WEIGHT_SUM_TOL {
            out.push(format!(
                "mixing weights rescaled from raw sum {} to 1",
                self.raw_sum
            ));
        }
        if self.components.iter().any(|c| c.has_negative_location()) {
            out.push("a component has a negative location parameter".to_string());
        }
        out
    }

    /// Smallest component support start.
    pub fn min_support(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.support_start())
            .fold(f64::INFINITY, f64::min)
    }

    /// Sorted, deduplicated component support starts.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.components.iter().map(|c| c.support_start()).collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    fn weighted<F: Fn(&ElsComponent) -> f64>(&self, f: F) -> f64 {
        let mut acc = CompensatedSum::new();
        for (c, w) in self.components.iter().zip(&self.weights) {
            acc.add(w * f(c));
        }
        acc.value()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.weighted(|c| c.cdf(x))
    }

    /// Survival function. Summed from component survival functions so the
    /// upper tail keeps its relative precision.
    pub fn sf(&self, x: f64) -> f64 {
        self.weighted(|c| c.sf(x))
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.weighted(|c| c.pdf(x))
    }

    /// Density derivative. Components whose support has not started contribute 0.
    pub fn pdf_derivative(&self, x: f64) -> Result<f64> {
        let mut acc = CompensatedSum::new();
        for (c, w) in self.components.iter().zip(&self.weights) {
            if x > c.support_start() {
                acc.add(w * c.pdf_derivative(x)?);
            }
        }
        Ok(acc.value())
    }

    /// Reversed hazard rate with the default floor.
    pub fn rhr(&self, x: f64) -> Result<f64> {
        self.rhr_with_floor(x, DEFAULT_FLOOR)
    }

    /// `pdf / cdf`; fails when the CDF is at or below `floor`.
    pub fn rhr_with_floor(&self, x: f64, floor: f64) -> Result<f64> {
        let big_f = self.cdf(x);
        if !(big_f > floor) {
            return Err(Error::UndefinedPoint {
                x,
                value: big_f,
                floor,
            });
        }
        Ok(self.pdf(x) / big_f)
    }

    /// Smallest `x` with `cdf(x) >= p`, by bisection to [`QUANTILE_TOL`].
    pub fn quantile(&self, p: f64) -> f64 {
        let lo = self.min_support();
        if p <= 0.0 {
            return lo;
        }
        // every component at or above p implies the mixture is too
        let hi = self
            .components
            .iter()
            .map(|c| c.quantile(p, QUANTILE_TOL))
            .fold(lo, f64::max);
        bisect(|x| self.cdf(x) >= p, lo, hi, QUANTILE_TOL)
    }

    /// Integrates the density over `(min support, 1 - 1e-10 quantile)`.
    pub fn verify_normalization(&self, tol: f64) -> Result<NormalizationReport> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "tol",
                value: tol,
                reason: "tolerance must be positive",
            });
        }
        let lower = self.min_support();
        let upper = self.quantile(1.0 - 1e-10);
        let integral = self.integrate_pdf(upper)?;
        Ok(NormalizationReport {
            integral,
            lower,
            upper,
            tol,
            passed: (integral - 1.0).abs() <= tol,
        })
    }

    /// Density integral from the smallest support start to `upper`, summed
    /// component by component.
    pub fn integrate_pdf(&self, upper: f64) -> Result<f64> {
        let mut total = CompensatedSum::new();
        let mut failed = false;
        for (c, w) in self.components.iter().zip(&self.weights) {
            match c.integrate_pdf(upper) {
                Ok(v) => total.add(w * v),
                Err(Error::Quadrature { estimate }) => {
                    failed = true;
                    total.add(w * estimate);
                }
                Err(e) => return Err(e),
            }
        }
        if failed {
            Err(Error::Quadrature {
                estimate: total.value(),
            })
        } else {
            Ok(total.value())
        }
    }

    /// Stable hexadecimal digest of the mixture definition.
    pub fn fingerprint(&self) -> String {
        format!("{:016x}", fnv1a(self.canonical().as_bytes()))
    }

    /// Canonical text for the mixture; equal mixtures give equal text.
    pub fn canonical(&self) -> String {
        let mut s = format!("policy={};", self.policy);
        for (c, w) in self.components.iter().zip(&self.raw_weights) {
            s.push_str(&format!(
                "{}|w={:e}|a={:e}|s={:e}|l={:e};",
                c.baseline().canonical(),
                w,
                c.alpha(),
                c.sigma(),
                c.lambda()
            ));
        }
        s
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Outcome of [`FiniteMixture::verify_normalization`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizationReport {
    pub integral: f64,
    pub lower: f64,
    pub upper: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Two homogeneous subpopulations of sizes `n1` and `n2` with per-unit
/// proportions `r1` and `r2`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutlierMixtureSpec {
    pub n1: u32,
    pub r1: f64,
    pub n2: u32,
    pub r2: f64,
    pub comp1: ElsComponent,
    pub comp2: ElsComponent,
}

impl OutlierMixtureSpec {
    /// Collapsed weights `(n1 r1, n2 r2)` before any normalization.
    pub fn collapsed_weights(&self) -> (f64, f64) {
        (f64::from(self.n1) * self.r1, f64::from(self.n2) * self.r2)
    }
}

/// Collapses the outlier model to a two-term mixture with weights `(n1 r1, n2 r2)`.
pub fn build_outlier_mixture(spec: &OutlierMixtureSpec, policy: WeightPolicy) -> Result<FiniteMixture> {
    if spec.n1 == 0 || spec.n2 == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: 0.0,
            reason: "subsample sizes must be positive",
        });
    }
    let (w1, w2) = spec.collapsed_weights();
    FiniteMixture::new(vec![spec.comp1.clone(), spec.comp2.clone()], vec![w1, w2], policy)
}
