//! Baseline distribution families.
//!
//! Every family exposes a CDF, density, density derivative and the support
//! lower bound `c`. Left-truncated families renormalize the base survival
//! function by its value at the truncation point.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{central_difference, difference_step};

/// Denominator floor used when no explicit floor is supplied.
pub const DEFAULT_FLOOR: f64 = 1e-12;

/// Family identifiers as they appear in scenario files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Pareto,
    LtExponential,
    Benktander2,
    LtBurr12,
    LtLomax,
    Loglogistic,
    Tabulated,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 7] = [
        FamilyKind::Pareto,
        FamilyKind::LtExponential,
        FamilyKind::Benktander2,
        FamilyKind::LtBurr12,
        FamilyKind::LtLomax,
        FamilyKind::Loglogistic,
        FamilyKind::Tabulated,
    ];

    pub fn id(self) -> &'static str {
        match self {
            FamilyKind::Pareto => "pareto",
            FamilyKind::LtExponential => "lt_exponential",
            FamilyKind::Benktander2 => "benktander2",
            FamilyKind::LtBurr12 => "lt_burr12",
            FamilyKind::LtLomax => "lt_lomax",
            FamilyKind::Loglogistic => "loglogistic",
            FamilyKind::Tabulated => "tabulated",
        }
    }

    pub fn from_id(id: &str) -> Option<FamilyKind> {
        FamilyKind::ALL.into_iter().find(|k| k.id() == id)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Family together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Shape `a`, scale `k`; support starts at `k`.
    Pareto { a: f64, k: f64 },
    /// Exponential with scale `b`, left-truncated at `t0`.
    LtExponential { b: f64, t0: f64 },
    /// Benktander type II with `a > 0`, `0 < b < 1`; support starts at 1.
    Benktander2 { a: f64, b: f64 },
    /// Burr XII survival `(1 + t^m)^(-k)`, left-truncated at `t0`.
    LtBurr12 { k: f64, m: f64, t0: f64 },
    /// Lomax survival `(1 + t)^(-m)`, left-truncated at `t0`.
    LtLomax { m: f64, t0: f64 },
    /// Log-logistic `t^b / (1 + t^b)`; support starts at 0.
    Loglogistic { b: f64 },
    /// Monotone cubic interpolation through user-supplied `(t, F)` knots.
    Tabulated(Arc<Table>),
}

/// Knots and PCHIP slopes of a tabulated CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    t: Vec<f64>,
    f: Vec<f64>,
    slope: Vec<f64>,
}

impl Table {
    /// Builds the interpolant. Abscissae must be strictly increasing, CDF
    /// values nondecreasing, starting at 0 and ending at 1.
    pub fn new(points: &[(f64, f64)]) -> Result<Table> {
        if points.len() < 2 {
            return Err(Error::InvalidTable(format!(
                "need at least 2 knots, got {}",
                points.len()
            )));
        }
        for (i, &(t, f)) in points.iter().enumerate() {
            if !t.is_finite() || !f.is_finite() {
                return Err(Error::InvalidTable(format!("non-finite knot at index {i}")));
            }
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::InvalidTable(format!(
                    "CDF value {f} at index {i} outside [0, 1]"
                )));
            }
        }
        for (i, w) in points.windows(2).enumerate() {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidTable(format!(
                    "abscissae not strictly increasing at index {}",
                    i + 1
                )));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::InvalidTable(format!(
                    "CDF values decrease at index {}",
                    i + 1
                )));
            }
        }
        if points[0].1 != 0.0 {
            return Err(Error::InvalidTable("first CDF value must be 0".into()));
        }
        if points[points.len() - 1].1 != 1.0 {
            return Err(Error::InvalidTable("last CDF value must be 1".into()));
        }
        if points[0].0 < 0.0 {
            return Err(Error::InvalidTable("support must start at t >= 0".into()));
        }
        let t: Vec<f64> = points.iter().map(|p| p.0).collect();
        let f: Vec<f64> = points.iter().map(|p| p.1).collect();
        let slope = pchip_slopes(&t, &f);
        Ok(Table { t, f, slope })
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.t.iter().copied().zip(self.f.iter().copied())
    }

    fn start(&self) -> f64 {
        self.t[0]
    }

    fn end(&self) -> f64 {
        self.t[self.t.len() - 1]
    }

    fn segment(&self, t: f64) -> usize {
        let i = self.t.partition_point(|&k| k <= t);
        i.saturating_sub(1).min(self.t.len() - 2)
    }

    fn cdf(&self, t: f64) -> f64 {
        if t <= self.start() {
            return 0.0;
        }
        if t >= self.end() {
            return 1.0;
        }
        let i = self.segment(t);
        let h = self.t[i + 1] - self.t[i];
        let s = (t - self.t[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let v = h00 * self.f[i]
            + h10 * h * self.slope[i]
            + h01 * self.f[i + 1]
            + h11 * h * self.slope[i + 1];
        v.clamp(0.0, 1.0)
    }

    fn pdf(&self, t: f64) -> f64 {
        if t <= self.start() || t >= self.end() {
            return 0.0;
        }
        let i = self.segment(t);
        let h = self.t[i + 1] - self.t[i];
        let s = (t - self.t[i]) / h;
        let s2 = s * s;
        let d00 = (6.0 * s2 - 6.0 * s) / h;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = (-6.0 * s2 + 6.0 * s) / h;
        let d11 = 3.0 * s2 - 2.0 * s;
        let v = d00 * self.f[i]
            + d10 * self.slope[i]
            + d01 * self.f[i + 1]
            + d11 * self.slope[i + 1];
        v.max(0.0)
    }
}

/// Fritsch-Carlson slopes with the shape-preserving three-point end rule.
fn pchip_slopes(t: &[f64], f: &[f64]) -> Vec<f64> {
    let n = t.len();
    let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (f[i + 1] - f[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    if n == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }
    for k in 1..n - 1 {
        let (d0, d1) = (delta[k - 1], delta[k]);
        if d0 == 0.0 || d1 == 0.0 || (d0 > 0.0) != (d1 > 0.0) {
            d[k] = 0.0;
        } else {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / d0 + w2 / d1);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() || m0 == 0.0 {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

/// A validated baseline distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineModel {
    family: Family,
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be a finite positive number",
        })
    }
}

fn nonnegative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be a finite non-negative number",
        })
    }
}

impl BaselineModel {
    pub fn new(family: Family) -> Result<Self> {
        match &family {
            Family::Pareto { a, k } => {
                positive("a", *a)?;
                positive("k", *k)?;
            }
            Family::LtExponential { b, t0 } => {
                positive("b", *b)?;
                nonnegative("t0", *t0)?;
            }
            Family::Benktander2 { a, b } => {
                positive("a", *a)?;
                positive("b", *b)?;
                if *b >= 1.0 {
                    return Err(Error::InvalidParameter {
                        name: "b",
                        value: *b,
                        reason: "Benktander type II requires 0 < b < 1",
                    });
                }
            }
            Family::LtBurr12 { k, m, t0 } => {
                positive("k", *k)?;
                positive("m", *m)?;
                nonnegative("t0", *t0)?;
            }
            Family::LtLomax { m, t0 } => {
                positive("m", *m)?;
                nonnegative("t0", *t0)?;
            }
            Family::Loglogistic { b } => {
                positive("b", *b)?;
            }
            Family::Tabulated(_) => {}
        }
        Ok(BaselineModel { family })
    }

    pub fn pareto(a: f64, k: f64) -> Result<Self> {
        Self::new(Family::Pareto { a, k })
    }

    pub fn lt_exponential(b: f64, t0: f64) -> Result<Self> {
        Self::new(Family::LtExponential { b, t0 })
    }

    pub fn benktander2(a: f64, b: f64) -> Result<Self> {
        Self::new(Family::Benktander2 { a, b })
    }

    pub fn lt_burr12(k: f64, m: f64, t0: f64) -> Result<Self> {
        Self::new(Family::LtBurr12 { k, m, t0 })
    }

    pub fn lt_lomax(m: f64, t0: f64) -> Result<Self> {
        Self::new(Family::LtLomax { m, t0 })
    }

    pub fn loglogistic(b: f64) -> Result<Self> {
        Self::new(Family::Loglogistic { b })
    }

    pub fn tabulated(points: &[(f64, f64)]) -> Result<Self> {
        Ok(BaselineModel {
            family: Family::Tabulated(Arc::new(Table::new(points)?)),
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn kind(&self) -> FamilyKind {
        match self.family {
            Family::Pareto { .. } => FamilyKind::Pareto,
            Family::LtExponential { .. } => FamilyKind::LtExponential,
            Family::Benktander2 { .. } => FamilyKind::Benktander2,
            Family::LtBurr12 { .. } => FamilyKind::LtBurr12,
            Family::LtLomax { .. } => FamilyKind::LtLomax,
            Family::Loglogistic { .. } => FamilyKind::Loglogistic,
            Family::Tabulated(_) => FamilyKind::Tabulated,
        }
    }

    /// Lower bound `c` of the support.
    pub fn support_low(&self) -> f64 {
        match &self.family {
            Family::Pareto { k, .. } => *k,
            Family::LtExponential { t0, .. } => *t0,
            Family::Benktander2 { .. } => 1.0,
            Family::LtBurr12 { t0, .. } => *t0,
            Family::LtLomax { t0, .. } => *t0,
            Family::Loglogistic { .. } => 0.0,
            Family::Tabulated(table) => table.start(),
        }
    }

    pub fn has_analytic_derivative(&self) -> bool {
        !matches!(self.family, Family::Tabulated(_))
    }

    /// Named parameters in declaration order. Tabulated baselines report none.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match &self.family {
            Family::Pareto { a, k } => vec![("a", *a), ("k", *k)],
            Family::LtExponential { b, t0 } => vec![("b", *b), ("t0", *t0)],
            Family::Benktander2 { a, b } => vec![("a", *a), ("b", *b)],
            Family::LtBurr12 { k, m, t0 } => vec![("k", *k), ("m", *m), ("t0", *t0)],
            Family::LtLomax { m, t0 } => vec![("m", *m), ("t0", *t0)],
            Family::Loglogistic { b } => vec![("b", *b)],
            Family::Tabulated(_) => Vec::new(),
        }
    }

    /// `ln S(c + d)` for `d > 0`. Working from the offset keeps full relative
    /// precision of `F` just above the support start.
    fn log_sf_above(&self, d: f64) -> f64 {
        match &self.family {
            Family::Pareto { a, k } => -a * (d / k).ln_1p(),
            Family::LtExponential { b, .. } => -d / b,
            Family::Benktander2 { a, b } => {
                let lt = d.ln_1p();
                (b - 1.0) * lt - (a / b) * (b * lt).exp_m1()
            }
            Family::LtBurr12 { k, m, t0 } => {
                // t^m - t0^m, then ln((1 + t^m) / (1 + t0^m))
                let diff = if *t0 > 0.0 {
                    t0.powf(*m) * (m * (d / t0).ln_1p()).exp_m1()
                } else {
                    d.powf(*m)
                };
                -k * (diff / (1.0 + t0.powf(*m))).ln_1p()
            }
            Family::LtLomax { m, t0 } => -m * (d / (1.0 + t0)).ln_1p(),
            Family::Loglogistic { b } => -(b * d.ln()).exp().ln_1p(),
            Family::Tabulated(table) => (1.0 - table.cdf(table.start() + d)).ln(),
        }
    }

    /// Baseline CDF; 0 at and below `c`.
    pub fn cdf(&self, t: f64) -> f64 {
        if t.is_nan() {
            return f64::NAN;
        }
        self.cdf_above(t - self.support_low())
    }

    /// `F(c + d)`, evaluated from the offset `d` above the support start.
    pub fn cdf_above(&self, d: f64) -> f64 {
        if d.is_nan() {
            return f64::NAN;
        }
        if d <= 0.0 {
            return 0.0;
        }
        if d == f64::INFINITY {
            return 1.0;
        }
        let v = match &self.family {
            Family::Tabulated(table) => table.cdf(table.start() + d),
            Family::Loglogistic { b } => 1.0 / (1.0 + (-b * d.ln()).exp()),
            _ => -self.log_sf_above(d).exp_m1(),
        };
        v.clamp(0.0, 1.0)
    }

    /// Baseline survival function `1 - F`, computed without cancellation where possible.
    pub fn sf(&self, t: f64) -> f64 {
        if t.is_nan() {
            return f64::NAN;
        }
        self.sf_above(t - self.support_low())
    }

    /// `1 - F(c + d)`.
    pub fn sf_above(&self, d: f64) -> f64 {
        if d.is_nan() {
            return f64::NAN;
        }
        if d <= 0.0 {
            return 1.0;
        }
        match &self.family {
            Family::Tabulated(table) => 1.0 - table.cdf(table.start() + d),
            _ => self.log_sf_above(d).exp().clamp(0.0, 1.0),
        }
    }

    /// Baseline density; 0 at and below `c`.
    pub fn pdf(&self, t: f64) -> f64 {
        if t.is_nan() {
            return f64::NAN;
        }
        if t == f64::INFINITY {
            return 0.0;
        }
        self.pdf_above(t - self.support_low())
    }

    /// `f(c + d)`.
    pub fn pdf_above(&self, d: f64) -> f64 {
        if d.is_nan() {
            return f64::NAN;
        }
        if d <= 0.0 || d == f64::INFINITY {
            return 0.0;
        }
        let t = self.support_low() + d;
        match &self.family {
            Family::Pareto { a, k } => (a / t) * (k / t).powf(*a),
            Family::LtExponential { b, .. } => (-d / b).exp() / b,
            Family::Benktander2 { a, b } => {
                let g = (1.0 - b) / t + a * t.powf(b - 1.0);
                self.sf_above(d) * g
            }
            Family::LtBurr12 { k, m, .. } => {
                let tm = t.powf(*m);
                self.sf_above(d) * k * m * t.powf(m - 1.0) / (1.0 + tm)
            }
            Family::LtLomax { m, .. } => self.sf_above(d) * m / (1.0 + t),
            Family::Loglogistic { b } => {
                // b t^{b-1} / (1+t^b)^2 written as b F (1-F) / t to stay finite for large t
                let big_f = 1.0 / (1.0 + (-b * d.ln()).exp());
                let s = 1.0 / (1.0 + (b * d.ln()).exp());
                b * big_f * s / d
            }
            Family::Tabulated(table) => table.pdf(table.start() + d),
        }
    }

    /// `f'(t)/f(t)` for `t > c`. Analytic for the named families.
    pub fn score(&self, t: f64) -> Result<f64> {
        self.check_domain("f'/f", t)?;
        Ok(match &self.family {
            Family::Pareto { a, .. } => -(a + 1.0) / t,
            Family::LtExponential { b, .. } => -1.0 / b,
            Family::Benktander2 { a, b } => {
                let g = (1.0 - b) / t + a * t.powf(b - 1.0);
                let dg = -(1.0 - b) / (t * t) + a * (b - 1.0) * t.powf(b - 2.0);
                dg / g - g
            }
            Family::LtBurr12 { k, m, .. } => {
                let tm = t.powf(*m);
                (m - 1.0) / t - (k + 1.0) * m * t.powf(m - 1.0) / (1.0 + tm)
            }
            Family::LtLomax { m, .. } => -(m + 1.0) / (1.0 + t),
            Family::Loglogistic { b } => {
                let f = 1.0 / (1.0 + (-b * t.ln()).exp());
                // 2b t^{b-1}/(1+t^b) = 2b F / t
                (b - 1.0) / t - 2.0 * b * f / t
            }
            Family::Tabulated(_) => {
                let f = self.pdf(t);
                self.pdf_derivative(t)? / f
            }
        })
    }

    /// Density derivative `f'(t)` for `t > c`.
    pub fn pdf_derivative(&self, t: f64) -> Result<f64> {
        self.check_domain("f'", t)?;
        match &self.family {
            Family::Tabulated(_) => Ok(central_difference(|u| self.pdf(u), t, self.support_low())),
            _ => Ok(self.pdf(t) * self.score(t)?),
        }
    }

    /// Reversed hazard rate `f/F` with the default floor.
    pub fn rhr(&self, t: f64) -> Result<f64> {
        self.rhr_with_floor(t, DEFAULT_FLOOR)
    }

    /// Reversed hazard rate `f/F`. Fails when `F(t)` is at or below `floor`.
    pub fn rhr_with_floor(&self, t: f64, floor: f64) -> Result<f64> {
        self.check_domain("reversed hazard rate", t)?;
        let big_f = self.cdf(t);
        if big_f <= floor {
            return Err(Error::UndefinedPoint {
                x: t,
                value: big_f,
                floor,
            });
        }
        Ok(self.pdf(t) / big_f)
    }

    fn check_domain(&self, what: &'static str, t: f64) -> Result<()> {
        let c = self.support_low();
        if t.is_finite() && t > c {
            Ok(())
        } else {
            Err(Error::Domain { what, t, support: c })
        }
    }

    /// Smallest `t` with `F(t) >= p`, by bisection to absolute tolerance `tol`.
    pub fn quantile(&self, p: f64, tol: f64) -> f64 {
        let c = self.support_low();
        if p <= 0.0 {
            return c;
        }
        if let Family::Tabulated(table) = &self.family {
            if p >= 1.0 {
                return table.end();
            }
        }
        let mut hi = c + 1.0;
        let mut n = 0;
        while self.cdf(hi) < p && n < 2000 {
            hi = c + 2.0 * (hi - c);
            n += 1;
        }
        crate::numeric::bisect(|t| self.cdf(t) >= p, c, hi, tol)
    }

    /// Compact human-readable label, e.g. `pareto(a=5, k=1)`.
    pub fn describe(&self) -> String {
        match &self.family {
            Family::Tabulated(table) => format!("tabulated({} knots)", table.t.len()),
            _ => {
                let ps: Vec<String> = self
                    .params()
                    .iter()
                    .map(|(n, v)| format!("{n}={v}"))
                    .collect();
                format!("{}({})", self.kind(), ps.join(", "))
            }
        }
    }

    /// Canonical text that identifies the model exactly; used for fingerprints.
    pub fn canonical(&self) -> String {
        match &self.family {
            Family::Tabulated(table) => {
                let ks: Vec<String> = table
                    .knots()
                    .map(|(t, f)| format!("{:e}:{:e}", t, f))
                    .collect();
                format!("tabulated[{}]", ks.join(","))
            }
            _ => {
                let ps: Vec<String> = self
                    .params()
                    .iter()
                    .map(|(n, v)| format!("{n}={v:e}"))
                    .collect();
                format!("{}[{}]", self.kind(), ps.join(","))
            }
        }
    }

    /// Numerically checks the model invariants on `samples` seeded points.
    pub fn check_invariants(&self, seed: u64, samples: usize) -> InvariantReport {
        let c = self.support_low();
        let hi = self.quantile(1.0 - 1e-6, 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points: Vec<f64> = (0..samples)
            .map(|_| c + (hi - c) * rng.gen_range(1e-3..1.0))
            .collect();
        points.sort_by(f64::total_cmp);

        let mut report = InvariantReport {
            cdf_at_support: self.cdf(c),
            cdf_at_large: self.cdf(self.quantile(1.0 - 1e-12, 1e-10) * 2.0 + 1.0),
            monotone: true,
            nonnegative_pdf: true,
            max_rel_derivative_error: 0.0,
        };
        let mut prev = 0.0;
        for &t in &points {
            let big_f = self.cdf(t);
            if big_f < prev {
                report.monotone = false;
            }
            prev = big_f;
            let f = self.pdf(t);
            if f < 0.0 {
                report.nonnegative_pdf = false;
            }
            if self.has_analytic_derivative() || !self.near_knot(t) {
                let h = difference_step(t);
                if t - h > c && f > 1e-300 {
                    // difference whichever of F and 1 - F is small to avoid cancellation
                    let numeric = if big_f < 0.5 {
                        (self.cdf(t + h) - self.cdf(t - h)) / (2.0 * h)
                    } else {
                        (self.sf(t - h) - self.sf(t + h)) / (2.0 * h)
                    };
                    let rel = (numeric - f).abs() / f;
                    if rel > report.max_rel_derivative_error {
                        report.max_rel_derivative_error = rel;
                    }
                }
            }
        }
        report
    }

    /// True when `t` lies within one difference step of a tabulated knot.
    pub fn near_knot(&self, t: f64) -> bool {
        match &self.family {
            Family::Tabulated(table) => {
                let h = 2.0 * difference_step(t);
                table.t.iter().any(|&k| (k - t).abs() <= h)
            }
            _ => false,
        }
    }
}

impl fmt::Display for BaselineModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Outcome of [`BaselineModel::check_invariants`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantReport {
    pub cdf_at_support: f64,
    pub cdf_at_large: f64,
    pub monotone: bool,
    pub nonnegative_pdf: bool,
    pub max_rel_derivative_error: f64,
}

impl InvariantReport {
    pub fn passed(&self) -> bool {
        self.cdf_at_support == 0.0
            && (1.0 - self.cdf_at_large) < 1e-9
            && self.monotone
            && self.nonnegative_pdf
            && self.max_rel_derivative_error < 1e-6
    }
}
