use std::fmt;

use serde::Serialize;

use crate::baseline::BaselineModel;
use crate::error::{Error, Result};
use crate::mixture::{fnv1a, FiniteMixture};

/// Default number of grid points.
pub const DEFAULT_POINTS: usize = 2001;

/// Upper probability used to cap automatic grids.
pub const AUTO_UPPER_PROB: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Logarithmic,
}

/// Evaluation grid over `[x_lo, x_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub x_lo: f64,
    pub x_hi: f64,
    pub n_points: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn new(x_lo: f64, x_hi: f64, n_points: usize, spacing: Spacing) -> Result<Grid> {
        if !(x_lo.is_finite() && x_hi.is_finite()) {
            return Err(Error::InvalidGrid(format!("bounds must be finite, got [{x_lo}, {x_hi}]")));
        }
        if x_lo >= x_hi {
            return Err(Error::InvalidGrid(format!("x_lo = {x_lo} must be below x_hi = {x_hi}")));
        }
        if n_points < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 points, got {n_points}")));
        }
        if spacing == Spacing::Logarithmic && x_lo <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "logarithmic spacing needs x_lo > 0, got {x_lo}"
            )));
        }
        Ok(Grid {
            x_lo,
            x_hi,
            n_points,
            spacing,
        })
    }

    pub fn linear(x_lo: f64, x_hi: f64, n_points: usize) -> Result<Grid> {
        Grid::new(x_lo, x_hi, n_points, Spacing::Linear)
    }

    /// Parses `lo:hi:n`.
    pub fn parse(spec: &str, spacing: Spacing) -> Result<Grid> {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidGrid(format!("expected lo:hi:n, got `{spec}`")));
        }
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidGrid(format!("`{s}` is not a number")))
        };
        let n = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidGrid(format!("`{}` is not a point count", parts[2])))?;
        Grid::new(num(parts[0])?, num(parts[1])?, n, spacing)
    }

    /// Grid for comparing two mixtures: starts just above the later of the two
    /// smallest support starts and ends at the larger `1 - 1e-6` quantile.
    pub fn auto(u: &FiniteMixture, v: &FiniteMixture, n_points: usize) -> Result<Grid> {
        let lo = u.min_support().max(v.min_support());
        let lo = lo + 1e-9 * (1.0 + lo.abs());
        let hi = u.quantile(AUTO_UPPER_PROB).max(v.quantile(AUTO_UPPER_PROB));
        Grid::linear(lo, hi, n_points)
    }

    /// Grid over a baseline support, from just above `c` to the `1 - 1e-6` quantile.
    /// The offset from `c` keeps the divergence of `f/F` at `c` from dominating
    /// the classification scale.
    pub fn for_baseline(model: &BaselineModel, n_points: usize) -> Result<Grid> {
        let c = model.support_low();
        let lo = c + 1e-6 * (1.0 + c.abs());
        let hi = model.quantile(AUTO_UPPER_PROB, 1e-10);
        Grid::linear(lo, hi, n_points)
    }

    /// Same grid with its lower end raised to `x_min` when that is larger.
    pub fn with_lower_bound(&self, x_min: f64) -> Result<Grid> {
        if x_min <= self.x_lo {
            return Ok(*self);
        }
        Grid::new(x_min, self.x_hi, self.n_points, self.spacing)
    }

    pub fn with_points(&self, n_points: usize) -> Result<Grid> {
        Grid::new(self.x_lo, self.x_hi, n_points, self.spacing)
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.n_points;
        let last = (n - 1) as f64;
        let mut xs: Vec<f64> = match self.spacing {
            Spacing::Linear => {
                let w = self.x_hi - self.x_lo;
                (0..n).map(|i| self.x_lo + w * (i as f64 / last)).collect()
            }
            Spacing::Logarithmic => {
                let (a, b) = (self.x_lo.ln(), self.x_hi.ln());
                (0..n).map(|i| (a + (b - a) * (i as f64 / last)).exp()).collect()
            }
        };
        xs[0] = self.x_lo;
        xs[n - 1] = self.x_hi;
        xs
    }

    pub fn fingerprint(&self) -> String {
        let text = format!(
            "{:e}|{:e}|{}|{:?}",
            self.x_lo, self.x_hi, self.n_points, self.spacing
        );
        format!("{:016x}", fnv1a(text.as_bytes()))
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.spacing {
            Spacing::Linear => "",
            Spacing::Logarithmic => " (log)",
        };
        write!(f, "{}:{}:{}{}", self.x_lo, self.x_hi, self.n_points, kind)
    }
}
