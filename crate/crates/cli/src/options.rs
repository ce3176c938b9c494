use clap::Args;
use stochorder::analysis::{CheckConfig, Grid, Spacing, DEFAULT_POINTS};
use stochorder::scenarios::{catalog_scenario, load_scenario, Scenario};
use stochorder::{Error, FiniteMixture, Result, WeightPolicy};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Args, Debug, Clone)]
pub struct GridOpts {
    /// Explicit grid `lo:hi:n`, replacing the automatic one.
    #[arg(long, value_name = "LO:HI:N")]
    pub grid: Option<String>,
    /// Logarithmic instead of linear spacing.
    #[arg(long)]
    pub log_grid: bool,
    /// Points of the automatic grids.
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub points: usize,
    /// Weight policy override: strict or autonorm.
    #[arg(long)]
    pub policy: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct CheckOpts {
    /// Tolerance for every order (absolute for st, relative otherwise).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Denominator floor for ratios and reversed hazard rates.
    #[arg(long = "rh-floor", default_value = "1e-12")]
    pub rh_floor: f64,
}

impl CheckOpts {
    pub fn config(&self) -> Result<CheckConfig> {
        if let Some(t) = self.tol {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::Validation(format!("--tol must be a non-negative number, got {t}")));
            }
        }
        if !(self.rh_floor.is_finite() && self.rh_floor >= 0.0) {
            return Err(Error::Validation(format!(
                "--rh-floor must be a non-negative number, got {}",
                self.rh_floor
            )));
        }
        Ok(CheckConfig {
            tol: self.tol,
            floor: self.rh_floor,
        })
    }
}

impl GridOpts {
    pub fn spacing(&self) -> Spacing {
        if self.log_grid {
            Spacing::Logarithmic
        } else {
            Spacing::Linear
        }
    }

    pub fn policy(&self) -> Result<Option<WeightPolicy>> {
        self.policy
            .as_deref()
            .map(|p| {
                WeightPolicy::from_id(p)
                    .ok_or_else(|| Error::Validation(format!("--policy must be strict or autonorm, got `{p}`")))
            })
            .transpose()
    }

    /// Explicit grid when given.
    pub fn explicit(&self) -> Result<Option<Grid>> {
        self.grid.as_deref().map(|g| Grid::parse(g, self.spacing())).transpose()
    }

    /// Explicit grid, or the automatic one for the pair raised to `x_min`.
    pub fn resolve(&self, u: &FiniteMixture, v: &FiniteMixture, x_min: Option<f64>) -> Result<Grid> {
        if let Some(g) = self.explicit()? {
            return Ok(g);
        }
        let mut g = Grid::auto(u, v, self.points)?;
        if let Some(x) = x_min {
            g = g.with_lower_bound(x)?;
        }
        if self.log_grid {
            g = Grid::new(g.x_lo, g.x_hi, g.n_points, Spacing::Logarithmic)?;
        }
        Ok(g)
    }
}

/// Loads a scenario from a catalog id or a file path.
pub fn resolve_scenario(arg: &str, policy: Option<WeightPolicy>) -> Result<Scenario> {
    let path = std::path::Path::new(arg);
    let s = if path.is_file() || arg.ends_with(".json") {
        load_scenario(path)?
    } else {
        catalog_scenario(arg)?
    };
    match policy {
        Some(p) => s.with_policy(p),
        None => Ok(s),
    }
}
