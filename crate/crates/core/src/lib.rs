//! Exponentiated location-scale mixtures and stochastic order checks.

pub mod analysis;
pub mod baseline;
pub mod conditions;
pub mod els;
pub mod error;
pub mod mixture;
pub mod numeric;
pub mod quadrature;
pub mod report;
pub mod scenarios;

pub use baseline::{BaselineModel, Family, FamilyKind};
pub use conditions::{ConditionReport, TheoremId};
pub use els::{ElsComponent, ElsParams};
pub use error::{Error, Result};
pub use mixture::{build_outlier_mixture, FiniteMixture, OutlierMixtureSpec, WeightPolicy};
pub use scenarios::{builtin_catalog, run_scenario, Scenario, ScenarioRecord};
