//! Grid-based verification of stochastic orders between two mixtures.

mod audit;
mod curves;
mod grid;
mod monotonicity;
mod orders;

pub use audit::{implication_audit, AuditReport};
pub use curves::{evaluate, evaluate_checked, Curve, Quantity};
pub use grid::{Grid, Spacing, AUTO_UPPER_PROB, DEFAULT_POINTS};
pub use monotonicity::{classify_monotonicity, Monotonicity, MonotonicityVerdict, DEFAULT_REL_TOL};
pub use orders::{
    check_aging_faster_rhr, check_likelihood_ratio, check_order, check_reversed_hazard,
    check_usual_stochastic, pair_fingerprint, CheckConfig, Direction, Order, OrderVerdict, Witness,
    DEFAULT_ST_TOL,
};
