use serde::Serialize;

use super::orders::{Direction, Order, OrderVerdict};
use crate::error::{Error, Result};

/// Outcome of checking `lr => rh => st` on verdicts for one pair and grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub consistent: bool,
    pub issues: Vec<String>,
}

/// Flags any direction in which a stronger order holds while a weaker one fails.
/// Inconsistencies are reported, never corrected.
pub fn implication_audit(st: &OrderVerdict, rh: &OrderVerdict, lr: &OrderVerdict) -> Result<AuditReport> {
    for (v, want) in [(st, Order::St), (rh, Order::Rh), (lr, Order::Lr)] {
        if v.order != want {
            return Err(Error::Audit(format!("expected a {want} verdict, got {}", v.order)));
        }
    }
    if st.pair_fingerprint != rh.pair_fingerprint || st.pair_fingerprint != lr.pair_fingerprint {
        return Err(Error::Audit("verdicts were computed for different mixture pairs".into()));
    }
    if st.grid_fingerprint != rh.grid_fingerprint || st.grid_fingerprint != lr.grid_fingerprint {
        return Err(Error::Audit("verdicts were computed on different grids".into()));
    }
    let mut issues = Vec::new();
    for dir in [Direction::UleqV, Direction::VleqU] {
        if lr.holds(dir) && !rh.holds(dir) {
            issues.push(format!("lr holds ({dir}) but rh does not (rh: {})", rh.direction));
        }
        if rh.holds(dir) && !st.holds(dir) {
            issues.push(format!("rh holds ({dir}) but st does not (st: {})", st.direction));
        }
    }
    Ok(AuditReport {
        consistent: issues.is_empty(),
        issues,
    })
}
