//! Sufficient conditions of the ordering theorems, evaluated item by item.

mod hypotheses;
mod majorization;
mod theorems;

pub use hypotheses::{check_logpdf_slope_increasing, check_t_logpdf_slope_decreasing, check_t_rhr_decreasing};
pub use majorization::{check_cone_membership, check_majorization, Cone, MajorizationResult, MAJORIZATION_TOL};
pub use theorems::{
    eval_theorem_3_1, eval_theorem_3_2, eval_theorem_3_3, eval_theorem_3_4, eval_theorem_4_1, eval_theorem_4_2,
    eval_theorem_4_3, product_sides, ConditionItem, ConditionReport, Prediction, ProductSides, TheoremId,
};
