use std::fmt;

use serde::Serialize;

use super::hypotheses::{check_logpdf_slope_increasing, check_t_logpdf_slope_decreasing, check_t_rhr_decreasing};
use super::majorization::{check_cone_membership, check_majorization, Cone};
use crate::analysis::{Direction, Grid, Monotonicity, MonotonicityVerdict, Order, OrderVerdict};
use crate::baseline::BaselineModel;
use crate::error::{Error, Result};
use crate::mixture::{FiniteMixture, OutlierMixtureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TheoremId {
    #[serde(rename = "T3.1")]
    T3_1,
    #[serde(rename = "T3.2")]
    T3_2,
    #[serde(rename = "T3.3")]
    T3_3,
    #[serde(rename = "T3.4")]
    T3_4,
    #[serde(rename = "T4.1")]
    T4_1,
    #[serde(rename = "T4.2")]
    T4_2,
    #[serde(rename = "T4.3")]
    T4_3,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] = [
        TheoremId::T3_1,
        TheoremId::T3_2,
        TheoremId::T3_3,
        TheoremId::T3_4,
        TheoremId::T4_1,
        TheoremId::T4_2,
        TheoremId::T4_3,
    ];

    pub fn id(self) -> &'static str {
        match self {
            TheoremId::T3_1 => "T3.1",
            TheoremId::T3_2 => "T3.2",
            TheoremId::T3_3 => "T3.3",
            TheoremId::T3_4 => "T3.4",
            TheoremId::T4_1 => "T4.1",
            TheoremId::T4_2 => "T4.2",
            TheoremId::T4_3 => "T4.3",
        }
    }

    pub fn from_id(id: &str) -> Option<TheoremId> {
        TheoremId::ALL.into_iter().find(|t| t.id() == id)
    }

    /// Multiple-outlier theorems take two outlier specifications.
    pub fn needs_outlier_specs(self) -> bool {
        matches!(self, TheoremId::T4_1 | TheoremId::T4_2 | TheoremId::T4_3)
    }

    /// Conclusion each theorem predicts for the pair `(U, V)`.
    pub fn prediction(self) -> Prediction {
        let (order, direction, ratio) = match self {
            TheoremId::T3_1 | TheoremId::T3_4 => (Order::St, Direction::UleqV, None),
            TheoremId::T3_2 | TheoremId::T4_1 => (Order::Rh, Direction::UleqV, Some(Monotonicity::NonDecreasing)),
            TheoremId::T3_3 => (Order::Lr, Direction::UleqV, Some(Monotonicity::NonDecreasing)),
            TheoremId::T4_2 => (Order::Lr, Direction::VleqU, Some(Monotonicity::NonIncreasing)),
            TheoremId::T4_3 => (Order::RRh, Direction::UleqV, Some(Monotonicity::NonIncreasing)),
        };
        Prediction {
            order,
            direction,
            ratio,
            proof_reading: order == Order::RRh,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Predicted conclusion of a theorem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction {
    pub order: Order,
    pub direction: Direction,
    /// Expected shape of the checker's ratio, when the order is ratio-based.
    pub ratio: Option<Monotonicity>,
    /// The direction refers to the reading in which a decreasing `h_U / h_V`
    /// places `U` first.
    pub proof_reading: bool,
}

impl Prediction {
    /// True when `verdict` establishes the predicted conclusion.
    pub fn is_met_by(&self, verdict: &OrderVerdict) -> bool {
        if verdict.order != self.order {
            return false;
        }
        let direction = if self.proof_reading {
            verdict.proof_reading.unwrap_or(Direction::Neither)
        } else {
            verdict.direction
        };
        direction.establishes(self.direction)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Both sides of `n1 r1 n2* s2` versus `n2 r2 n1* s1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductSides {
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub theorem: TheoremId,
    pub items: Vec<ConditionItem>,
    pub all_pass: bool,
    pub predicted: Prediction,
    /// Alternate hypothesis branch that was evaluated, when the theorem has one.
    pub branch: Option<String>,
    /// Lower end of the region where the conclusion is claimed.
    pub restriction: Option<f64>,
    pub product: Option<ProductSides>,
}

struct Builder {
    theorem: TheoremId,
    items: Vec<ConditionItem>,
    branch: Option<String>,
    restriction: Option<f64>,
    product: Option<ProductSides>,
}

impl Builder {
    fn new(theorem: TheoremId) -> Self {
        Builder {
            theorem,
            items: Vec::new(),
            branch: None,
            restriction: None,
            product: None,
        }
    }

    fn item(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.items.push(ConditionItem {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn monotone(&mut self, name: &str, verdict: Result<MonotonicityVerdict>, want_increasing: bool) {
        match verdict {
            Ok(v) => {
                let ok = if want_increasing {
                    v.classification.is_nondecreasing()
                } else {
                    v.classification.is_nonincreasing()
                };
                self.item(
                    name,
                    ok,
                    format!(
                        "{} on the baseline grid (max rise {:e}, max fall {:e})",
                        v.classification, v.max_up, v.max_down
                    ),
                );
            }
            Err(e) => self.item(name, false, format!("could not be evaluated: {e}")),
        }
    }

    fn finish(self) -> ConditionReport {
        ConditionReport {
            theorem: self.theorem,
            all_pass: self.items.iter().all(|i| i.passed),
            items: self.items,
            predicted: self.theorem.prediction(),
            branch: self.branch,
            restriction: self.restriction,
            product: self.product,
        }
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::INFINITY, f64::min)
}

fn shared_baseline<'a>(mixtures: &[&'a FiniteMixture]) -> Result<&'a BaselineModel> {
    let first = mixtures[0].components()[0].baseline();
    for m in mixtures {
        for c in m.components() {
            if c.baseline() != first {
                return Err(Error::Precondition(
                    "all components must share one baseline distribution".into(),
                ));
            }
        }
    }
    Ok(first)
}

fn equal_lengths(u: &FiniteMixture, v: &FiniteMixture) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::Precondition(format!(
            "mixtures have different numbers of components ({} vs {})",
            u.len(),
            v.len()
        )));
    }
    Ok(())
}

fn componentwise_leq(b: &mut Builder, name: &str, x: &[f64], y: &[f64]) {
    let bad: Vec<usize> = (0..x.len()).filter(|&i| !(x[i] <= y[i])).map(|i| i + 1).collect();
    let detail = if bad.is_empty() {
        format!("{} <= {} componentwise", fmt_vec(x), fmt_vec(y))
    } else {
        format!("{} vs {}: fails at i = {:?}", fmt_vec(x), fmt_vec(y), bad)
    };
    b.item(name, bad.is_empty(), detail);
}

fn max_leq_min(b: &mut Builder, name: &str, x: &[f64], y: &[f64]) {
    let (mx, my) = (max_of(x), min_of(y));
    b.item(name, mx <= my, format!("max = {mx}, min = {my}"));
}

fn cone_item(b: &mut Builder, label: &str, v: &[f64], cone: Cone) -> bool {
    let ok = check_cone_membership(v, cone);
    b.item(format!("{label} in {}", cone.label()), ok, fmt_vec(v));
    ok
}

/// Common weights; location and scale vectors all in E+ (or all in D+);
/// componentwise shape, location and scale ordering. Predicts `U <=st V`.
pub fn eval_theorem_3_1(u: &FiniteMixture, v: &FiniteMixture) -> Result<ConditionReport> {
    equal_lengths(u, v)?;
    shared_baseline(&[u, v])?;
    let mut b = Builder::new(TheoremId::T3_1);
    let common = u
        .weights()
        .iter()
        .zip(v.weights())
        .all(|(r, s)| (r - s).abs() <= 1e-12);
    b.item(
        "common mixing weights",
        common,
        format!("r = {}, s = {}", fmt_vec(u.weights()), fmt_vec(v.weights())),
    );
    let vecs = [u.sigmas(), u.lambdas(), v.sigmas(), v.lambdas()];
    let in_e = vecs.iter().all(|x| check_cone_membership(x, Cone::EPlus));
    let in_d = vecs.iter().all(|x| check_cone_membership(x, Cone::DPlus));
    let branch = if in_e || !in_d { Cone::EPlus } else { Cone::DPlus };
    b.branch = Some(branch.label().to_string());
    b.item(
        format!("sigma, lambda, mu, theta in {}", branch.label()),
        in_e || in_d,
        format!(
            "sigma = {}, lambda = {}, mu = {}, theta = {}",
            fmt_vec(&vecs[0]),
            fmt_vec(&vecs[1]),
            fmt_vec(&vecs[2]),
            fmt_vec(&vecs[3])
        ),
    );
    componentwise_leq(&mut b, "alpha_i <= beta_i", &u.alphas(), &v.alphas());
    componentwise_leq(&mut b, "sigma_i <= mu_i", &u.sigmas(), &v.sigmas());
    componentwise_leq(&mut b, "lambda_i <= theta_i", &u.lambdas(), &v.lambdas());
    Ok(b.finish())
}

/// Max/min separation of shape, location and scale plus `t h(t)` decreasing.
/// Predicts `U <=rh V` above `m1`.
pub fn eval_theorem_3_2(u: &FiniteMixture, v: &FiniteMixture, baseline_grid: &Grid) -> Result<ConditionReport> {
    equal_lengths(u, v)?;
    let base = shared_baseline(&[u, v])?;
    let mut b = Builder::new(TheoremId::T3_2);
    max_leq_min(&mut b, "max alpha <= min beta", &u.alphas(), &v.alphas());
    max_leq_min(&mut b, "max sigma <= min mu", &u.sigmas(), &v.sigmas());
    max_leq_min(&mut b, "max lambda <= min theta", &u.lambdas(), &v.lambdas());
    b.monotone("t h(t) decreasing", check_t_rhr_decreasing(base, baseline_grid), false);
    b.restriction = Some(u.min_support());
    Ok(b.finish())
}

fn common_value(values: impl Iterator<Item = f64>) -> Option<f64> {
    let v: Vec<f64> = values.collect();
    let first = *v.first()?;
    v.iter().all(|&x| x == first).then_some(first)
}

/// Common location and scale everywhere plus max alpha <= min beta.
/// Predicts `U <=lr V`.
pub fn eval_theorem_3_3(u: &FiniteMixture, v: &FiniteMixture) -> Result<ConditionReport> {
    equal_lengths(u, v)?;
    shared_baseline(&[u, v])?;
    let sigma = common_value(u.sigmas().into_iter().chain(v.sigmas()));
    let lambda = common_value(u.lambdas().into_iter().chain(v.lambdas()));
    let (Some(sigma), Some(lambda)) = (sigma, lambda) else {
        return Err(Error::Precondition(
            "T3.3 needs one location and one scale shared by every component of both mixtures".into(),
        ));
    };
    let mut b = Builder::new(TheoremId::T3_3);
    b.item(
        "common sigma and lambda",
        true,
        format!("sigma = {sigma}, lambda = {lambda}"),
    );
    max_leq_min(&mut b, "max alpha <= min beta", &u.alphas(), &v.alphas());
    b.restriction = Some(u.min_support());
    Ok(b.finish())
}

/// Cone membership of the weights and shapes, two majorizations and scalar
/// location/scale ordering. Predicts `U <=st V`.
pub fn eval_theorem_3_4(u: &FiniteMixture, v: &FiniteMixture) -> Result<ConditionReport> {
    equal_lengths(u, v)?;
    shared_baseline(&[u, v])?;
    let scalar = |m: &FiniteMixture| (common_value(m.sigmas().into_iter()), common_value(m.lambdas().into_iter()));
    let ((Some(sigma), Some(lambda)), (Some(mu), Some(theta))) = (scalar(u), scalar(v)) else {
        return Err(Error::Precondition(
            "T3.4 needs a single location and scale within each mixture".into(),
        ));
    };
    let mut b = Builder::new(TheoremId::T3_4);
    let (r, s) = (u.weights().to_vec(), v.weights().to_vec());
    let (alpha, beta) = (u.alphas(), v.alphas());
    cone_item(&mut b, "r", &r, Cone::DPlus);
    cone_item(&mut b, "s", &s, Cone::DPlus);
    cone_item(&mut b, "alpha", &alpha, Cone::EPlus);
    cone_item(&mut b, "beta", &beta, Cone::EPlus);
    let rs = check_majorization(&s, &r)?;
    b.item(
        "r majorizes s",
        rs.x_majorized_by_y,
        if rs.sums_equal {
            format!("r = {}, s = {}", fmt_vec(&r), fmt_vec(&s))
        } else {
            format!("totals differ: r = {}, s = {}", fmt_vec(&r), fmt_vec(&s))
        },
    );
    let ab = check_majorization(&beta, &alpha)?;
    b.item(
        "alpha majorizes beta",
        ab.x_majorized_by_y,
        if ab.sums_equal {
            format!("alpha = {}, beta = {}", fmt_vec(&alpha), fmt_vec(&beta))
        } else {
            format!(
                "totals differ ({} vs {}): alpha = {}, beta = {}",
                alpha.iter().sum::<f64>(),
                beta.iter().sum::<f64>(),
                fmt_vec(&alpha),
                fmt_vec(&beta)
            )
        },
    );
    b.item("sigma <= mu", sigma <= mu, format!("sigma = {sigma}, mu = {mu}"));
    b.item("lambda <= theta", lambda <= theta, format!("lambda = {lambda}, theta = {theta}"));
    b.restriction = Some(u.min_support());
    Ok(b.finish())
}

fn outlier_baseline(u: &OutlierMixtureSpec, v: &OutlierMixtureSpec) -> Result<BaselineModel> {
    let base = u.comp1.baseline();
    for c in [&u.comp2, &v.comp1, &v.comp2] {
        if c.baseline() != base {
            return Err(Error::Precondition(
                "all components must share one baseline distribution".into(),
            ));
        }
    }
    Ok(base.clone())
}

fn shared_components(u: &OutlierMixtureSpec, v: &OutlierMixtureSpec) -> Result<()> {
    if u.comp1 != v.comp1 || u.comp2 != v.comp2 {
        return Err(Error::Precondition(
            "both outlier models must use the same two subpopulations".into(),
        ));
    }
    Ok(())
}

/// `(n1 r1 n2* s2, n2 r2 n1* s1)` from the raw specification values.
pub fn product_sides(u: &OutlierMixtureSpec, v: &OutlierMixtureSpec) -> ProductSides {
    let (u1, u2) = u.collapsed_weights();
    let (v1, v2) = v.collapsed_weights();
    ProductSides {
        lhs: u1 * v2,
        rhs: u2 * v1,
    }
}

fn outlier_vectors(u: &OutlierMixtureSpec) -> [(&'static str, [f64; 2]); 3] {
    [
        ("alpha", [u.comp1.alpha(), u.comp2.alpha()]),
        ("lambda", [u.comp1.lambda(), u.comp2.lambda()]),
        ("sigma", [u.comp1.sigma(), u.comp2.sigma()]),
    ]
}

/// Shared subpopulations, shape/scale/location in E2+ with the product
/// condition `>=` (or all in D2+ with `<=`), and `t h(t)` decreasing.
/// Predicts `U <=rh U*`.
pub fn eval_theorem_4_1(u: &OutlierMixtureSpec, v: &OutlierMixtureSpec, baseline_grid: &Grid) -> Result<ConditionReport> {
    shared_components(u, v)?;
    let base = outlier_baseline(u, v)?;
    let sides = product_sides(u, v);
    let vecs = outlier_vectors(u);
    let branch_ok = |cone: Cone| {
        vecs.iter().all(|(_, x)| check_cone_membership(x, cone))
            && match cone {
                Cone::EPlus => sides.lhs >= sides.rhs,
                Cone::DPlus => sides.lhs <= sides.rhs,
            }
    };
    let cone = if !branch_ok(Cone::EPlus) && branch_ok(Cone::DPlus) {
        Cone::DPlus
    } else {
        Cone::EPlus
    };
    let mut b = Builder::new(TheoremId::T4_1);
    b.branch = Some(cone.label().to_string());
    for (label, x) in &vecs {
        cone_item(&mut b, label, x, cone);
    }
    let (op, ok) = match cone {
        Cone::EPlus => (">=", sides.lhs >= sides.rhs),
        Cone::DPlus => ("<=", sides.lhs <= sides.rhs),
    };
    b.item(
        format!("n1 r1 n2* s2 {op} n2 r2 n1* s1"),
        ok,
        format!("{} {op} {}", sides.lhs, sides.rhs),
    );
    b.monotone("t h(t) decreasing", check_t_rhr_decreasing(&base, baseline_grid), false);
    b.product = Some(sides);
    Ok(b.finish())
}

/// Shared subpopulations, shape/scale/location in E2+, both shapes at least 1,
/// the product condition `<=`, `t h(t)` and `t f'/f` decreasing.
/// Predicts `U >=lr U*`.
pub fn eval_theorem_4_2(u: &OutlierMixtureSpec, v: &OutlierMixtureSpec, baseline_grid: &Grid) -> Result<ConditionReport> {
    shared_components(u, v)?;
    let base = outlier_baseline(u, v)?;
    let sides = product_sides(u, v);
    let mut b = Builder::new(TheoremId::T4_2);
    for (label, x) in &outlier_vectors(u) {
        cone_item(&mut b, label, x, Cone::EPlus);
    }
    let (a1, a2) = (u.comp1.alpha(), u.comp2.alpha());
    b.item("alpha_1 >= 1", a1 >= 1.0, format!("alpha_1 = {a1}"));
    b.item("alpha_2 >= 1", a2 >= 1.0, format!("alpha_2 = {a2}"));
    b.item(
        "n1 r1 n2* s2 <= n2 r2 n1* s1",
        sides.lhs <= sides.rhs,
        format!("{} <= {}", sides.lhs, sides.rhs),
    );
    b.monotone("t h(t) decreasing", check_t_rhr_decreasing(&base, baseline_grid), false);
    b.monotone(
        "t f'(t)/f(t) decreasing",
        check_t_logpdf_slope_decreasing(&base, baseline_grid),
        false,
    );
    b.product = Some(sides);
    Ok(b.finish())
}

/// One shape for all four components, one location per model, `c = 0`,
/// shape in (0, 1], `sigma >= mu`, `min lambda >= max theta`, `f'/f`
/// increasing and `t h(t)` decreasing. Predicts a nonincreasing `h_U / h_V`.
pub fn eval_theorem_4_3(u: &OutlierMixtureSpec, v: &OutlierMixtureSpec, baseline_grid: &Grid) -> Result<ConditionReport> {
    let base = outlier_baseline(u, v)?;
    let comps = [&u.comp1, &u.comp2, &v.comp1, &v.comp2];
    let Some(alpha) = common_value(comps.iter().map(|c| c.alpha())) else {
        return Err(Error::Precondition("T4.3 needs one shape parameter for all four components".into()));
    };
    let (Some(sigma), Some(mu)) = (
        common_value([u.comp1.sigma(), u.comp2.sigma()].into_iter()),
        common_value([v.comp1.sigma(), v.comp2.sigma()].into_iter()),
    ) else {
        return Err(Error::Precondition("T4.3 needs one location parameter within each model".into()));
    };
    let lambda = [u.comp1.lambda(), u.comp2.lambda()];
    let theta = [v.comp1.lambda(), v.comp2.lambda()];
    let mut b = Builder::new(TheoremId::T4_3);
    let c = base.support_low();
    b.item("c = 0", c == 0.0, format!("c = {c}"));
    b.item("alpha in (0, 1]", alpha > 0.0 && alpha <= 1.0, format!("alpha = {alpha}"));
    b.item("sigma >= mu", sigma >= mu, format!("sigma = {sigma}, mu = {mu}"));
    max_leq_min(&mut b, "min lambda >= max theta", &theta, &lambda);
    b.monotone("f'(t)/f(t) increasing", check_logpdf_slope_increasing(&base, baseline_grid), true);
    b.monotone("t h(t) decreasing", check_t_rhr_decreasing(&base, baseline_grid), false);
    Ok(b.finish())
}
