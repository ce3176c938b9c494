use std::fmt;

use serde::Serialize;

use super::curves::{evaluate, Curve, Quantity};
use super::grid::Grid;
use super::monotonicity::{classify_monotonicity, Monotonicity, MonotonicityVerdict, DEFAULT_REL_TOL};
use crate::baseline::DEFAULT_FLOOR;
use crate::error::{Error, Result};
use crate::mixture::FiniteMixture;

/// Default absolute tolerance on probabilities for the usual stochastic order.
pub const DEFAULT_ST_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Order {
    #[serde(rename = "st")]
    St,
    #[serde(rename = "rh")]
    Rh,
    #[serde(rename = "lr")]
    Lr,
    #[serde(rename = "r_rh")]
    RRh,
}

impl Order {
    pub const ALL: [Order; 4] = [Order::St, Order::Rh, Order::Lr, Order::RRh];

    pub fn id(self) -> &'static str {
        match self {
            Order::St => "st",
            Order::Rh => "rh",
            Order::Lr => "lr",
            Order::RRh => "r_rh",
        }
    }

    pub fn from_id(id: &str) -> Option<Order> {
        Order::ALL.into_iter().find(|o| o.id() == id)
    }

    /// The curve each checker inspects.
    pub fn quantity(self) -> Quantity {
        match self {
            Order::St => Quantity::Sf,
            Order::Rh => Quantity::CdfRatio,
            Order::Lr => Quantity::PdfRatio,
            Order::RRh => Quantity::RhrRatio,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    #[serde(rename = "u_leq_v")]
    UleqV,
    #[serde(rename = "v_leq_u")]
    VleqU,
    #[serde(rename = "both")]
    Both,
    #[serde(rename = "neither")]
    Neither,
}

impl Direction {
    pub fn id(self) -> &'static str {
        match self {
            Direction::UleqV => "u_leq_v",
            Direction::VleqU => "v_leq_u",
            Direction::Both => "both",
            Direction::Neither => "neither",
        }
    }

    pub fn from_id(id: &str) -> Option<Direction> {
        [Direction::UleqV, Direction::VleqU, Direction::Both, Direction::Neither]
            .into_iter()
            .find(|d| d.id() == id)
    }

    /// True when this outcome establishes `wanted` (`Both` establishes either).
    pub fn establishes(self, wanted: Direction) -> bool {
        self == wanted || (self == Direction::Both && wanted != Direction::Neither)
    }

    pub fn reversed(self) -> Direction {
        match self {
            Direction::UleqV => Direction::VleqU,
            Direction::VleqU => Direction::UleqV,
            d => d,
        }
    }

    fn from_flags(u_leq_v: bool, v_leq_u: bool) -> Direction {
        match (u_leq_v, v_leq_u) {
            (true, true) => Direction::Both,
            (true, false) => Direction::UleqV,
            (false, true) => Direction::VleqU,
            (false, false) => Direction::Neither,
        }
    }

    /// Direction implied by a ratio whose increase means `U <= V`.
    fn from_increasing_ratio(m: Monotonicity) -> Direction {
        match m {
            Monotonicity::NonDecreasing => Direction::UleqV,
            Monotonicity::NonIncreasing => Direction::VleqU,
            Monotonicity::Constant => Direction::Both,
            Monotonicity::NonMonotone => Direction::Neither,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Tolerances shared by the checkers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckConfig {
    /// Overrides the per-order default tolerance when set.
    pub tol: Option<f64>,
    /// Denominator floor for ratios.
    pub floor: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            tol: None,
            floor: DEFAULT_FLOOR,
        }
    }
}

impl CheckConfig {
    pub fn with_tol(tol: f64) -> Self {
        CheckConfig {
            tol: Some(tol),
            ..CheckConfig::default()
        }
    }

    /// Absolute probability tolerance for `st`; relative monotonicity
    /// tolerance for the ratio orders.
    pub fn tol_for(&self, order: Order) -> f64 {
        self.tol.unwrap_or(match order {
            Order::St => DEFAULT_ST_TOL,
            _ => DEFAULT_REL_TOL,
        })
    }
}

/// A grid point where the checked relation fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub x: f64,
    /// Value on the U side (CDF for `st`, ratio value otherwise).
    pub u_value: f64,
    /// Value on the V side (CDF for `st`, ratio value at the next point otherwise).
    pub v_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderVerdict {
    pub order: Order,
    pub direction: Direction,
    pub range: (f64, f64),
    pub points_used: usize,
    pub tol: f64,
    pub floor: f64,
    pub witness: Option<Witness>,
    /// Ratio classification for `rh`, `lr` and `r_rh`.
    pub ratio: Option<MonotonicityVerdict>,
    /// Pointwise reversed hazard comparison for `rh`.
    pub pointwise: Option<Direction>,
    pub pointwise_agrees: Option<bool>,
    /// For `r_rh`: the direction under the reading in which a decreasing
    /// `h_U / h_V` means `U` ages faster.
    pub proof_reading: Option<Direction>,
    pub grid: Grid,
    pub grid_fingerprint: String,
    pub pair_fingerprint: String,
    #[serde(skip)]
    pub curve: Curve,
}

impl OrderVerdict {
    pub fn holds(&self, wanted: Direction) -> bool {
        self.direction.establishes(wanted)
    }

    pub fn classification(&self) -> Option<Monotonicity> {
        self.ratio.map(|r| r.classification)
    }
}

/// Digest identifying an ordered pair of mixtures.
pub fn pair_fingerprint(u: &FiniteMixture, v: &FiniteMixture) -> String {
    format!("{}-{}", u.fingerprint(), v.fingerprint())
}

fn base(order: Order, u: &FiniteMixture, v: &FiniteMixture, grid: &Grid, cfg: &CheckConfig, curve: Curve) -> OrderVerdict {
    OrderVerdict {
        order,
        direction: Direction::Neither,
        range: (grid.x_lo, grid.x_hi),
        points_used: 0,
        tol: cfg.tol_for(order),
        floor: cfg.floor,
        witness: None,
        ratio: None,
        pointwise: None,
        pointwise_agrees: None,
        proof_reading: None,
        grid: *grid,
        grid_fingerprint: grid.fingerprint(),
        pair_fingerprint: pair_fingerprint(u, v),
        curve,
    }
}

/// `U <= V` in the usual stochastic order iff `F_U >= F_V - tol` everywhere on the grid.
pub fn check_usual_stochastic(u: &FiniteMixture, v: &FiniteMixture, grid: &Grid, cfg: &CheckConfig) -> Result<OrderVerdict> {
    let xs = grid.points();
    let tol = cfg.tol_for(Order::St);
    let curve = evaluate(Quantity::Sf, u, v, &xs, cfg.floor);
    let mut out = base(Order::St, u, v, grid, cfg, curve);
    let (mut u_leq_v, mut v_leq_u) = (true, true);
    let mut first_violation = None;
    let mut first_reverse = None;
    for &x in &xs {
        let (fu, fv) = (u.cdf(x), v.cdf(x));
        if fu < fv - tol {
            u_leq_v = false;
            first_violation.get_or_insert(Witness { x, u_value: fu, v_value: fv });
        }
        if fv < fu - tol {
            v_leq_u = false;
            first_reverse.get_or_insert(Witness { x, u_value: fu, v_value: fv });
        }
    }
    out.direction = Direction::from_flags(u_leq_v, v_leq_u);
    out.points_used = xs.len();
    out.witness = match out.direction {
        Direction::UleqV | Direction::Both => None,
        Direction::VleqU | Direction::Neither => first_violation,
    };
    if out.direction == Direction::VleqU && out.witness.is_none() {
        out.witness = first_reverse;
    }
    Ok(out)
}

fn classify_ratio(order: Order, u: &FiniteMixture, v: &FiniteMixture, grid: &Grid, cfg: &CheckConfig) -> Result<OrderVerdict> {
    let xs = grid.points();
    let curve = evaluate(order.quantity(), u, v, &xs, cfg.floor);
    let samples = curve.defined(0);
    if samples.len() < 3 {
        return Err(Error::InsufficientDomain { usable: samples.len() });
    }
    let tol = cfg.tol_for(order);
    let verdict = classify_monotonicity(&samples, tol)?;
    let mut out = base(order, u, v, grid, cfg, curve);
    out.range = (samples[0].0, samples[samples.len() - 1].0);
    out.points_used = samples.len();
    out.direction = Direction::from_increasing_ratio(verdict.classification);
    out.witness = witness_for(&samples, &verdict);
    out.ratio = Some(verdict);
    Ok(out)
}

fn witness_for(samples: &[(f64, f64)], v: &MonotonicityVerdict) -> Option<Witness> {
    let x = match v.classification {
        Monotonicity::NonMonotone => match (v.witness_up, v.witness_down) {
            (Some(a), Some(b)) => Some(if v.max_up <= v.max_down { a } else { b }),
            (a, b) => a.or(b),
        },
        _ => None,
    }?;
    let i = samples.iter().position(|s| s.0 == x)?;
    let next = samples.get(i + 1)?;
    Some(Witness {
        x,
        u_value: samples[i].1,
        v_value: next.1,
    })
}

/// Reversed hazard order from the monotonicity of `F_V / F_U`, cross-checked
/// against the pointwise comparison `h_U <= h_V`.
pub fn check_reversed_hazard(u: &FiniteMixture, v: &FiniteMixture, grid: &Grid, cfg: &CheckConfig) -> Result<OrderVerdict> {
    let mut out = classify_ratio(Order::Rh, u, v, grid, cfg)?;
    let tol = cfg.tol_for(Order::Rh);
    let (mut u_leq_v, mut v_leq_u) = (true, true);
    let mut compared = 0usize;
    for (x, _) in out.curve.defined(0) {
        let (Ok(hu), Ok(hv)) = (u.rhr_with_floor(x, cfg.floor), v.rhr_with_floor(x, cfg.floor)) else {
            continue;
        };
        compared += 1;
        let slack = tol * hu.abs().max(hv.abs());
        if hu > hv + slack {
            u_leq_v = false;
        }
        if hv > hu + slack {
            v_leq_u = false;
        }
    }
    if compared > 0 {
        let pointwise = Direction::from_flags(u_leq_v, v_leq_u);
        out.pointwise = Some(pointwise);
        out.pointwise_agrees = Some(pointwise == out.direction);
    }
    Ok(out)
}

/// Likelihood ratio order from the monotonicity of `f_V / f_U`.
pub fn check_likelihood_ratio(u: &FiniteMixture, v: &FiniteMixture, grid: &Grid, cfg: &CheckConfig) -> Result<OrderVerdict> {
    classify_ratio(Order::Lr, u, v, grid, cfg)
}

/// Ageing-faster order in reversed hazard from the monotonicity of `h_U / h_V`.
///
/// `direction` treats an increasing ratio as `U <= V`; `proof_reading`
/// records the opposite convention.
pub fn check_aging_faster_rhr(u: &FiniteMixture, v: &FiniteMixture, grid: &Grid, cfg: &CheckConfig) -> Result<OrderVerdict> {
    let mut out = classify_ratio(Order::RRh, u, v, grid, cfg)?;
    out.proof_reading = Some(out.direction.reversed());
    Ok(out)
}

pub fn check_order(order: Order, u: &FiniteMixture, v: &FiniteMixture, grid: &Grid, cfg: &CheckConfig) -> Result<OrderVerdict> {
    match order {
        Order::St => check_usual_stochastic(u, v, grid, cfg),
        Order::Rh => check_reversed_hazard(u, v, grid, cfg),
        Order::Lr => check_likelihood_ratio(u, v, grid, cfg),
        Order::RRh => check_aging_faster_rhr(u, v, grid, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::BaselineModel;
    use crate::els::ElsComponent;
    use crate::mixture::WeightPolicy;

    fn pareto_mix(alphas: [f64; 3], sigmas: [f64; 3], lambdas: [f64; 3]) -> FiniteMixture {
        let b = BaselineModel::pareto(5.0, 1.0).unwrap();
        let comps = (0..3)
            .map(|i| ElsComponent::new(b.clone(), alphas[i], sigmas[i], lambdas[i]).unwrap())
            .collect();
        FiniteMixture::new(comps, vec![0.4, 0.55, 0.05], WeightPolicy::StrictUnit).unwrap()
    }

    fn ex41() -> (FiniteMixture, FiniteMixture) {
        (
            pareto_mix([5.0, 2.0, 7.0], [1.0, 2.0, 3.0], [2.0, 4.0, 6.0]),
            pareto_mix([9.0, 10.0, 8.0], [2.0, 4.0, 5.0], [6.0, 7.0, 9.0]),
        )
    }

    #[test]
    fn reflexive_for_every_order() {
        let (u, _) = ex41();
        let g = Grid::auto(&u, &u, 501).unwrap();
        for order in Order::ALL {
            let v = check_order(order, &u, &u, &g, &CheckConfig::default()).unwrap();
            assert_eq!(v.direction, Direction::Both, "{order}");
        }
    }

    #[test]
    fn st_holds_for_dominated_pair() {
        let (u, v) = ex41();
        let g = Grid::auto(&u, &v, DEFAULT_POINTS_TEST).unwrap();
        let r = check_usual_stochastic(&u, &v, &g, &CheckConfig::default()).unwrap();
        assert_eq!(r.direction, Direction::UleqV);
        assert!(r.witness.is_none());
        let back = check_usual_stochastic(&v, &u, &g, &CheckConfig::default()).unwrap();
        assert_eq!(back.direction, Direction::VleqU);
        assert!(back.witness.is_some());
    }

    const DEFAULT_POINTS_TEST: usize = 2001;

    #[test]
    fn rh_insufficient_domain() {
        let (u, v) = ex41();
        let g = Grid::linear(0.0, 3.0, 11).unwrap();
        assert!(matches!(
            check_reversed_hazard(&u, &v, &g, &CheckConfig::default()),
            Err(Error::InsufficientDomain { .. })
        ));
    }

    #[test]
    fn direction_helpers() {
        assert!(Direction::Both.establishes(Direction::UleqV));
        assert!(!Direction::Neither.establishes(Direction::UleqV));
        assert!(!Direction::Both.establishes(Direction::Neither));
        assert_eq!(Direction::UleqV.reversed(), Direction::VleqU);
        for o in Order::ALL {
            assert_eq!(Order::from_id(o.id()), Some(o));
        }
    }

    #[test]
    fn r_rh_records_both_readings() {
        let b = BaselineModel::loglogistic(0.9).unwrap();
        let c = |s, l| ElsComponent::new(b.clone(), 0.3, s, l).unwrap();
        let u = FiniteMixture::new(vec![c(6.0, 4.0), c(6.0, 6.0)], vec![0.2, 0.8], WeightPolicy::StrictUnit).unwrap();
        let v = FiniteMixture::new(vec![c(4.0, 3.0), c(4.0, 2.0)], vec![0.4, 0.6], WeightPolicy::StrictUnit).unwrap();
        let g = Grid::linear(6.0 + 1e-6, 60.0, 1001).unwrap();
        let r = check_aging_faster_rhr(&u, &v, &g, &CheckConfig::default()).unwrap();
        assert_eq!(r.classification(), Some(Monotonicity::NonIncreasing));
        assert_eq!(r.direction, Direction::VleqU);
        assert_eq!(r.proof_reading, Some(Direction::UleqV));
    }
}
