use super::model::{Expected, ExpectedDirection, Scenario, ScenarioPair};
use crate::analysis::{Direction, Order};
use crate::baseline::BaselineModel;
use crate::conditions::TheoremId;
use crate::els::ElsComponent;
use crate::error::{Error, Result};
use crate::mixture::{FiniteMixture, OutlierMixtureSpec, WeightPolicy};

type Triple = [f64; 3];

struct Weighted {
    weights: Triple,
    alpha: Triple,
    sigma: Triple,
    lambda: Triple,
}

struct Block {
    n: (u32, u32),
    r: (f64, f64),
    alpha: [f64; 2],
    sigma: [f64; 2],
    lambda: [f64; 2],
    policy: WeightPolicy,
}

fn comp(b: &BaselineModel, a: f64, s: f64, l: f64) -> ElsComponent {
    ElsComponent::new(b.clone(), a, s, l).expect("catalog parameters are valid")
}

fn weighted(b: &BaselineModel, w: Weighted) -> FiniteMixture {
    let comps = (0..3).map(|i| comp(b, w.alpha[i], w.sigma[i], w.lambda[i])).collect();
    FiniteMixture::new(comps, w.weights.to_vec(), WeightPolicy::StrictUnit).expect("catalog weights sum to one")
}

fn block(b: &BaselineModel, k: &Block) -> OutlierMixtureSpec {
    OutlierMixtureSpec {
        n1: k.n.0,
        r1: k.r.0,
        n2: k.n.1,
        r2: k.r.1,
        comp1: comp(b, k.alpha[0], k.sigma[0], k.lambda[0]),
        comp2: comp(b, k.alpha[1], k.sigma[1], k.lambda[1]),
    }
}

struct Entry {
    id: &'static str,
    description: &'static str,
    figure: u32,
    theorem: TheoremId,
    order: Order,
    direction: ExpectedDirection,
    x_min: Option<f64>,
    notes: &'static [&'static str],
}

fn single(e: Entry, base: BaselineModel, u: Weighted, v: Weighted) -> Scenario {
    let pair = ScenarioPair::Mixtures {
        u: weighted(&base, u),
        v: weighted(&base, v),
    };
    finish(e, base, pair)
}

fn outlier(e: Entry, base: BaselineModel, u: Block, v: Block) -> Scenario {
    let pair = ScenarioPair::Outlier {
        u: block(&base, &u),
        v: block(&base, &v),
        policies: [u.policy, v.policy],
    };
    finish(e, base, pair)
}

fn finish(e: Entry, baseline: BaselineModel, pair: ScenarioPair) -> Scenario {
    Scenario {
        id: e.id.to_string(),
        description: e.description.to_string(),
        figure: Some(e.figure),
        baseline,
        pair,
        theorem: e.theorem,
        expected: Expected {
            order: e.order,
            direction: e.direction,
            x_min: e.x_min,
        },
        notes: e.notes.iter().map(|s| s.to_string()).collect(),
    }
}

const STRICT: WeightPolicy = WeightPolicy::StrictUnit;
const AUTO: WeightPolicy = WeightPolicy::AutoNormalize;

/// The sixteen reference scenarios, in their canonical order.
pub fn builtin_catalog() -> Vec<Scenario> {
    use ExpectedDirection::Fails;
    const NEITHER: ExpectedDirection = ExpectedDirection::Is(Direction::Neither);
    const U_LEQ_V: ExpectedDirection = ExpectedDirection::Is(Direction::UleqV);
    const V_LEQ_U: ExpectedDirection = ExpectedDirection::Is(Direction::VleqU);
    use TheoremId::*;
    let pareto = |a, k| BaselineModel::pareto(a, k).unwrap();
    let w = |weights, alpha, sigma, lambda| Weighted {
        weights,
        alpha,
        sigma,
        lambda,
    };
    let blk = |n, r, alpha, sigma, lambda, policy| Block {
        n,
        r,
        alpha,
        sigma,
        lambda,
        policy,
    };
    vec![
        single(
            Entry {
                id: "EX4.1",
                description: "Pareto baseline; componentwise ordered parameters with common weights give U <=st V",
                figure: 1,
                theorem: T3_1,
                order: Order::St,
                direction: U_LEQ_V,
                x_min: None,
                notes: &[],
            },
            pareto(5.0, 1.0),
            w([0.4, 0.55, 0.05], [5.0, 2.0, 7.0], [1.0, 2.0, 3.0], [2.0, 4.0, 6.0]),
            w([0.4, 0.55, 0.05], [9.0, 10.0, 8.0], [2.0, 4.0, 5.0], [6.0, 7.0, 9.0]),
        ),
        single(
            Entry {
                id: "CE4.1",
                description: "Pareto baseline; shape and location not componentwise ordered, survival functions cross",
                figure: 2,
                theorem: T3_1,
                order: Order::St,
                direction: Fails,
                x_min: None,
                notes: &[],
            },
            pareto(2.0, 4.0),
            w([0.1, 0.3, 0.6], [7.0, 6.0, 1.0], [2.0, 6.0, 7.0], [1.0, 5.0, 8.0]),
            w([0.1, 0.3, 0.6], [6.0, 9.0, 9.0], [4.0, 5.0, 6.0], [2.0, 3.0, 4.0]),
        ),
        single(
            Entry {
                id: "CE4.2",
                description: "Pareto baseline; the usual-stochastic setup does not extend to the reversed hazard order",
                figure: 3,
                theorem: T3_1,
                order: Order::Rh,
                direction: NEITHER,
                x_min: None,
                notes: &[],
            },
            pareto(6.0, 2.0),
            w([0.2, 0.3, 0.5], [4.0, 6.0, 5.0], [3.0, 10.0, 14.0], [1.0, 4.0, 6.0]),
            w([0.2, 0.3, 0.5], [8.0, 7.0, 11.0], [6.0, 11.0, 16.0], [2.0, 8.0, 10.0]),
        ),
        single(
            Entry {
                id: "CE4.22",
                description: "Pareto baseline; the usual-stochastic setup does not extend to the likelihood ratio order",
                figure: 4,
                theorem: T3_1,
                order: Order::Lr,
                direction: NEITHER,
                x_min: None,
                notes: &[],
            },
            pareto(3.0, 5.0),
            w([0.3, 0.2, 0.5], [2.0, 6.0, 5.0], [1.0, 2.0, 7.0], [1.0, 2.0, 5.0]),
            w([0.3, 0.2, 0.5], [6.0, 7.0, 9.0], [5.0, 7.0, 8.0], [2.0, 4.0, 6.0]),
        ),
        single(
            Entry {
                id: "EX4.2",
                description: "Truncated exponential baseline; separated parameters give an increasing CDF ratio",
                figure: 5,
                theorem: T3_2,
                order: Order::Rh,
                direction: U_LEQ_V,
                x_min: Some(5.0),
                notes: &[],
            },
            BaselineModel::lt_exponential(2.0, 2.0).unwrap(),
            w([0.3, 0.5, 0.2], [0.1, 5.0, 1.3], [2.0, 3.0, 1.0], [3.0, 5.0, 2.0]),
            w([0.85, 0.05, 0.1], [5.1, 6.0, 5.5], [5.0, 4.0, 4.5], [7.0, 5.0, 6.0]),
        ),
        single(
            Entry {
                id: "CE4.3",
                description: "Truncated exponential baseline; location and scale not separated, CDF ratio non-monotone",
                figure: 6,
                theorem: T3_2,
                order: Order::Rh,
                direction: NEITHER,
                x_min: Some(8.0),
                notes: &[],
            },
            BaselineModel::lt_exponential(5.0, 2.0).unwrap(),
            w([0.3, 0.5, 0.2], [0.1, 5.0, 1.3], [2.0, 3.0, 4.0], [3.0, 5.0, 2.0]),
            w([0.85, 0.05, 0.1], [5.1, 6.0, 5.5], [6.0, 4.0, 4.5], [1.0, 2.0, 6.0]),
        ),
        single(
            Entry {
                id: "EX4.3",
                description: "Pareto baseline; common location and scale with separated shapes give U <=lr V",
                figure: 7,
                theorem: T3_3,
                order: Order::Lr,
                direction: U_LEQ_V,
                x_min: Some(14.0),
                notes: &[],
            },
            pareto(6.0, 4.0),
            w([0.3, 0.2, 0.5], [6.0, 3.0, 5.0], [2.0; 3], [3.0; 3]),
            w([0.85, 0.05, 0.1], [7.0, 7.0, 6.0], [2.0; 3], [3.0; 3]),
        ),
        single(
            Entry {
                id: "CE4.4",
                description: "Pareto baseline; shapes not separated, PDF ratio non-monotone",
                figure: 8,
                theorem: T3_3,
                order: Order::Lr,
                direction: NEITHER,
                x_min: Some(11.0),
                notes: &[],
            },
            pareto(2.0, 3.0),
            w([0.3, 0.2, 0.5], [0.2, 9.0, 0.1], [2.0; 3], [3.0; 3]),
            w([0.85, 0.05, 0.1], [7.0, 0.7, 6.0], [2.0; 3], [3.0; 3]),
        ),
        single(
            Entry {
                id: "EX4.4",
                description: "Benktander II baseline; majorized weights and shapes give U <=st V",
                figure: 9,
                theorem: T3_4,
                order: Order::St,
                direction: U_LEQ_V,
                x_min: None,
                notes: &[],
            },
            BaselineModel::benktander2(5.0, 0.8).unwrap(),
            w([0.6, 0.3, 0.1], [5.0, 6.0, 14.0], [2.0; 3], [3.0; 3]),
            w([0.4, 0.4, 0.2], [6.0, 9.0, 10.0], [4.0; 3], [5.0; 3]),
        ),
        single(
            Entry {
                id: "CE5.6",
                description: "Benktander II baseline; shape vectors with unequal totals, survival functions cross",
                figure: 10,
                theorem: T3_4,
                order: Order::St,
                direction: Fails,
                x_min: None,
                notes: &[],
            },
            BaselineModel::benktander2(2.0, 0.3).unwrap(),
            w([0.8, 0.1, 0.1], [2.0, 4.0, 5.0], [3.0; 3], [7.0; 3]),
            w([0.5, 0.3, 0.2], [1.0, 1.5, 3.0], [4.0; 3], [7.0; 3]),
        ),
        outlier(
            Entry {
                id: "EX5.5",
                description: "Truncated Burr XII baseline; outlier models with the product condition give U <=rh U*",
                figure: 11,
                theorem: T4_1,
                order: Order::Rh,
                direction: U_LEQ_V,
                x_min: None,
                notes: &[],
            },
            BaselineModel::lt_burr12(5.0, 1.5, 2.0).unwrap(),
            blk((25, 8), (0.032, 0.025), [2.3, 4.0], [5.0, 10.0], [4.0, 6.0], STRICT),
            blk((15, 20), (0.020, 0.035), [2.3, 4.0], [5.0, 10.0], [4.0, 6.0], STRICT),
        ),
        outlier(
            Entry {
                id: "CE5.7",
                description: "Truncated Burr XII baseline; product condition and shape ordering fail, rh order fails",
                figure: 12,
                theorem: T4_1,
                order: Order::Rh,
                direction: Fails,
                x_min: None,
                notes: &[
                    "n1 r1 + n2 r2 = 0.7 for U and 0.1 for U*; both mixtures are rescaled to unit weight",
                    "product sides from the stated n and r are 0.009 and 0.028; the printed values 0.09 and 0.28 are ten times larger, with the same inequality direction",
                ],
            },
            BaselineModel::lt_burr12(1.0, 2.0, 3.0).unwrap(),
            blk((10, 10), (0.03, 0.04), [6.0, 2.0], [4.0, 9.0], [0.6, 8.0], AUTO),
            blk((7, 3), (0.01, 0.01), [6.0, 2.0], [4.0, 9.0], [0.6, 8.0], AUTO),
        ),
        outlier(
            Entry {
                id: "EX5.6",
                description: "Truncated Lomax baseline; outlier models with shapes at least one give U* <=lr U",
                figure: 13,
                theorem: T4_2,
                order: Order::Lr,
                direction: V_LEQ_U,
                x_min: Some(6.0),
                notes: &["the plotted ratio is f_U / f_U*; the pdf_ratio curve is its reciprocal f_U* / f_U"],
            },
            BaselineModel::lt_lomax(5.0, 6.0).unwrap(),
            blk((15, 5), (0.04, 0.08), [2.0, 4.0], [3.0, 4.0], [1.0, 2.0], STRICT),
            blk((10, 20), (0.08, 0.01), [2.0, 4.0], [3.0, 4.0], [1.0, 2.0], STRICT),
        ),
        outlier(
            Entry {
                id: "CE5.8",
                description: "Truncated Lomax baseline; shapes below one, PDF ratio non-monotone",
                figure: 14,
                theorem: T4_2,
                order: Order::Lr,
                direction: NEITHER,
                x_min: None,
                notes: &[
                    "n1* s1 + n2* s2 = 0.1 for U*; that mixture is rescaled to unit weight",
                    "product sides from the stated n and r are 0.015 and 0.035; the printed values 0.15 and 0.35 are ten times larger, with the same inequality direction",
                    "the plotted ratio is f_U / f_U*; the pdf_ratio curve is its reciprocal f_U* / f_U",
                ],
            },
            BaselineModel::lt_lomax(3.0, 2.0).unwrap(),
            blk((10, 25), (0.05, 0.02), [0.2, 0.7], [3.0, 4.0], [2.0, 4.0], STRICT),
            blk((7, 3), (0.01, 0.01), [0.2, 0.7], [3.0, 4.0], [2.0, 4.0], AUTO),
        ),
        outlier(
            Entry {
                id: "EX5.7",
                description: "Log-logistic baseline; common shape at most one, decreasing ratio of reversed hazard rates",
                figure: 15,
                theorem: T4_3,
                order: Order::RRh,
                direction: U_LEQ_V,
                x_min: Some(6.0),
                notes: &["direction refers to the reading in which a decreasing h_U / h_V places U first"],
            },
            BaselineModel::loglogistic(0.9).unwrap(),
            blk((10, 8), (0.02, 0.10), [0.3, 0.3], [6.0, 6.0], [4.0, 6.0], STRICT),
            blk((20, 15), (0.02, 0.04), [0.3, 0.3], [4.0, 4.0], [3.0, 2.0], STRICT),
        ),
        outlier(
            Entry {
                id: "CE5.9",
                description: "Log-logistic baseline; f'/f not increasing, ratio of reversed hazard rates non-monotone",
                figure: 16,
                theorem: T4_3,
                order: Order::RRh,
                direction: NEITHER,
                x_min: Some(5.0),
                notes: &[],
            },
            BaselineModel::loglogistic(4.0).unwrap(),
            blk((4, 6), (0.1, 0.1), [0.8, 0.8], [5.0, 5.0], [3.0, 7.0], STRICT),
            blk((10, 25), (0.05, 0.02), [0.8, 0.8], [2.0, 2.0], [2.0, 1.0], STRICT),
        ),
    ]
}

/// Catalog entry with the given id.
pub fn catalog_scenario(id: &str) -> Result<Scenario> {
    builtin_catalog()
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::UnknownScenario(id.to_string()))
}

pub fn catalog_ids() -> Vec<String> {
    builtin_catalog().into_iter().map(|s| s.id).collect()
}
