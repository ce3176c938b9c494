use proptest::prelude::*;
use stochorder::analysis::{check_order, CheckConfig, Direction, Grid, Order};
use stochorder::conditions::check_majorization;
use stochorder::scenarios::{run_scenario, scenario_grid, RunOptions};
use stochorder::{builtin_catalog, BaselineModel, ElsComponent, FiniteMixture, WeightPolicy};

fn baseline() -> impl Strategy<Value = BaselineModel> {
    prop_oneof![
        (1.0..6.0f64, 0.5..4.0f64).prop_map(|(a, k)| BaselineModel::pareto(a, k).unwrap()),
        (0.5..4.0f64, 0.0..4.0f64).prop_map(|(b, t0)| BaselineModel::lt_exponential(b, t0).unwrap()),
        (0.5..5.0f64, 0.1..0.9f64).prop_map(|(a, b)| BaselineModel::benktander2(a, b).unwrap()),
        (1.0..5.0f64, 1.0..3.0f64, 0.5..4.0f64).prop_map(|(k, m, t0)| BaselineModel::lt_burr12(k, m, t0).unwrap()),
        (1.0..5.0f64).prop_map(|b| BaselineModel::loglogistic(b).unwrap()),
    ]
}

fn mixture() -> impl Strategy<Value = FiniteMixture> {
    (baseline(), prop::collection::vec((0.5..5.0f64, 0.0..5.0f64, 0.5..4.0f64, 0.05..1.0f64), 1..4)).prop_map(
        |(b, parts)| {
            let comps = parts
                .iter()
                .map(|&(a, s, l, _)| ElsComponent::new(b.clone(), a, s, l).unwrap())
                .collect();
            let w = parts.iter().map(|p| p.3).collect();
            FiniteMixture::new(comps, w, WeightPolicy::AutoNormalize).unwrap()
        },
    )
}

// Small integers keep every sum exact.
fn int_vec() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0u8..30, 1..8).prop_map(|v| v.into_iter().map(f64::from).collect())
}

fn transfer(v: &[f64], i: usize, j: usize, amount: u8) -> Vec<f64> {
    let mut out = v.to_vec();
    let (i, j) = (i % v.len(), j % v.len());
    let (hi, lo) = if out[i] >= out[j] { (i, j) } else { (j, i) };
    // moving at most half the gap keeps the order of the two entries
    let t = f64::from(amount).min(((out[hi] - out[lo]) / 2.0).floor());
    out[hi] -= t;
    out[lo] += t;
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn majorization_is_reflexive_and_permutation_invariant(x in int_vec(), seed in any::<u64>()) {
        let r = check_majorization(&x, &x).unwrap();
        prop_assert!(r.x_majorized_by_y && r.y_majorized_by_x);
        let mut p = x.clone();
        let k = (seed as usize) % p.len();
        p.rotate_left(k);
        p.reverse();
        let r = check_majorization(&x, &p).unwrap();
        prop_assert!(r.x_majorized_by_y && r.y_majorized_by_x);
    }

    #[test]
    fn transfers_produce_majorized_chains(x in int_vec(), a in (0usize..8, 0usize..8, 0u8..10), b in (0usize..8, 0usize..8, 0u8..10)) {
        let y = transfer(&x, a.0, a.1, a.2);
        let z = transfer(&y, b.0, b.1, b.2);
        prop_assert!(check_majorization(&y, &x).unwrap().x_majorized_by_y);
        prop_assert!(check_majorization(&z, &y).unwrap().x_majorized_by_y);
        prop_assert!(check_majorization(&z, &x).unwrap().x_majorized_by_y);
    }

    #[test]
    fn unequal_totals_are_incomparable(x in int_vec()) {
        let mut y = x.clone();
        y[0] += 1.0;
        let r = check_majorization(&x, &y).unwrap();
        prop_assert!(!r.sums_equal && !r.x_majorized_by_y && !r.y_majorized_by_x);
    }

    #[test]
    fn mixture_cdf_is_a_distribution_function(m in mixture(), ps in prop::collection::vec(0.001..0.999f64, 8)) {
        let mut xs: Vec<f64> = ps.iter().map(|&p| m.quantile(p)).collect();
        xs.sort_by(f64::total_cmp);
        let mut last = 0.0;
        for &x in &xs {
            let f = m.cdf(x);
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert!(f >= last);
            prop_assert!((f + m.sf(x) - 1.0).abs() < 1e-12);
            prop_assert!(m.pdf(x) >= 0.0);
            last = f;
        }
        prop_assert_eq!(m.cdf(m.min_support() - 1.0), 0.0);
    }

    #[test]
    fn quantile_inverts_cdf(m in mixture(), p in 0.01..0.99f64) {
        let x = m.quantile(p);
        prop_assert!((m.cdf(x) - p).abs() < 1e-7);
    }

    #[test]
    fn els_cdf_is_a_power_of_the_baseline(b in baseline(), a in 0.3..6.0f64, s in -2.0..5.0f64, l in 0.3..4.0f64, t in 0.0..1.0f64) {
        let c = ElsComponent::new(b.clone(), a, s, l).unwrap();
        let z = b.quantile(0.01 + 0.98 * t, 1e-12);
        let x = s + l * z;
        let want = b.cdf(z).powf(a);
        prop_assert!((c.cdf(x) - want).abs() <= 1e-12 * want.max(1e-3), "{} vs {}", c.cdf(x), want);
    }

    #[test]
    fn checkers_are_reflexive(m in mixture()) {
        let g = Grid::auto(&m, &m, 201).unwrap();
        for order in [Order::St, Order::Rh, Order::Lr, Order::RRh] {
            let v = check_order(order, &m, &m, &g, &CheckConfig::default()).unwrap();
            prop_assert_eq!(v.direction, Direction::Both, "{:?}", order);
        }
    }
}

fn holds_set(order: Order, u: &FiniteMixture, v: &FiniteMixture, g: &Grid, tol: f64) -> [bool; 2] {
    let verdict = check_order(order, u, v, g, &CheckConfig::with_tol(tol)).unwrap();
    [verdict.holds(Direction::UleqV), verdict.holds(Direction::VleqU)]
}

#[test]
fn larger_tolerance_never_breaks_a_holding_order() {
    for s in builtin_catalog() {
        let (u, v) = s.mixtures().unwrap();
        let g = scenario_grid(&s, &RunOptions::default()).unwrap();
        for order in [Order::St, Order::Rh, Order::Lr, Order::RRh] {
            let sets: Vec<[bool; 2]> = [1e-12, 1e-9, 1e-6].iter().map(|&t| holds_set(order, &u, &v, &g, t)).collect();
            for w in sets.windows(2) {
                for d in 0..2 {
                    assert!(!w[0][d] || w[1][d], "{} {:?}: {:?}", s.id, order, sets);
                }
            }
        }
    }
}

#[test]
fn reversed_hazard_tests_agree_on_catalog() {
    for s in builtin_catalog() {
        let (u, v) = s.mixtures().unwrap();
        let g = scenario_grid(&s, &RunOptions::default()).unwrap();
        let verdict = check_order(Order::Rh, &u, &v, &g, &CheckConfig::default()).unwrap();
        assert_eq!(verdict.pointwise_agrees, Some(true), "{}: ratio {} pointwise {:?}", s.id, verdict.direction, verdict.pointwise);
    }
}

#[test]
fn records_are_stable_under_refinement() {
    let fine = RunOptions {
        points: 4001,
        ..RunOptions::default()
    };
    for s in builtin_catalog() {
        let a = run_scenario(&s, &RunOptions::default()).unwrap();
        let b = run_scenario(&s, &fine).unwrap();
        assert_eq!(a.observed, b.observed, "{}", s.id);
    }
}
