//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the summary always prints; exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::{Command, Output};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;
use stochorder::analysis::{check_order, CheckConfig, Direction, Grid, Order, DEFAULT_POINTS};
use stochorder::conditions::{
    check_majorization, eval_theorem_3_1, eval_theorem_3_2, eval_theorem_3_3, eval_theorem_3_4, eval_theorem_4_1,
    eval_theorem_4_2, eval_theorem_4_3, product_sides,
};
use stochorder::scenarios::ScenarioPair;
use stochorder::{
    build_outlier_mixture, builtin_catalog, BaselineModel, ConditionReport, ElsComponent, FiniteMixture,
    OutlierMixtureSpec, Result, TheoremId, WeightPolicy,
};

const SEED: u64 = 42;

struct Outcome {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, summary: impl Into<String>, details: Vec<String>) -> Self {
        Outcome {
            passed,
            summary: summary.into(),
            details,
        }
    }
}

fn stochorder(args: &[&str], results_dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stochorder"))
        .args(args)
        .env("STOCHORDER_RESULTS_DIR", results_dir)
        .output()
        .expect("binary runs")
}

fn reproduce(points: &str) -> (Output, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = stochorder(&["reproduce", "--all", "--points", points, "--no-save"], dir.path());
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out, doc)
}

fn records_by_id(doc: &Value) -> BTreeMap<String, Value> {
    doc["records"]
        .as_array()
        .map(|rs| {
            rs.iter()
                .map(|r| (r["scenario"].as_str().unwrap_or("").to_string(), r.clone()))
                .collect()
        })
        .unwrap_or_default()
}

// Figure-level claim for one catalog entry.
enum Claim {
    Holds,
    Fails,
    Ratio(&'static str, Option<f64>),
}

fn criterion_1() -> Outcome {
    let (out2, doc2) = reproduce("2001");
    let (out4, doc4) = reproduce("4001");
    let mut details = Vec::new();
    for (label, out, doc) in [("2001", &out2, &doc2), ("4001", &out4, &doc4)] {
        if out.status.code() != Some(0) {
            details.push(format!("{label} points: exit {:?}", out.status.code()));
        }
        let rows = doc["rows"].as_array().map(Vec::len).unwrap_or(0);
        if rows != 16 {
            details.push(format!("{label} points: {rows} rows"));
        }
    }
    let agreements = |doc: &Value| -> Vec<(String, String)> {
        doc["rows"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|r| (r["id"].as_str().unwrap_or("").into(), r["agreement"].as_str().unwrap_or("").into()))
            .collect()
    };
    let (a2, a4) = (agreements(&doc2), agreements(&doc4));
    for (id, a) in &a2 {
        if a != "AsExpected" {
            details.push(format!("{id}: {a} at 2001 points"));
        }
    }
    if a2 != a4 {
        details.push("agreements differ between 2001 and 4001 points".into());
    }

    let claims = [
        ("EX4.1", Claim::Holds),
        ("CE4.1", Claim::Fails),
        ("CE4.2", Claim::Ratio("NonMonotone", None)),
        ("CE4.22", Claim::Ratio("NonMonotone", None)),
        ("EX4.2", Claim::Ratio("NonDecreasing", Some(5.0))),
        ("CE4.3", Claim::Ratio("NonMonotone", Some(8.0))),
        ("EX4.3", Claim::Ratio("NonDecreasing", Some(14.0))),
        ("CE4.4", Claim::Ratio("NonMonotone", Some(11.0))),
        ("EX4.4", Claim::Holds),
        ("CE5.6", Claim::Fails),
        ("EX5.5", Claim::Holds),
        ("CE5.7", Claim::Fails),
        // the checker's density ratio is f_V / f_U, the reciprocal of the plotted one
        ("EX5.6", Claim::Ratio("NonIncreasing", Some(6.0))),
        ("CE5.8", Claim::Ratio("NonMonotone", None)),
        ("EX5.7", Claim::Ratio("NonIncreasing", Some(6.0))),
        ("CE5.9", Claim::Ratio("NonMonotone", Some(5.0))),
    ];
    for (label, doc) in [("2001", &doc2), ("4001", &doc4)] {
        let records = records_by_id(doc);
        for (id, claim) in &claims {
            let Some(r) = records.get(*id) else {
                details.push(format!("{id}: missing record at {label} points"));
                continue;
            };
            let v = &r["verdict"];
            let direction = v["direction"].as_str().unwrap_or("");
            let ok = match claim {
                Claim::Holds => direction == "u_leq_v" || direction == "both",
                Claim::Fails => direction != "u_leq_v" && direction != "both",
                Claim::Ratio(shape, x_min) => {
                    let lo = v["range"][0].as_f64().unwrap_or(f64::NAN);
                    v["ratio"]["classification"].as_str() == Some(*shape) && x_min.map_or(true, |m| lo >= m)
                }
            };
            if !ok {
                details.push(format!(
                    "{id} at {label} points: direction {direction}, ratio {}",
                    v["ratio"]["classification"]
                ));
            }
        }
    }
    Outcome::new(
        details.is_empty(),
        format!("catalog fidelity: {} scenarios, agreements stable at 4001 points", a2.len()),
        details,
    )
}

fn outlier_specs(id: &str) -> (OutlierMixtureSpec, OutlierMixtureSpec) {
    let s = builtin_catalog().into_iter().find(|s| s.id == id).unwrap();
    match s.pair {
        ScenarioPair::Outlier { u, v, .. } => (u, v),
        ScenarioPair::Mixtures { .. } => panic!("{id} is not an outlier scenario"),
    }
}

fn criterion_2() -> Outcome {
    let mut details = Vec::new();
    let baseline_grid = |id: &str| {
        let s = builtin_catalog().into_iter().find(|s| s.id == id).unwrap();
        Grid::for_baseline(&s.baseline, DEFAULT_POINTS).unwrap()
    };
    // (id, expected sides, evaluated report)
    let cases: Vec<(&str, (f64, f64), Result<ConditionReport>)> = vec![
        ("EX5.5", (0.56, 0.06), {
            let (u, v) = outlier_specs("EX5.5");
            eval_theorem_4_1(&u, &v, &baseline_grid("EX5.5"))
        }),
        ("EX5.6", (0.12, 0.32), {
            let (u, v) = outlier_specs("EX5.6");
            eval_theorem_4_2(&u, &v, &baseline_grid("EX5.6"))
        }),
        ("CE5.7", (0.009, 0.028), {
            let (u, v) = outlier_specs("CE5.7");
            eval_theorem_4_1(&u, &v, &baseline_grid("CE5.7"))
        }),
        ("CE5.8", (0.015, 0.035), {
            let (u, v) = outlier_specs("CE5.8");
            eval_theorem_4_2(&u, &v, &baseline_grid("CE5.8"))
        }),
    ];
    for (id, (lhs, rhs), report) in cases {
        match report {
            Ok(r) => match r.product {
                Some(p) if (p.lhs - lhs).abs() <= 1e-12 && (p.rhs - rhs).abs() <= 1e-12 => {}
                other => details.push(format!("{id}: sides {other:?}, want ({lhs}, {rhs})")),
            },
            Err(e) => details.push(format!("{id}: {e}")),
        }
    }
    // direct products from the raw sizes and proportions
    for id in ["EX5.5", "EX5.6", "CE5.7", "CE5.8"] {
        let (u, v) = outlier_specs(id);
        let p = product_sides(&u, &v);
        let lhs = f64::from(u.n1) * u.r1 * f64::from(v.n2) * v.r2;
        let rhs = f64::from(u.n2) * u.r2 * f64::from(v.n1) * v.r1;
        if (p.lhs - lhs).abs() > 1e-12 || (p.rhs - rhs).abs() > 1e-12 {
            details.push(format!("{id}: product_sides {p:?} differs from direct ({lhs}, {rhs})"));
        }
    }
    // the printed counterexample values are ten times the computed ones
    for id in ["CE5.7", "CE5.8"] {
        let s = builtin_catalog().into_iter().find(|s| s.id == id).unwrap();
        if !s.notes.iter().any(|n| n.contains("ten times")) {
            details.push(format!("{id}: no note on the factor of ten"));
        }
    }
    Outcome::new(details.is_empty(), "product-condition sides match to 1e-12", details)
}

fn criterion_3() -> Outcome {
    let mut details = Vec::new();
    let mut count = 0;
    for s in builtin_catalog() {
        let (u, v) = s.mixtures().unwrap();
        for (side, m) in [("U", u), ("V", v)] {
            count += 1;
            match m.verify_normalization(1e-6) {
                Ok(r) if (r.integral - 1.0).abs() <= 1e-6 => {}
                Ok(r) => details.push(format!("{} {side}: integral {}", s.id, r.integral)),
                Err(e) => details.push(format!("{} {side}: {e}", s.id)),
            }
        }
    }
    Outcome::new(
        details.is_empty() && count == 32,
        format!("normalization: {count} mixtures integrate to 1 within 1e-6"),
        details,
    )
}

fn random_baseline(rng: &mut ChaCha8Rng) -> BaselineModel {
    match rng.gen_range(0..6) {
        0 => BaselineModel::pareto(rng.gen_range(1.0..6.0), rng.gen_range(0.5..4.0)),
        1 => BaselineModel::lt_exponential(rng.gen_range(0.5..4.0), rng.gen_range(0.0..4.0)),
        2 => BaselineModel::benktander2(rng.gen_range(0.5..5.0), rng.gen_range(0.1..0.9)),
        3 => BaselineModel::lt_burr12(rng.gen_range(0.5..5.0), rng.gen_range(0.5..3.0), rng.gen_range(0.5..4.0)),
        4 => BaselineModel::lt_lomax(rng.gen_range(0.5..5.0), rng.gen_range(0.5..6.0)),
        _ => BaselineModel::loglogistic(rng.gen_range(0.5..5.0)),
    }
    .unwrap()
}

fn mixture(base: &BaselineModel, params: &[(f64, f64, f64)], weights: Vec<f64>) -> FiniteMixture {
    let comps = params
        .iter()
        .map(|&(a, s, l)| ElsComponent::new(base.clone(), a, s, l).unwrap())
        .collect();
    FiniteMixture::new(comps, weights, WeightPolicy::AutoNormalize).unwrap()
}

fn random_mixture(rng: &mut ChaCha8Rng, base: &BaselineModel) -> FiniteMixture {
    let n = rng.gen_range(1..=4);
    let params: Vec<_> = (0..n)
        .map(|_| (rng.gen_range(0.3..6.0), rng.gen_range(0.0..6.0), rng.gen_range(0.5..5.0)))
        .collect();
    let w = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    mixture(base, &params, w)
}

fn criterion_4() -> Outcome {
    let cfg = CheckConfig::with_tol(1e-9);
    let mut pairs: Vec<(String, FiniteMixture, FiniteMixture)> = builtin_catalog()
        .into_iter()
        .map(|s| {
            let (u, v) = s.mixtures().unwrap();
            (s.id, u, v)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..200 {
        let base = random_baseline(&mut rng);
        let u = random_mixture(&mut rng, &base);
        let v = random_mixture(&mut rng, &base);
        pairs.push((format!("random #{i}"), u, v));
    }
    let results: Vec<(String, std::result::Result<Vec<String>, String>)> = pairs
        .par_iter()
        .map(|(label, u, v)| {
            let run = || -> Result<Vec<String>> {
                let grid = Grid::auto(u, v, DEFAULT_POINTS)?;
                let st = check_order(Order::St, u, v, &grid, &cfg)?;
                let rh = check_order(Order::Rh, u, v, &grid, &cfg)?;
                let lr = check_order(Order::Lr, u, v, &grid, &cfg)?;
                let mut events = Vec::new();
                for d in [Direction::UleqV, Direction::VleqU] {
                    if lr.holds(d) && !rh.holds(d) {
                        events.push(format!("lr {d} without rh"));
                    }
                    if rh.holds(d) && !st.holds(d) {
                        events.push(format!("rh {d} without st"));
                    }
                }
                Ok(events)
            };
            (label.clone(), run().map_err(|e| e.to_string()))
        })
        .collect();
    let mut details = Vec::new();
    let mut checked = 0;
    let mut errors = 0;
    let mut flagged = 0;
    for (label, r) in results {
        match r {
            Ok(events) => {
                checked += 1;
                if !events.is_empty() {
                    flagged += 1;
                    details.push(format!("{label}: {}", events.join(", ")));
                }
            }
            Err(e) => {
                errors += 1;
                details.push(format!("{label}: not evaluated ({e})"));
            }
        }
    }
    Outcome::new(
        details.is_empty(),
        format!("implication chain: {checked} pairs checked, {flagged} inconsistent, {errors} not evaluated"),
        details,
    )
}

fn simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -rng.gen_range(1e-3f64..1.0).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

fn sorted(mut v: Vec<f64>, ascending: bool) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    if !ascending {
        v.reverse();
    }
    v
}

// Moves mass from larger to smaller entries without crossing; the result is
// majorized by the input.
fn smooth(rng: &mut ChaCha8Rng, v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    for _ in 0..3 {
        let (i, j) = (rng.gen_range(0..v.len()), rng.gen_range(0..v.len()));
        let (hi, lo) = if out[i] >= out[j] { (i, j) } else { (j, i) };
        let eps = (out[hi] - out[lo]) * rng.gen_range(0.0..0.5);
        out[hi] -= eps;
        out[lo] += eps;
    }
    out
}

// Sizes and per-unit proportions with n1 r1 + n2 r2 = 1 up to rounding.
fn sizes(rng: &mut ChaCha8Rng) -> (u32, f64, u32, f64) {
    let (n1, n2) = (rng.gen_range(1..30u32), rng.gen_range(1..30u32));
    let p = rng.gen_range(0.05..0.95);
    (n1, p / f64::from(n1), n2, (1.0 - p) / f64::from(n2))
}

fn outlier(base: &BaselineModel, n: (u32, f64, u32, f64), c1: (f64, f64, f64), c2: (f64, f64, f64)) -> OutlierMixtureSpec {
    OutlierMixtureSpec {
        n1: n.0,
        r1: n.1,
        n2: n.2,
        r2: n.3,
        comp1: ElsComponent::new(base.clone(), c1.0, c1.1, c1.2).unwrap(),
        comp2: ElsComponent::new(base.clone(), c2.0, c2.1, c2.2).unwrap(),
    }
}

/// One sampled parameter set: its condition report and the pair it describes.
struct Sample {
    report: ConditionReport,
    u: FiniteMixture,
    v: FiniteMixture,
}

fn sample(theorem: TheoremId, rng: &mut ChaCha8Rng) -> Result<Sample> {
    let base = random_baseline(rng);
    let k = rng.gen_range(2..=3);
    let u01 = |rng: &mut ChaCha8Rng, a: f64, b: f64, n: usize| -> Vec<f64> { (0..n).map(|_| rng.gen_range(a..b)).collect() };
    match theorem {
        TheoremId::T3_1 => {
            let up = rng.gen_bool(0.5);
            let r = simplex(rng, k);
            let alpha = u01(rng, 0.3, 5.0, k);
            let beta: Vec<f64> = alpha.iter().map(|a| a + rng.gen_range(0.0..3.0)).collect();
            let sigma = sorted(u01(rng, 0.0, 5.0, k), up);
            let lambda = sorted(u01(rng, 0.5, 4.0, k), up);
            let dmu = sorted(u01(rng, 0.0, 3.0, k), up);
            let dtheta = sorted(u01(rng, 0.0, 3.0, k), up);
            let up_params: Vec<_> = (0..k).map(|i| (alpha[i], sigma[i], lambda[i])).collect();
            let vp: Vec<_> = (0..k).map(|i| (beta[i], sigma[i] + dmu[i], lambda[i] + dtheta[i])).collect();
            let u = mixture(&base, &up_params, r.clone());
            let v = mixture(&base, &vp, r);
            Ok(Sample {
                report: eval_theorem_3_1(&u, &v)?,
                u,
                v,
            })
        }
        TheoremId::T3_2 => {
            let (a1, s1, l1) = (rng.gen_range(0.5..4.0), rng.gen_range(1.0..5.0), rng.gen_range(1.0..4.0));
            let alpha = u01(rng, 0.2, a1, k);
            let beta = u01(rng, a1, a1 + 4.0, k);
            let sigma = u01(rng, 0.0, s1, k);
            let mu = u01(rng, s1, s1 + 4.0, k);
            let lambda = u01(rng, 0.5, l1, k);
            let theta = u01(rng, l1, l1 + 3.0, k);
            let u = mixture(&base, &(0..k).map(|i| (alpha[i], sigma[i], lambda[i])).collect::<Vec<_>>(), simplex(rng, k));
            let v = mixture(&base, &(0..k).map(|i| (beta[i], mu[i], theta[i])).collect::<Vec<_>>(), simplex(rng, k));
            let g = Grid::for_baseline(&base, DEFAULT_POINTS)?;
            Ok(Sample {
                report: eval_theorem_3_2(&u, &v, &g)?,
                u,
                v,
            })
        }
        TheoremId::T3_3 => {
            let a1 = rng.gen_range(0.5..5.0);
            let (s, l) = (rng.gen_range(0.0..5.0), rng.gen_range(0.5..4.0));
            let alpha = u01(rng, 0.1, a1, k);
            let beta = u01(rng, a1, a1 + 5.0, k);
            let u = mixture(&base, &alpha.iter().map(|&a| (a, s, l)).collect::<Vec<_>>(), simplex(rng, k));
            let v = mixture(&base, &beta.iter().map(|&b| (b, s, l)).collect::<Vec<_>>(), simplex(rng, k));
            Ok(Sample {
                report: eval_theorem_3_3(&u, &v)?,
                u,
                v,
            })
        }
        TheoremId::T3_4 => {
            let r = sorted(simplex(rng, k), false);
            let s = sorted(smooth(rng, &r), false);
            let alpha = sorted(u01(rng, 0.3, 8.0, k), true);
            let beta = sorted(smooth(rng, &alpha), true);
            let (sg, lm) = (rng.gen_range(0.0..5.0), rng.gen_range(0.5..4.0));
            let (mu, th) = (sg + rng.gen_range(0.0..3.0), lm + rng.gen_range(0.0..3.0));
            let u = mixture(&base, &alpha.iter().map(|&a| (a, sg, lm)).collect::<Vec<_>>(), r);
            let v = mixture(&base, &beta.iter().map(|&b| (b, mu, th)).collect::<Vec<_>>(), s);
            Ok(Sample {
                report: eval_theorem_3_4(&u, &v)?,
                u,
                v,
            })
        }
        TheoremId::T4_1 | TheoremId::T4_2 => {
            let up = theorem == TheoremId::T4_2 || rng.gen_bool(0.5);
            let lo = if theorem == TheoremId::T4_2 { 1.0 } else { 0.2 };
            let alpha = sorted(u01(rng, lo, 6.0, 2), up);
            let sigma = sorted(u01(rng, 0.0, 8.0, 2), up);
            let lambda = sorted(u01(rng, 0.3, 6.0, 2), up);
            let (c1, c2) = ((alpha[0], sigma[0], lambda[0]), (alpha[1], sigma[1], lambda[1]));
            let us = outlier(&base, sizes(rng), c1, c2);
            let vs = outlier(&base, sizes(rng), c1, c2);
            let g = Grid::for_baseline(&base, DEFAULT_POINTS)?;
            let report = if theorem == TheoremId::T4_1 {
                eval_theorem_4_1(&us, &vs, &g)?
            } else {
                eval_theorem_4_2(&us, &vs, &g)?
            };
            Ok(Sample {
                report,
                u: build_outlier_mixture(&us, WeightPolicy::AutoNormalize)?,
                v: build_outlier_mixture(&vs, WeightPolicy::AutoNormalize)?,
            })
        }
        TheoremId::T4_3 => {
            let base = if rng.gen_bool(0.75) {
                BaselineModel::loglogistic(rng.gen_range(0.3..1.5))?
            } else {
                BaselineModel::lt_exponential(rng.gen_range(0.5..4.0), 0.0)?
            };
            let alpha = rng.gen_range(0.1..1.0);
            let mu = rng.gen_range(0.0..5.0);
            let sigma = mu + rng.gen_range(0.0..4.0);
            let m = rng.gen_range(0.5..4.0);
            let theta = u01(rng, 0.3, m, 2);
            let lambda = u01(rng, m, m + 4.0, 2);
            let us = outlier(&base, sizes(rng), (alpha, sigma, lambda[0]), (alpha, sigma, lambda[1]));
            let vs = outlier(&base, sizes(rng), (alpha, mu, theta[0]), (alpha, mu, theta[1]));
            let g = Grid::for_baseline(&base, DEFAULT_POINTS)?;
            Ok(Sample {
                report: eval_theorem_4_3(&us, &vs, &g)?,
                u: build_outlier_mixture(&us, WeightPolicy::AutoNormalize)?,
                v: build_outlier_mixture(&vs, WeightPolicy::AutoNormalize)?,
            })
        }
    }
}

struct Sweep {
    theorem: TheoremId,
    eligible: usize,
    met: usize,
    unevaluated: usize,
    failures: Vec<String>,
}

fn sweep(theorem: TheoremId, sets: usize) -> Sweep {
    let results: Vec<Option<std::result::Result<(), String>>> = (0..sets)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ ((theorem as u64) << 32) ^ i as u64);
            let s = match sample(theorem, &mut rng) {
                Ok(s) => s,
                Err(e) => return Some(Err(format!("set {i}: {e}"))),
            };
            if !s.report.all_pass {
                return None;
            }
            let pred = theorem.prediction();
            let family = s.u.components()[0].baseline().kind().id();
            let verdict = Grid::auto(&s.u, &s.v, DEFAULT_POINTS)
                .and_then(|g| check_order(pred.order, &s.u, &s.v, &g, &CheckConfig::default()));
            Some(match verdict {
                Ok(v) if pred.is_met_by(&v) => Ok(()),
                Ok(v) => Err(format!(
                    "set {i} ({} baseline): predicted {} {} but observed {} (ratio {:?}, witness x = {:?})",
                    family,
                    pred.order.id(),
                    pred.direction,
                    v.proof_reading.unwrap_or(v.direction),
                    v.ratio.as_ref().map(|r| r.classification),
                    v.witness.map(|w| w.x),
                )),
                Err(e) => Err(format!("set {i} ({family} baseline): not evaluated ({e})")),
            })
        })
        .collect();
    let mut out = Sweep {
        theorem,
        eligible: 0,
        met: 0,
        unevaluated: 0,
        failures: Vec::new(),
    };
    for r in results.into_iter().flatten() {
        out.eligible += 1;
        match r {
            Ok(()) => out.met += 1,
            Err(e) => {
                out.unevaluated += usize::from(e.contains("not evaluated"));
                out.failures.push(e);
            }
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let sweeps: Vec<Sweep> = TheoremId::ALL.iter().map(|&t| sweep(t, 500)).collect();
    let elapsed = start.elapsed().as_secs_f64();
    let mut details = Vec::new();
    let mut parts = Vec::new();
    for s in &sweeps {
        let mut part = format!("{} {}/{}", s.theorem, s.met, s.eligible);
        if s.unevaluated > 0 {
            part += &format!(" ({} not evaluated)", s.unevaluated);
        }
        parts.push(part);
        if s.eligible == 0 {
            details.push(format!("{}: no sampled set satisfied the conditions", s.theorem));
        }
        details.extend(s.failures.iter().take(3).map(|f| format!("{}: {f}", s.theorem)));
        if s.failures.len() > 3 {
            details.push(format!("{}: {} more failures", s.theorem, s.failures.len() - 3));
        }
    }
    if elapsed > 120.0 {
        details.push(format!("took {elapsed:.1} s"));
    }
    Outcome::new(
        details.is_empty(),
        format!("theorem soundness sweep ({elapsed:.1} s): {}", parts.join(", ")),
        details,
    )
}

// Largest sum over all k-element subsets, by enumeration.
fn best_subset_sums(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut best = vec![f64::NEG_INFINITY; n + 1];
    for mask in 0u32..(1 << n) {
        let k = mask.count_ones() as usize;
        let s: f64 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| v[i]).sum();
        if s > best[k] {
            best[k] = s;
        }
    }
    best
}

fn majorized_oracle(x: &[f64], y: &[f64]) -> bool {
    let (bx, by) = (best_subset_sums(x), best_subset_sums(y));
    let n = x.len();
    bx[n] == by[n] && (1..n).all(|k| bx[k] <= by[k])
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut details = Vec::new();
    let mut related = 0;
    let total = 10_000;
    for i in 0..total {
        let n = rng.gen_range(1..=8);
        // small integers keep every sum exact
        let y: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(0..20u8))).collect();
        let x: Vec<f64> = match rng.gen_range(0..3) {
            0 => (0..n).map(|_| f64::from(rng.gen_range(0..20u8))).collect(),
            1 => {
                let mut x = y.clone();
                x.shuffle(&mut rng);
                x
            }
            _ => {
                // integer transfers between random entries, in either direction
                let mut x = y.clone();
                for _ in 0..rng.gen_range(1..4) {
                    let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                    let t = f64::from(rng.gen_range(0..5u8)).min(x[a]);
                    x[a] -= t;
                    x[b] += t;
                }
                x
            }
        };
        let got = check_majorization(&x, &y).unwrap();
        let (want_xy, want_yx) = (majorized_oracle(&x, &y), majorized_oracle(&y, &x));
        related += usize::from(want_xy || want_yx);
        if got.x_majorized_by_y != want_xy || got.y_majorized_by_x != want_yx {
            details.push(format!("pair {i}: x = {x:?}, y = {y:?}"));
        }
    }
    Outcome::new(
        details.is_empty(),
        format!("majorization oracle: {total} pairs, {related} comparable, {} disagreements", details.len()),
        details,
    )
}

// Five-point central difference of the CDF, or of the survival function in
// the upper tail where the CDF is close to one.
fn numeric_pdf(m: &FiniteMixture, x: f64, h: f64) -> f64 {
    let upper = m.cdf(x) >= 0.5;
    let g = |t: f64| if upper { -m.sf(t) } else { m.cdf(t) };
    (g(x - 2.0 * h) - 8.0 * g(x - h) + 8.0 * g(x + h) - g(x + 2.0 * h)) / (12.0 * h)
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut details = Vec::new();
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for s in builtin_catalog() {
        let (u, v) = s.mixtures().unwrap();
        for (side, m) in [("U", &u), ("V", &v)] {
            let breaks = m.breakpoints();
            let (lo, hi) = (m.quantile(1e-3), m.quantile(1.0 - 1e-3));
            let mut n = 0;
            while n < 100 {
                let x = rng.gen_range(lo..hi);
                let h = 1e-4 * x.abs().max(1.0);
                if breaks.iter().any(|b| (x - b).abs() < 4.0 * h) {
                    continue;
                }
                n += 1;
                checked += 1;
                let (num, f) = (numeric_pdf(m, x, h), m.pdf(x));
                let rel = (num - f).abs() / f.abs().max(f64::MIN_POSITIVE);
                worst = worst.max(rel);
                if rel > 1e-6 {
                    details.push(format!("{} {side} at x = {x}: pdf {f}, difference quotient {num}", s.id));
                }
            }
        }
    }
    Outcome::new(
        details.is_empty(),
        format!("calculus consistency: {checked} points, worst relative error {worst:.2e}"),
        details,
    )
}

fn criterion_8() -> Outcome {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["reproduce", "--all", "--seed", "42"];
    let a = stochorder(&args, d1.path());
    let b = stochorder(&args, d2.path());
    let mut details = Vec::new();
    if a.stdout != b.stdout {
        details.push("stdout differs between runs".into());
    }
    if a.stdout.is_empty() {
        details.push("empty report".into());
    }
    for (label, o) in [("first", &a), ("second", &b)] {
        if o.status.code() != Some(0) {
            details.push(format!("{label} run exited {:?}", o.status.code()));
        }
    }
    Outcome::new(
        details.is_empty(),
        format!("determinism: two reports of {} bytes compared", a.stdout.len()),
        details,
    )
}

fn main() {
    // libtest flags such as --nocapture may be passed through; none apply here
    let criteria: [(u8, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let o = run();
        println!("criterion {n}: {} {}", if o.passed { "PASS" } else { "FAIL" }, o.summary);
        for d in o.details.iter().take(12) {
            println!("    {d}");
        }
        failed += usize::from(!o.passed);
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
