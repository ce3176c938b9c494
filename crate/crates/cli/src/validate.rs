use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use stochorder::analysis::{check_order, implication_audit, CheckConfig, Grid, Order, DEFAULT_POINTS};
use stochorder::conditions::check_majorization;
use stochorder::report::to_json;
use stochorder::scenarios::{builtin_catalog, BaselineFile};
use stochorder::{BaselineModel, ElsComponent, FiniteMixture, Result, WeightPolicy};

const MAX_DETAILS: usize = 5;

#[derive(Serialize, Default)]
struct Item {
    name: &'static str,
    checked: usize,
    failed: usize,
    details: Vec<String>,
}

impl Item {
    fn new(name: &'static str) -> Self {
        Item {
            name,
            ..Item::default()
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.details.len() < MAX_DETAILS {
                self.details.push(detail());
            }
        }
    }
}

#[derive(Serialize)]
struct ValidateReport<'a> {
    command: &'a [String],
    seed: u64,
    items: Vec<Item>,
    passed: bool,
}

/// Seeded random baseline from one of the named families.
pub fn random_baseline(rng: &mut ChaCha8Rng) -> BaselineModel {
    let u = |rng: &mut ChaCha8Rng, a: f64, b: f64| rng.gen_range(a..b);
    match rng.gen_range(0..6) {
        0 => BaselineModel::pareto(u(rng, 1.0, 6.0), u(rng, 0.5, 4.0)),
        1 => BaselineModel::lt_exponential(u(rng, 0.5, 4.0), u(rng, 0.0, 4.0)),
        2 => BaselineModel::benktander2(u(rng, 0.5, 5.0), u(rng, 0.1, 0.9)),
        3 => BaselineModel::lt_burr12(u(rng, 0.5, 5.0), u(rng, 0.5, 3.0), u(rng, 0.5, 4.0)),
        4 => BaselineModel::lt_lomax(u(rng, 0.5, 5.0), u(rng, 0.5, 6.0)),
        _ => BaselineModel::loglogistic(u(rng, 0.5, 5.0)),
    }
    .expect("sampled parameters lie in the valid ranges")
}

/// Seeded random pair of mixtures sharing one baseline.
pub fn random_pair(rng: &mut ChaCha8Rng) -> (FiniteMixture, FiniteMixture) {
    let base = random_baseline(rng);
    let mix = |rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(1..=4);
        let comps = (0..n)
            .map(|_| {
                ElsComponent::new(
                    base.clone(),
                    rng.gen_range(0.3..6.0),
                    rng.gen_range(0.0..6.0),
                    rng.gen_range(0.5..5.0),
                )
                .unwrap()
            })
            .collect();
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
        FiniteMixture::new(comps, w, WeightPolicy::AutoNormalize).unwrap()
    };
    let u = mix(rng);
    let v = mix(rng);
    (u, v)
}

fn baseline_item(item: &mut Item, label: &str, b: &BaselineModel, seed: u64) {
    let r = b.check_invariants(seed, 200);
    let mut broken = Vec::new();
    if r.cdf_at_support != 0.0 {
        broken.push(format!("F(c) = {} is not 0", r.cdf_at_support));
    }
    if !(1.0 - r.cdf_at_large < 1e-9) {
        broken.push(format!("F does not approach 1 (F = {})", r.cdf_at_large));
    }
    if !r.monotone {
        broken.push("F is not nondecreasing".to_string());
    }
    if !r.nonnegative_pdf {
        broken.push("f is negative somewhere".to_string());
    }
    if !(r.max_rel_derivative_error <= 1e-5) {
        broken.push(format!("dF/dt differs from f by {:e} relative", r.max_rel_derivative_error));
    }
    item.record(broken.is_empty(), || format!("{label}: {}", broken.join("; ")));
}

/// Derivative of the mixture CDF by central differences, differencing the
/// survival function in the upper half to avoid cancellation.
fn numeric_pdf(m: &FiniteMixture, x: f64) -> f64 {
    let h = 1e-5 * x.abs().max(1.0);
    if m.cdf(x) < 0.5 {
        (m.cdf(x + h) - m.cdf(x - h)) / (2.0 * h)
    } else {
        (m.sf(x - h) - m.sf(x + h)) / (2.0 * h)
    }
}

fn prefix_sums_sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s.iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// Robin Hood transfer: moves mass from a larger to a smaller entry without
/// crossing, producing a vector majorized by the input.
fn transfer(rng: &mut ChaCha8Rng, v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    let (i, j) = (rng.gen_range(0..v.len()), rng.gen_range(0..v.len()));
    let (hi, lo) = if out[i] >= out[j] { (i, j) } else { (j, i) };
    let gap = out[hi] - out[lo];
    // dyadic fractions keep the totals exact in floating point
    let eps = gap * f64::from(rng.gen_range(0..=4u8)) / 8.0;
    out[hi] -= eps;
    out[lo] += eps;
    out
}

pub fn run(argv: &[String], seed: u64, baseline: Option<&Path>, pairs: usize) -> Result<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let catalog = builtin_catalog();
    let mut items = Vec::new();

    let mut base_item = Item::new("baseline_invariants");
    for s in &catalog {
        baseline_item(&mut base_item, &s.id, &s.baseline, seed);
    }
    if let Some(path) = baseline {
        let loaded = std::fs::read_to_string(path)
            .map_err(|e| stochorder::Error::Io(format!("{}: {e}", path.display())))
            .and_then(|t| {
                serde_json::from_str::<BaselineFile>(&t)
                    .map_err(|e| stochorder::Error::Parse(format!("{}: {e}", path.display())))
            })
            .and_then(|f| f.into_model());
        match loaded {
            Ok(b) => baseline_item(&mut base_item, &path.display().to_string(), &b, seed),
            Err(e) => base_item.record(false, || format!("{}: {e}", path.display())),
        }
    }
    items.push(base_item);

    let mut norm = Item::new("normalization");
    for s in &catalog {
        let (u, v) = s.mixtures()?;
        for (label, m) in [("U", &u), ("V", &v)] {
            match m.verify_normalization(1e-6) {
                Ok(r) => norm.record(r.passed, || format!("{} {label}: integral {}", s.id, r.integral)),
                Err(e) => norm.record(false, || format!("{} {label}: {e}", s.id)),
            }
        }
    }
    items.push(norm);

    let mut audit = Item::new("implication_audit");
    let cfg = CheckConfig::with_tol(1e-9);
    let mut audit_pair = |label: String, u: &FiniteMixture, v: &FiniteMixture, grid: Grid| -> Result<()> {
        let st = check_order(Order::St, u, v, &grid, &cfg)?;
        let rh = check_order(Order::Rh, u, v, &grid, &cfg);
        let lr = check_order(Order::Lr, u, v, &grid, &cfg);
        match (rh, lr) {
            (Ok(rh), Ok(lr)) => {
                let r = implication_audit(&st, &rh, &lr)?;
                audit.record(r.consistent, || format!("{label}: {}", r.issues.join("; ")));
            }
            // too few usable ratio points: nothing to audit
            (Err(stochorder::Error::InsufficientDomain { .. }), _) | (_, Err(stochorder::Error::InsufficientDomain { .. })) => {}
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
        Ok(())
    };
    for s in &catalog {
        let (u, v) = s.mixtures()?;
        let mut g = Grid::auto(&u, &v, DEFAULT_POINTS)?;
        if let Some(x) = s.expected.x_min {
            g = g.with_lower_bound(x)?;
        }
        audit_pair(s.id.clone(), &u, &v, g)?;
    }
    for k in 0..pairs {
        let (u, v) = random_pair(&mut rng);
        let g = Grid::auto(&u, &v, DEFAULT_POINTS)?;
        audit_pair(format!("random pair {k}"), &u, &v, g)?;
    }
    items.push(audit);

    let mut major = Item::new("majorization_axioms");
    for _ in 0..1000 {
        let n = rng.gen_range(1..=8);
        let y: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(0..64u8)) / 8.0).collect();
        let x = transfer(&mut rng, &y);
        let z = transfer(&mut rng, &x);
        let refl = check_majorization(&y, &y)?;
        major.record(refl.x_majorized_by_y && refl.y_majorized_by_x, || format!("not reflexive at {y:?}"));
        let xy = check_majorization(&x, &y)?;
        let zx = check_majorization(&z, &x)?;
        let zy = check_majorization(&z, &y)?;
        major.record(xy.x_majorized_by_y, || format!("transfer {x:?} not majorized by {y:?}"));
        major.record(!(xy.x_majorized_by_y && zx.x_majorized_by_y) || zy.x_majorized_by_y, || {
            format!("not transitive: {z:?} {x:?} {y:?}")
        });
        let mut p = y.clone();
        p.shuffle(&mut rng);
        let perm = check_majorization(&x, &p)?;
        major.record(perm.x_majorized_by_y == xy.x_majorized_by_y, || {
            format!("not permutation invariant: {x:?} vs {y:?} and {p:?}")
        });
        // brute-force comparison on the sorted prefix sums
        let (px, py) = (prefix_sums_sorted_desc(&x), prefix_sums_sorted_desc(&y));
        let oracle = (px[n - 1] - py[n - 1]).abs() <= 1e-12 && px.iter().zip(&py).all(|(a, b)| *a <= b + 1e-12);
        major.record(oracle == xy.x_majorized_by_y, || format!("prefix-sum disagreement: {x:?} vs {y:?}"));
    }
    items.push(major);

    let mut deriv = Item::new("derivative_consistency");
    for s in &catalog {
        let (u, v) = s.mixtures()?;
        let g = Grid::auto(&u, &v, DEFAULT_POINTS)?;
        let mut breaks = u.breakpoints();
        breaks.extend(v.breakpoints());
        for m in [&u, &v] {
            let mut taken = 0;
            while taken < 50 {
                let x = rng.gen_range(g.x_lo..g.x_hi);
                let h = 1e-5 * x.abs().max(1.0);
                if breaks.iter().any(|b| (x - b).abs() <= 10.0 * h) {
                    continue;
                }
                taken += 1;
                let f = m.pdf(x);
                let num = numeric_pdf(m, x);
                let rel = (num - f).abs() / f.abs().max(1e-300);
                deriv.record(rel <= 1e-6 || (f == 0.0 && num == 0.0), || {
                    format!("{} x = {x}: pdf {f:e}, dF/dx {num:e}", s.id)
                });
            }
        }
    }
    items.push(deriv);

    let passed = items.iter().all(|i| i.failed == 0);
    for i in &items {
        eprintln!("{:<24} {:>6} checked {:>4} failed", i.name, i.checked, i.failed);
        for d in &i.details {
            eprintln!("    {d}");
        }
    }
    let text = to_json(&ValidateReport {
        command: argv,
        seed,
        items,
        passed,
    })?;
    print!("{text}");
    Ok(if passed { 0 } else { 1 })
}
