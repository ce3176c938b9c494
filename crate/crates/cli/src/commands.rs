use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use stochorder::analysis::{
    check_order as run_check, evaluate_checked, implication_audit, AuditReport, CheckConfig, Direction, Grid, Monotonicity, Order,
    OrderVerdict, Quantity,
};
use stochorder::conditions::{ConditionReport, TheoremId};
use stochorder::report::to_json;
use stochorder::scenarios::{
    builtin_catalog, evaluate_conditions, load_mixture, non_common_weights, observed_direction, persist_record,
    results_dir, run_scenario, Agreement, ExpectedDirection, RunOptions, Scenario, ScenarioRecord,
};
use stochorder::{Error, FiniteMixture, Result};

use crate::options::{resolve_scenario, CheckOpts, GridOpts};

fn emit(doc: &impl Serialize) -> Result<()> {
    let text = to_json(doc)?;
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

pub enum PairSource {
    Scenario(String),
    Files(PathBuf, PathBuf),
}

impl PairSource {
    pub fn from_args(scenario: Option<String>, u: Option<PathBuf>, v: Option<PathBuf>) -> PairSource {
        match (scenario, u, v) {
            (Some(s), _, _) => PairSource::Scenario(s),
            (None, Some(u), Some(v)) => PairSource::Files(u, v),
            // clap enforces one of the two forms
            _ => unreachable!("scenario or --u/--v is required"),
        }
    }
}

#[derive(Serialize)]
struct Tolerances {
    tol: f64,
    floor: f64,
}

#[derive(Serialize)]
struct VerdictReport<'a> {
    command: &'a [String],
    scenario: Option<&'a str>,
    pair: String,
    conditions: Option<&'a ConditionReport>,
    prediction_met: Option<bool>,
    asked: Option<Direction>,
    verdict: &'a OrderVerdict,
    observed: Direction,
    holds: bool,
    audit: Option<AuditReport>,
    agreement: Option<Agreement>,
    tolerances: Tolerances,
    grid: Grid,
}

fn parse_order(s: &str) -> Result<Order> {
    Order::from_id(s).ok_or_else(|| Error::Validation(format!("unknown order `{s}`; expected st, rh, lr or r_rh")))
}

fn audit_for(verdict: &OrderVerdict, u: &FiniteMixture, v: &FiniteMixture, cfg: &CheckConfig) -> Result<AuditReport> {
    let get = |o: Order| -> Result<OrderVerdict> {
        if o == verdict.order {
            Ok(verdict.clone())
        } else {
            run_check(o, u, v, &verdict.grid, cfg)
        }
    };
    implication_audit(&get(Order::St)?, &get(Order::Rh)?, &get(Order::Lr)?)
}

fn describe(v: &OrderVerdict) -> String {
    let mut s = format!("{} on [{}, {}] ({} points): {}", v.order, v.range.0, v.range.1, v.points_used, v.direction);
    if let Some(r) = &v.ratio {
        s.push_str(&format!(", ratio {}", r.classification));
    }
    if let Some(p) = v.proof_reading {
        s.push_str(&format!(", proof reading {p}"));
    }
    if let Some(w) = &v.witness {
        s.push_str(&format!(", witness x = {}", w.x));
    }
    s
}

pub fn eval(scenario: &str, quantity: &str, grid: &GridOpts, check: &CheckOpts, out: Option<&Path>) -> Result<u8> {
    let q = Quantity::from_id(quantity).ok_or_else(|| {
        Error::Validation(format!(
            "unknown quantity `{quantity}`; expected one of cdf, pdf, sf, rhr, cdf_ratio, pdf_ratio, rhr_ratio"
        ))
    })?;
    let cfg = check.config()?;
    let s = resolve_scenario(scenario, grid.policy()?)?;
    let (u, v) = s.mixtures()?;
    let g = grid.resolve(&u, &v, None)?;
    let curve = evaluate_checked(q, &u, &v, &g.points(), cfg.floor)?;
    let csv = curve.to_csv();
    match out {
        Some(path) => {
            std::fs::write(path, csv)?;
            eprintln!("{}: wrote {} rows of {} to {}", s.id, curve.x.len(), q, path.display());
        }
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(csv.as_bytes())?;
            o.flush()?;
        }
    }
    Ok(0)
}

pub fn check_order(
    argv: &[String],
    source: PairSource,
    order: &str,
    direction: &str,
    grid: &GridOpts,
    check: &CheckOpts,
) -> Result<u8> {
    let order = parse_order(order)?;
    let asked = match Direction::from_id(direction) {
        Some(d @ (Direction::UleqV | Direction::VleqU)) => d,
        _ => {
            return Err(Error::Validation(format!(
                "--direction must be u_leq_v or v_leq_u, got `{direction}`"
            )))
        }
    };
    let cfg = check.config()?;
    let policy = grid.policy()?;
    let (id, u, v, x_min) = match source {
        PairSource::Scenario(arg) => {
            let s = resolve_scenario(&arg, policy)?;
            let (u, v) = s.mixtures()?;
            let x_min = (s.expected.order == order).then_some(s.expected.x_min).flatten();
            (Some(s.id), u, v, x_min)
        }
        PairSource::Files(pu, pv) => (None, load_mixture(&pu, policy)?, load_mixture(&pv, policy)?, None),
    };
    let g = grid.resolve(&u, &v, x_min)?;
    let verdict = run_check(order, &u, &v, &g, &cfg)?;
    let audit = matches!(order, Order::Rh | Order::Lr)
        .then(|| audit_for(&verdict, &u, &v, &cfg))
        .transpose()?;
    let observed = observed_direction(&verdict);
    let holds = observed.establishes(asked);
    eprintln!("{}", describe(&verdict));
    if let Some(a) = &audit {
        if !a.consistent {
            eprintln!("implication audit: {}", a.issues.join("; "));
        }
    }
    eprintln!("{asked}: {}", if holds { "holds" } else { "does not hold" });
    emit(&VerdictReport {
        command: argv,
        scenario: id.as_deref(),
        pair: verdict.pair_fingerprint.clone(),
        conditions: None,
        prediction_met: None,
        asked: Some(asked),
        verdict: &verdict,
        observed,
        holds,
        audit,
        agreement: None,
        tolerances: Tolerances {
            tol: verdict.tol,
            floor: verdict.floor,
        },
        grid: g,
    })?;
    Ok(if holds { 0 } else { 1 })
}

pub fn check_theorem(
    argv: &[String],
    scenario: &str,
    theorem: Option<&str>,
    grid: &GridOpts,
    check: &CheckOpts,
) -> Result<u8> {
    let cfg = check.config()?;
    let s = resolve_scenario(scenario, grid.policy()?)?;
    let t = match theorem {
        Some(t) => TheoremId::from_id(t).ok_or_else(|| Error::Validation(format!("unknown theorem `{t}`")))?,
        None => s.theorem,
    };
    let conditions = evaluate_conditions(&s, t, grid.points)?;
    let (u, v) = s.mixtures()?;
    let predicted = conditions.predicted;
    let x_min = (s.expected.order == predicted.order).then_some(s.expected.x_min).flatten();
    let g = grid.resolve(&u, &v, x_min)?;
    let verdict = run_check(predicted.order, &u, &v, &g, &cfg)?;
    let met = predicted.is_met_by(&verdict);
    let audit = matches!(predicted.order, Order::Rh | Order::Lr)
        .then(|| audit_for(&verdict, &u, &v, &cfg))
        .transpose()?;
    for item in &conditions.items {
        eprintln!("  [{}] {}: {}", if item.passed { "pass" } else { "FAIL" }, item.name, item.detail);
    }
    eprintln!(
        "{} conditions {}; predicted {} {}: {}",
        t,
        if conditions.all_pass { "all pass" } else { "not all pass" },
        predicted.order,
        predicted.direction,
        if met { "observed" } else { "not observed" }
    );
    eprintln!("{}", describe(&verdict));
    emit(&VerdictReport {
        command: argv,
        scenario: Some(&s.id),
        pair: verdict.pair_fingerprint.clone(),
        conditions: Some(&conditions),
        prediction_met: Some(met),
        asked: Some(predicted.direction),
        observed: observed_direction(&verdict),
        verdict: &verdict,
        holds: met,
        audit,
        agreement: None,
        tolerances: Tolerances {
            tol: verdict.tol,
            floor: verdict.floor,
        },
        grid: g,
    })?;
    Ok(if met { 0 } else { 1 })
}

#[derive(Serialize)]
struct Row {
    id: String,
    theorem: TheoremId,
    conditions_pass: bool,
    order: Order,
    verdict: Direction,
    ratio: Option<Monotonicity>,
    observed: Direction,
    expected: ExpectedDirection,
    agreement: Agreement,
}

#[derive(Serialize)]
struct ReproduceReport<'a> {
    command: &'a [String],
    seed: u64,
    points: usize,
    rows: Vec<Row>,
    contradictions: usize,
    records: &'a [ScenarioRecord],
}

#[allow(clippy::too_many_arguments)]
pub fn reproduce(
    argv: &[String],
    ids: &[String],
    all: bool,
    jobs: usize,
    seed: u64,
    save: bool,
    grid: &GridOpts,
    check: &CheckOpts,
) -> Result<u8> {
    let policy = grid.policy()?;
    let selection: Vec<Scenario> = if all {
        builtin_catalog()
            .into_iter()
            .map(|s| match policy {
                Some(p) => s.with_policy(p),
                None => Ok(s),
            })
            .collect::<Result<_>>()?
    } else {
        ids.iter().map(|id| resolve_scenario(id, policy)).collect::<Result<_>>()?
    };
    let opts = RunOptions {
        grid: grid.explicit()?,
        points: grid.points,
        check: check.config()?,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Validation(format!("cannot start {jobs} workers: {e}")))?;
    let records: Vec<ScenarioRecord> = pool.install(|| {
        use rayon::prelude::*;
        selection.par_iter().map(|s| run_scenario(s, &opts)).collect::<Result<_>>()
    })?;

    if save {
        let dir = results_dir();
        for r in &records {
            let paths = persist_record(r, &dir)?;
            eprintln!("saved {}", paths.record.display());
        }
    }
    let rows: Vec<Row> = records
        .iter()
        .map(|r| Row {
            id: r.scenario.clone(),
            theorem: r.theorem,
            conditions_pass: r.conditions.all_pass,
            order: r.verdict.order,
            verdict: r.verdict.direction,
            ratio: r.verdict.classification(),
            observed: r.observed,
            expected: r.expected.direction,
            agreement: r.agreement,
        })
        .collect();
    eprintln!(
        "{:<8} {:<6} {:<10} {:<6} {:<10} {:<15} {:<10} {:<10} agreement",
        "id", "thm", "conditions", "order", "verdict", "ratio", "observed", "expected"
    );
    for r in &rows {
        eprintln!(
            "{:<8} {:<6} {:<10} {:<6} {:<10} {:<15} {:<10} {:<10} {:?}",
            r.id,
            r.theorem.id(),
            if r.conditions_pass { "pass" } else { "fail" },
            r.order.id(),
            r.verdict.id(),
            r.ratio.map(|m| m.id()).unwrap_or("-"),
            r.observed.id(),
            r.expected.id(),
            r.agreement
        );
    }
    let contradictions = rows.iter().filter(|r| r.agreement == Agreement::Contradiction).count();
    eprintln!("{} scenarios, {} contradictions", rows.len(), contradictions);
    emit(&ReproduceReport {
        command: argv,
        seed,
        points: grid.points,
        rows,
        contradictions,
        records: &records,
    })?;
    Ok(if contradictions == 0 { 0 } else { 1 })
}

#[derive(Serialize)]
struct ExperimentReport<'a, T: Serialize> {
    command: &'a [String],
    experiment: T,
}

pub fn experiment(argv: &[String], scenario: &str, trials: usize, seed: u64) -> Result<u8> {
    let s = resolve_scenario(scenario, None)?;
    let result = non_common_weights(&s, trials, seed)?;
    eprintln!(
        "{}: {} trials, {} with the other conditions satisfied, st held in {} of those",
        s.id,
        trials,
        result.eligible,
        result.st_holds
    );
    emit(&ExperimentReport {
        command: argv,
        experiment: &result,
    })?;
    Ok(0)
}

#[derive(Serialize)]
struct CatalogEntry {
    id: String,
    theorem: TheoremId,
    order: Order,
    expected: ExpectedDirection,
    x_min: Option<f64>,
    description: String,
}

pub fn catalog(id: Option<&str>, out: Option<&Path>) -> Result<u8> {
    let cat = builtin_catalog();
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        for s in cat.iter().filter(|s| id.map_or(true, |i| i == s.id)) {
            let path = dir.join(format!("{}.json", s.id));
            std::fs::write(&path, s.to_json()?)?;
            eprintln!("wrote {}", path.display());
        }
        return Ok(0);
    }
    if let Some(id) = id {
        let s = cat
            .into_iter()
            .find(|s| s.id == id)
            .ok_or_else(|| Error::UnknownScenario(id.to_string()))?;
        print!("{}", s.to_json()?);
        return Ok(0);
    }
    let entries: Vec<CatalogEntry> = cat
        .into_iter()
        .map(|s| CatalogEntry {
            id: s.id,
            theorem: s.theorem,
            order: s.expected.order,
            expected: s.expected.direction,
            x_min: s.expected.x_min,
            description: s.description,
        })
        .collect();
    emit(&entries)?;
    Ok(0)
}
