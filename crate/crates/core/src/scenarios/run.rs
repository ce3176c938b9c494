use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::model::{ExpectedDirection, Scenario, ScenarioPair};
use crate::analysis::{
    check_order, implication_audit, AuditReport, CheckConfig, Curve, Direction, Grid, Order, OrderVerdict,
    DEFAULT_POINTS,
};
use crate::conditions::{
    eval_theorem_3_1, eval_theorem_3_2, eval_theorem_3_3, eval_theorem_3_4, eval_theorem_4_1, eval_theorem_4_2,
    eval_theorem_4_3, ConditionReport, TheoremId,
};
use crate::error::{Error, Result};

/// Environment variable naming the results directory.
pub const RESULTS_DIR_ENV: &str = "STOCHORDER_RESULTS_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Agreement {
    AsExpected,
    Contradiction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Replaces the automatic grid; the scenario's `x_min` is not applied to it.
    pub grid: Option<Grid>,
    pub points: usize,
    pub check: CheckConfig,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            grid: None,
            points: DEFAULT_POINTS,
            check: CheckConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectedSummary {
    pub order: Order,
    pub direction: ExpectedDirection,
    pub x_min: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioRecord {
    pub scenario: String,
    pub theorem: TheoremId,
    pub conditions: ConditionReport,
    /// Whether the verdict meets the theorem's predicted conclusion; absent
    /// when the scenario checks a different order than the theorem concludes.
    pub prediction_met: Option<bool>,
    pub expected: ExpectedSummary,
    pub verdict: OrderVerdict,
    /// Direction compared against the expectation.
    pub observed: Direction,
    pub agreement: Agreement,
    pub audit: AuditReport,
    pub notes: Vec<String>,
    /// Data behind the scenario's figure.
    #[serde(skip)]
    pub curve: Curve,
}

/// Evaluates the conditions of `theorem` for the scenario's pair. A theorem
/// whose shape does not match the pair is a precondition error.
pub fn evaluate_conditions(s: &Scenario, theorem: TheoremId, points: usize) -> Result<ConditionReport> {
    let baseline_grid = Grid::for_baseline(&s.baseline, points)?;
    match (&s.pair, theorem) {
        (ScenarioPair::Mixtures { u, v }, TheoremId::T3_1) => eval_theorem_3_1(u, v),
        (ScenarioPair::Mixtures { u, v }, TheoremId::T3_2) => eval_theorem_3_2(u, v, &baseline_grid),
        (ScenarioPair::Mixtures { u, v }, TheoremId::T3_3) => eval_theorem_3_3(u, v),
        (ScenarioPair::Mixtures { u, v }, TheoremId::T3_4) => eval_theorem_3_4(u, v),
        (ScenarioPair::Outlier { u, v, .. }, TheoremId::T4_1) => eval_theorem_4_1(u, v, &baseline_grid),
        (ScenarioPair::Outlier { u, v, .. }, TheoremId::T4_2) => eval_theorem_4_2(u, v, &baseline_grid),
        (ScenarioPair::Outlier { u, v, .. }, TheoremId::T4_3) => eval_theorem_4_3(u, v, &baseline_grid),
        (pair, t) => Err(Error::Precondition(format!(
            "{t} does not apply to {} scenario {}",
            match pair {
                ScenarioPair::Mixtures { .. } => "the weighted-mixture",
                ScenarioPair::Outlier { .. } => "the outlier-model",
            },
            s.id
        ))),
    }
}

/// Grid a scenario is checked on: the override, or the automatic grid raised
/// to the scenario's `x_min`.
pub fn scenario_grid(s: &Scenario, opts: &RunOptions) -> Result<Grid> {
    if let Some(g) = opts.grid {
        return Ok(g);
    }
    let (u, v) = s.mixtures()?;
    let g = Grid::auto(&u, &v, opts.points)?;
    match s.expected.x_min {
        Some(x) => g.with_lower_bound(x),
        None => Ok(g),
    }
}

/// Direction that is compared with expectations: the proof reading for the
/// ageing order, the plain direction otherwise.
pub fn observed_direction(verdict: &OrderVerdict) -> Direction {
    match verdict.order {
        Order::RRh => verdict.proof_reading.unwrap_or(Direction::Neither),
        _ => verdict.direction,
    }
}

fn agrees(expected: ExpectedDirection, predicted: Direction, observed: Direction) -> bool {
    match expected {
        ExpectedDirection::Is(Direction::Neither) => observed == Direction::Neither,
        ExpectedDirection::Is(d) => observed.establishes(d),
        ExpectedDirection::Fails => !observed.establishes(predicted),
    }
}

pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Result<ScenarioRecord> {
    let conditions = evaluate_conditions(s, s.theorem, opts.points)?;
    let (u, v) = s.mixtures()?;
    let grid = scenario_grid(s, opts)?;
    let verdict = check_order(s.expected.order, &u, &v, &grid, &opts.check)?;
    let observed = observed_direction(&verdict);
    let agreement = if agrees(s.expected.direction, conditions.predicted.direction, observed) {
        Agreement::AsExpected
    } else {
        Agreement::Contradiction
    };
    let prediction_met = (verdict.order == conditions.predicted.order).then(|| conditions.predicted.is_met_by(&verdict));

    let audit_verdict = |o: Order| -> Result<OrderVerdict> {
        if o == verdict.order {
            Ok(verdict.clone())
        } else {
            check_order(o, &u, &v, &grid, &opts.check)
        }
    };
    let audit = implication_audit(&audit_verdict(Order::St)?, &audit_verdict(Order::Rh)?, &audit_verdict(Order::Lr)?)?;

    let mut notes = s.notes.clone();
    for (label, m) in [("U", &u), ("V", &v)] {
        for w in m.warnings() {
            notes.push(format!("{label}: {w}"));
        }
    }
    let curve = verdict.curve.clone();
    Ok(ScenarioRecord {
        scenario: s.id.clone(),
        theorem: s.theorem,
        conditions,
        prediction_met,
        expected: ExpectedSummary {
            order: s.expected.order,
            direction: s.expected.direction,
            x_min: s.expected.x_min,
        },
        verdict,
        observed,
        agreement,
        audit,
        notes,
        curve,
    })
}

/// `STOCHORDER_RESULTS_DIR` when set, otherwise `./results`.
pub fn results_dir() -> PathBuf {
    std::env::var_os(RESULTS_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("results"))
}

#[derive(Serialize)]
struct PersistedRecord<'a> {
    timestamp_ms: u64,
    curve_file: String,
    #[serde(flatten)]
    record: &'a ScenarioRecord,
}

/// Paths written by [`persist_record`].
#[derive(Debug, Clone, PartialEq)]
pub struct PersistedPaths {
    pub record: PathBuf,
    pub curve: PathBuf,
}

fn create_new(path: &Path, contents: &str) -> std::io::Result<bool> {
    match OpenOptions::new().write(true).create_new(true).open(path) {
        Ok(mut f) => {
            f.write_all(contents.as_bytes())?;
            Ok(true)
        }
        Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Ok(false),
        Err(e) => Err(e),
    }
}

/// Writes `<id>_<ms>.json` and the matching curve CSV into `dir`, creating
/// it when needed. Existing files are never overwritten.
pub fn persist_record(record: &ScenarioRecord, dir: &Path) -> Result<PersistedPaths> {
    std::fs::create_dir_all(dir)?;
    let ms = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0);
    let safe: String = record
        .scenario
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect();
    for attempt in 0u32.. {
        let stem = if attempt == 0 {
            format!("{safe}_{ms}")
        } else {
            format!("{safe}_{ms}_{attempt}")
        };
        let json_path = dir.join(format!("{stem}.json"));
        let csv_path = dir.join(format!("{stem}.csv"));
        if csv_path.exists() {
            continue;
        }
        let body = crate::report::to_json(&PersistedRecord {
            timestamp_ms: ms,
            curve_file: format!("{stem}.csv"),
            record,
        })?;
        if !create_new(&json_path, &body)? {
            continue;
        }
        std::fs::write(&csv_path, record.curve.to_csv())?;
        return Ok(PersistedPaths {
            record: json_path,
            curve: csv_path,
        });
    }
    unreachable!()
}
