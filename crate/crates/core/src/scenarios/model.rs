use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::{Direction, Order};

use crate::baseline::{BaselineModel, Family, FamilyKind};
use crate::conditions::TheoremId;
use crate::els::ElsComponent;
use crate::error::{Error, Result};
use crate::mixture::{build_outlier_mixture, FiniteMixture, OutlierMixtureSpec, WeightPolicy};

/// The two distributions being compared.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioPair {
    /// Mixtures with one weight per component.
    Mixtures { u: FiniteMixture, v: FiniteMixture },
    /// Two-block outlier models, collapsed to two-term mixtures under `policies`.
    Outlier {
        u: OutlierMixtureSpec,
        v: OutlierMixtureSpec,
        policies: [WeightPolicy; 2],
    },
}

/// Outcome a scenario expects from its order check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedDirection {
    /// The checker must establish this direction; `Neither` requires the order
    /// to fail both ways.
    Is(Direction),
    /// The direction predicted by the scenario's theorem must not be established.
    Fails,
}

impl ExpectedDirection {
    pub fn id(self) -> &'static str {
        match self {
            ExpectedDirection::Is(d) => d.id(),
            ExpectedDirection::Fails => "fails",
        }
    }

    pub fn from_id(id: &str) -> Option<ExpectedDirection> {
        if id == "fails" {
            Some(ExpectedDirection::Fails)
        } else {
            Direction::from_id(id).map(ExpectedDirection::Is)
        }
    }
}

impl std::fmt::Display for ExpectedDirection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

impl serde::Serialize for ExpectedDirection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

/// Verdict a scenario is expected to produce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expected {
    pub order: Order,
    pub direction: ExpectedDirection,
    /// Lower end of the x-range the verdict refers to.
    pub x_min: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub description: String,
    pub figure: Option<u32>,
    pub baseline: BaselineModel,
    pub pair: ScenarioPair,
    pub theorem: TheoremId,
    pub expected: Expected,
    pub notes: Vec<String>,
}

impl Scenario {
    pub fn is_outlier(&self) -> bool {
        matches!(self.pair, ScenarioPair::Outlier { .. })
    }

    /// The pair as evaluated mixtures.
    pub fn mixtures(&self) -> Result<(FiniteMixture, FiniteMixture)> {
        match &self.pair {
            ScenarioPair::Mixtures { u, v } => Ok((u.clone(), v.clone())),
            ScenarioPair::Outlier { u, v, policies } => Ok((
                build_outlier_mixture(u, policies[0])?,
                build_outlier_mixture(v, policies[1])?,
            )),
        }
    }

    /// Same scenario with every mixture rebuilt under `policy`.
    pub fn with_policy(&self, policy: WeightPolicy) -> Result<Scenario> {
        let pair = match &self.pair {
            ScenarioPair::Mixtures { u, v } => {
                let re = |m: &FiniteMixture, label: &str| {
                    FiniteMixture::new(m.components().to_vec(), m.raw_weights().to_vec(), policy)
                        .map_err(|e| invalid(label, e))
                };
                ScenarioPair::Mixtures {
                    u: re(u, "mixture 1")?,
                    v: re(v, "mixture 2")?,
                }
            }
            ScenarioPair::Outlier { u, v, .. } => {
                build_outlier_mixture(u, policy).map_err(|e| invalid("mixture 1", e))?;
                build_outlier_mixture(v, policy).map_err(|e| invalid("mixture 2", e))?;
                ScenarioPair::Outlier {
                    u: u.clone(),
                    v: v.clone(),
                    policies: [policy; 2],
                }
            }
        };
        Ok(Scenario {
            pair,
            ..self.clone()
        })
    }

    /// Serialized scenario document.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&ScenarioFile::from(self)).map_err(|e| Error::Parse(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Scenario> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_scenario()
    }
}

/// Reads and validates a scenario document.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Scenario::from_json(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// A single mixture together with its baseline, as read from a mixture file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureDocument {
    pub baseline: BaselineFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outlier: Option<OutlierFile>,
    #[serde(default = "default_policy")]
    pub policy: String,
    pub components: Vec<ComponentFile>,
}

impl MixtureDocument {
    /// Builds the mixture; `policy` overrides the one in the document.
    pub fn into_mixture(&self, policy: Option<WeightPolicy>) -> Result<FiniteMixture> {
        let base = self.baseline.into_model()?;
        let m = MixtureFile {
            weights: self.weights.clone(),
            outlier: self.outlier.clone(),
            policy: self.policy.clone(),
            components: self.components.clone(),
        };
        let policy = match policy {
            Some(p) => p,
            None => parse_policy(&m.policy, "mixture")?,
        };
        let comps = m.components(&base, "mixture")?;
        match (&m.weights, &m.outlier) {
            (Some(w), None) => FiniteMixture::new(comps, w.clone(), policy).map_err(|e| invalid("mixture", e)),
            (None, Some(o)) => {
                let mut comps = comps;
                if comps.len() != 2 {
                    return Err(Error::Validation(format!(
                        "mixture: an outlier model has exactly two subpopulations, got {}",
                        comps.len()
                    )));
                }
                let comp2 = comps.pop().unwrap();
                let comp1 = comps.pop().unwrap();
                let spec = OutlierMixtureSpec {
                    n1: o.n1,
                    r1: o.r1,
                    n2: o.n2,
                    r2: o.r2,
                    comp1,
                    comp2,
                };
                build_outlier_mixture(&spec, policy).map_err(|e| invalid("mixture", e))
            }
            _ => Err(Error::Validation("mixture: give exactly one of `weights` and `outlier`".into())),
        }
    }
}

/// Reads a mixture file: a baseline plus one mixture entry.
pub fn load_mixture(path: &Path, policy: Option<WeightPolicy>) -> Result<FiniteMixture> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let doc: MixtureDocument =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    doc.into_mixture(policy)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub id: String,
    #[serde(default)]
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub figure: Option<u32>,
    pub baseline: BaselineFile,
    pub mixtures: Vec<MixtureFile>,
    pub theorem: String,
    pub expected: ExpectedFile,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineFile {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    /// Left-truncation point of the truncated families.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<f64>,
    /// `(t, F(t))` knots of a tabulated baseline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutlierFile {
    pub n1: u32,
    pub r1: f64,
    pub n2: u32,
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outlier: Option<OutlierFile>,
    #[serde(default = "default_policy")]
    pub policy: String,
    pub components: Vec<ComponentFile>,
}

fn default_policy() -> String {
    WeightPolicy::StrictUnit.id().to_string()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentFile {
    pub alpha: f64,
    pub sigma: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedFile {
    pub order: String,
    pub direction: String,
    #[serde(default)]
    pub x_min: Option<f64>,
}

impl From<&Scenario> for ScenarioFile {
    fn from(s: &Scenario) -> Self {
        let comp = |c: &ElsComponent| ComponentFile {
            alpha: c.alpha(),
            sigma: c.sigma(),
            lambda: c.lambda(),
        };
        let mixtures = match &s.pair {
            ScenarioPair::Mixtures { u, v } => [u, v]
                .iter()
                .map(|m| MixtureFile {
                    weights: Some(m.raw_weights().to_vec()),
                    outlier: None,
                    policy: m.policy().id().to_string(),
                    components: m.components().iter().map(comp).collect(),
                })
                .collect(),
            ScenarioPair::Outlier { u, v, policies } => [u, v]
                .iter()
                .zip(policies)
                .map(|(o, p)| MixtureFile {
                    weights: None,
                    outlier: Some(OutlierFile {
                        n1: o.n1,
                        r1: o.r1,
                        n2: o.n2,
                        r2: o.r2,
                    }),
                    policy: p.id().to_string(),
                    components: vec![comp(&o.comp1), comp(&o.comp2)],
                })
                .collect(),
        };
        ScenarioFile {
            id: s.id.clone(),
            description: s.description.clone(),
            figure: s.figure,
            baseline: BaselineFile::from(&s.baseline),
            mixtures,
            theorem: s.theorem.id().to_string(),
            expected: ExpectedFile {
                order: s.expected.order.id().to_string(),
                direction: s.expected.direction.id().to_string(),
                x_min: s.expected.x_min,
            },
            notes: s.notes.clone(),
        }
    }
}

impl From<&BaselineModel> for BaselineFile {
    fn from(b: &BaselineModel) -> Self {
        let (params, truncation, table) = match b.family() {
            Family::Tabulated(t) => (
                BTreeMap::new(),
                None,
                Some(t.knots().map(|(t, f)| [t, f]).collect()),
            ),
            _ => {
                let mut params = BTreeMap::new();
                let mut truncation = None;
                for (name, value) in b.params() {
                    if name == "t0" {
                        truncation = Some(value);
                    } else {
                        params.insert(name.to_string(), value);
                    }
                }
                (params, truncation, None)
            }
        };
        BaselineFile {
            family: b.kind().id().to_string(),
            params,
            truncation,
            table,
        }
    }
}

fn invalid(context: &str, e: Error) -> Error {
    match e {
        Error::InvalidParameter { name, value, reason } => {
            Error::Validation(format!("{context}: {name} {reason}, got {value}"))
        }
        Error::Validation(m) => Error::Validation(m),
        other => Error::Validation(format!("{context}: {other}")),
    }
}

impl BaselineFile {
    pub fn into_model(&self) -> Result<BaselineModel> {
        let kind = FamilyKind::from_id(&self.family)
            .ok_or_else(|| Error::Validation(format!("baseline: unknown family `{}`", self.family)))?;
        if kind == FamilyKind::Tabulated {
            let table = self
                .table
                .as_ref()
                .ok_or_else(|| Error::Validation("baseline: tabulated family needs a `table`".into()))?;
            let pts: Vec<(f64, f64)> = table.iter().map(|p| (p[0], p[1])).collect();
            return BaselineModel::tabulated(&pts).map_err(|e| invalid("baseline", e));
        }
        let truncated = matches!(
            kind,
            FamilyKind::LtExponential | FamilyKind::LtBurr12 | FamilyKind::LtLomax
        );
        let wanted: &[&str] = match kind {
            FamilyKind::Pareto => &["a", "k"],
            FamilyKind::LtExponential => &["b"],
            FamilyKind::Benktander2 => &["a", "b"],
            FamilyKind::LtBurr12 => &["k", "m"],
            FamilyKind::LtLomax => &["m"],
            FamilyKind::Loglogistic => &["b"],
            FamilyKind::Tabulated => unreachable!(),
        };
        for key in self.params.keys() {
            if !wanted.contains(&key.as_str()) {
                return Err(Error::Validation(format!(
                    "baseline: unexpected parameter `{key}` for {kind} (expected {wanted:?})"
                )));
            }
        }
        let p = |name: &str| {
            self.params
                .get(name)
                .copied()
                .ok_or_else(|| Error::Validation(format!("baseline: {kind} needs parameter `{name}`")))
        };
        let t0 = match (truncated, self.truncation) {
            (true, Some(t0)) => t0,
            (true, None) => return Err(Error::Validation(format!("baseline: {kind} needs a `truncation` point"))),
            (false, Some(_)) => return Err(Error::Validation(format!("baseline: {kind} takes no truncation"))),
            (false, None) => 0.0,
        };
        let model = match kind {
            FamilyKind::Pareto => BaselineModel::pareto(p("a")?, p("k")?),
            FamilyKind::LtExponential => BaselineModel::lt_exponential(p("b")?, t0),
            FamilyKind::Benktander2 => BaselineModel::benktander2(p("a")?, p("b")?),
            FamilyKind::LtBurr12 => BaselineModel::lt_burr12(p("k")?, p("m")?, t0),
            FamilyKind::LtLomax => BaselineModel::lt_lomax(p("m")?, t0),
            FamilyKind::Loglogistic => BaselineModel::loglogistic(p("b")?),
            FamilyKind::Tabulated => unreachable!(),
        };
        model.map_err(|e| invalid("baseline", e))
    }
}

fn parse_policy(s: &str, ctx: &str) -> Result<WeightPolicy> {
    WeightPolicy::from_id(s).ok_or_else(|| Error::Validation(format!("{ctx}: unknown weight policy `{s}`")))
}

impl MixtureFile {
    fn components(&self, base: &BaselineModel, ctx: &str) -> Result<Vec<ElsComponent>> {
        self.components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                ElsComponent::new(base.clone(), c.alpha, c.sigma, c.lambda)
                    .map_err(|e| invalid(&format!("{ctx} component {}", i + 1), e))
            })
            .collect()
    }
}

impl ScenarioFile {
    pub fn into_scenario(self) -> Result<Scenario> {
        if self.id.trim().is_empty() {
            return Err(Error::Validation("id must not be empty".into()));
        }
        let baseline = self.baseline.into_model()?;
        if self.mixtures.len() != 2 {
            return Err(Error::Validation(format!(
                "exactly two mixtures are required, got {}",
                self.mixtures.len()
            )));
        }
        let theorem = TheoremId::from_id(&self.theorem)
            .ok_or_else(|| Error::Validation(format!("unknown theorem `{}`", self.theorem)))?;
        let order = Order::from_id(&self.expected.order)
            .ok_or_else(|| Error::Validation(format!("expected: unknown order `{}`", self.expected.order)))?;
        let direction = ExpectedDirection::from_id(&self.expected.direction).ok_or_else(|| {
            Error::Validation(format!("expected: unknown direction `{}`", self.expected.direction))
        })?;
        if let Some(x) = self.expected.x_min {
            if !x.is_finite() {
                return Err(Error::Validation("expected: x_min must be finite".into()));
            }
        }
        // A scenario may test a stronger order than the theorem concludes, to
        // show that the conclusion does not extend.
        let predicted = theorem.prediction().order;
        if order != predicted && !stronger(order, predicted) {
            return Err(Error::Validation(format!(
                "expected order {order} is neither the order of {theorem} ({predicted}) nor a stronger one"
            )));
        }

        let outlier = self.mixtures.iter().map(|m| m.outlier.is_some()).collect::<Vec<_>>();
        let pair = match (outlier[0], outlier[1]) {
            (false, false) => {
                let mut ms = Vec::with_capacity(2);
                for (i, m) in self.mixtures.iter().enumerate() {
                    let ctx = format!("mixture {}", i + 1);
                    let weights = m
                        .weights
                        .clone()
                        .ok_or_else(|| Error::Validation(format!("{ctx}: needs `weights` or `outlier`")))?;
                    let policy = parse_policy(&m.policy, &ctx)?;
                    let comps = m.components(&baseline, &ctx)?;
                    ms.push(FiniteMixture::new(comps, weights, policy).map_err(|e| invalid(&ctx, e))?);
                }
                let v = ms.pop().unwrap();
                let u = ms.pop().unwrap();
                ScenarioPair::Mixtures { u, v }
            }
            (true, true) => {
                let mut specs = Vec::with_capacity(2);
                let mut policies = [WeightPolicy::StrictUnit; 2];
                for (i, m) in self.mixtures.iter().enumerate() {
                    let ctx = format!("mixture {}", i + 1);
                    if m.weights.is_some() {
                        return Err(Error::Validation(format!("{ctx}: give either `weights` or `outlier`, not both")));
                    }
                    let o = m.outlier.as_ref().unwrap();
                    let mut comps = m.components(&baseline, &ctx)?;
                    if comps.len() != 2 {
                        return Err(Error::Validation(format!(
                            "{ctx}: an outlier model has exactly two subpopulations, got {}",
                            comps.len()
                        )));
                    }
                    policies[i] = parse_policy(&m.policy, &ctx)?;
                    let comp2 = comps.pop().unwrap();
                    let comp1 = comps.pop().unwrap();
                    let spec = OutlierMixtureSpec {
                        n1: o.n1,
                        r1: o.r1,
                        n2: o.n2,
                        r2: o.r2,
                        comp1,
                        comp2,
                    };
                    build_outlier_mixture(&spec, policies[i]).map_err(|e| invalid(&ctx, e))?;
                    specs.push(spec);
                }
                let v = specs.pop().unwrap();
                let u = specs.pop().unwrap();
                ScenarioPair::Outlier { u, v, policies }
            }
            _ => {
                return Err(Error::Validation(
                    "both mixtures must use `weights`, or both must use `outlier`".into(),
                ))
            }
        };
        let is_outlier = matches!(pair, ScenarioPair::Outlier { .. });
        if theorem.needs_outlier_specs() != is_outlier {
            return Err(Error::Validation(format!(
                "{theorem} applies to {} mixtures",
                if theorem.needs_outlier_specs() { "outlier" } else { "weighted" }
            )));
        }
        Ok(Scenario {
            id: self.id,
            description: self.description,
            figure: self.figure,
            baseline,
            pair,
            theorem,
            expected: Expected {
                order,
                direction,
                x_min: self.expected.x_min,
            },
            notes: self.notes,
        })
    }
}

/// True when `a` implies `b` in the chain `lr => rh => st`. The ageing order
/// is not part of the chain.
fn stronger(a: Order, b: Order) -> bool {
    matches!((a, b), (Order::Lr, Order::Rh) | (Order::Lr, Order::St) | (Order::Rh, Order::St))
}
