use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::model::{Scenario, ScenarioPair};
use crate::analysis::{check_order, CheckConfig, Direction, Grid, Order, DEFAULT_POINTS};
use crate::conditions::eval_theorem_3_1;
use crate::error::{Error, Result};
use crate::mixture::{FiniteMixture, WeightPolicy};

/// One draw of the non-common-weights experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightTrial {
    pub weights_v: Vec<f64>,
    /// Conditions other than the common-weights item all pass.
    pub other_conditions_pass: bool,
    pub st: Direction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightExperiment {
    pub scenario: String,
    pub seed: u64,
    pub trials: Vec<WeightTrial>,
    /// Trials whose remaining conditions pass.
    pub eligible: usize,
    /// Eligible trials in which `U <=st V` still holds on the grid.
    pub st_holds: usize,
}

fn uniform_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    // normalized exponentials are uniform on the simplex
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = e.iter().sum();
    let mut w: Vec<f64> = e.iter().map(|x| x / total).collect();
    // absorb rounding so the strict policy accepts the vector
    let rest: f64 = w[..n - 1].iter().sum();
    w[n - 1] = 1.0 - rest;
    w
}

/// Keeps every parameter of a weighted-mixture scenario but redraws the
/// weights of `V`, then checks the usual stochastic order. Only reports what
/// was observed; no conclusion is drawn.
pub fn non_common_weights(s: &Scenario, trials: usize, seed: u64) -> Result<WeightExperiment> {
    let ScenarioPair::Mixtures { u, v } = &s.pair else {
        return Err(Error::Precondition(format!(
            "scenario {} is an outlier model; the experiment needs weighted mixtures",
            s.id
        )));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = CheckConfig::default();
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let weights = uniform_simplex(&mut rng, v.len());
        let v2 = FiniteMixture::new(v.components().to_vec(), weights.clone(), WeightPolicy::StrictUnit)?;
        let report = eval_theorem_3_1(u, &v2)?;
        let other = report
            .items
            .iter()
            .filter(|i| i.name != "common mixing weights")
            .all(|i| i.passed);
        let grid = Grid::auto(u, &v2, DEFAULT_POINTS)?;
        let st = check_order(Order::St, u, &v2, &grid, &cfg)?.direction;
        out.push(WeightTrial {
            weights_v: weights,
            other_conditions_pass: other,
            st,
        });
    }
    let eligible = out.iter().filter(|t| t.other_conditions_pass).count();
    let st_holds = out
        .iter()
        .filter(|t| t.other_conditions_pass && t.st.establishes(Direction::UleqV))
        .count();
    Ok(WeightExperiment {
        scenario: s.id.clone(),
        seed,
        trials: out,
        eligible,
        st_holds,
    })
}
