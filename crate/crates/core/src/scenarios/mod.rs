//! Reference scenarios, scenario files and run records.

mod catalog;
mod experiment;
mod model;
mod run;

pub use catalog::{builtin_catalog, catalog_ids, catalog_scenario};
pub use experiment::{non_common_weights, WeightExperiment, WeightTrial};
pub use model::{
    load_mixture, load_scenario, BaselineFile, ComponentFile, Expected, ExpectedDirection, ExpectedFile, MixtureDocument, MixtureFile, OutlierFile, Scenario,
    ScenarioFile, ScenarioPair,
};
pub use run::{
    evaluate_conditions, observed_direction, persist_record, results_dir, run_scenario, scenario_grid, Agreement,
    ExpectedSummary, PersistedPaths, RunOptions, ScenarioRecord, RESULTS_DIR_ENV,
};
