//! Fixtures shared by the benchmarks.

use stochorder::analysis::Grid;
use stochorder::{builtin_catalog, FiniteMixture, Scenario};

/// A catalog scenario by id; panics on an unknown id.
pub fn scenario(id: &str) -> Scenario {
    builtin_catalog()
        .into_iter()
        .find(|s| s.id == id)
        .unwrap_or_else(|| panic!("no catalog scenario {id}"))
}

/// The two mixtures of a catalog scenario with their automatic grid.
pub fn pair(id: &str, points: usize) -> (FiniteMixture, FiniteMixture, Grid) {
    let (u, v) = scenario(id).mixtures().expect("catalog mixtures are valid");
    let g = Grid::auto(&u, &v, points).expect("catalog grids are valid");
    (u, v, g)
}
