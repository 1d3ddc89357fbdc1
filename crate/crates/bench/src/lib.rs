//! Fixtures shared by the benchmarks.

use std::path::Path;

use dirac_utm::{Scenario, ScenarioConfig};

/// Loads one of the shipped scenarios by name.
pub fn shipped(name: &str) -> (ScenarioConfig, Scenario) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(format!("{name}.cfg"));
    let cfg = ScenarioConfig::load(&path).expect("shipped config loads");
    let scenario = cfg.scenario().expect("shipped config is valid");
    (cfg, scenario)
}
