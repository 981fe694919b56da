//! Bundled mission instances, published plans and reference values.

use serde::Deserialize;

use crate::mission::{Mission, MultiPlan, Plan, PlanSet};

pub const FIG1_JSON: &str = include_str!("../instances/fig1.json");
pub const K6_JSON: &str = include_str!("../instances/k6.json");
pub const K10_JSON: &str = include_str!("../instances/k10.json");
pub const MANIFEST_TOML: &str = include_str!("../instances/manifest.toml");

const FIG1_HAMILTON: &str = include_str!("../instances/fig1-hamilton-plan.json");
const FIG1_OPTIMAL: &str = include_str!("../instances/fig1-optimal-plan.json");
const K10_PLAN: &str = include_str!("../instances/k10-plan.json");
const K6_TWO_DRONES: &str = include_str!("../instances/k6-two-drone-plan.json");
const K10_TWO_DRONES: &str = include_str!("../instances/k10-two-drone-plan.json");

/// Tolerance for counting a run as having reached a reference value.
pub const SUCCESS_TOL: f64 = 1e-6;

fn mission(text: &str) -> Mission {
    Mission::from_json(text).expect("bundled mission parses")
}

fn plans(text: &str) -> MultiPlan {
    serde_json::from_str::<PlanSet>(text)
        .expect("bundled plan parses")
        .into_multi()
        .expect("bundled plan flags are binary")
}

/// Four-vertex example graph.
pub fn fig1() -> Mission {
    mission(FIG1_JSON)
}

/// Complete graph on six vertices used for the two-drone experiment.
pub fn k6() -> Mission {
    mission(K6_JSON)
}

/// Complete graph on ten vertices.
pub fn k10() -> Mission {
    mission(K10_JSON)
}

/// Hamilton cycle `(0,1,2,3,0)` sending at vertex 1 and at the base.
pub fn fig1_hamilton_plan() -> Plan {
    plans(FIG1_HAMILTON).plans.remove(0)
}

/// Optimal Fig. 1 plan `(0,2,3,2,0,1,0)`.
pub fn fig1_optimal_plan() -> Plan {
    plans(FIG1_OPTIMAL).plans.remove(0)
}

pub fn k10_best_plan() -> Plan {
    plans(K10_PLAN).plans.remove(0)
}

pub fn k6_two_drone_plan() -> MultiPlan {
    plans(K6_TWO_DRONES)
}

pub fn k10_two_drone_plan() -> MultiPlan {
    plans(K10_TWO_DRONES)
}

#[derive(Debug, Clone, Deserialize)]
pub struct Manifest {
    pub instance: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub file: String,
    pub drones: usize,
    pub reference: f64,
    /// When set, a run succeeds by exceeding this value rather than by
    /// matching `reference`.
    pub beat_single: Option<f64>,
}

impl ManifestEntry {
    pub fn mission(&self) -> Mission {
        by_file(&self.file).expect("manifest names a bundled file")
    }

    /// Whether a run's best value counts as a success.
    pub fn is_success(&self, value: f64) -> bool {
        match self.beat_single {
            Some(single) => value > single + SUCCESS_TOL,
            None => value >= self.reference - SUCCESS_TOL,
        }
    }
}

pub fn manifest() -> Manifest {
    toml::from_str(MANIFEST_TOML).expect("bundled manifest parses")
}

/// Looks up a bundled mission by file name (`"k10.json"`) or short name
/// (`"k10"`).
pub fn by_file(name: &str) -> Option<Mission> {
    match name.trim_end_matches(".json") {
        "fig1" => Some(fig1()),
        "k6" => Some(k6()),
        "k10" => Some(k10()),
        _ => None,
    }
}
