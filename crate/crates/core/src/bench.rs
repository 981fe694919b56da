//! Seeded benchmark grid: the mutation ablation on K10, the multi-drone
//! cases and generated instances, scored against reference values.

use std::fmt::Write;
use std::time::Instant;

use rayon::prelude::*;

use crate::exact::solve_exact;
use crate::genetic::{run_ga, GaConfig, GaError, MutationSet};
use crate::instances::{self, SUCCESS_TOL};
use crate::mission::{make_hardness_instance, make_path_instance, Mission};

/// Population used for two-drone cases.
pub const MULTI_DRONE_POPULATION: usize = 2000;

/// How a run's best value is scored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Success {
    /// Reach `value` within the success tolerance.
    Reach(f64),
    /// Exceed `value` by more than the success tolerance.
    Beat(f64),
}

impl Success {
    pub fn is_success(self, value: f64) -> bool {
        match self {
            Success::Reach(r) => value >= r - SUCCESS_TOL,
            Success::Beat(r) => value > r + SUCCESS_TOL,
        }
    }

    pub fn target(self) -> f64 {
        match self {
            Success::Reach(r) | Success::Beat(r) => r,
        }
    }
}

/// One cell of the grid: an instance solved by one GA configuration.
#[derive(Debug, Clone)]
pub struct BenchCase {
    pub instance: String,
    pub method: String,
    pub mission: Mission,
    /// The seed field is replaced per run.
    pub config: GaConfig,
    pub success: Success,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub instance: String,
    pub method: String,
    pub runs: usize,
    pub successes: usize,
    pub best: f64,
    pub mean_seconds: f64,
    pub target: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
}

impl BenchReport {
    pub const CSV_HEADER: &'static str = "instance,method,runs,successes,best,mean_seconds";

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.instance, r.method, r.runs, r.successes, r.best, r.mean_seconds
            );
        }
        out
    }

    /// Fixed-width table for terminals.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<10} {:<20} {:>9} {:>12} {:>12} {:>9}\n",
            "instance", "method", "successes", "best", "target", "s/run"
        );
        for r in &self.records {
            let _ = writeln!(
                out,
                "{:<10} {:<20} {:>9} {:>12.6} {:>12.6} {:>9.3}",
                r.instance,
                r.method,
                format!("{}/{}", r.successes, r.runs),
                r.best,
                r.target,
                r.mean_seconds
            );
        }
        out
    }

    pub fn record(&self, instance: &str, method: &str) -> Option<&BenchRecord> {
        self.records.iter().find(|r| r.instance == instance && r.method == method)
    }
}

fn entry(name: &str) -> instances::ManifestEntry {
    instances::manifest()
        .instance
        .into_iter()
        .find(|e| e.name == name)
        .expect("bundled manifest entry")
}

/// K10 single drone under each mutation subset.
pub fn ablation_cases() -> Vec<BenchCase> {
    let k10 = entry("k10");
    MutationSet::ALL
        .iter()
        .map(|&set| BenchCase {
            instance: k10.name.clone(),
            method: format!("ga-{}", set.name()),
            mission: k10.mission(),
            config: GaConfig::default().with_mutations(set),
            success: Success::Reach(k10.reference),
        })
        .collect()
}

fn multi_case(name: &str) -> BenchCase {
    let e = entry(name);
    let success = match e.beat_single {
        Some(single) => Success::Beat(single),
        None => Success::Reach(e.reference),
    };
    BenchCase {
        instance: e.name.clone(),
        method: format!("ga-{}-drones", e.drones),
        mission: e.mission(),
        config: GaConfig {
            drones: e.drones,
            population: MULTI_DRONE_POPULATION,
            ..GaConfig::default()
        },
        success,
    }
}

pub fn k6_two_drone_case() -> BenchCase {
    multi_case("k6-multi")
}

pub fn k10_two_drone_case() -> BenchCase {
    multi_case("k10-multi")
}

/// Single-drone cases on generated instances, scored against the exact
/// optimum.
pub fn generated_cases() -> Vec<BenchCase> {
    let path = make_path_instance(5).expect("n >= 2");
    let hard = make_hardness_instance(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 2), (1, 3)], 0.6)
        .expect("valid graph")
        .mission;
    let fig1 = entry("fig1");
    let mut cases = vec![BenchCase {
        instance: fig1.name.clone(),
        method: "ga-combination".into(),
        mission: fig1.mission(),
        config: GaConfig::default(),
        success: Success::Reach(fig1.reference),
    }];
    for (name, m) in [("path5", path), ("hard5", hard)] {
        let optimum = solve_exact(&m, None).expect("small instance").value;
        cases.push(BenchCase {
            instance: name.into(),
            method: "ga-combination".into(),
            mission: m,
            config: GaConfig::default(),
            success: Success::Reach(optimum),
        });
    }
    cases
}

/// The whole grid: ablation, multi-drone and generated cases.
pub fn paper_suite() -> Vec<BenchCase> {
    let mut cases = ablation_cases();
    cases.push(k6_two_drone_case());
    cases.push(k10_two_drone_case());
    cases.extend(generated_cases());
    cases
}

/// Runs `case` with seeds `seed_base..seed_base + runs` in parallel. Each
/// run is sequential, and results are collected in seed order.
pub fn run_case(case: &BenchCase, runs: usize, seed_base: u64) -> Result<BenchRecord, GaError> {
    let outcomes: Vec<(f64, f64)> = (0..runs as u64)
        .into_par_iter()
        .map(|k| {
            let config = GaConfig {
                seed: seed_base + k,
                ..case.config.clone()
            };
            let start = Instant::now();
            let value = run_ga(&case.mission, &config)?.value;
            Ok((value, start.elapsed().as_secs_f64()))
        })
        .collect::<Result<_, GaError>>()?;
    let values: Vec<f64> = outcomes.iter().map(|o| o.0).collect();
    Ok(BenchRecord {
        instance: case.instance.clone(),
        method: case.method.clone(),
        runs,
        successes: values.iter().filter(|&&v| case.success.is_success(v)).count(),
        best: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean_seconds: if runs == 0 {
            0.0
        } else {
            outcomes.iter().map(|o| o.1).sum::<f64>() / runs as f64
        },
        target: case.success.target(),
        values,
    })
}

pub fn run_suite(cases: &[BenchCase], runs: usize, seed_base: u64) -> Result<BenchReport, GaError> {
    let records = cases
        .iter()
        .map(|c| run_case(c, runs, seed_base))
        .collect::<Result<_, _>>()?;
    Ok(BenchReport { records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_layout() {
        let suite = paper_suite();
        let names: Vec<_> = suite.iter().map(|c| format!("{}/{}", c.instance, c.method)).collect();
        assert_eq!(
            names,
            [
                "k10/ga-no-mutation",
                "k10/ga-send-flip",
                "k10/ga-vertex-flip",
                "k10/ga-added-walk",
                "k10/ga-combination",
                "k6-multi/ga-2-drones",
                "k10-multi/ga-2-drones",
                "fig1/ga-combination",
                "path5/ga-combination",
                "hard5/ga-combination",
            ]
        );
        assert_eq!(suite[6].success, Success::Beat(7.305181));
        assert_eq!(suite[5].success, Success::Reach(4.859738));
    }

    #[test]
    fn single_run_report() {
        let mut case = generated_cases().remove(0);
        case.config.population = 30;
        case.config.generations = 10;
        let report = run_suite(&[case], 1, 0).unwrap();
        assert_eq!(report.records[0].runs, 1);
        let csv = report.to_csv();
        assert!(csv.starts_with("instance,method,runs,successes,best,mean_seconds\nfig1,ga-combination,1,"));
        assert!(report.to_table().contains("fig1"));
    }

    #[test]
    fn success_rules() {
        assert!(Success::Reach(1.0).is_success(1.0 - 5e-7));
        assert!(!Success::Reach(1.0).is_success(1.0 - 2e-6));
        assert!(!Success::Beat(1.0).is_success(1.0 + 5e-7));
        assert!(Success::Beat(1.0).is_success(1.0 + 2e-6));
    }
}
