mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use recon_core::exact::solve_exact;
use recon_core::genetic::{
    crossover, hill_climb, local_search_send, mutate, random_walk_route, run_ga, GaConfig, MutationRates,
    ReturnMetric, ShortestPaths,
};
use recon_core::{expected_value_multi, expected_value_single, instances, Plan};

fn rates(n: usize) -> MutationRates {
    MutationRates {
        added_walk: 0.3,
        reversed: 0.3,
        vertex_flip: 0.5,
        send_flip: 0.5,
        l_min: n - 1,
        l_max: n + 5,
        p_send_init: 1.0 / 3.0,
    }
}

fn small(population: usize, generations: usize, seed: u64) -> GaConfig {
    GaConfig {
        population,
        generations,
        seed,
        ..GaConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn walk_routes_are_valid(seed in any::<u64>(), n in 2usize..9, hops in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::random_mission(&mut rng, n, 0.3);
        let metric = if hops { ReturnMetric::Hops } else { ReturnMetric::Survival };
        let paths = ShortestPaths::new(&m, metric);
        let route = random_walk_route(&m, &paths, &mut rng, n - 1, n + 10);
        let (sends, value) = local_search_send(&m, std::slice::from_ref(&route), &mut rng, 1.0 / 3.0);
        let plan = Plan::new(route, sends[0].clone());
        prop_assert!(plan.validate(&m).is_ok());
        prop_assert!(plan.crossings() >= n - 1);
        let eval = expected_value_single(&m, &plan).unwrap().expected_value;
        prop_assert!((eval - value).abs() <= 1e-10);
    }

    #[test]
    fn crossover_children_are_valid(seed in any::<u64>(), n in 2usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::random_mission(&mut rng, n, 0.3);
        let a = common::random_plan(&mut rng, &m, 6);
        let b = common::random_plan(&mut rng, &m, 6);
        if let Some(child) = crossover(&a, &b, &mut rng) {
            prop_assert!(child.validate(&m).is_ok());
            prop_assert_eq!(child.route[0], 0);
            prop_assert!(!child.send[0]);
        } else {
            prop_assert!(a.route.iter().all(|v| *v == 0 || !b.route.contains(v)));
        }
    }

    #[test]
    fn mutated_plans_are_valid(seed in any::<u64>(), n in 2usize..9, drones in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::random_mission(&mut rng, n, 0.3);
        let paths = ShortestPaths::new(&m, ReturnMetric::Survival);
        let mut plans = common::random_multi(&mut rng, &m, drones, 6).plans;
        for _ in 0..5 {
            let (_, value) = mutate(&m, &paths, &mut plans, &mut rng, &rates(n));
            for p in &plans {
                prop_assert!(p.validate(&m).is_ok());
            }
            if let Some(v) = value {
                let eval = expected_value_multi(&m, &recon_core::MultiPlan::new(plans.clone())).unwrap();
                prop_assert!((eval - v).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn hill_climb_never_loses_value(seed in any::<u64>(), n in 2usize..8, drones in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::random_mission(&mut rng, n, 0.3);
        let mp = common::random_multi(&mut rng, &m, drones, 6);
        let before = expected_value_multi(&m, &mp).unwrap();
        let routes: Vec<Vec<usize>> = mp.plans.iter().map(|p| p.route.clone()).collect();
        let mut sends: Vec<Vec<bool>> = mp.plans.iter().map(|p| p.send.clone()).collect();
        let after = hill_climb(&m, &routes, &mut sends);
        prop_assert!(after >= before - 1e-12);
    }
}

#[test]
fn best_value_never_drops_between_generations() {
    let result = run_ga(&instances::k6(), &small(60, 25, 3)).unwrap();
    let best: Vec<f64> = result.trace.records.iter().map(|r| r.best).collect();
    assert_eq!(best.len(), 26);
    assert!(best.windows(2).all(|w| w[1] >= w[0]), "{best:?}");
    assert_eq!(*best.last().unwrap(), result.value);
    for r in &result.trace.records {
        assert!(r.mean <= r.best + 1e-12);
    }
}

#[test]
fn equal_seeds_give_identical_runs() {
    let m = instances::k10();
    let a = run_ga(&m, &small(40, 10, 17)).unwrap();
    let b = run_ga(&m, &small(40, 10, 17)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.trace.to_csv().as_bytes(), b.trace.to_csv().as_bytes());
    let c = run_ga(&m, &small(40, 10, 18)).unwrap();
    assert_ne!(a.trace.to_csv(), c.trace.to_csv());
}

#[test]
fn never_beats_the_exact_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for k in 0..8 {
        let m = common::random_mission(&mut rng, 3 + k % 3, 0.4);
        let optimum = solve_exact(&m, None).unwrap().value;
        let result = run_ga(&m, &small(40, 15, k as u64)).unwrap();
        let plan = &result.best.plans[0];
        assert!(plan.validate(&m).is_ok());
        let eval = expected_value_single(&m, plan).unwrap().expected_value;
        assert!((eval - result.value).abs() <= 1e-10);
        assert!(result.value <= optimum + 1e-10, "{} > {optimum}", result.value);
    }
}

#[test]
fn fig1_is_solved_reliably() {
    let m = instances::fig1();
    let hits = (0..100)
        .filter(|&seed| run_ga(&m, &small(200, 30, seed)).unwrap().value >= 1.666494 - 1e-6)
        .count();
    assert!(hits >= 95, "{hits}/100");
}

#[test]
fn two_drone_runs_return_valid_plans() {
    let m = instances::k6();
    let config = GaConfig {
        drones: 2,
        ..small(60, 20, 5)
    };
    let result = run_ga(&m, &config).unwrap();
    assert_eq!(result.best.drones(), 2);
    assert!(result.best.validate(&m).is_ok());
    let eval = expected_value_multi(&m, &result.best).unwrap();
    assert!((eval - result.value).abs() <= 1e-10);
    for plan in &result.best.plans {
        assert!(expected_value_single(&m, plan).unwrap().expected_value <= result.value + 1e-12);
    }
}
