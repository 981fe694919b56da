//! Genetic algorithm for single- and multi-drone plans.
//!
//! Individuals start as random walks completed by a most-survivable path
//! back to the base, with sends chosen by local search. Each generation
//! keeps an elite, discards the worst, and fills the rest with crossover
//! children that may be mutated. A run consumes a single seeded ChaCha
//! stream in a fixed order, so equal seeds give identical runs.

mod local_search;
mod ops;
mod paths;

pub use local_search::{hill_climb, local_search_send, random_sends};
pub use ops::{crossover, mutate, random_walk_route, Mutation, MutationRates};
pub use paths::{ReturnMetric, ShortestPaths};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::mission::{Mission, MissionViolation, MultiPlan, Plan};
use local_search::plan_objective;

/// Crossover attempts per child before a fresh random individual is used.
pub const MAX_PARENT_REDRAWS: usize = 50;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaError {
    #[error("invalid mission: {0}")]
    InvalidMission(#[from] MissionViolation),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// GA hyperparameters. `None` fields are derived from the mission or the
/// drone count when the run starts.
#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub elite_fraction: f64,
    pub discard_fraction: f64,
    /// Defaults to `n - 1`.
    pub l_min: Option<usize>,
    /// Defaults to `n + 100`.
    pub l_max: Option<usize>,
    pub p_send_init: f64,
    /// Defaults to 0.01 for one drone and `2 / population` otherwise.
    pub p_added_walk: Option<f64>,
    pub p_vertex_flip: f64,
    pub p_send_flip: f64,
    pub p_reversed: f64,
    pub drones: usize,
    pub seed: u64,
    pub return_metric: ReturnMetric,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population: 1000,
            generations: 150,
            elite_fraction: 0.10,
            discard_fraction: 0.075,
            l_min: None,
            l_max: None,
            p_send_init: 1.0 / 3.0,
            p_added_walk: None,
            p_vertex_flip: 0.2,
            p_send_flip: 0.1,
            p_reversed: 0.2,
            drones: 1,
            seed: 0,
            return_metric: ReturnMetric::Survival,
        }
    }
}

/// Mutation subsets compared in the ablation study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MutationSet {
    None,
    SendFlip,
    VertexFlip,
    AddedWalk,
    Combination,
}

impl MutationSet {
    pub const ALL: [MutationSet; 5] = [
        MutationSet::None,
        MutationSet::SendFlip,
        MutationSet::VertexFlip,
        MutationSet::AddedWalk,
        MutationSet::Combination,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MutationSet::None => "no-mutation",
            MutationSet::SendFlip => "send-flip",
            MutationSet::VertexFlip => "vertex-flip",
            MutationSet::AddedWalk => "added-walk",
            MutationSet::Combination => "combination",
        }
    }
}

impl GaConfig {
    /// Keeps only the mutations in `set`, at their default rates.
    pub fn with_mutations(mut self, set: MutationSet) -> Self {
        let defaults = GaConfig::default();
        let (walk, vertex, send) = match set {
            MutationSet::None => (false, false, false),
            MutationSet::SendFlip => (false, false, true),
            MutationSet::VertexFlip => (false, true, false),
            MutationSet::AddedWalk => (true, false, false),
            MutationSet::Combination => (true, true, true),
        };
        self.p_added_walk = if walk { None } else { Some(0.0) };
        self.p_vertex_flip = if vertex { defaults.p_vertex_flip } else { 0.0 };
        self.p_send_flip = if send { defaults.p_send_flip } else { 0.0 };
        if set != MutationSet::Combination {
            self.p_reversed = 0.0;
        }
        self
    }

    pub fn validate(&self) -> Result<(), GaError> {
        let bad = |msg: String| Err(GaError::InvalidConfig(msg));
        if self.population == 0 {
            return bad("population must be positive".into());
        }
        if self.drones == 0 {
            return bad("at least one drone is required".into());
        }
        for (name, f) in [("elite_fraction", self.elite_fraction), ("discard_fraction", self.discard_fraction)] {
            if !(0.0..1.0).contains(&f) {
                return bad(format!("{name} must lie in [0, 1), got {f}"));
            }
        }
        if self.elite_fraction + self.discard_fraction >= 1.0 {
            return bad("elite_fraction + discard_fraction must be below 1".into());
        }
        let probs = [
            ("p_send_init", Some(self.p_send_init)),
            ("p_added_walk", self.p_added_walk),
            ("p_vertex_flip", Some(self.p_vertex_flip)),
            ("p_send_flip", Some(self.p_send_flip)),
            ("p_reversed", Some(self.p_reversed)),
        ];
        for (name, p) in probs {
            if let Some(p) = p {
                if !(0.0..=1.0).contains(&p) {
                    return bad(format!("{name} must lie in [0, 1], got {p}"));
                }
            }
        }
        if let (Some(lo), Some(hi)) = (self.l_min, self.l_max) {
            if lo > hi {
                return bad(format!("l_min ({lo}) exceeds l_max ({hi})"));
            }
        }
        if self.l_min == Some(0) {
            return bad("l_min must be at least 1".into());
        }
        Ok(())
    }

    fn rates(&self, n: usize) -> Result<MutationRates, GaError> {
        let l_min = self.l_min.unwrap_or(n.saturating_sub(1).max(1));
        let l_max = self.l_max.unwrap_or(n + 100);
        if l_min > l_max {
            return Err(GaError::InvalidConfig(format!("l_min ({l_min}) exceeds l_max ({l_max})")));
        }
        let added_walk = self.p_added_walk.unwrap_or(if self.drones == 1 {
            0.01
        } else {
            (2.0 / self.population as f64).min(1.0)
        });
        Ok(MutationRates {
            added_walk,
            reversed: self.p_reversed,
            vertex_flip: self.p_vertex_flip,
            send_flip: self.p_send_flip,
            l_min,
            l_max,
            p_send_init: self.p_send_init,
        })
    }
}

/// One generation's summary.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
    pub best_plan: MultiPlan,
}

/// Per-generation record of a run; generation 0 is the initial population.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvolutionTrace {
    pub records: Vec<TraceRecord>,
}

impl EvolutionTrace {
    pub const CSV_HEADER: &'static str = "generation,best,mean";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!("{},{},{}\n", r.generation, r.best, r.mean));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaResult {
    pub best: MultiPlan,
    pub value: f64,
    pub trace: EvolutionTrace,
}

#[derive(Debug, Clone)]
struct Individual {
    plans: Vec<Plan>,
    value: f64,
}

struct Run<'a> {
    mission: &'a Mission,
    paths: ShortestPaths,
    rates: MutationRates,
    drones: usize,
    rng: ChaCha8Rng,
}

impl Run<'_> {
    fn evaluate(&self, plans: &[Plan]) -> f64 {
        plan_objective(self.mission, plans)
    }

    fn fresh(&mut self) -> Individual {
        let routes: Vec<Vec<usize>> = (0..self.drones)
            .map(|_| random_walk_route(self.mission, &self.paths, &mut self.rng, self.rates.l_min, self.rates.l_max))
            .collect();
        let (sends, value) = local_search_send(self.mission, &routes, &mut self.rng, self.rates.p_send_init);
        let plans = routes.into_iter().zip(sends).map(|(r, s)| Plan::new(r, s)).collect();
        Individual { plans, value }
    }

    fn child(&mut self, pool: &[Individual]) -> Individual {
        let mut plans = if self.drones == 1 {
            let mut found = None;
            for _ in 0..MAX_PARENT_REDRAWS {
                let a = &pool[self.rng.gen_range(0..pool.len())];
                let b = &pool[self.rng.gen_range(0..pool.len())];
                if let Some(c) = crossover(&a.plans[0], &b.plans[0], &mut self.rng) {
                    found = Some(vec![c]);
                    break;
                }
            }
            match found {
                Some(p) => p,
                None => return self.fresh(),
            }
        } else {
            let a = &pool[self.rng.gen_range(0..pool.len())];
            let b = &pool[self.rng.gen_range(0..pool.len())];
            let mut perm: Vec<usize> = (0..self.drones).collect();
            rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut self.rng);
            (0..self.drones)
                .map(|i| {
                    crossover(&a.plans[i], &b.plans[perm[i]], &mut self.rng).unwrap_or_else(|| a.plans[i].clone())
                })
                .collect()
        };
        let (_, value) = mutate(self.mission, &self.paths, &mut plans, &mut self.rng, &self.rates);
        let value = value.unwrap_or_else(|| self.evaluate(&plans));
        Individual { plans, value }
    }
}

fn rank(pop: &mut [Individual]) {
    pop.sort_by(|a, b| b.value.total_cmp(&a.value));
}

fn record(generation: usize, pop: &[Individual]) -> TraceRecord {
    TraceRecord {
        generation,
        best: pop[0].value,
        mean: pop.iter().map(|i| i.value).sum::<f64>() / pop.len() as f64,
        best_plan: MultiPlan::new(pop[0].plans.clone()),
    }
}

/// Runs the GA and returns the best individual seen with the full trace.
pub fn run_ga(m: &Mission, config: &GaConfig) -> Result<GaResult, GaError> {
    m.validate()?;
    config.validate()?;
    let mut run = Run {
        mission: m,
        paths: ShortestPaths::new(m, config.return_metric),
        rates: config.rates(m.n())?,
        drones: config.drones,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
    };
    let size = config.population;
    let elite = ((config.elite_fraction * size as f64).round() as usize).clamp(1, size);
    let discard = ((config.discard_fraction * size as f64).round() as usize).min(size - 1);

    let mut pop: Vec<Individual> = (0..size).map(|_| run.fresh()).collect();
    rank(&mut pop);
    let mut trace = EvolutionTrace::default();
    trace.records.push(record(0, &pop));
    for generation in 1..=config.generations {
        let pool = &pop[..size - discard];
        let mut next: Vec<Individual> = pop[..elite].to_vec();
        while next.len() < size {
            let c = run.child(pool);
            next.push(c);
        }
        pop = next;
        rank(&mut pop);
        trace.records.push(record(generation, &pop));
    }
    Ok(GaResult {
        best: MultiPlan::new(pop[0].plans.clone()),
        value: pop[0].value,
        trace,
    })
}
