#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use recon_core::{Mission, MultiPlan, Plan};

/// Connected random mission: a random spanning tree plus extra edges.
pub fn random_mission<R: Rng>(rng: &mut R, n: usize, extra_edge_prob: f64) -> Mission {
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((j, i));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !edges.contains(&(i, j)) && rng.gen_bool(extra_edge_prob) {
                edges.push((i, j));
            }
        }
    }
    let weighted: Vec<_> = edges.iter().map(|&(i, j)| (i, j, rng.gen_range(0.3..=1.0))).collect();
    let mut transmit = vec![1.0];
    transmit.extend((1..n).map(|_| rng.gen_range(0.0..=1.0)));
    let mut info = vec![0.0];
    info.extend((1..n).map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen_range(0.1..3.0) }));
    Mission::new(n, &weighted, transmit, info).expect("generated mission")
}

/// Random walk of `steps` moves out of the base that returns by retracing
/// itself, with random interior sends and the final send set.
pub fn random_plan<R: Rng>(rng: &mut R, m: &Mission, steps: usize) -> Plan {
    let mut out = vec![0];
    for _ in 0..steps {
        let here = *out.last().unwrap();
        out.push(*m.neighbors(here).choose(rng).unwrap());
    }
    let mut route = out.clone();
    route.extend(out.iter().rev().skip(1));
    let len = route.len();
    let mut send: Vec<bool> = (0..len).map(|_| rng.gen_bool(0.35)).collect();
    send[0] = false;
    send[len - 1] = true;
    Plan::new(route, send)
}

pub fn random_multi<R: Rng>(rng: &mut R, m: &Mission, drones: usize, max_steps: usize) -> MultiPlan {
    MultiPlan::new(
        (0..drones)
            .map(|_| {
                let steps = rng.gen_range(0..=max_steps);
                random_plan(rng, m, steps)
            })
            .collect(),
    )
}

/// Per-vertex delivery probabilities by direct simulation of the rules:
/// the drone is alive after every successful crossing and transmission,
/// a vertex is observed on its first visit, and a successful transmission
/// delivers everything carried.
pub fn delivery_by_rules(m: &Mission, plan: &Plan) -> Vec<f64> {
    let mut delivered = vec![0.0; m.n()];
    let mut observed = vec![false; m.n()];
    let mut carried: Vec<usize> = Vec::new();
    let mut alive = 1.0;
    for (k, &v) in plan.route.iter().enumerate() {
        if k > 0 {
            alive *= m.crossing(plan.route[k - 1], v);
        }
        if !observed[v] {
            observed[v] = true;
            carried.push(v);
        }
        if plan.send[k] {
            alive *= m.transmit(v);
            for c in carried.drain(..) {
                delivered[c] = alive;
            }
        }
    }
    delivered
}

/// One sampled mission: information delivered when every crossing and
/// transmission succeeds independently with its probability.
pub fn simulate_once<R: Rng>(m: &Mission, plan: &Plan, rng: &mut R) -> f64 {
    let mut observed = vec![false; m.n()];
    let (mut carried, mut delivered) = (0.0, 0.0);
    for (k, &v) in plan.route.iter().enumerate() {
        if k > 0 && !rng.gen_bool(m.crossing(plan.route[k - 1], v)) {
            return delivered;
        }
        if !observed[v] {
            observed[v] = true;
            carried += m.info(v);
        }
        if plan.send[k] {
            if !rng.gen_bool(m.transmit(v)) {
                return delivered;
            }
            delivered += carried;
            carried = 0.0;
        }
    }
    delivered
}

/// Mean and standard error of `trials` simulated missions.
pub fn monte_carlo<R: Rng>(m: &Mission, plan: &Plan, trials: usize, rng: &mut R) -> (f64, f64) {
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..trials {
        let x = simulate_once(m, plan, rng);
        sum += x;
        sum_sq += x * x;
    }
    let mean = sum / trials as f64;
    let var = (sum_sq / trials as f64 - mean * mean).max(0.0);
    (mean, (var / trials as f64).sqrt())
}

/// Whether some path from vertex 0 visits every vertex exactly once.
pub fn has_hamiltonian_path_from_base(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![vec![false; n]; n];
    for &(i, j) in edges {
        adj[i][j] = true;
        adj[j][i] = true;
    }
    fn extend(adj: &[Vec<bool>], at: usize, seen: &mut Vec<bool>, count: usize) -> bool {
        if count == adj.len() {
            return true;
        }
        for next in 0..adj.len() {
            if adj[at][next] && !seen[next] {
                seen[next] = true;
                if extend(adj, next, seen, count + 1) {
                    return true;
                }
                seen[next] = false;
            }
        }
        false
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    extend(&adj, 0, &mut seen, 1)
}

/// Random connected simple graph on `n` vertices.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, extra_edge_prob: f64) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (1..n).collect();
    order.shuffle(rng);
    let mut placed = vec![0];
    let mut edges = Vec::new();
    for v in order {
        let u = *placed.choose(rng).unwrap();
        edges.push((u.min(v), u.max(v)));
        placed.push(v);
    }
    for i in 0..n {
        for j in i + 1..n {
            if !edges.contains(&(i, j)) && rng.gen_bool(extra_edge_prob) {
                edges.push((i, j));
            }
        }
    }
    edges
}
