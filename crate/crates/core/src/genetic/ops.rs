use rand::seq::SliceRandom;
use rand::Rng;

use super::local_search::{hill_climb, local_search_send, random_send};
use super::paths::ShortestPaths;
use crate::mission::{Mission, Plan, BASE};

/// Random walk of `len` crossings from `start`, each step uniform over the
/// current vertex's neighbours. Includes `start`.
pub(crate) fn random_walk<R: Rng>(m: &Mission, start: usize, len: usize, rng: &mut R) -> Vec<usize> {
    let mut walk = Vec::with_capacity(len + 1);
    walk.push(start);
    let mut at = start;
    for _ in 0..len {
        at = *m.neighbors(at).choose(rng).expect("connected mission");
        walk.push(at);
    }
    walk
}

/// A base-to-base route: a random walk whose length is uniform in
/// `l_min..=l_max`, completed by the shortest path back to the base.
pub fn random_walk_route<R: Rng>(
    m: &Mission,
    paths: &ShortestPaths,
    rng: &mut R,
    l_min: usize,
    l_max: usize,
) -> Vec<usize> {
    if m.n() == 1 {
        return vec![BASE];
    }
    let len = rng.gen_range(l_min..=l_max);
    let mut route = random_walk(m, BASE, len, rng);
    let end = *route.last().expect("non-empty");
    route.extend_from_slice(&paths.path(end, BASE)[1..]);
    route
}

/// Splices `a` and `b` at the first occurrence of a shared non-base vertex
/// drawn uniformly from all of them. `None` when only the base is shared.
pub fn crossover<R: Rng>(a: &Plan, b: &Plan, rng: &mut R) -> Option<Plan> {
    let n = a.route.iter().chain(&b.route).max().map_or(0, |&v| v + 1);
    let mut in_a = vec![false; n];
    for &v in &a.route {
        in_a[v] = true;
    }
    let mut common = vec![false; n];
    for &v in &b.route {
        common[v] = in_a[v];
    }
    let common: Vec<usize> = (0..n).filter(|&v| v != BASE && common[v]).collect();
    let &cut = common.choose(rng)?;
    let fa = a.route.iter().position(|&v| v == cut).expect("shared vertex");
    let fb = b.route.iter().position(|&v| v == cut).expect("shared vertex");
    let mut route = a.route[..fa].to_vec();
    route.extend_from_slice(&b.route[fb..]);
    let mut send = a.send[..fa].to_vec();
    send.extend_from_slice(&b.send[fb..]);
    Some(Plan { route, send })
}

/// Mutation probabilities and walk bounds used by [`mutate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutationRates {
    pub added_walk: f64,
    pub reversed: f64,
    pub vertex_flip: f64,
    pub send_flip: f64,
    pub l_min: usize,
    pub l_max: usize,
    pub p_send_init: f64,
}

/// Which mutation [`mutate`] applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    None,
    AddedWalk,
    Reversed,
    VertexFlip,
    SendFlip,
}

/// Inserts a random walk after a uniformly chosen non-final position and
/// reconnects it to the rest of the route by a shortest path.
pub(crate) fn add_walk<R: Rng>(
    m: &Mission,
    paths: &ShortestPaths,
    route: &[usize],
    rng: &mut R,
    l_min: usize,
    l_max: usize,
) -> Vec<usize> {
    if m.n() == 1 {
        return route.to_vec();
    }
    // a stay-at-home route gets a walk out of the base and back
    let pos = if route.len() == 1 { 0 } else { rng.gen_range(0..route.len() - 1) };
    let rejoin = route.get(pos + 1).copied().unwrap_or(route[pos]);
    let len = rng.gen_range(l_min..=l_max);
    let walk = random_walk(m, route[pos], len, rng);
    let end = *walk.last().expect("non-empty");
    let mut out = route[..=pos].to_vec();
    out.extend_from_slice(&walk[1..]);
    out.extend_from_slice(&paths.path(end, rejoin)[1..]);
    out.extend_from_slice(route.get(pos + 2..).unwrap_or(&[]));
    out
}

/// Replaces a uniformly chosen interior vertex by a different common
/// neighbour of its predecessor and successor; no-op when there is none.
pub(crate) fn vertex_flip<R: Rng>(m: &Mission, plan: &mut Plan, rng: &mut R) {
    if plan.route.len() < 3 {
        return;
    }
    let j = rng.gen_range(1..plan.route.len() - 1);
    let (prev, here, next) = (plan.route[j - 1], plan.route[j], plan.route[j + 1]);
    let options: Vec<usize> = m
        .neighbors(prev)
        .iter()
        .copied()
        .filter(|&v| v != here && m.has_edge(v, next))
        .collect();
    if let Some(&v) = options.choose(rng) {
        plan.route[j] = v;
    }
}

/// Toggles one uniformly chosen interior send bit.
pub(crate) fn send_flip<R: Rng>(plan: &mut Plan, rng: &mut R) {
    if plan.route.len() < 3 {
        return;
    }
    let j = rng.gen_range(1..plan.route.len() - 1);
    plan.send[j] ^= true;
}

/// Reverses a route and its sends, keeping the first bit 0 and the last 1.
pub(crate) fn reverse(plan: &mut Plan) {
    plan.route.reverse();
    plan.send.reverse();
    let last = plan.send.len() - 1;
    plan.send[0] = false;
    plan.send[last] = true;
}

/// Applies at most one mutation to the drones in `plans`, chosen by
/// independent trials in the order added walk, reversed (several drones
/// only), vertex flip, send flip. Each mutation picks one drone uniformly.
/// After an added walk that drone gets a fresh random send vector and all
/// sends are re-optimised jointly; the new objective is returned then.
pub fn mutate<R: Rng>(
    m: &Mission,
    paths: &ShortestPaths,
    plans: &mut [Plan],
    rng: &mut R,
    rates: &MutationRates,
) -> (Mutation, Option<f64>) {
    let drones = plans.len();
    if rng.gen_bool(rates.added_walk) {
        let d = rng.gen_range(0..drones);
        let route = add_walk(m, paths, &plans[d].route, rng, rates.l_min, rates.l_max);
        let routes: Vec<Vec<usize>> = (0..drones)
            .map(|k| if k == d { route.clone() } else { plans[k].route.clone() })
            .collect();
        let value = if drones == 1 {
            let (mut sends, value) = local_search_send(m, &routes, rng, rates.p_send_init);
            plans[0].send = sends.pop().expect("one drone");
            value
        } else {
            let mut sends: Vec<Vec<bool>> = plans.iter().map(|p| p.send.clone()).collect();
            sends[d] = random_send(route.len(), rng, rates.p_send_init);
            let value = hill_climb(m, &routes, &mut sends);
            for (p, s) in plans.iter_mut().zip(sends) {
                p.send = s;
            }
            value
        };
        plans[d].route = route;
        return (Mutation::AddedWalk, Some(value));
    }
    if drones > 1 && rng.gen_bool(rates.reversed) {
        let d = rng.gen_range(0..drones);
        reverse(&mut plans[d]);
        return (Mutation::Reversed, None);
    }
    if rng.gen_bool(rates.vertex_flip) {
        let d = rng.gen_range(0..drones);
        vertex_flip(m, &mut plans[d], rng);
        return (Mutation::VertexFlip, None);
    }
    if rng.gen_bool(rates.send_flip) {
        let d = rng.gen_range(0..drones);
        send_flip(&mut plans[d], rng);
        return (Mutation::SendFlip, None);
    }
    (Mutation::None, None)
}
