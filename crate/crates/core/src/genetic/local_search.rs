use rand::Rng;

use crate::evaluator::{deliveries_unchecked, multi_value_from_deliveries, transmission_sequence_value};
use crate::mission::{Mission, Plan};

/// Gains below this are treated as rounding noise, not improvement.
const IMPROVEMENT_EPS: f64 = 1e-12;

/// Objective of a set of (route, send) pairs: the single-drone expected
/// value for one drone, the union value for several.
pub(crate) fn objective(m: &Mission, routes: &[Vec<usize>], sends: &[Vec<bool>]) -> f64 {
    if routes.len() == 1 {
        transmission_sequence_value(m, &routes[0], &sends[0])
    } else {
        let per_drone: Vec<Vec<f64>> = routes
            .iter()
            .zip(sends)
            .map(|(r, s)| {
                let mut d = Vec::new();
                deliveries_unchecked(m, r, s, &mut d);
                d
            })
            .collect();
        multi_value_from_deliveries(m, &per_drone)
    }
}

pub(crate) fn plan_objective(m: &Mission, plans: &[Plan]) -> f64 {
    if let [p] = plans {
        transmission_sequence_value(m, &p.route, &p.send)
    } else {
        let per_drone: Vec<Vec<f64>> = plans
            .iter()
            .map(|p| {
                let mut d = Vec::new();
                deliveries_unchecked(m, &p.route, &p.send, &mut d);
                d
            })
            .collect();
        multi_value_from_deliveries(m, &per_drone)
    }
}

/// Random starting send vectors: interior bits set with probability `pi`,
/// first bit 0, last bit 1.
pub fn random_sends<R: Rng>(routes: &[Vec<usize>], rng: &mut R, pi: f64) -> Vec<Vec<bool>> {
    routes.iter().map(|r| random_send(r.len(), rng, pi)).collect()
}

pub(crate) fn random_send<R: Rng>(len: usize, rng: &mut R, pi: f64) -> Vec<bool> {
    let mut s: Vec<bool> = (0..len).map(|_| rng.gen_bool(pi)).collect();
    s[0] = false;
    s[len - 1] = true;
    s
}

/// Steepest-ascent over single interior bit flips across all drones,
/// starting from `sends`. Ties go to the lowest (drone, position). Returns
/// the final objective.
pub fn hill_climb(m: &Mission, routes: &[Vec<usize>], sends: &mut [Vec<bool>]) -> f64 {
    let mut current = objective(m, routes, sends);
    if routes.len() == 1 {
        return climb_single(m, &routes[0], &mut sends[0], current);
    }
    let mut deliveries: Vec<Vec<f64>> = routes
        .iter()
        .zip(sends.iter())
        .map(|(r, s)| {
            let mut d = Vec::new();
            deliveries_unchecked(m, r, s, &mut d);
            d
        })
        .collect();
    let (mut scaled, mut values) = (vec![0.0; m.n()], Vec::new());
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for d in 0..routes.len() {
            // With the other drones fixed the objective is
            // sum_v w_v (1 - O_v) + sum_v w_v O_v delta_dv, O_v being the
            // probability that no other drone delivers v: a single-drone
            // problem with weights w_v O_v.
            let mut offset = 0.0;
            for v in 0..m.n() {
                let others: f64 = (0..routes.len()).filter(|&e| e != d).map(|e| 1.0 - deliveries[e][v]).product();
                scaled[v] = m.info(v) * others;
                offset += m.info(v) - scaled[v];
            }
            flip_values(m, &scaled, &routes[d], &sends[d], &mut values);
            for (j, &v) in values.iter().enumerate().take(routes[d].len().saturating_sub(1)).skip(1) {
                let value = offset + v;
                if value > best.map_or(current, |b| b.2) + IMPROVEMENT_EPS {
                    best = Some((d, j, value));
                }
            }
        }
        let Some((d, j, _)) = best else {
            return current;
        };
        sends[d][j] ^= true;
        deliveries_unchecked(m, &routes[d], &sends[d], &mut deliveries[d]);
        current = multi_value_from_deliveries(m, &deliveries);
    }
}

/// Objective of every single-bit flip of the interior of `send` with
/// vertex weights `weights`, in O(k).
///
/// With the sends at positions `s_1 < ... < s_m`, the value is
/// `sum_k reach[s_k] * P_k * C_k` where `P_k` multiplies the transmission
/// probabilities of the first `k` sends and `C_k` is the information first
/// seen in `(s_{k-1}, s_k]`. Setting or clearing a bit splits or merges one
/// segment and rescales everything after it by `p`, so each flip is
/// evaluated from prefix sums over sends and a suffix value normalised by
/// the product up to each send.
pub(crate) fn flip_values(m: &Mission, weights: &[f64], route: &[usize], send: &[bool], out: &mut Vec<f64>) {
    let k = route.len();
    out.clear();
    out.resize(k, f64::NAN);
    if k < 3 {
        return;
    }
    let mut reach = vec![1.0; k];
    let mut gained = vec![0.0; k + 1];
    let mut observed = vec![false; m.n()];
    for j in 0..k {
        if j > 0 {
            reach[j] = reach[j - 1] * m.crossing(route[j - 1], route[j]);
        }
        let g = if std::mem::replace(&mut observed[route[j]], true) { 0.0 } else { weights[route[j]] };
        gained[j + 1] = gained[j] + g;
    }
    // segment sum over positions (a, b]; a = None means from the start
    let seg = |a: Option<usize>, b: usize| gained[b + 1] - a.map_or(0.0, |a| gained[a + 1]);
    let p = |j: usize| m.transmit(route[j]);

    let sends: Vec<usize> = (0..k).filter(|&j| send[j]).collect();
    let count = sends.len();
    // prod[i]: product of p over sends[..=i]; before[i]: value of sends[..=i]
    let mut prod = vec![0.0; count];
    let mut before = vec![0.0; count];
    let (mut acc_p, mut acc_v, mut prev) = (1.0, 0.0, None);
    for (i, &s) in sends.iter().enumerate() {
        acc_p *= p(s);
        acc_v += reach[s] * acc_p * seg(prev, s);
        prod[i] = acc_p;
        before[i] = acc_v;
        prev = Some(s);
    }
    // after[i]: value of sends[i+1..] divided by prod[i]
    let mut after = vec![0.0; count];
    for i in (0..count.saturating_sub(1)).rev() {
        let s = sends[i + 1];
        after[i] = p(s) * (reach[s] * seg(Some(sends[i]), s) + after[i + 1]);
    }

    // index into `sends` of the last send strictly before j
    let mut last: Option<usize> = None;
    for j in 1..k - 1 {
        let prev_send = last.map(|i| sends[i]);
        let head = last.map_or(0.0, |i| before[i]);
        let head_p = last.map_or(1.0, |i| prod[i]);
        out[j] = if send[j] {
            // merge (s-, j] and (j, s+]
            let me = last.map_or(0, |i| i + 1);
            let nx = me + 1;
            let s_next = sends[nx];
            let merged_p = head_p * p(s_next);
            head + merged_p * (reach[s_next] * seg(prev_send, s_next) + after[nx])
        } else {
            let nx = last.map_or(0, |i| i + 1);
            let s_next = sends[nx];
            let pj = p(j);
            let split_p = head_p * pj;
            head + split_p * reach[j] * seg(prev_send, j)
                + split_p * p(s_next) * (reach[s_next] * seg(Some(j), s_next) + after[nx])
        };
        if send[j] {
            last = Some(last.map_or(0, |i| i + 1));
        }
    }
}

fn climb_single(m: &Mission, route: &[usize], send: &mut [bool], mut current: f64) -> f64 {
    let mut values = Vec::new();
    loop {
        flip_values(m, m.weights(), route, send, &mut values);
        let mut best: Option<(usize, f64)> = None;
        for (j, &value) in values.iter().enumerate().take(route.len().saturating_sub(1)).skip(1) {
            if value > best.map_or(current, |b| b.1) + IMPROVEMENT_EPS {
                best = Some((j, value));
            }
        }
        let Some((j, _)) = best else {
            return current;
        };
        send[j] ^= true;
        current = transmission_sequence_value(m, route, send);
    }
}

/// Fresh send strategies for `routes`: a random start (see
/// [`random_sends`]) followed by [`hill_climb`].
pub fn local_search_send<R: Rng>(m: &Mission, routes: &[Vec<usize>], rng: &mut R, pi: f64) -> (Vec<Vec<bool>>, f64) {
    let mut sends = random_sends(routes, rng, pi);
    let value = hill_climb(m, routes, &mut sends);
    (sends, value)
}
