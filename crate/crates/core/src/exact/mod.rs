//! Exact single-drone optimisation for small missions.
//!
//! [`solve_exact`] runs a dynamic program over `(time left, position,
//! observed set, carried set)`. Each time period the drone moves along an
//! edge, observes the vertex it reaches if it is new, and then decides
//! whether to transmit. At the base it may also stop, which makes the final
//! (free) transmission. [`brute_force_enumerate`] and
//! [`reduced_enumerate`] are independent oracles that walk the plan space
//! explicitly and score leaves with the evaluator.

mod brute;

pub use brute::{brute_force_enumerate, reduced_enumerate, BRUTE_MAX_LEN, BRUTE_MAX_N, REDUCED_MAX_LEN};

use thiserror::Error;

use crate::mission::{Mission, MissionViolation, Plan, BASE};

/// Upper bound on stored argmax entries (one byte each).
pub const MAX_TABLE_ENTRIES: usize = 1 << 28;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("invalid mission: {0}")]
    InvalidMission(#[from] MissionViolation),
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("state space too large: {entries} table entries (limit {limit})")]
    Capacity { entries: u128, limit: usize },
    #[error("enumeration limits exceeded: n = {n} (max {max_n}), length = {len} (max {max_len})")]
    EnumerationLimits {
        n: usize,
        len: usize,
        max_n: usize,
        max_len: usize,
    },
}

/// An optimal plan and its expected value.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub plan: Plan,
    pub value: f64,
}

/// The horizon that always suffices for optimality: `n^2 - 1`.
pub fn default_horizon(n: usize) -> usize {
    (n * n).saturating_sub(1).max(1)
}

/// Number of argmax entries [`solve_exact`] would store.
pub fn table_entries(m: &Mission, horizon: usize) -> u128 {
    let tracked = (1..m.n()).filter(|&v| m.info(v) > 0.0).count() as u32;
    3u128.saturating_pow(tracked) * m.n() as u128 * (horizon as u128 + 1)
}

/// Encoding of the observed/carried sets of the positive-weight vertices.
/// Digit 0: not yet observed, 1: observed and sent, 2: observed and carried.
struct StateSpace {
    /// Digit position of each vertex, `None` for zero-weight vertices.
    digit: Vec<Option<u32>>,
    pow3: Vec<usize>,
    size: usize,
    carried_value: Vec<f64>,
    cleared: Vec<usize>,
}

impl StateSpace {
    fn new(m: &Mission) -> Self {
        let mut digit = vec![None; m.n()];
        let mut tracked = Vec::new();
        for v in 1..m.n() {
            if m.info(v) > 0.0 {
                digit[v] = Some(tracked.len() as u32);
                tracked.push(v);
            }
        }
        let pow3: Vec<usize> = (0..=tracked.len()).map(|k| 3usize.pow(k as u32)).collect();
        let size = pow3[tracked.len()];
        let mut carried_value = vec![0.0; size];
        let mut cleared = vec![0; size];
        for s in 0..size {
            let (mut rest, mut clear) = (s, s);
            for (d, &v) in tracked.iter().enumerate() {
                if rest % 3 == 2 {
                    carried_value[s] += m.info(v);
                    clear -= pow3[d];
                }
                rest /= 3;
            }
            cleared[s] = clear;
        }
        Self {
            digit,
            pow3,
            size,
            carried_value,
            cleared,
        }
    }

    #[inline]
    fn observe(&self, s: usize, v: usize) -> usize {
        match self.digit[v] {
            Some(d) if (s / self.pow3[d as usize]).is_multiple_of(3) => s + 2 * self.pow3[d as usize],
            _ => s,
        }
    }
}

const TERMINATE: u8 = 0;
const INFEASIBLE: u8 = u8::MAX;

/// Maximum expected value over all plans with at most `horizon` crossings,
/// with one plan attaining it. `None` uses [`default_horizon`].
///
/// Ties prefer stopping over moving, lower neighbour ids, and not sending.
pub fn solve_exact(m: &Mission, horizon: Option<usize>) -> Result<Solution, ExactError> {
    m.validate()?;
    let horizon = horizon.unwrap_or_else(|| default_horizon(m.n()));
    if horizon == 0 {
        return Err(ExactError::ZeroHorizon);
    }
    let entries = table_entries(m, horizon);
    if entries > MAX_TABLE_ENTRIES as u128 || m.n() > 127 {
        return Err(ExactError::Capacity {
            entries,
            limit: MAX_TABLE_ENTRIES,
        });
    }
    let n = m.n();
    let space = StateSpace::new(m);
    let layer = n * space.size;
    let mut actions = vec![INFEASIBLE; layer * (horizon + 1)];

    // value[pos * size + s] for the previous layer (one fewer period left)
    let mut prev = vec![f64::NEG_INFINITY; layer];
    for s in 0..space.size {
        prev[BASE * space.size + s] = space.carried_value[s];
        actions[BASE * space.size + s] = TERMINATE;
    }
    let mut cur = vec![f64::NEG_INFINITY; layer];
    for t in 1..=horizon {
        let acts = &mut actions[t * layer..(t + 1) * layer];
        for pos in 0..n {
            for s in 0..space.size {
                let (mut best, mut action) = if pos == BASE {
                    (space.carried_value[s], TERMINATE)
                } else {
                    (f64::NEG_INFINITY, INFEASIBLE)
                };
                for (idx, &j) in m.neighbors(pos).iter().enumerate() {
                    let next = space.observe(s, j);
                    let keep = prev[j * space.size + next];
                    let after_send = prev[j * space.size + space.cleared[next]];
                    let send = if after_send == f64::NEG_INFINITY {
                        f64::NEG_INFINITY
                    } else {
                        m.transmit(j) * (space.carried_value[next] + after_send)
                    };
                    let (inner, bit) = if send > keep { (send, 1) } else { (keep, 0) };
                    if inner == f64::NEG_INFINITY {
                        continue;
                    }
                    let value = m.crossing(pos, j) * inner;
                    if value > best {
                        best = value;
                        action = 1 + 2 * idx as u8 + bit;
                    }
                }
                cur[pos * space.size + s] = best;
                acts[pos * space.size + s] = action;
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let value = prev[BASE * space.size];
    let plan = reconstruct(m, &space, &actions, layer, horizon);
    Ok(Solution { plan, value })
}

fn reconstruct(m: &Mission, space: &StateSpace, actions: &[u8], layer: usize, horizon: usize) -> Plan {
    let mut route = vec![BASE];
    let mut send = vec![false];
    let (mut pos, mut s) = (BASE, 0usize);
    for t in (0..=horizon).rev() {
        let action = actions[t * layer + pos * space.size + s];
        debug_assert_ne!(action, INFEASIBLE);
        if action == TERMINATE {
            break;
        }
        let idx = usize::from((action - 1) / 2);
        let bit = (action - 1) % 2 == 1;
        let j = m.neighbors(pos)[idx];
        let next = space.observe(s, j);
        route.push(j);
        send.push(bit);
        s = if bit { space.cleared[next] } else { next };
        pos = j;
    }
    debug_assert_eq!(pos, BASE);
    *send.last_mut().expect("route is non-empty") = true;
    Plan { route, send }
}
