//! Closed-form evaluation of plans.
//!
//! Two independent routes to the single-drone expected value are provided:
//! summing over transmissions (what each send is expected to carry home) and
//! summing over vertices (the probability each vertex's information is
//! delivered). They must agree. The multi-drone value combines per-vertex
//! delivery probabilities of independent drones.

use thiserror::Error;

use crate::mission::{Mission, MultiPlan, Plan, PlanViolation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("invalid plan: {0}")]
    InvalidPlan(#[from] PlanViolation),
    #[error("at least one drone is required")]
    NoDrones,
}

/// Expected value, survival probability and per-vertex delivery
/// probabilities of one plan.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalBreakdown {
    pub expected_value: f64,
    pub survival: f64,
    pub per_vertex_delivery: Vec<f64>,
}

/// Probability that the drone completes every crossing and transmission.
pub fn survival_probability(m: &Mission, plan: &Plan) -> Result<f64, EvalError> {
    plan.validate(m)?;
    Ok(survival_unchecked(m, &plan.route, &plan.send))
}

fn survival_unchecked(m: &Mission, route: &[usize], send: &[bool]) -> f64 {
    let crossings: f64 = route.windows(2).map(|s| m.crossing(s[0], s[1])).product();
    let sends: f64 = route
        .iter()
        .zip(send)
        .filter(|(_, &b)| b)
        .map(|(&v, _)| m.transmit(v))
        .product();
    crossings * sends
}

/// Expected transmitted information, summed over transmissions.
///
/// Every send carries the information first observed since the previous
/// send; it arrives if the drone survived every crossing up to the send and
/// every transmission up to and including it.
pub fn transmission_sequence_value(m: &Mission, route: &[usize], send: &[bool]) -> f64 {
    let k = route.len();
    // reach[j]: product of crossings along route[0..=j]
    let mut reach = vec![1.0; k];
    for j in 1..k {
        reach[j] = reach[j - 1] * m.crossing(route[j - 1], route[j]);
    }
    let mut observed = vec![false; m.n()];
    let mut gained = vec![0.0; k];
    for (j, &v) in route.iter().enumerate() {
        if !std::mem::replace(&mut observed[v], true) {
            gained[j] = m.info(v);
        }
    }
    let sends: Vec<usize> = (0..k).filter(|&j| send[j]).collect();
    let mut total = 0.0;
    let mut transmit_product = 1.0;
    let mut previous: Option<usize> = None;
    for &s in &sends {
        transmit_product *= m.transmit(route[s]);
        let start = previous.map_or(0, |p| p + 1);
        let carried: f64 = gained[start..=s].iter().sum();
        total += reach[s] * transmit_product * carried;
        previous = Some(s);
    }
    total
}

/// Per-vertex delivery probabilities without plan validation. Vertices not
/// on the route, and vertices observed after the last send, get 0.
pub fn deliveries_unchecked(m: &Mission, route: &[usize], send: &[bool], out: &mut Vec<f64>) {
    out.clear();
    out.resize(m.n(), 0.0);
    let mut observed = vec![false; m.n()];
    let mut pending: Vec<usize> = Vec::new();
    let mut alive = 1.0;
    for (j, &v) in route.iter().enumerate() {
        if j > 0 {
            alive *= m.crossing(route[j - 1], v);
        }
        if !std::mem::replace(&mut observed[v], true) {
            pending.push(v);
        }
        if send[j] {
            alive *= m.transmit(v);
            for u in pending.drain(..) {
                out[u] = alive;
            }
        }
    }
}

/// Expected value of a plan as `sum_v w_v * P(D_v)`, without validation.
pub fn plan_value_unchecked(m: &Mission, route: &[usize], send: &[bool]) -> f64 {
    let mut delivery = Vec::new();
    deliveries_unchecked(m, route, send, &mut delivery);
    weighted(m, &delivery)
}

fn weighted(m: &Mission, delivery: &[f64]) -> f64 {
    delivery.iter().zip(m.weights()).map(|(d, w)| d * w).sum()
}

/// Probability that each vertex's information is transmitted successfully.
pub fn delivery_probabilities(m: &Mission, plan: &Plan) -> Result<Vec<f64>, EvalError> {
    plan.validate(m)?;
    let mut out = Vec::new();
    deliveries_unchecked(m, &plan.route, &plan.send, &mut out);
    Ok(out)
}

/// Expected transmitted information of a single plan with its survival
/// probability and per-vertex deliveries.
pub fn expected_value_single(m: &Mission, plan: &Plan) -> Result<EvalBreakdown, EvalError> {
    plan.validate(m)?;
    let mut per_vertex_delivery = Vec::new();
    deliveries_unchecked(m, &plan.route, &plan.send, &mut per_vertex_delivery);
    Ok(EvalBreakdown {
        expected_value: transmission_sequence_value(m, &plan.route, &plan.send),
        survival: survival_unchecked(m, &plan.route, &plan.send),
        per_vertex_delivery,
    })
}

/// `P(at least one event)` for independent events, as `1 - prod(1 - p)`.
pub fn union_complement(probs: &[f64]) -> f64 {
    1.0 - probs.iter().map(|p| 1.0 - p).product::<f64>()
}

/// `P(at least one event)` for independent events by inclusion-exclusion:
/// the signed sum over non-empty subsets of the product of their
/// probabilities. Exponential in `probs.len()`.
pub fn union_inclusion_exclusion(probs: &[f64]) -> f64 {
    let l = probs.len();
    assert!(l < 32, "inclusion-exclusion over {l} events");
    let mut total = 0.0;
    for subset in 1u32..(1 << l) {
        let product: f64 = (0..l)
            .filter(|i| subset >> i & 1 == 1)
            .map(|i| probs[i])
            .product();
        if subset.count_ones() % 2 == 1 {
            total += product;
        } else {
            total -= product;
        }
    }
    total
}

/// Per-drone delivery vectors for every member plan, validated.
fn multi_deliveries(m: &Mission, mp: &MultiPlan) -> Result<Vec<Vec<f64>>, EvalError> {
    if mp.plans.is_empty() {
        return Err(EvalError::NoDrones);
    }
    mp.validate(m)?;
    Ok(mp
        .plans
        .iter()
        .map(|p| {
            let mut d = Vec::new();
            deliveries_unchecked(m, &p.route, &p.send, &mut d);
            d
        })
        .collect())
}

fn combine(m: &Mission, per_drone: &[Vec<f64>], union: fn(&[f64]) -> f64) -> f64 {
    let mut column = Vec::with_capacity(per_drone.len());
    (0..m.n())
        .map(|v| {
            column.clear();
            column.extend(per_drone.iter().map(|d| d[v]));
            m.info(v) * union(&column)
        })
        .sum()
}

/// Expected information delivered by at least one of several independent
/// drones, each vertex counted once.
pub fn expected_value_multi(m: &Mission, mp: &MultiPlan) -> Result<f64, EvalError> {
    let per_drone = multi_deliveries(m, mp)?;
    Ok(combine(m, &per_drone, union_complement))
}

/// Same as [`expected_value_multi`] but through the signed subset sum.
pub fn expected_value_multi_inclusion_exclusion(m: &Mission, mp: &MultiPlan) -> Result<f64, EvalError> {
    let per_drone = multi_deliveries(m, mp)?;
    Ok(combine(m, &per_drone, union_inclusion_exclusion))
}

/// Multi-drone value from precomputed delivery vectors, no validation.
pub fn multi_value_from_deliveries(m: &Mission, per_drone: &[Vec<f64>]) -> f64 {
    combine(m, per_drone, union_complement)
}
