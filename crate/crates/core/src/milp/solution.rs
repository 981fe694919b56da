//! Moving between plans and model assignments.

use thiserror::Error;

use super::{MilpModel, SendReset, VarKind};
use crate::evaluator::expected_value_single;
use crate::mission::{Mission, Plan, BASE};

/// Integrality tolerance for binaries in an imported assignment.
pub const INTEGRALITY_TOL: f64 = 1e-6;
/// Largest accepted gap between the model objective and the evaluator.
pub const OBJECTIVE_TOL: f64 = 1e-5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ImportError {
    #[error("line {line}: expected `name value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("binary {name} has fractional value {value}")]
    Fractional { name: String, value: f64 },
    #[error("period {t}: {count} arcs traversed, expected exactly one")]
    NotOneArc { t: usize, count: usize },
    #[error("walk does not start at the base")]
    StartNotBase,
    #[error("period {t}: leaves {from} but the drone is at {at}")]
    Discontinuous { t: usize, from: usize, at: usize },
    #[error("walk does not end at the base")]
    EndNotBase,
    #[error("period {t}: transmission from {vertex} while the drone is at {at}")]
    SendElsewhere { t: usize, vertex: usize, at: usize },
    #[error("objective mismatch: model {model} vs evaluator {evaluated}")]
    ObjectiveMismatch { model: f64, evaluated: f64 },
    #[error("plan has {crossings} crossings but the horizon is {horizon}")]
    TooLong { crossings: usize, horizon: usize },
    #[error("plan invalid: {0}")]
    InvalidPlan(String),
}

/// A plan read back from an assignment, with both objective readings.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportedSolution {
    pub plan: Plan,
    pub evaluated: f64,
    pub milp_objective: f64,
}

/// Parses `name value` lines; blank lines and `#` comments are skipped.
pub fn parse_solution(text: &str) -> Result<Vec<(String, f64)>, ImportError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let parsed = match (parts.next(), parts.next(), parts.next()) {
            (Some(name), Some(value), None) => value.parse::<f64>().ok().map(|v| (name.to_string(), v)),
            _ => None,
        };
        out.push(parsed.ok_or_else(|| ImportError::Syntax {
            line: k + 1,
            text: raw.to_string(),
        })?);
    }
    Ok(out)
}

fn is_one(x: f64) -> bool {
    (x - 1.0).abs() <= INTEGRALITY_TOL
}

/// Rebuilds the plan encoded by `assignment` (names missing from it are 0)
/// and checks that the model objective agrees with the evaluator.
///
/// Base self-loops are folded away; a transmission during one is merged
/// into the base visit it extends. The final send is always set.
pub fn import_solution(
    m: &Mission,
    model: &MilpModel,
    assignment: &[(String, f64)],
) -> Result<ImportedSolution, ImportError> {
    let mut values = vec![0.0; model.vars.len()];
    for (name, value) in assignment {
        let id = model.var_id(name).ok_or_else(|| ImportError::UnknownVariable(name.clone()))?;
        values[id] = *value;
    }
    for (v, var) in model.vars.iter().enumerate() {
        if var.kind == VarKind::Binary && !is_one(values[v]) && values[v].abs() > INTEGRALITY_TOL {
            return Err(ImportError::Fractional {
                name: var.name.clone(),
                value: values[v],
            });
        }
    }

    let lay = &model.layout;
    let mut route = vec![BASE];
    let mut send = vec![false];
    let mut at = BASE;
    for t in 1..=model.horizon {
        let taken: Vec<usize> = (0..model.arcs.len()).filter(|&a| is_one(values[lay.x[a][t - 1]])).collect();
        if taken.len() != 1 {
            return Err(ImportError::NotOneArc { t, count: taken.len() });
        }
        let arc = model.arcs[taken[0]];
        if arc.from != at {
            return Err(if t == 1 {
                ImportError::StartNotBase
            } else {
                ImportError::Discontinuous { t, from: arc.from, at }
            });
        }
        at = arc.to;
        for i in 0..m.n() {
            if is_one(values[lay.z[i][t - 1]]) && i != at {
                return Err(ImportError::SendElsewhere { t, vertex: i, at });
            }
        }
        let sends = is_one(values[lay.z[at][t - 1]]);
        if arc.from == arc.to {
            *send.last_mut().expect("non-empty") |= sends;
        } else {
            route.push(at);
            send.push(sends);
        }
    }
    if at != BASE {
        return Err(ImportError::EndNotBase);
    }
    *send.last_mut().expect("non-empty") = true;
    let plan = Plan { route, send };
    let evaluated = expected_value_single(m, &plan)
        .map_err(|e| ImportError::InvalidPlan(e.to_string()))?
        .expected_value;
    let milp_objective = model.objective_value(&values);
    if (evaluated - milp_objective).abs() > OBJECTIVE_TOL {
        return Err(ImportError::ObjectiveMismatch {
            model: milp_objective,
            evaluated,
        });
    }
    Ok(ImportedSolution {
        plan,
        evaluated,
        milp_objective,
    })
}

/// The assignment that encodes `plan`, padded with base self-loops up to
/// the model's horizon. Every auxiliary takes the value of the product it
/// stands for, so the result satisfies every row of a correctly linearised
/// model. Values are indexed by variable id.
pub fn assignment_from_plan(m: &Mission, model: &MilpModel, plan: &Plan) -> Result<Vec<f64>, ImportError> {
    plan.validate(m).map_err(|e| ImportError::InvalidPlan(e.to_string()))?;
    if plan.crossings() > model.horizon {
        return Err(ImportError::TooLong {
            crossings: plan.crossings(),
            horizon: model.horizon,
        });
    }
    let lay = &model.layout;
    let n = m.n();
    let mut val = vec![0.0; model.vars.len()];
    let mut seen = vec![false; n];
    seen[BASE] = true;
    let mut s_send_prev = 1.0;
    let mut v_send_prev = vec![0.0; n];
    for t in 1..=model.horizon {
        let ti = t - 1;
        let (from, to, sends) = if t <= plan.crossings() {
            (plan.route[t - 1], plan.route[t], plan.send[t])
        } else {
            (BASE, BASE, false)
        };
        let a = model
            .arcs
            .iter()
            .position(|arc| arc.from == from && arc.to == to)
            .expect("plan edges are model arcs");
        val[lay.x[a][ti]] = 1.0;
        let observes = !std::mem::replace(&mut seen[to], true);
        if observes {
            val[lay.y[to][ti]] = 1.0;
        }
        if sends {
            val[lay.z[to][ti]] = 1.0;
        }

        val[lay.alpha[a][ti]] = s_send_prev;
        let s_move = model.arcs[a].q * s_send_prev;
        val[lay.s_move[ti]] = s_move;
        if sends {
            val[lay.beta[to][ti]] = s_move;
        }
        let s_send = if sends { s_move * m.transmit(to) } else { s_move };
        val[lay.s_send[ti]] = s_send;

        val[lay.gamma[a][ti]] = v_send_prev[from];
        let mut v_send = vec![0.0; n];
        let v_move = model.arcs[a].q * v_send_prev[from];
        val[lay.v_move[to][ti]] = v_move;
        if observes {
            val[lay.delta[to][ti]] = s_move;
        }
        let v_obs = v_move + if observes { m.info(to) * s_move } else { 0.0 };
        val[lay.v_obs[to][ti]] = v_obs;
        let reset = match model.send_reset {
            SendReset::Corrected => sends,
            SendReset::Literal => observes,
        };
        let source = match model.send_reset {
            SendReset::Corrected => v_obs,
            SendReset::Literal => v_move,
        };
        if !reset {
            v_send[to] = source;
        }
        val[lay.v_send[to][ti]] = v_send[to];
        if sends {
            val[lay.eps[to][ti]] = v_obs;
        }
        s_send_prev = s_send;
        v_send_prev = v_send;
    }
    Ok(val)
}
