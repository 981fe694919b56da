//! Mixed-integer linear model of the single-drone problem over a fixed
//! horizon, its LP-format export, and re-import of a solver's assignment.
//!
//! Each period `t = 1..=T` the drone moves along one directed arc
//! (`x`), may observe the vertex it reached (`y`), and may transmit (`z`).
//! Survival after moving and after sending is tracked in `sM_t`/`sS_t`, and
//! the value of carried information times survival in `vM`/`vO`/`vS`. The
//! products of a continuous and a binary variable are replaced by the
//! auxiliaries `alpha`, `beta`, `gamma`, `delta`, `eps` with the usual four
//! linking inequalities (the `>= 0` one being a bound).
//!
//! A `{0, 0}` self-loop with crossing probability 1 lets the drone idle at
//! the base, so walks shorter than `T` are representable.

mod lp;
mod solution;

pub use lp::export_lp;
pub use solution::{assignment_from_plan, import_solution, parse_solution, ImportError, ImportedSolution};

use std::collections::HashMap;

use thiserror::Error;

use crate::mission::{Mission, MissionViolation, BASE};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MilpError {
    #[error("invalid mission: {0}")]
    InvalidMission(#[from] MissionViolation),
    #[error("horizon must be at least 1")]
    ZeroHorizon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// Constraint families, one per group of rows sharing a definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    MoveOneHot,
    StartBase,
    EndBase,
    Flow,
    ObserveOnce,
    ObserveHere,
    SendHere,
    AlphaUb1,
    AlphaUb2,
    AlphaLb,
    SurvMove,
    BetaUb1,
    BetaUb2,
    BetaLb,
    SurvSend,
    GammaUb1,
    GammaUb2,
    GammaLb,
    ExpMove,
    DeltaUb1,
    DeltaUb2,
    DeltaLb,
    ExpObs,
    ExpSendUb1,
    ExpSendUb2,
    EpsUb1,
    EpsUb2,
    EpsLb,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub family: Family,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    /// Left-hand side evaluated at `values`.
    pub fn lhs(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v]).sum()
    }

    /// How far `values` is from satisfying the row (0 when satisfied).
    pub fn violation(&self, values: &[f64]) -> f64 {
        let lhs = self.lhs(values);
        match self.sense {
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// How a transmission resets the carried value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SendReset {
    /// `vS <= vO` and `vS <= M (1 - z)`: sending empties the drone.
    #[default]
    Corrected,
    /// `vS <= vM` and `vS <= M (1 - y)` as originally printed. Observing
    /// then discards what was carried, so this variant undervalues plans
    /// that carry information past a new observation.
    Literal,
}

/// A directed arc of the model. The base self-loop has `from == to == 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub q: f64,
}

/// Variable ids per family, indexed `[item][t - 1]`.
#[derive(Debug, Clone, Default)]
pub(crate) struct Layout {
    pub x: Vec<Vec<usize>>,
    pub alpha: Vec<Vec<usize>>,
    pub gamma: Vec<Vec<usize>>,
    pub y: Vec<Vec<usize>>,
    pub z: Vec<Vec<usize>>,
    pub beta: Vec<Vec<usize>>,
    pub delta: Vec<Vec<usize>>,
    pub eps: Vec<Vec<usize>>,
    pub v_move: Vec<Vec<usize>>,
    pub v_obs: Vec<Vec<usize>>,
    pub v_send: Vec<Vec<usize>>,
    pub s_move: Vec<usize>,
    pub s_send: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct MilpModel {
    pub vars: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// Maximised.
    pub objective: Vec<(usize, f64)>,
    pub big_m: f64,
    pub horizon: usize,
    pub arcs: Vec<Arc>,
    pub send_reset: SendReset,
    pub(crate) layout: Layout,
    names: HashMap<String, usize>,
}

impl MilpModel {
    pub fn var_id(&self, name: &str) -> Option<usize> {
        self.names.get(name).copied()
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().map(|&(v, c)| c * values[v]).sum()
    }

    /// Rows per family.
    pub fn family_counts(&self) -> HashMap<Family, usize> {
        let mut counts = HashMap::new();
        for c in &self.constraints {
            *counts.entry(c.family).or_insert(0) += 1;
        }
        counts
    }

    /// Names of rows, bounds or integrality requirements that `values`
    /// violates by more than `tol`.
    pub fn check(&self, values: &[f64], tol: f64) -> Vec<String> {
        let mut bad = Vec::new();
        for (v, var) in self.vars.iter().enumerate() {
            let x = values[v];
            if x < var.lower - tol || x > var.upper + tol {
                bad.push(format!("bound {} = {x}", var.name));
            }
            if var.kind == VarKind::Binary && (x - x.round()).abs() > tol {
                bad.push(format!("integrality {} = {x}", var.name));
            }
        }
        for c in &self.constraints {
            let gap = c.violation(values);
            if gap > tol {
                bad.push(format!("{} off by {gap:e}", c.name));
            }
        }
        bad
    }
}

struct Builder {
    vars: Vec<Variable>,
    constraints: Vec<Constraint>,
    names: HashMap<String, usize>,
}

impl Builder {
    fn var(&mut self, name: String, kind: VarKind, upper: f64) -> usize {
        let id = self.vars.len();
        self.names.insert(name.clone(), id);
        self.vars.push(Variable {
            name,
            kind,
            lower: 0.0,
            upper,
        });
        id
    }

    fn row(&mut self, name: String, family: Family, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64) {
        self.constraints.push(Constraint {
            name,
            family,
            terms,
            sense,
            rhs,
        });
    }

    /// `aux <= cont`, `aux <= bound * bin`, `aux >= cont - bound (1 - bin)`.
    /// `cont` is `Err(c)` for a fixed parameter `c`.
    #[allow(clippy::too_many_arguments)]
    fn product(
        &mut self,
        families: [Family; 3],
        tag: &str,
        suffix: &str,
        aux: usize,
        cont: Result<usize, f64>,
        bin: usize,
        bound: f64,
    ) {
        let [ub1, ub2, lb] = families;
        match cont {
            Ok(c) => self.row(format!("{tag}_ub1_{suffix}"), ub1, vec![(aux, 1.0), (c, -1.0)], Sense::Le, 0.0),
            Err(c) => self.row(format!("{tag}_ub1_{suffix}"), ub1, vec![(aux, 1.0)], Sense::Le, c),
        }
        self.row(format!("{tag}_ub2_{suffix}"), ub2, vec![(aux, 1.0), (bin, -bound)], Sense::Le, 0.0);
        match cont {
            Ok(c) => self.row(
                format!("{tag}_lb_{suffix}"),
                lb,
                vec![(aux, 1.0), (c, -1.0), (bin, -bound)],
                Sense::Ge,
                -bound,
            ),
            Err(c) => self.row(format!("{tag}_lb_{suffix}"), lb, vec![(aux, 1.0), (bin, -bound)], Sense::Ge, c - bound),
        }
    }
}

/// Builds the model for `m` over periods `1..=t_max`.
pub fn build_milp(m: &Mission, t_max: usize, send_reset: SendReset) -> Result<MilpModel, MilpError> {
    m.validate()?;
    if t_max == 0 {
        return Err(MilpError::ZeroHorizon);
    }
    let n = m.n();
    let horizon = t_max;
    let big_m = m.total_info();

    let mut arcs = vec![Arc {
        from: BASE,
        to: BASE,
        q: 1.0,
    }];
    for i in 0..n {
        for &j in m.neighbors(i) {
            arcs.push(Arc {
                from: i,
                to: j,
                q: m.crossing(i, j),
            });
        }
    }

    let mut b = Builder {
        vars: Vec::new(),
        constraints: Vec::new(),
        names: HashMap::new(),
    };
    let mut lay = Layout::default();
    let periods = 1..=horizon;

    let arc_family = |b: &mut Builder, prefix: &str, kind: VarKind, upper: f64| -> Vec<Vec<usize>> {
        arcs.iter()
            .map(|a| {
                periods
                    .clone()
                    .map(|t| b.var(format!("{prefix}_{}_{}_{t}", a.from, a.to), kind, upper))
                    .collect()
            })
            .collect()
    };
    lay.x = arc_family(&mut b, "x", VarKind::Binary, 1.0);
    let vertex_family = |b: &mut Builder, prefix: &str, kind: VarKind, upper: f64| -> Vec<Vec<usize>> {
        (0..n)
            .map(|i| periods.clone().map(|t| b.var(format!("{prefix}_{i}_{t}"), kind, upper)).collect())
            .collect()
    };
    lay.y = vertex_family(&mut b, "y", VarKind::Binary, 1.0);
    lay.z = vertex_family(&mut b, "z", VarKind::Binary, 1.0);
    lay.s_move = periods.clone().map(|t| b.var(format!("sM_{t}"), VarKind::Continuous, 1.0)).collect();
    lay.s_send = periods.clone().map(|t| b.var(format!("sS_{t}"), VarKind::Continuous, 1.0)).collect();
    lay.v_move = vertex_family(&mut b, "vM", VarKind::Continuous, big_m);
    lay.v_obs = vertex_family(&mut b, "vO", VarKind::Continuous, big_m);
    lay.v_send = vertex_family(&mut b, "vS", VarKind::Continuous, big_m);
    lay.alpha = arc_family(&mut b, "alpha", VarKind::Continuous, 1.0);
    lay.beta = vertex_family(&mut b, "beta", VarKind::Continuous, 1.0);
    lay.gamma = arc_family(&mut b, "gamma", VarKind::Continuous, big_m);
    lay.delta = vertex_family(&mut b, "delta", VarKind::Continuous, 1.0);
    lay.eps = vertex_family(&mut b, "eps", VarKind::Continuous, big_m);

    let arcs_into = |i: usize| arcs.iter().enumerate().filter(move |(_, a)| a.to == i).map(|(k, _)| k);
    let arcs_from = |i: usize| arcs.iter().enumerate().filter(move |(_, a)| a.from == i).map(|(k, _)| k);
    let ti = |t: usize| t - 1;

    // Moving.
    for t in periods.clone() {
        let terms = (0..arcs.len()).map(|a| (lay.x[a][ti(t)], 1.0)).collect();
        b.row(format!("move_onehot_t{t}"), Family::MoveOneHot, terms, Sense::Eq, 1.0);
    }
    let terms = arcs_from(BASE).map(|a| (lay.x[a][0], 1.0)).collect();
    b.row("start_base".into(), Family::StartBase, terms, Sense::Eq, 1.0);
    let terms = arcs_into(BASE).map(|a| (lay.x[a][ti(horizon)], 1.0)).collect();
    b.row("end_base".into(), Family::EndBase, terms, Sense::Eq, 1.0);
    for t in 2..=horizon {
        for j in 0..n {
            let mut terms: Vec<_> = arcs_into(j).map(|a| (lay.x[a][ti(t - 1)], 1.0)).collect();
            terms.extend(arcs_from(j).map(|a| (lay.x[a][ti(t)], -1.0)));
            b.row(format!("flow_j{j}_t{t}"), Family::Flow, terms, Sense::Eq, 0.0);
        }
    }

    // Observing and sending happen only where the drone arrived.
    for i in 0..n {
        let terms = periods.clone().map(|t| (lay.y[i][ti(t)], 1.0)).collect();
        b.row(format!("observe_once_i{i}"), Family::ObserveOnce, terms, Sense::Le, 1.0);
    }
    for (family, tag, var) in [(Family::ObserveHere, "observe_here", &lay.y), (Family::SendHere, "send_here", &lay.z)] {
        for i in 0..n {
            for t in periods.clone() {
                let mut terms = vec![(var[i][ti(t)], 1.0)];
                terms.extend(arcs_into(i).map(|a| (lay.x[a][ti(t)], -1.0)));
                b.row(format!("{tag}_i{i}_t{t}"), family, terms, Sense::Le, 0.0);
            }
        }
    }

    // Survival after moving: sM_t = sum_a q_a * (sS_{t-1} x_at).
    let alpha_fams = [Family::AlphaUb1, Family::AlphaUb2, Family::AlphaLb];
    for t in periods.clone() {
        let prev = if t == 1 { Err(1.0) } else { Ok(lay.s_send[ti(t - 1)]) };
        for (a, arc) in arcs.iter().enumerate() {
            let suffix = format!("i{}_j{}_t{t}", arc.from, arc.to);
            b.product(alpha_fams, "alpha", &suffix, lay.alpha[a][ti(t)], prev, lay.x[a][ti(t)], 1.0);
        }
        let mut terms = vec![(lay.s_move[ti(t)], 1.0)];
        terms.extend(arcs.iter().enumerate().map(|(a, arc)| (lay.alpha[a][ti(t)], -arc.q)));
        b.row(format!("surv_move_t{t}"), Family::SurvMove, terms, Sense::Eq, 0.0);
    }

    // Survival after sending: sS_t = sM_t - sum_i (1 - p_i) (sM_t z_it).
    let beta_fams = [Family::BetaUb1, Family::BetaUb2, Family::BetaLb];
    for t in periods.clone() {
        for i in 0..n {
            let suffix = format!("i{i}_t{t}");
            b.product(beta_fams, "beta", &suffix, lay.beta[i][ti(t)], Ok(lay.s_move[ti(t)]), lay.z[i][ti(t)], 1.0);
        }
        let mut terms = vec![(lay.s_send[ti(t)], 1.0), (lay.s_move[ti(t)], -1.0)];
        terms.extend((0..n).map(|i| (lay.beta[i][ti(t)], 1.0 - m.transmit(i))));
        b.row(format!("surv_send_t{t}"), Family::SurvSend, terms, Sense::Eq, 0.0);
    }

    // Carried value after moving: vM_it = sum_j q_ji (vS_{j,t-1} x_jit).
    let gamma_fams = [Family::GammaUb1, Family::GammaUb2, Family::GammaLb];
    for t in periods.clone() {
        for (a, arc) in arcs.iter().enumerate() {
            let prev = if t == 1 { Err(0.0) } else { Ok(lay.v_send[arc.from][ti(t - 1)]) };
            let suffix = format!("j{}_i{}_t{t}", arc.from, arc.to);
            b.product(gamma_fams, "gamma", &suffix, lay.gamma[a][ti(t)], prev, lay.x[a][ti(t)], big_m);
        }
        for i in 0..n {
            let mut terms = vec![(lay.v_move[i][ti(t)], 1.0)];
            terms.extend(arcs_into(i).map(|a| (lay.gamma[a][ti(t)], -arcs[a].q)));
            b.row(format!("exp_move_i{i}_t{t}"), Family::ExpMove, terms, Sense::Eq, 0.0);
        }
    }

    // Observation adds w_i * (sM_t y_it).
    let delta_fams = [Family::DeltaUb1, Family::DeltaUb2, Family::DeltaLb];
    for t in periods.clone() {
        for i in 0..n {
            let suffix = format!("i{i}_t{t}");
            b.product(delta_fams, "delta", &suffix, lay.delta[i][ti(t)], Ok(lay.s_move[ti(t)]), lay.y[i][ti(t)], 1.0);
            let terms = vec![(lay.v_obs[i][ti(t)], 1.0), (lay.v_move[i][ti(t)], -1.0), (lay.delta[i][ti(t)], -m.info(i))];
            b.row(format!("exp_obs_i{i}_t{t}"), Family::ExpObs, terms, Sense::Eq, 0.0);
        }
    }

    // Transmission resets the carried value.
    for t in periods.clone() {
        for i in 0..n {
            let (source, switch) = match send_reset {
                SendReset::Corrected => (lay.v_obs[i][ti(t)], lay.z[i][ti(t)]),
                SendReset::Literal => (lay.v_move[i][ti(t)], lay.y[i][ti(t)]),
            };
            let vs = lay.v_send[i][ti(t)];
            b.row(format!("exp_send_ub1_i{i}_t{t}"), Family::ExpSendUb1, vec![(vs, 1.0), (source, -1.0)], Sense::Le, 0.0);
            b.row(format!("exp_send_ub2_i{i}_t{t}"), Family::ExpSendUb2, vec![(vs, 1.0), (switch, big_m)], Sense::Le, big_m);
        }
    }

    // Objective linearisation: eps_it = vO_it z_it.
    let eps_fams = [Family::EpsUb1, Family::EpsUb2, Family::EpsLb];
    let mut objective = Vec::new();
    for i in 0..n {
        for t in periods.clone() {
            let suffix = format!("i{i}_t{t}");
            b.product(eps_fams, "eps", &suffix, lay.eps[i][ti(t)], Ok(lay.v_obs[i][ti(t)]), lay.z[i][ti(t)], big_m);
        }
    }
    for t in periods.clone() {
        for i in 0..n {
            if m.transmit(i) != 0.0 {
                objective.push((lay.eps[i][ti(t)], m.transmit(i)));
            }
        }
    }

    Ok(MilpModel {
        vars: b.vars,
        constraints: b.constraints,
        objective,
        big_m,
        horizon,
        arcs,
        send_reset,
        layout: lay,
        names: b.names,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    #[test]
    fn fig1_sizes() {
        let m = instances::fig1();
        let model = build_milp(&m, 7, SendReset::Corrected).unwrap();
        assert_eq!(model.arcs.len(), 13);
        let x_count = model.vars.iter().filter(|v| v.name.starts_with("x_")).count();
        assert_eq!(x_count, 13 * 7);
        assert_eq!(model.big_m, 3.0);
        assert!(model.var_id("gamma_2_3_4").is_some());
        assert!(model.var_id("x_0_0_7").is_some());
        assert!(model.var_id("x_0_0_8").is_none());
    }

    #[test]
    fn constraints_reference_declared_vars() {
        let model = build_milp(&instances::k6(), 3, SendReset::Corrected).unwrap();
        for c in &model.constraints {
            assert!(!c.terms.is_empty(), "{}", c.name);
            assert!(c.terms.iter().all(|&(v, _)| v < model.vars.len()));
        }
        let mut names: Vec<_> = model.constraints.iter().map(|c| &c.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), model.constraints.len());
    }

    #[test]
    fn errors() {
        let m = instances::fig1();
        assert_eq!(build_milp(&m, 0, SendReset::Corrected).unwrap_err(), MilpError::ZeroHorizon);
        let split = Mission::new(3, &[(1, 2, 0.5)], vec![1.0; 3], vec![0.0, 1.0, 1.0]).unwrap();
        assert!(matches!(build_milp(&split, 3, SendReset::Corrected), Err(MilpError::InvalidMission(_))));
    }
}
