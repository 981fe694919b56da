use std::fmt;

use super::{Mission, BASE};

/// One drone's walk together with its send strategy.
///
/// `send[k]` set means the drone transmits everything it carries when it is
/// at `route[k]`. Vertices may repeat.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Plan {
    pub route: Vec<usize>,
    pub send: Vec<bool>,
}

/// Plans for several drones flying the same mission independently.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPlan {
    pub plans: Vec<Plan>,
}

/// The first broken [`Plan`] invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanViolation {
    EmptyRoute,
    LengthMismatch { route: usize, send: usize },
    VertexOutOfRange { position: usize, vertex: usize },
    StartNotBase(usize),
    EndNotBase(usize),
    MissingEdge { position: usize, from: usize, to: usize },
    FinalSendNotSet,
    NoDrones,
    Drone { drone: usize, violation: Box<PlanViolation> },
}

impl fmt::Display for PlanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyRoute => write!(f, "route is empty"),
            Self::LengthMismatch { route, send } => {
                write!(f, "route has {route} entries but send has {send}")
            }
            Self::VertexOutOfRange { position, vertex } => {
                write!(f, "vertex {vertex} at position {position} does not exist")
            }
            Self::StartNotBase(v) => write!(f, "route must start at the base (starts at {v})"),
            Self::EndNotBase(v) => write!(f, "route must end at the base (ends at {v})"),
            Self::MissingEdge { position, from, to } => {
                write!(f, "no edge {{{from}, {to}}} for step {position}")
            }
            Self::FinalSendNotSet => write!(f, "final send must be 1"),
            Self::NoDrones => write!(f, "multi-plan has no drones"),
            Self::Drone { drone, violation } => write!(f, "drone {drone}: {violation}"),
        }
    }
}

impl std::error::Error for PlanViolation {}

impl Plan {
    pub fn new(route: Vec<usize>, send: Vec<bool>) -> Self {
        Self { route, send }
    }

    /// Builds a plan from 0/1 send flags.
    pub fn from_bits(route: &[usize], send: &[u8]) -> Self {
        Self {
            route: route.to_vec(),
            send: send.iter().map(|&b| b != 0).collect(),
        }
    }

    /// The plan that never leaves the base.
    pub fn stay_home() -> Self {
        Self {
            route: vec![BASE],
            send: vec![true],
        }
    }

    pub fn len(&self) -> usize {
        self.route.len()
    }

    pub fn is_empty(&self) -> bool {
        self.route.is_empty()
    }

    /// Number of edge crossings (time periods) the plan uses.
    pub fn crossings(&self) -> usize {
        self.route.len().saturating_sub(1)
    }

    pub fn send_bits(&self) -> Vec<u8> {
        self.send.iter().map(|&b| u8::from(b)).collect()
    }

    /// Checks the walk and send-vector invariants against `mission`.
    /// Repeated vertices are allowed.
    pub fn validate(&self, mission: &Mission) -> Result<(), PlanViolation> {
        let (route, send) = (&self.route, &self.send);
        if route.is_empty() {
            return Err(PlanViolation::EmptyRoute);
        }
        if route.len() != send.len() {
            return Err(PlanViolation::LengthMismatch {
                route: route.len(),
                send: send.len(),
            });
        }
        if let Some((position, &vertex)) = route.iter().enumerate().find(|(_, &v)| v >= mission.n()) {
            return Err(PlanViolation::VertexOutOfRange { position, vertex });
        }
        if route[0] != BASE {
            return Err(PlanViolation::StartNotBase(route[0]));
        }
        let last = route[route.len() - 1];
        if last != BASE {
            return Err(PlanViolation::EndNotBase(last));
        }
        for (position, step) in route.windows(2).enumerate() {
            if !mission.has_edge(step[0], step[1]) {
                return Err(PlanViolation::MissingEdge {
                    position: position + 1,
                    from: step[0],
                    to: step[1],
                });
            }
        }
        if !send[send.len() - 1] {
            return Err(PlanViolation::FinalSendNotSet);
        }
        Ok(())
    }
}

impl MultiPlan {
    pub fn new(plans: Vec<Plan>) -> Self {
        Self { plans }
    }

    pub fn drones(&self) -> usize {
        self.plans.len()
    }

    pub fn validate(&self, mission: &Mission) -> Result<(), PlanViolation> {
        if self.plans.is_empty() {
            return Err(PlanViolation::NoDrones);
        }
        for (drone, plan) in self.plans.iter().enumerate() {
            plan.validate(mission).map_err(|v| PlanViolation::Drone {
                drone,
                violation: Box::new(v),
            })?;
        }
        Ok(())
    }
}

impl From<Plan> for MultiPlan {
    fn from(plan: Plan) -> Self {
        Self { plans: vec![plan] }
    }
}
