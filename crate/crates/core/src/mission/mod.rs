//! Mission graphs and candidate plans.
//!
//! A [`Mission`] is an undirected graph on vertices `0..n` where vertex 0 is
//! the base. Every edge carries the probability of surviving its crossing,
//! every vertex carries the probability that a transmission there goes
//! unnoticed and the amount of information that can be observed there.

mod generate;
mod io;
mod plan;

pub use generate::{make_hardness_instance, make_path_instance, HardnessInstance};
pub use io::{FileError, MissionFile, PlanFile, PlanSet};
pub use plan::{MultiPlan, Plan, PlanViolation};

use std::fmt;

use thiserror::Error;

/// The base vertex. All walks start and end here.
pub const BASE: usize = 0;

/// Tolerance used when checking matrix symmetry on input.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Structural problems that prevent a [`Mission`] from being built at all.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MissionError {
    #[error("mission needs at least one vertex")]
    Empty,
    #[error("expected {expected} entries in {what}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("edge ({0}, {1}) references a vertex outside 0..n")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0} is not allowed")]
    SelfLoop(usize),
    #[error("edge {{{0}, {1}}} given more than once")]
    ParallelEdge(usize, usize),
    #[error("matrix is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("non-finite value in {0}")]
    NotFinite(&'static str),
    #[error("n must be at least {min}, got {got}")]
    TooSmall { min: usize, got: usize },
    #[error("probability {0} must lie strictly between 0 and 1")]
    OpenProbability(f64),
}

/// A violated mission invariant. Returned by [`Mission::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum MissionViolation {
    BaseTransmission(f64),
    BaseWeight(f64),
    TransmissionRange { vertex: usize, value: f64 },
    CrossingRange { i: usize, j: usize, value: f64 },
    NegativeWeight { vertex: usize, value: f64 },
    Disconnected,
}

impl fmt::Display for MissionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BaseTransmission(p) => {
                write!(f, "base transmission probability must be 1 (got {p})")
            }
            Self::BaseWeight(w) => write!(f, "base information value must be 0 (got {w})"),
            Self::TransmissionRange { vertex, value } => write!(
                f,
                "transmission probability at vertex {vertex} must lie in [0,1] (got {value})"
            ),
            Self::CrossingRange { i, j, value } => write!(
                f,
                "crossing probability on edge {{{i}, {j}}} must lie in [0,1] (got {value})"
            ),
            Self::NegativeWeight { vertex, value } => write!(
                f,
                "information value at vertex {vertex} must be non-negative (got {value})"
            ),
            Self::Disconnected => write!(f, "graph not connected"),
        }
    }
}

impl std::error::Error for MissionViolation {}

/// An undirected mission graph with crossing, transmission and information
/// weights.
///
/// Edges with crossing probability 0 are dropped on construction: they can
/// never be part of a useful plan and keeping them out makes walk validation
/// meaningful.
#[derive(Debug, Clone, PartialEq)]
pub struct Mission {
    n: usize,
    /// Dense crossing matrix, `0.0` where no edge exists. Diagonal is unused.
    crossing: Vec<f64>,
    /// Neighbours of each vertex in ascending order.
    adjacency: Vec<Vec<usize>>,
    /// Edges `(i, j, q)` with `i < j`, in lexicographic order.
    edges: Vec<(usize, usize, f64)>,
    transmit: Vec<f64>,
    info: Vec<f64>,
}

impl Mission {
    /// Builds a mission from an explicit edge list.
    pub fn new(
        n: usize,
        edges: &[(usize, usize, f64)],
        transmit: Vec<f64>,
        info: Vec<f64>,
    ) -> Result<Self, MissionError> {
        if n == 0 {
            return Err(MissionError::Empty);
        }
        for (what, v) in [("transmission probabilities", &transmit), ("weights", &info)] {
            if v.len() != n {
                return Err(MissionError::Dimension {
                    what,
                    expected: n,
                    found: v.len(),
                });
            }
        }
        if transmit.iter().chain(info.iter()).any(|x| !x.is_finite()) {
            return Err(MissionError::NotFinite("vertex weights"));
        }
        let mut crossing = vec![0.0; n * n];
        let mut seen = vec![false; n * n];
        let mut kept = Vec::with_capacity(edges.len());
        for &(a, b, q) in edges {
            if a >= n || b >= n {
                return Err(MissionError::VertexOutOfRange(a, b));
            }
            if a == b {
                return Err(MissionError::SelfLoop(a));
            }
            if !q.is_finite() {
                return Err(MissionError::NotFinite("crossing probabilities"));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if std::mem::replace(&mut seen[i * n + j], true) {
                return Err(MissionError::ParallelEdge(i, j));
            }
            if q == 0.0 {
                continue;
            }
            crossing[i * n + j] = q;
            crossing[j * n + i] = q;
            kept.push((i, j, q));
        }
        kept.sort_by_key(|&(i, j, _)| (i, j));
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j, _) in &kept {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self {
            n,
            crossing,
            adjacency,
            edges: kept,
            transmit,
            info,
        })
    }

    /// Builds a mission from the matrix presentation: diagonal entries are
    /// transmission probabilities, off-diagonal entries crossing
    /// probabilities (0 meaning no edge).
    pub fn from_matrix(matrix: &[Vec<f64>], info: Vec<f64>) -> Result<Self, MissionError> {
        let n = matrix.len();
        let mut edges = Vec::new();
        let mut transmit = Vec::with_capacity(n);
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(MissionError::Dimension {
                    what: "matrix row",
                    expected: n,
                    found: row.len(),
                });
            }
            transmit.push(row[i]);
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (matrix[i][j], matrix[j][i]);
                if !a.is_finite() || !b.is_finite() {
                    return Err(MissionError::NotFinite("matrix"));
                }
                if (a - b).abs() > SYMMETRY_TOL {
                    return Err(MissionError::Asymmetric(i, j));
                }
                if a != 0.0 {
                    edges.push((i, j, a));
                }
            }
        }
        Self::new(n, &edges, transmit, info)
    }

    /// Matrix presentation: `p` on the diagonal, `q` off it.
    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| if i == j { self.transmit[i] } else { self.crossing[i * self.n + j] })
                    .collect()
            })
            .collect()
    }

    /// Returns the first violated invariant, if any.
    pub fn validate(&self) -> Result<(), MissionViolation> {
        if self.transmit[BASE] != 1.0 {
            return Err(MissionViolation::BaseTransmission(self.transmit[BASE]));
        }
        if self.info[BASE] != 0.0 {
            return Err(MissionViolation::BaseWeight(self.info[BASE]));
        }
        for (vertex, &value) in self.transmit.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(MissionViolation::TransmissionRange { vertex, value });
            }
        }
        for &(i, j, value) in &self.edges {
            if !(0.0..=1.0).contains(&value) {
                return Err(MissionViolation::CrossingRange { i, j, value });
            }
        }
        for (vertex, &value) in self.info.iter().enumerate() {
            if value < 0.0 {
                return Err(MissionViolation::NegativeWeight { vertex, value });
            }
        }
        if !self.is_connected() {
            return Err(MissionViolation::Disconnected);
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![BASE];
        seen[BASE] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Crossing probability of `{i, j}`, or 0 when there is no such edge.
    #[inline]
    pub fn crossing(&self, i: usize, j: usize) -> f64 {
        self.crossing[i * self.n + j]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.crossing(i, j) > 0.0
    }

    #[inline]
    pub fn transmit(&self, i: usize) -> f64 {
        self.transmit[i]
    }

    #[inline]
    pub fn info(&self, i: usize) -> f64 {
        self.info[i]
    }

    pub fn transmit_probs(&self) -> &[f64] {
        &self.transmit
    }

    pub fn weights(&self) -> &[f64] {
        &self.info
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Undirected edges `(i, j, q)` with `i < j`.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn total_info(&self) -> f64 {
        self.info.iter().sum()
    }
}
