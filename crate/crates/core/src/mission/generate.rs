//! Special instances: the path graph on which optimal plans are long, and the
//! uniform instance a Hamiltonian path question reduces to.

use super::{Mission, MissionError, BASE};

/// Path `0 - 1 - ... - (n-1)` with crossing probability `1/sqrt(n)` on every
/// edge. Only the base can transmit and every other vertex holds one unit.
pub fn make_path_instance(n: usize) -> Result<Mission, MissionError> {
    if n < 2 {
        return Err(MissionError::TooSmall { min: 2, got: n });
    }
    let q = 1.0 / (n as f64).sqrt();
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, q)).collect();
    let transmit = (0..n).map(|i| if i == BASE { 1.0 } else { 0.0 }).collect();
    let info = (0..n).map(|i| if i == BASE { 0.0 } else { 1.0 }).collect();
    Mission::new(n, &edges, transmit, info)
}

/// A uniform instance together with its decision threshold.
#[derive(Debug, Clone)]
pub struct HardnessInstance {
    pub mission: Mission,
    /// Expected value reachable iff the graph has a Hamiltonian path from
    /// the base.
    pub threshold: f64,
}

/// Puts crossing probability `q` on every edge of the graph on `n` vertices,
/// makes every transmission safe and gives each non-base vertex one unit of
/// information. The threshold is `(q - q^n) / (1 - q)`, the value of walking a
/// Hamiltonian path and sending at every step.
pub fn make_hardness_instance(
    n: usize,
    edges: &[(usize, usize)],
    q: f64,
) -> Result<HardnessInstance, MissionError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(MissionError::OpenProbability(q));
    }
    if n == 0 {
        return Err(MissionError::Empty);
    }
    let weighted: Vec<_> = edges.iter().map(|&(i, j)| (i, j, q)).collect();
    let info = (0..n).map(|i| if i == BASE { 0.0 } else { 1.0 }).collect();
    let mission = Mission::new(n, &weighted, vec![1.0; n], info)?;
    let threshold = (q - q.powi(n as i32)) / (1.0 - q);
    Ok(HardnessInstance { mission, threshold })
}
