use petgraph::algo::bellman_ford;
use petgraph::graph::{NodeIndex, UnGraph};

use crate::mission::Mission;

/// Metric used when a walk has to be completed to a target vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReturnMetric {
    /// Most survivable path: edge weight `-ln q`.
    #[default]
    Survival,
    /// Fewest crossings.
    Hops,
}

/// All-pairs shortest paths stored as next hops.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    /// `next[target][u]`: the vertex after `u` on the path from `u` to `target`.
    next: Vec<Vec<Option<usize>>>,
}

impl ShortestPaths {
    pub fn new(m: &Mission, metric: ReturnMetric) -> Self {
        let mut g = UnGraph::<(), f64>::with_capacity(m.n(), m.edges().len());
        for _ in 0..m.n() {
            g.add_node(());
        }
        for &(i, j, q) in m.edges() {
            let w = match metric {
                ReturnMetric::Survival => (-q.ln()).max(0.0),
                ReturnMetric::Hops => 1.0,
            };
            g.add_edge(NodeIndex::new(i), NodeIndex::new(j), w);
        }
        let next = (0..m.n())
            .map(|target| {
                let paths = bellman_ford(&g, NodeIndex::new(target)).expect("weights are non-negative");
                paths.predecessors.iter().map(|p| p.map(|x| x.index())).collect()
            })
            .collect();
        Self { next }
    }

    /// Vertices from `from` to `to`, both included. Panics if `to` is
    /// unreachable.
    pub fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut path = vec![from];
        let mut at = from;
        while at != to {
            at = self.next[to][at].expect("target reachable");
            path.push(at);
        }
        path
    }
}
