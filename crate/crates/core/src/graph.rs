//! The hidden ground-truth graph that a simulated crawler probes against.
//!
//! `GroundTruthGraph` is an immutable, undirected, simple graph with dense
//! node ids `0..node_count`. Policies never read it directly; they only see
//! the [`ExplorationState`](crate::state::ExplorationState) overlay. The
//! simulator itself consults it when a probe is executed.

use crate::error::{Error, Result};

/// Dense node identifier, `0..node_count`.
pub type NodeId = u32;

/// Immutable undirected simple graph.
///
/// Self-loops and duplicate edges are silently dropped at construction time,
/// so `adjacency` is always sorted, deduplicated, and symmetric.
#[derive(Debug, Clone)]
pub struct GroundTruthGraph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
    community_labels: Option<Vec<u32>>,
}

impl GroundTruthGraph {
    /// Builds a graph on `node_count` nodes from an edge iterator.
    ///
    /// Self-loops and repeated edges (in either orientation) are dropped.
    /// Fails with `NodeOutOfRange` if an endpoint id is `>= node_count`.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut adjacency = vec![Vec::new(); node_count];
        for (u, v) in edges {
            if u as usize >= node_count {
                return Err(Error::NodeOutOfRange(u, node_count));
            }
            if v as usize >= node_count {
                return Err(Error::NodeOutOfRange(v, node_count));
            }
            if u == v {
                continue;
            }
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        let mut edge_count = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Self {
            adjacency,
            edge_count: edge_count / 2,
            community_labels: None,
        })
    }

    /// Attaches per-node community labels (LFR graphs carry these).
    pub fn with_community_labels(mut self, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != self.node_count() {
            return Err(Error::InvalidParams(format!(
                "{} community labels for {} nodes",
                labels.len(),
                self.node_count()
            )));
        }
        self.community_labels = Some(labels);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Neighbors of `node`, sorted ascending.
    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node as usize]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node as usize].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency
            .get(u as usize)
            .is_some_and(|list| list.binary_search(&v).is_ok())
    }

    /// All edges as `(u, v)` pairs with `u < v`, ascending lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            let u = u as NodeId;
            list.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Community label per node, if the graph was generated with them.
    pub fn community_labels(&self) -> Option<&[u32]> {
        self.community_labels.as_deref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drops_self_loops_and_duplicates() {
        let g = GroundTruthGraph::from_edges(3, [(0, 1), (1, 0), (2, 2), (1, 2), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.degree(2), 1);
        assert!(!g.has_edge(2, 2));
    }

    #[test]
    fn adjacency_is_symmetric_and_sorted() {
        let g = GroundTruthGraph::from_edges(4, [(3, 1), (2, 0), (3, 0)]).unwrap();
        for u in 0..4u32 {
            for &v in g.neighbors(u) {
                assert!(g.has_edge(v, u));
            }
            let mut sorted = g.neighbors(u).to_vec();
            sorted.sort_unstable();
            assert_eq!(sorted, g.neighbors(u));
        }
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 2), (0, 3), (1, 3)]);
    }

    #[test]
    fn rejects_out_of_range_endpoint() {
        let err = GroundTruthGraph::from_edges(2, [(0, 5)]).unwrap_err();
        assert!(matches!(err, Error::NodeOutOfRange(5, 2)));
    }
}
