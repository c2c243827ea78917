//! The partially observed overlay and its probing state machine.
//!
//! An [`ExplorationState`] tracks, for one run, which nodes of the hidden
//! graph have been seen so far, which edges are visible, and the full probe
//! history. Nodes move through a monotone lattice
//! `Unobserved -> Observed -> Probed`, never backwards. Observed-but-unprobed
//! nodes form the candidate set a policy chooses from.
//!
//! Probing a candidate reveals every ground-truth edge incident to it and the
//! identity of all its neighbors; an edge between two merely observed nodes
//! stays invisible until one of its endpoints is probed. The probe reward is
//! the number of nodes that were unobserved before the probe.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::graph::{GroundTruthGraph, NodeId};

/// Visibility status of a node, as seen by the crawler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum NodeStatus {
    /// Existence unknown to the crawler.
    Unobserved,
    /// Known to exist, not yet probed; a probing candidate.
    Observed,
    /// Probed; its full neighborhood is visible.
    Probed,
}

/// One training datum of the bandit: what was probed, what it looked like at
/// probe time, and what it paid.
#[derive(Debug, Clone)]
pub struct ProbeRecord {
    pub node: NodeId,
    /// Feature vector of `node` as computed just before the probe. Historical
    /// records are not refreshed when the observed graph changes.
    pub features: FeatureVector,
    /// Number of previously unobserved nodes revealed by the probe.
    pub reward: u32,
    /// 1-based probe index.
    pub step: u32,
}

/// Outcome of a single probe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeResult {
    pub reward: u32,
    /// Nodes revealed by this probe, ascending.
    pub newly_observed: Vec<NodeId>,
}

/// Partially observed network plus probe history for one run.
#[derive(Debug, Clone)]
pub struct ExplorationState {
    status: Vec<NodeStatus>,
    observed_adj: Vec<Vec<NodeId>>,
    observed_edges: HashSet<(NodeId, NodeId)>,
    candidates: BTreeSet<NodeId>,
    observed_count: usize,
    step: u32,
    history: Vec<ProbeRecord>,
}

impl ExplorationState {
    /// Empty overlay over a graph of `node_count` nodes: everything unobserved.
    pub fn new(node_count: usize) -> Self {
        Self {
            status: vec![NodeStatus::Unobserved; node_count],
            observed_adj: vec![Vec::new(); node_count],
            observed_edges: HashSet::new(),
            candidates: BTreeSet::new(),
            observed_count: 0,
            step: 0,
            history: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.status.len()
    }

    pub fn status(&self, node: NodeId) -> NodeStatus {
        self.status[node as usize]
    }

    /// Number of nodes with status `Observed` or `Probed`, i.e. |V'|.
    pub fn observed_node_count(&self) -> usize {
        self.observed_count
    }

    pub fn observed_edge_count(&self) -> usize {
        self.observed_edges.len()
    }

    pub fn has_observed_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.observed_edges.contains(&ordered(u, v))
    }

    /// Observed edges as `(u, v)` pairs with `u < v`, in arbitrary order.
    pub fn observed_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.observed_edges.iter().copied()
    }

    /// Neighbors of `node` in the observed graph, in discovery order.
    pub fn observed_neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.observed_adj[node as usize]
    }

    /// Degree of `node` in the observed graph.
    ///
    /// Errors with `NodeNotObserved` if the node is still unobserved.
    pub fn observed_degree(&self, node: NodeId) -> Result<usize> {
        if node as usize >= self.status.len() {
            return Err(Error::NodeOutOfRange(node, self.status.len()));
        }
        if self.status[node as usize] == NodeStatus::Unobserved {
            return Err(Error::NodeNotObserved(node));
        }
        Ok(self.observed_adj[node as usize].len())
    }

    /// Candidate nodes (observed, not probed), ascending.
    pub fn candidates(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.candidates.iter().copied()
    }

    pub fn candidate_count(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_candidate(&self, node: NodeId) -> bool {
        self.candidates.contains(&node)
    }

    /// Number of probes executed so far (the time index t).
    pub fn step(&self) -> u32 {
        self.step
    }

    pub fn history(&self) -> &[ProbeRecord] {
        &self.history
    }

    /// Marks a node observed. Used by samplers and snapshot loading; probing
    /// reveals nodes through [`probe`](Self::probe) instead.
    ///
    /// No-op if the node is already observed or probed.
    pub fn observe_node(&mut self, node: NodeId) -> Result<()> {
        if node as usize >= self.status.len() {
            return Err(Error::NodeOutOfRange(node, self.status.len()));
        }
        if self.status[node as usize] == NodeStatus::Unobserved {
            self.status[node as usize] = NodeStatus::Observed;
            self.candidates.insert(node);
            self.observed_count += 1;
        }
        Ok(())
    }

    /// Records an observed edge between two already-observed nodes. Used by
    /// samplers and snapshot loading; the caller is responsible for only
    /// passing edges that exist in the ground truth.
    pub fn observe_edge(&mut self, u: NodeId, v: NodeId) -> Result<()> {
        if u as usize >= self.status.len() {
            return Err(Error::NodeOutOfRange(u, self.status.len()));
        }
        if v as usize >= self.status.len() {
            return Err(Error::NodeOutOfRange(v, self.status.len()));
        }
        if self.status[u as usize] == NodeStatus::Unobserved {
            return Err(Error::NodeNotObserved(u));
        }
        if self.status[v as usize] == NodeStatus::Unobserved {
            return Err(Error::NodeNotObserved(v));
        }
        if u != v && self.observed_edges.insert(ordered(u, v)) {
            self.observed_adj[u as usize].push(v);
            self.observed_adj[v as usize].push(u);
        }
        Ok(())
    }

    /// Marks a node probed without revealing anything. Only snapshot loading
    /// uses this; a live run must go through [`probe`](Self::probe).
    pub(crate) fn force_probed(&mut self, node: NodeId) -> Result<()> {
        self.observe_node(node)?;
        self.status[node as usize] = NodeStatus::Probed;
        self.candidates.remove(&node);
        Ok(())
    }

    /// Probes a candidate node against the ground truth.
    ///
    /// Every ground-truth edge incident to `node` becomes observed, every
    /// previously unobserved neighbor becomes a candidate, and the reward is
    /// the count of those newly observed neighbors. The caller supplies the
    /// feature vector of `node` as of this moment; it is frozen into the
    /// appended [`ProbeRecord`].
    pub fn probe(
        &mut self,
        truth: &GroundTruthGraph,
        node: NodeId,
        features: FeatureVector,
    ) -> Result<ProbeResult> {
        if node as usize >= self.status.len() {
            return Err(Error::NodeOutOfRange(node, self.status.len()));
        }
        if self.status[node as usize] != NodeStatus::Observed {
            return Err(Error::ProbeNotCandidate(node, self.status[node as usize]));
        }

        let mut newly_observed = Vec::new();
        for &w in truth.neighbors(node) {
            if self.observed_edges.insert(ordered(node, w)) {
                self.observed_adj[node as usize].push(w);
                self.observed_adj[w as usize].push(node);
            }
            if self.status[w as usize] == NodeStatus::Unobserved {
                self.status[w as usize] = NodeStatus::Observed;
                self.candidates.insert(w);
                self.observed_count += 1;
                newly_observed.push(w);
            }
        }

        self.status[node as usize] = NodeStatus::Probed;
        self.candidates.remove(&node);
        self.step += 1;

        let reward = newly_observed.len() as u32;
        self.history.push(ProbeRecord {
            node,
            features,
            reward,
            step: self.step,
        });
        Ok(ProbeResult {
            reward,
            newly_observed,
        })
    }

    /// The candidate an omniscient oracle would probe now: the one with the
    /// most still-unobserved ground-truth neighbors. Ties break to the
    /// smallest node id. Does not mutate the state.
    pub fn oracle_best_reward(&self, truth: &GroundTruthGraph) -> Result<(NodeId, u32)> {
        let mut best: Option<(NodeId, u32)> = None;
        for &c in &self.candidates {
            let would_reveal = truth
                .neighbors(c)
                .iter()
                .filter(|&&w| self.status[w as usize] == NodeStatus::Unobserved)
                .count() as u32;
            match best {
                Some((_, r)) if would_reveal <= r => {}
                _ => best = Some((c, would_reveal)),
            }
        }
        best.ok_or(Error::NoCandidates)
    }

    /// Checks every state invariant against the ground truth. Snapshot
    /// loading and tests use this; a state produced by this crate's samplers
    /// and probes always passes.
    pub fn validate_against(&self, truth: &GroundTruthGraph) -> Result<()> {
        if self.status.len() != truth.node_count() {
            return Err(Error::InvalidParams(format!(
                "state has {} nodes, graph has {}",
                self.status.len(),
                truth.node_count()
            )));
        }
        for (i, &s) in self.status.iter().enumerate() {
            let id = i as NodeId;
            if (s == NodeStatus::Observed) != self.candidates.contains(&id) {
                return Err(Error::InvalidParams(format!(
                    "candidate set inconsistent at node {id}"
                )));
            }
        }
        for &(u, v) in &self.observed_edges {
            if !truth.has_edge(u, v) {
                return Err(Error::InvalidParams(format!(
                    "observed edge ({u}, {v}) is not in the ground truth"
                )));
            }
            if self.status[u as usize] == NodeStatus::Unobserved
                || self.status[v as usize] == NodeStatus::Unobserved
            {
                return Err(Error::InvalidParams(format!(
                    "observed edge ({u}, {v}) has an unobserved endpoint"
                )));
            }
        }
        for (i, &s) in self.status.iter().enumerate() {
            if s != NodeStatus::Probed {
                continue;
            }
            let u = i as NodeId;
            for &w in truth.neighbors(u) {
                if !self.has_observed_edge(u, w) {
                    return Err(Error::InvalidParams(format!(
                        "probed node {u} is missing incident edge ({u}, {w})"
                    )));
                }
                if self.status[w as usize] == NodeStatus::Unobserved {
                    return Err(Error::InvalidParams(format!(
                        "probed node {u} has unobserved neighbor {w}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn ordered(u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}
