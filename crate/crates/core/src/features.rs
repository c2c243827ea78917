//! Structural features of candidate nodes.
//!
//! Each candidate is described by four numbers computed from the observed
//! graph alone — the ground truth is never consulted:
//!
//! 1. degree centrality,
//! 2. mean degree centrality of its observed neighbors,
//! 3. median degree centrality of its observed neighbors,
//! 4. fraction of its observed neighbors that have been probed.
//!
//! With the default [`DegreeScaling::Normalized`] every component lies in
//! [0, 1], so Euclidean distances between feature vectors are bounded by 2.

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::state::{ExplorationState, NodeStatus};

/// Four-dimensional structural descriptor of a candidate node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub degree_centrality: f64,
    pub neighbor_degree_mean: f64,
    pub neighbor_degree_median: f64,
    pub probed_neighbor_fraction: f64,
}

impl FeatureVector {
    pub const DIM: usize = 4;

    /// The all-zero vector, used for nodes with no observed neighbors.
    pub const ZERO: Self = Self {
        degree_centrality: 0.0,
        neighbor_degree_mean: 0.0,
        neighbor_degree_median: 0.0,
        probed_neighbor_fraction: 0.0,
    };

    pub fn as_array(&self) -> [f64; 4] {
        [
            self.degree_centrality,
            self.neighbor_degree_mean,
            self.neighbor_degree_median,
            self.probed_neighbor_fraction,
        ]
    }

    pub fn from_array(values: [f64; 4]) -> Self {
        Self {
            degree_centrality: values[0],
            neighbor_degree_mean: values[1],
            neighbor_degree_median: values[2],
            probed_neighbor_fraction: values[3],
        }
    }

    /// Euclidean distance to another feature vector.
    pub fn distance(&self, other: &Self) -> f64 {
        self.distance_squared(other).sqrt()
    }

    pub fn distance_squared(&self, other: &Self) -> f64 {
        let a = self.as_array();
        let b = other.as_array();
        let mut sum = 0.0;
        for i in 0..4 {
            let d = a[i] - b[i];
            sum += d * d;
        }
        sum
    }
}

/// How degrees enter the feature vector.
///
/// `Normalized` divides by |V'|-1 (standard degree centrality) and keeps all
/// features in [0, 1]. `Raw` uses plain observed degrees; it changes the kNN
/// geometry and is exposed for experimentation only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DegreeScaling {
    #[default]
    Normalized,
    Raw,
}

/// Features of one candidate node, normalized scaling.
pub fn compute_features(state: &ExplorationState, node: NodeId) -> Result<FeatureVector> {
    compute_features_with(state, node, DegreeScaling::Normalized)
}

/// Features of one candidate node under an explicit degree scaling.
///
/// The node must currently be a candidate (observed, not probed). A node with
/// no observed neighbors gets the all-zero vector; that rule also guards the
/// |V'| = 1 case where the centrality denominator would vanish.
pub fn compute_features_with(
    state: &ExplorationState,
    node: NodeId,
    scaling: DegreeScaling,
) -> Result<FeatureVector> {
    if node as usize >= state.node_count() {
        return Err(Error::NodeOutOfRange(node, state.node_count()));
    }
    if state.status(node) != NodeStatus::Observed {
        return Err(Error::NodeNotCandidate(node));
    }

    let neighbors = state.observed_neighbors(node);
    if neighbors.is_empty() {
        return Ok(FeatureVector::ZERO);
    }

    let scale = match scaling {
        DegreeScaling::Normalized => 1.0 / (state.observed_node_count() - 1) as f64,
        DegreeScaling::Raw => 1.0,
    };

    let mut neighbor_degrees: Vec<f64> = neighbors
        .iter()
        .map(|&w| state.observed_neighbors(w).len() as f64 * scale)
        .collect();
    neighbor_degrees.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());

    let count = neighbor_degrees.len();
    let mean = neighbor_degrees.iter().sum::<f64>() / count as f64;
    let median = if count % 2 == 1 {
        neighbor_degrees[count / 2]
    } else {
        (neighbor_degrees[count / 2 - 1] + neighbor_degrees[count / 2]) / 2.0
    };
    let probed = neighbors
        .iter()
        .filter(|&&w| state.status(w) == NodeStatus::Probed)
        .count();

    Ok(FeatureVector {
        degree_centrality: count as f64 * scale,
        neighbor_degree_mean: mean,
        neighbor_degree_median: median,
        probed_neighbor_fraction: probed as f64 / count as f64,
    })
}

/// Features of every candidate, ascending by node id.
///
/// Recomputed from scratch: features are time-varying and must reflect the
/// observed graph exactly as it stands at this step.
pub fn features_of_candidates(state: &ExplorationState) -> Vec<(NodeId, FeatureVector)> {
    features_of_candidates_with(state, DegreeScaling::Normalized)
}

pub fn features_of_candidates_with(
    state: &ExplorationState,
    scaling: DegreeScaling,
) -> Vec<(NodeId, FeatureVector)> {
    state
        .candidates()
        .map(|c| {
            let fv = compute_features_with(state, c, scaling)
                .expect("candidates are observed by construction");
            (c, fv)
        })
        .collect()
}
