//! Nonparametric reward model: distance-weighted k-nearest-neighbor
//! regression over the probe history, plus the matching uncertainty term.
//!
//! For a query vector x with neighbor set N_k(x) (the k stored points closest
//! in Euclidean distance, ties broken by insertion order):
//!
//! ```text
//! estimate(x)    = (1/k) * sum over N_k(x) of  y_j / max(D(x, x_j), epsilon)
//! uncertainty(x) = (1/k) * sum over N_k(x) of  D(x, x_j)
//! ```
//!
//! `k` is the neighbor count actually used, so queries against a history
//! shorter than the configured k degrade gracefully. The estimate is the
//! literal inverse-distance form, deliberately not a convex weighted mean; a
//! normalized variant is available behind [`KnnConfig::normalize`].
//!
//! Search is a linear scan: histories are bounded by the probing budget
//! (around 10^3 points), and a scan keeps tie semantics exact.

use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::state::ProbeRecord;

/// Append-only set of (feature vector, reward) training pairs.
#[derive(Debug, Clone, Default)]
pub struct LabeledPointSet {
    features: Vec<[f64; 4]>,
    rewards: Vec<f64>,
}

impl LabeledPointSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the point set from a probe history, in probe order.
    pub fn from_history(history: &[ProbeRecord]) -> Self {
        let mut set = Self::new();
        for record in history {
            set.push(record.features, f64::from(record.reward));
        }
        set
    }

    pub fn push(&mut self, features: FeatureVector, reward: f64) {
        self.features.push(features.as_array());
        self.rewards.push(reward);
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn features(&self, index: usize) -> FeatureVector {
        FeatureVector::from_array(self.features[index])
    }

    pub fn reward(&self, index: usize) -> f64 {
        self.rewards[index]
    }
}

/// Tuning knobs of the kNN reward model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnnConfig {
    /// Neighborhood size.
    pub k: usize,
    /// Distance floor used in the estimate denominator. Duplicate feature
    /// vectors are common early in a run, so zero distances must stay finite.
    pub epsilon: f64,
    /// Use the normalized weighted mean sum(y/D)/sum(1/D) instead of the
    /// plain (1/k)*sum(y/D) form. Off by default.
    pub normalize: bool,
}

impl KnnConfig {
    pub const DEFAULT_EPSILON: f64 = 1e-6;

    pub fn new(k: usize) -> Self {
        Self {
            k,
            epsilon: Self::DEFAULT_EPSILON,
            normalize: false,
        }
    }
}

/// One entry of a kNN set: index into the point set plus distance to the query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

/// The min(k, |points|) stored points closest to `x`, ascending by distance,
/// ties broken by insertion order.
pub fn knn_set(points: &LabeledPointSet, x: &FeatureVector, k: usize) -> Result<Vec<Neighbor>> {
    if points.is_empty() {
        return Err(Error::EmptyHistory);
    }
    let mut scratch = Vec::new();
    select_nearest(points, &x.as_array(), k, &mut scratch);
    Ok(scratch
        .iter()
        .map(|&(d2, index)| Neighbor {
            index,
            distance: d2.sqrt(),
        })
        .collect())
}

/// Distance-weighted kNN estimate of the reward at `x`.
pub fn estimate(points: &LabeledPointSet, x: &FeatureVector, cfg: &KnnConfig) -> Result<f64> {
    evaluate(points, x, cfg).map(|(f_hat, _)| f_hat)
}

/// Mean distance from `x` to its kNN set; the exploration term.
pub fn uncertainty(points: &LabeledPointSet, x: &FeatureVector, cfg: &KnnConfig) -> Result<f64> {
    evaluate(points, x, cfg).map(|(_, sigma)| sigma)
}

/// Estimate and uncertainty computed over one shared neighbor set.
pub fn evaluate(points: &LabeledPointSet, x: &FeatureVector, cfg: &KnnConfig) -> Result<(f64, f64)> {
    if points.is_empty() {
        return Err(Error::EmptyHistory);
    }
    let mut scratch = Vec::with_capacity(cfg.k.min(points.len()));
    Ok(evaluate_with_scratch(points, &x.as_array(), cfg, &mut scratch))
}

/// Allocation-free core of [`evaluate`], for callers scoring many candidates.
/// `points` must be nonempty.
pub(crate) fn evaluate_with_scratch(
    points: &LabeledPointSet,
    x: &[f64; 4],
    cfg: &KnnConfig,
    scratch: &mut Vec<(f64, usize)>,
) -> (f64, f64) {
    select_nearest(points, x, cfg.k, scratch);
    let used = scratch.len() as f64;

    let mut weighted = 0.0;
    let mut weight_total = 0.0;
    let mut distance_total = 0.0;
    for &(d2, index) in scratch.iter() {
        let distance = d2.sqrt();
        let floored = distance.max(cfg.epsilon);
        weighted += points.rewards[index] / floored;
        weight_total += 1.0 / floored;
        distance_total += distance;
    }

    let f_hat = if cfg.normalize {
        weighted / weight_total
    } else {
        weighted / used
    };
    (f_hat, distance_total / used)
}

/// Fills `scratch` with the min(k, |points|) nearest points as
/// `(squared distance, index)`, ascending, insertion order on ties.
fn select_nearest(
    points: &LabeledPointSet,
    x: &[f64; 4],
    k: usize,
    scratch: &mut Vec<(f64, usize)>,
) {
    scratch.clear();
    if k == 0 {
        return;
    }
    for (index, p) in points.features.iter().enumerate() {
        let mut d2 = 0.0;
        for i in 0..4 {
            let d = x[i] - p[i];
            d2 += d * d;
        }
        if scratch.len() == k {
            // A later point never displaces an equally distant earlier one.
            if d2 >= scratch[k - 1].0 {
                continue;
            }
            scratch.pop();
        }
        // Insert after all entries with distance <= d2 to keep insertion order.
        let pos = scratch.partition_point(|&(existing, _)| existing <= d2);
        scratch.insert(pos, (d2, index));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn point(a: f64, b: f64, c: f64, d: f64) -> FeatureVector {
        FeatureVector::from_array([a, b, c, d])
    }

    fn set_of(entries: &[([f64; 4], f64)]) -> LabeledPointSet {
        let mut set = LabeledPointSet::new();
        for &(x, y) in entries {
            set.push(FeatureVector::from_array(x), y);
        }
        set
    }

    /// Exhaustive-sort reference: the oracle the fast selection must match.
    fn brute_force_knn(points: &LabeledPointSet, x: &FeatureVector, k: usize) -> Vec<Neighbor> {
        let mut all: Vec<Neighbor> = (0..points.len())
            .map(|index| Neighbor {
                index,
                distance: x.distance(&points.features(index)),
            })
            .collect();
        all.sort_by(|a, b| a.distance.partial_cmp(&b.distance).unwrap());
        all.truncate(k.min(points.len()));
        all
    }

    #[test]
    fn single_point_is_its_own_neighborhood() {
        let set = set_of(&[([0.5, 0.5, 0.5, 0.5], 3.0)]);
        for k in [1, 2, 10] {
            let nbrs = knn_set(&set, &point(0.0, 0.0, 0.0, 0.0), k).unwrap();
            assert_eq!(nbrs.len(), 1);
            assert_eq!(nbrs[0].index, 0);
        }
    }

    #[test]
    fn k_saturates_at_point_count() {
        let set = set_of(&[
            ([0.0, 0.0, 0.0, 0.0], 1.0),
            ([1.0, 0.0, 0.0, 0.0], 2.0),
            ([0.0, 1.0, 0.0, 0.0], 3.0),
        ]);
        let nbrs = knn_set(&set, &point(0.0, 0.0, 0.0, 0.0), 99).unwrap();
        assert_eq!(nbrs.len(), 3);
    }

    #[test]
    fn empty_history_is_an_error() {
        let set = LabeledPointSet::new();
        let x = point(0.0, 0.0, 0.0, 0.0);
        assert!(matches!(knn_set(&set, &x, 3), Err(Error::EmptyHistory)));
        assert!(matches!(
            estimate(&set, &x, &KnnConfig::new(3)),
            Err(Error::EmptyHistory)
        ));
        assert!(matches!(
            uncertainty(&set, &x, &KnnConfig::new(3)),
            Err(Error::EmptyHistory)
        ));
    }

    #[test]
    fn matches_exhaustive_sort_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..200 {
            let n = rng.random_range(1..=60);
            let mut set = LabeledPointSet::new();
            for _ in 0..n {
                // Coarse grid so distance ties actually occur.
                let x = std::array::from_fn(|_| rng.random_range(0..4) as f64 / 4.0);
                set.push(FeatureVector::from_array(x), rng.random_range(0..20) as f64);
            }
            let q = point(
                rng.random_range(0..4) as f64 / 4.0,
                rng.random_range(0..4) as f64 / 4.0,
                rng.random_range(0..4) as f64 / 4.0,
                rng.random_range(0..4) as f64 / 4.0,
            );
            for k in [1, 3, 7] {
                let fast = knn_set(&set, &q, k).unwrap();
                let slow = brute_force_knn(&set, &q, k);
                assert_eq!(fast.len(), slow.len());
                for (f, s) in fast.iter().zip(&slow) {
                    assert_eq!(f.index, s.index);
                    assert_eq!(f.distance, s.distance);
                }
            }
        }
    }

    #[test]
    fn estimate_hand_values() {
        // One neighbor, y = 5 at distance 1.
        let set = set_of(&[([1.0, 0.0, 0.0, 0.0], 5.0)]);
        let cfg = KnnConfig::new(1);
        assert_eq!(estimate(&set, &point(0.0, 0.0, 0.0, 0.0), &cfg).unwrap(), 5.0);

        // Two neighbors, y = {4, 8} at distances {1, 2}: (1/2)(4/1 + 8/2) = 4.
        let set = set_of(&[([1.0, 0.0, 0.0, 0.0], 4.0), ([0.0, 2.0, 0.0, 0.0], 8.0)]);
        let cfg = KnnConfig::new(2);
        assert_eq!(estimate(&set, &point(0.0, 0.0, 0.0, 0.0), &cfg).unwrap(), 4.0);

        // Same pair under the normalized variant: (4/1 + 8/2) / (1/1 + 1/2).
        let cfg = KnnConfig {
            normalize: true,
            ..KnnConfig::new(2)
        };
        assert_eq!(
            estimate(&set, &point(0.0, 0.0, 0.0, 0.0), &cfg).unwrap(),
            16.0 / 3.0
        );
    }

    #[test]
    fn duplicate_query_hits_epsilon_floor_and_stays_finite() {
        let set = set_of(&[([0.25, 0.5, 0.75, 1.0], 5.0)]);
        let cfg = KnnConfig::new(1);
        let value = estimate(&set, &point(0.25, 0.5, 0.75, 1.0), &cfg).unwrap();
        assert!(value.is_finite());
        assert_eq!(value, 5.0 / KnnConfig::DEFAULT_EPSILON);
        // Sigma uses the true distance, so it is exactly zero here.
        assert_eq!(uncertainty(&set, &point(0.25, 0.5, 0.75, 1.0), &cfg).unwrap(), 0.0);
    }

    #[test]
    fn uncertainty_is_the_mean_neighbor_distance() {
        let set = set_of(&[
            ([1.0, 0.0, 0.0, 0.0], 0.0),
            ([0.0, 2.0, 0.0, 0.0], 0.0),
            ([0.0, 0.0, 3.0, 0.0], 0.0),
        ]);
        let cfg = KnnConfig::new(3);
        assert_eq!(uncertainty(&set, &point(0.0, 0.0, 0.0, 0.0), &cfg).unwrap(), 2.0);
    }

    #[test]
    fn estimate_and_uncertainty_share_one_neighbor_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut set = LabeledPointSet::new();
        for _ in 0..50 {
            let x = std::array::from_fn(|_| rng.random::<f64>());
            set.push(FeatureVector::from_array(x), rng.random_range(0..30) as f64);
        }
        let cfg = KnnConfig::new(5);
        for _ in 0..20 {
            let q = point(
                rng.random::<f64>(),
                rng.random::<f64>(),
                rng.random::<f64>(),
                rng.random::<f64>(),
            );
            let nbrs = knn_set(&set, &q, cfg.k).unwrap();
            let used = nbrs.len() as f64;
            let f_manual = nbrs
                .iter()
                .map(|n| set.reward(n.index) / n.distance.max(cfg.epsilon))
                .sum::<f64>()
                / used;
            let s_manual = nbrs.iter().map(|n| n.distance).sum::<f64>() / used;
            let (f_hat, sigma) = evaluate(&set, &q, &cfg).unwrap();
            assert_eq!(f_hat, f_manual);
            assert_eq!(sigma, s_manual);
        }
    }

    #[test]
    fn sigma_bounded_by_unit_cube_diameter() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut set = LabeledPointSet::new();
        for _ in 0..300 {
            let x = std::array::from_fn(|_| rng.random::<f64>());
            set.push(FeatureVector::from_array(x), 1.0);
        }
        let cfg = KnnConfig::new(10);
        for _ in 0..100 {
            let q = point(
                rng.random::<f64>(),
                rng.random::<f64>(),
                rng.random::<f64>(),
                rng.random::<f64>(),
            );
            let sigma = uncertainty(&set, &q, &cfg).unwrap();
            assert!(sigma <= 2.0, "sigma {sigma} exceeds the [0,1]^4 diameter");
        }
    }

    #[test]
    fn sigma_shrinks_as_history_densifies() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let grid: Vec<FeatureVector> = (0..16)
            .map(|i| {
                point(
                    (i % 4) as f64 / 3.0,
                    (i / 4) as f64 / 3.0,
                    0.5,
                    0.5,
                )
            })
            .collect();
        let cfg = KnnConfig::new(5);

        let mut set = LabeledPointSet::new();
        let mut mean_sigma_at = |set: &LabeledPointSet| {
            grid.iter()
                .map(|q| uncertainty(set, q, &cfg).unwrap())
                .sum::<f64>()
                / grid.len() as f64
        };

        for _ in 0..20 {
            let x = std::array::from_fn(|_| rng.random::<f64>());
            set.push(FeatureVector::from_array(x), 0.0);
        }
        let sparse = mean_sigma_at(&set);
        for _ in 0..400 {
            let x = std::array::from_fn(|_| rng.random::<f64>());
            set.push(FeatureVector::from_array(x), 0.0);
        }
        let dense = mean_sigma_at(&set);
        assert!(
            dense < sparse,
            "mean sigma should drop as points accumulate ({dense} vs {sparse})"
        );
    }
}
