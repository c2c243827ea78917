//! Synthetic ground-truth graph generators.
//!
//! Two models cover the experimental range: preferential attachment for
//! heavy-tailed degree distributions without community structure, and a
//! configuration-model community benchmark with a tunable mixing parameter
//! for graphs where community structure matters. Both are deterministic
//! functions of their parameter struct, seed included.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{GroundTruthGraph, NodeId};

/// Parameters of the preferential-attachment (Barabási–Albert) model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaParams {
    pub n: usize,
    /// Edges attached by each incoming node.
    pub m: usize,
    /// Size of the seed clique. The model itself does not pin the seed
    /// component down; a complete graph on `m0` nodes is this crate's choice.
    pub m0: usize,
    pub seed: u64,
}

impl BaParams {
    /// Standard parameterization with `m0 = m`.
    pub fn new(n: usize, m: usize, seed: u64) -> Self {
        Self { n, m, m0: m, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.m < 1 || self.m > self.m0 || self.m0 >= self.n {
            return Err(Error::InvalidParams(format!(
                "preferential attachment requires 1 <= m <= m0 < n (m={}, m0={}, n={})",
                self.m, self.m0, self.n
            )));
        }
        Ok(())
    }

    /// Exact edge count of the generated graph:
    /// `m0*(m0-1)/2` seed edges plus `m` per subsequent node.
    pub fn expected_edges(&self) -> usize {
        self.m0 * (self.m0 - 1) / 2 + self.m * (self.n - self.m0)
    }
}

/// Parameters of the community benchmark generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LfrParams {
    pub n: usize,
    pub avg_degree: f64,
    pub max_degree: usize,
    /// Degree power-law exponent.
    pub gamma: f64,
    /// Community-size power-law exponent.
    pub beta: f64,
    /// Expected fraction of a node's edges that leave its community.
    pub mu: f64,
    pub seed: u64,
}

impl LfrParams {
    /// Defaults: `gamma = 3`, `beta = 1.3`, `max_degree = n/10`.
    pub fn new(n: usize, avg_degree: f64, mu: f64, seed: u64) -> Self {
        Self {
            n,
            avg_degree,
            max_degree: n / 10,
            gamma: 3.0,
            beta: 1.3,
            mu,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu < 1.0) {
            return Err(Error::InvalidParams(format!("mu={} not in (0, 1)", self.mu)));
        }
        if self.gamma <= 1.0 || self.beta <= 1.0 {
            return Err(Error::InvalidParams(format!(
                "power-law exponents must exceed 1 (gamma={}, beta={})",
                self.gamma, self.beta
            )));
        }
        if !(self.avg_degree >= 1.0 && self.avg_degree <= self.max_degree as f64) {
            return Err(Error::InvalidParams(format!(
                "need 1 <= avg_degree <= max_degree (avg_degree={}, max_degree={})",
                self.avg_degree, self.max_degree
            )));
        }
        if self.max_degree >= self.n {
            return Err(Error::InvalidParams(format!(
                "max_degree {} must be below n {}",
                self.max_degree, self.n
            )));
        }
        Ok(())
    }
}

/// Generates a preferential-attachment graph: a complete seed graph on `m0`
/// nodes, then each new node attaches to `m` distinct existing nodes chosen
/// proportionally to current degree.
pub fn generate_ba(params: &BaParams) -> Result<GroundTruthGraph> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(params.expected_edges());
    // Uniform draws from this list are degree-proportional draws over nodes.
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(params.expected_edges() * 2);

    for i in 0..params.m0 {
        for j in (i + 1)..params.m0 {
            edges.push((i as NodeId, j as NodeId));
            endpoints.push(i as NodeId);
            endpoints.push(j as NodeId);
        }
    }

    let mut targets: Vec<NodeId> = Vec::with_capacity(params.m);
    for new_node in params.m0..params.n {
        targets.clear();
        let mut rejects = 0usize;
        while targets.len() < params.m {
            let pick = if endpoints.is_empty() {
                // Degenerate start (m0 = 1): no degree mass yet.
                rng.random_range(0..new_node) as NodeId
            } else {
                endpoints[rng.random_range(0..endpoints.len())]
            };
            if targets.contains(&pick) {
                rejects += 1;
                if rejects > 50 * params.m {
                    // Degree mass is concentrated on already-chosen nodes;
                    // finish uniformly over the remaining ones.
                    let mut rest: Vec<NodeId> = (0..new_node as NodeId)
                        .filter(|t| !targets.contains(t))
                        .collect();
                    while targets.len() < params.m {
                        let idx = rng.random_range(0..rest.len());
                        targets.push(rest.swap_remove(idx));
                    }
                    break;
                }
            } else {
                targets.push(pick);
            }
        }
        let new_id = new_node as NodeId;
        for &t in &targets {
            edges.push((new_id, t));
            endpoints.push(new_id);
            endpoints.push(t);
        }
    }

    let graph = GroundTruthGraph::from_edges(params.n, edges)?;
    debug_assert_eq!(graph.edge_count(), params.expected_edges());
    Ok(graph)
}

/// Generates a community benchmark graph.
///
/// Pipeline: (i) draw a power-law degree sequence rescaled to the requested
/// mean; (ii) draw power-law community sizes covering all nodes; (iii) assign
/// nodes to communities large enough for their internal degree; (iv) wire
/// intra- and inter-community half-edges by random matching, re-pairing
/// collisions for a bounded number of passes. Fails with `GenerationFailed`
/// if the realized mixing lands outside `mu ± 0.05`.
pub fn generate_lfr(params: &LfrParams) -> Result<GroundTruthGraph> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let degrees = sample_degree_sequence(params, &mut rng)?;
    let internal_target: Vec<usize> = degrees
        .iter()
        .map(|&d| ((1.0 - params.mu) * d as f64).round() as usize)
        .collect();

    let sizes = sample_community_sizes(params, &internal_target, &mut rng)?;
    let labels = assign_communities(&sizes, &internal_target, &mut rng)?;

    // Cap internal degree by community size; the remainder goes external.
    let mut internal: Vec<usize> = internal_target
        .iter()
        .zip(&labels)
        .map(|(&k, &c)| k.min(sizes[c as usize] - 1))
        .collect();

    let mut edges: HashSet<(NodeId, NodeId)> = HashSet::new();
    wire_intra_community(&sizes, &labels, &mut internal, &mut edges, &mut rng);
    let external: Vec<usize> = degrees
        .iter()
        .zip(&internal)
        .map(|(&d, &k)| d - k)
        .collect();
    wire_inter_community(&labels, &external, &mut edges, &mut rng);

    let inter = edges
        .iter()
        .filter(|&&(u, v)| labels[u as usize] != labels[v as usize])
        .count();
    let mixing = inter as f64 / edges.len() as f64;
    if (mixing - params.mu).abs() > 0.05 {
        return Err(Error::GenerationFailed(format!(
            "realized mixing {mixing:.4} is outside {} +/- 0.05",
            params.mu
        )));
    }

    GroundTruthGraph::from_edges(params.n, edges)?.with_community_labels(labels)
}

/// Inverse-CDF draw from a continuous power law with density ~ x^-exponent
/// on [xmin, xmax].
fn powerlaw_sample(rng: &mut ChaCha8Rng, exponent: f64, xmin: f64, xmax: f64) -> f64 {
    if (xmax - xmin).abs() < f64::EPSILON {
        return xmin;
    }
    let e = 1.0 - exponent;
    let u: f64 = rng.random();
    (xmin.powf(e) + u * (xmax.powf(e) - xmin.powf(e))).powf(1.0 / e)
}

/// Mean of the continuous truncated power law above.
fn powerlaw_mean(exponent: f64, xmin: f64, xmax: f64) -> f64 {
    if (xmax - xmin).abs() < f64::EPSILON {
        return xmin;
    }
    let e1 = 1.0 - exponent;
    if (exponent - 2.0).abs() < 1e-9 {
        return (xmax / xmin).ln() / (xmax.powf(e1) - xmin.powf(e1)) * e1;
    }
    let e2 = 2.0 - exponent;
    (e1 / e2) * (xmax.powf(e2) - xmin.powf(e2)) / (xmax.powf(e1) - xmin.powf(e1))
}

/// Smallest support point such that the truncated power law has the target
/// mean, found by bisection (the mean is monotone in xmin).
fn solve_xmin(exponent: f64, xmax: f64, target_mean: f64) -> Result<f64> {
    if powerlaw_mean(exponent, 1.0, xmax) > target_mean {
        return Err(Error::InvalidParams(format!(
            "avg_degree {target_mean} is unreachable: even xmin=1 gives a larger mean"
        )));
    }
    let (mut lo, mut hi) = (1.0, xmax);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if powerlaw_mean(exponent, mid, xmax) < target_mean {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn sample_degree_sequence(params: &LfrParams, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let xmax = params.max_degree as f64;
    let xmin = solve_xmin(params.gamma, xmax, params.avg_degree)?;
    let mut degrees: Vec<usize> = (0..params.n)
        .map(|_| {
            (powerlaw_sample(rng, params.gamma, xmin, xmax).round() as usize)
                .clamp(1, params.max_degree)
        })
        .collect();

    // Nudge single degrees until the sum hits the (even) target exactly,
    // which pins the mean well within the 2% rescaling tolerance.
    let mut target = (params.avg_degree * params.n as f64).round() as usize;
    if target % 2 == 1 {
        target += 1;
    }
    let mut sum: usize = degrees.iter().sum();
    let mut guard = 0usize;
    while sum != target {
        let i = rng.random_range(0..params.n);
        if sum < target && degrees[i] < params.max_degree {
            degrees[i] += 1;
            sum += 1;
        } else if sum > target && degrees[i] > 1 {
            degrees[i] -= 1;
            sum -= 1;
        }
        guard += 1;
        if guard > 200 * params.n + 200 * target {
            return Err(Error::GenerationFailed(
                "could not rescale degree sequence to the requested mean".into(),
            ));
        }
    }
    Ok(degrees)
}

fn sample_community_sizes(
    params: &LfrParams,
    internal_target: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<usize>> {
    // Every node must fit a community with more members than its internal
    // degree, so the size range is tied to the realized internal degrees.
    let smin = internal_target.iter().min().unwrap() + 1;
    let smin = smin.max(3).min(params.n);
    let smax = (internal_target.iter().max().unwrap() + 1).clamp(smin, params.n);

    let mut sizes: Vec<usize> = Vec::new();
    let mut total = 0usize;
    while total < params.n {
        let s = (powerlaw_sample(rng, params.beta, smin as f64, smax as f64).round() as usize)
            .clamp(smin, smax);
        sizes.push(s);
        total += s;
    }
    // Shave the overshoot off the largest communities.
    let mut excess = total - params.n;
    while excess > 0 {
        let largest = (0..sizes.len())
            .filter(|&i| sizes[i] > smin)
            .max_by_key(|&i| sizes[i]);
        match largest {
            Some(i) => {
                let cut = excess.min(sizes[i] - smin);
                sizes[i] -= cut;
                excess -= cut;
            }
            None => {
                return Err(Error::GenerationFailed(
                    "community sizes cannot be shrunk to cover exactly n nodes".into(),
                ))
            }
        }
    }
    Ok(sizes)
}

fn assign_communities(
    sizes: &[usize],
    internal_target: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<u32>> {
    // Hardest nodes first: a node needs a community with size > internal degree.
    let mut order: Vec<usize> = (0..internal_target.len()).collect();
    order.sort_unstable_by_key(|&i| (std::cmp::Reverse(internal_target[i]), i));

    // Communities sorted by size descending, so the feasible set is a prefix.
    let mut by_size: Vec<usize> = (0..sizes.len()).collect();
    by_size.sort_unstable_by_key(|&c| std::cmp::Reverse(sizes[c]));

    let mut remaining: Vec<usize> = sizes.to_vec();
    let mut labels = vec![0u32; internal_target.len()];
    let mut feasible: Vec<usize> = Vec::new();
    for node in order {
        let need = internal_target[node] + 1;
        feasible.clear();
        for &c in &by_size {
            if sizes[c] < need {
                break;
            }
            if remaining[c] > 0 {
                feasible.push(c);
            }
        }
        let Some(&c) = feasible.get(rng.random_range(0..feasible.len().max(1))) else {
            return Err(Error::GenerationFailed(format!(
                "no community can host a node with internal degree {}",
                internal_target[node]
            )));
        };
        labels[node] = c as u32;
        remaining[c] -= 1;
    }
    Ok(labels)
}

/// Random matching of intra-community half-edges. Stubs that stay unmatched
/// after the bounded re-pairing passes are released to the external pool by
/// decrementing the node's internal degree.
fn wire_intra_community(
    sizes: &[usize],
    labels: &[u32],
    internal: &mut [usize],
    edges: &mut HashSet<(NodeId, NodeId)>,
    rng: &mut ChaCha8Rng,
) {
    let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); sizes.len()];
    for (node, &c) in labels.iter().enumerate() {
        members[c as usize].push(node as NodeId);
    }

    for community in &members {
        let mut stubs: Vec<NodeId> = Vec::new();
        for &node in community {
            stubs.extend(std::iter::repeat(node).take(internal[node as usize]));
        }
        if stubs.len() % 2 == 1 {
            let victim = stubs[rng.random_range(0..stubs.len())];
            internal[victim as usize] -= 1;
            let at = stubs.iter().position(|&s| s == victim).unwrap();
            stubs.swap_remove(at);
        }
        let leftover = match_stubs(&mut stubs, edges, rng, |_, _| true);
        for node in leftover {
            internal[node as usize] -= 1;
        }
    }
}

/// Random matching of the global external stub pool; pairs inside one
/// community are rejected. Unmatched leftovers are dropped.
fn wire_inter_community(
    labels: &[u32],
    external: &[usize],
    edges: &mut HashSet<(NodeId, NodeId)>,
    rng: &mut ChaCha8Rng,
) {
    let mut stubs: Vec<NodeId> = Vec::new();
    for (node, &k) in external.iter().enumerate() {
        stubs.extend(std::iter::repeat(node as NodeId).take(k));
    }
    if stubs.len() % 2 == 1 {
        let at = rng.random_range(0..stubs.len());
        stubs.swap_remove(at);
    }
    match_stubs(&mut stubs, edges, rng, |u, v| {
        labels[u as usize] != labels[v as usize]
    });
}

/// Pairs stubs by repeated shuffle-and-match until none are left or the pass
/// budget runs out; returns the unmatched remainder.
fn match_stubs(
    stubs: &mut Vec<NodeId>,
    edges: &mut HashSet<(NodeId, NodeId)>,
    rng: &mut ChaCha8Rng,
    accept: impl Fn(NodeId, NodeId) -> bool,
) -> Vec<NodeId> {
    let mut stalled = 0;
    for _ in 0..50 {
        if stubs.len() < 2 {
            break;
        }
        stubs.shuffle(rng);
        let mut leftover = Vec::new();
        if stubs.len() % 2 == 1 {
            leftover.push(stubs.pop().unwrap());
        }
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            let key = if u < v { (u, v) } else { (v, u) };
            if u != v && accept(u, v) && !edges.contains(&key) {
                edges.insert(key);
            } else {
                leftover.push(u);
                leftover.push(v);
            }
        }
        if leftover.len() == stubs.len() {
            stalled += 1;
            if stalled >= 3 {
                *stubs = leftover;
                break;
            }
        } else {
            stalled = 0;
        }
        *stubs = leftover;
    }
    std::mem::take(stubs)
}
