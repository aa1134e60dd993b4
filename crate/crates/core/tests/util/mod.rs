//! Shared helpers for the integration suites: seeded random instances and
//! the independent brute-force oracle for the flow step.

#![allow(dead_code)]

use gmcf_core::graph::{Graph, NodeFunction, NodeSet};
use gmcf_core::rng::Pcg32;

pub enum Weights {
    /// Integer weights in 1..=4 (rational capacities downstream).
    SmallInts,
    /// Uniform floats in [0.5, 2.5).
    Floats,
}

/// Random connected graph: a random spanning tree plus extra edges.
pub fn random_connected_graph(
    rng: &mut Pcg32,
    n_min: usize,
    n_max: usize,
    weights: Weights,
    q: f64,
    r: f64,
) -> Graph {
    let n = n_min + rng.below(n_max - n_min + 1);
    let mut edges = Vec::new();
    let weight = |rng: &mut Pcg32| match weights {
        Weights::SmallInts => (1 + rng.below(4)) as f64,
        Weights::Floats => rng.range(0.5, 2.5),
    };
    let mut seen = std::collections::HashSet::new();
    for i in 1..n {
        let j = rng.below(i);
        seen.insert((j, i));
        let w = weight(rng);
        edges.push((j, i, w));
    }
    let extra = rng.below(n + 1);
    for _ in 0..extra {
        let i = rng.below(n);
        let j = rng.below(n);
        let (a, b) = (i.min(j), i.max(j));
        if a == b || seen.contains(&(a, b)) {
            continue;
        }
        seen.insert((a, b));
        let w = weight(rng);
        edges.push((a, b, w));
    }
    Graph::new(n, &edges, q, r).expect("random graph is valid")
}

pub fn random_unweighted_connected(rng: &mut Pcg32, n_min: usize, n_max: usize, r: f64) -> Graph {
    let n = n_min + rng.below(n_max - n_min + 1);
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for i in 1..n {
        let j = rng.below(i);
        seen.insert((j, i));
        edges.push((j, i, 1.0));
    }
    for _ in 0..rng.below(2 * n + 1) {
        let i = rng.below(n);
        let j = rng.below(n);
        let (a, b) = (i.min(j), i.max(j));
        if a == b || seen.contains(&(a, b)) {
            continue;
        }
        seen.insert((a, b));
        edges.push((a, b, 1.0));
    }
    Graph::new(n, &edges, 1.0, r).expect("random graph is valid")
}

pub fn random_node_function(rng: &mut Pcg32, n: usize, lo: f64, hi: f64) -> NodeFunction {
    NodeFunction((0..n).map(|_| rng.range(lo, hi)).collect())
}

pub fn random_edge_function(rng: &mut Pcg32, g: &Graph) -> gmcf_core::graph::EdgeFunction {
    let mut phi = gmcf_core::graph::EdgeFunction::zeros(g);
    for i in 0..g.n() {
        for (e, j, _) in g.row(i) {
            if i < j {
                let v = rng.range(-1.0, 1.0);
                phi.set(e, v);
                let back = g.entry(j, i).unwrap();
                phi.set(back, -v);
            }
        }
    }
    phi
}

pub fn random_subset(rng: &mut Pcg32, n: usize) -> NodeSet {
    NodeSet::from_indices((0..n).filter(|_| rng.uniform() < 0.5))
}

/// Random subset that is neither empty nor all of `V`.
pub fn random_nontrivial_subset(rng: &mut Pcg32, n: usize) -> NodeSet {
    loop {
        let s = random_subset(rng, n);
        if !s.is_empty() && s.len() < n {
            return s;
        }
    }
}

/// Independent evaluation of the reduced step objective
/// `TV_a^q(χ_Ŝ) − TV_a^q(χ_S) + (1/∂t) Σ_{i∈Ŝ} sd_i d_i^r` by direct sums
/// over node pairs (no shared code with the min-cut path).
pub fn reduced_objective_direct(
    g: &Graph,
    mask_hat: &[bool],
    s: &NodeSet,
    sd: &[f64],
    dt: f64,
) -> f64 {
    let mask_s = s.mask(g.n());
    let mut cut_hat = 0.0;
    let mut cut_s = 0.0;
    for i in 0..g.n() {
        for (e, j, _) in g.row(i) {
            if i < j {
                if mask_hat[i] != mask_hat[j] {
                    cut_hat += g.w_q(e);
                }
                if mask_s[i] != mask_s[j] {
                    cut_s += g.w_q(e);
                }
            }
        }
    }
    let unary: f64 = (0..g.n())
        .filter(|&i| mask_hat[i])
        .map(|i| sd[i] * g.deg_r(i))
        .sum();
    cut_hat - cut_s + unary / dt
}

/// Exhaustive minimizer of the reduced objective over all `2^n` subsets.
/// Returns `(min value, minimizing mask)`; ties resolved toward the lowest
/// bit pattern for determinism.
pub fn brute_force_step(g: &Graph, s: &NodeSet, sd: &[f64], dt: f64) -> (f64, Vec<bool>) {
    let n = g.n();
    assert!(n <= 20, "exhaustive oracle is exponential");
    let mut best = f64::INFINITY;
    let mut best_mask = vec![false; n];
    for bits in 0u64..(1u64 << n) {
        let mask: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        let val = reduced_objective_direct(g, &mask, s, sd, dt);
        if val < best {
            best = val;
            best_mask = mask;
        }
    }
    (best, best_mask)
}
