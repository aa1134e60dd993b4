//! Weighted-graph representation and the function spaces living on it.
//!
//! A [`Graph`] is a finite undirected graph with strictly positive symmetric
//! edge weights `ω_ij`, no self-loops, no isolated nodes, together with the
//! two calculus parameters `q ∈ [1/2, 1]` and `r ∈ [0, 1]`. Adjacency is
//! stored as sorted neighbor lists (CSR); each undirected edge appears once
//! per endpoint. Powers `ω^q`, `ω^{1−q}`, `ω^{2q−1}` are precomputed per
//! directed entry; the convention `ω^0 = 0` for absent edges is automatic
//! because only stored edges are ever iterated.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Immutable weighted graph with calculus parameters `q` and `r`.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    q: f64,
    r: f64,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    weights: Vec<f64>,
    w_q: Vec<f64>,
    w_1q: Vec<f64>,
    w_2q1: Vec<f64>,
    degrees: Vec<f64>,
    deg_r: Vec<f64>,
}

/// Builds a validated graph from an undirected edge list.
///
/// Each undirected edge may be given once, in either orientation; giving both
/// orientations with the same weight is accepted. Exact duplicates and
/// conflicting weights are rejected.
pub fn build_graph(n: usize, edges: &[(usize, usize, f64)], q: f64, r: f64) -> Result<Graph> {
    Graph::new(n, edges, q, r)
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize, f64)], q: f64, r: f64) -> Result<Graph> {
        if !(0.5..=1.0).contains(&q) {
            return Err(Error::ParameterOutOfRange {
                name: "q",
                value: q,
                range: "[1/2, 1]",
            });
        }
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::ParameterOutOfRange {
                name: "r",
                value: r,
                range: "[0, 1]",
            });
        }

        // key (min, max) -> (weight, orientation bitmask)
        let mut map: BTreeMap<(usize, usize), (f64, u8)> = BTreeMap::new();
        for &(i, j, w) in edges {
            if i >= n {
                return Err(Error::NodeOutOfRange { idx: i, n });
            }
            if j >= n {
                return Err(Error::NodeOutOfRange { idx: j, n });
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::NegativeWeight(i, j, w));
            }
            let key = (i.min(j), i.max(j));
            let orient = if i < j { 1u8 } else { 2u8 };
            match map.get_mut(&key) {
                None => {
                    map.insert(key, (w, orient));
                }
                Some((w0, seen)) => {
                    if *seen & orient != 0 || *w0 != w {
                        return Err(Error::ConflictingDuplicate(i, j));
                    }
                    *seen |= orient;
                }
            }
        }

        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (&(i, j), &(w, _)) in &map {
            adj[i].push((j, w));
            adj[j].push((i, w));
        }

        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        let mut weights = Vec::new();
        let mut degrees = Vec::with_capacity(n);
        offsets.push(0);
        for (i, row) in adj.iter_mut().enumerate() {
            row.sort_unstable_by_key(|&(j, _)| j);
            let d: f64 = row.iter().map(|&(_, w)| w).sum();
            if d <= 0.0 {
                return Err(Error::IsolatedNode(i));
            }
            degrees.push(d);
            for &(j, w) in row.iter() {
                neighbors.push(j);
                weights.push(w);
            }
            offsets.push(neighbors.len());
        }

        let pow = |w: f64, p: f64| if p == 0.0 { 1.0 } else { w.powf(p) };
        let w_q: Vec<f64> = weights.iter().map(|&w| pow(w, q)).collect();
        let w_1q: Vec<f64> = weights.iter().map(|&w| pow(w, 1.0 - q)).collect();
        let w_2q1: Vec<f64> = weights.iter().map(|&w| pow(w, 2.0 * q - 1.0)).collect();
        let deg_r: Vec<f64> = degrees.iter().map(|&d| pow(d, r)).collect();

        Ok(Graph {
            n,
            q,
            r,
            offsets,
            neighbors,
            weights,
            w_q,
            w_1q,
            w_2q1,
            degrees,
            deg_r,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// Degree `d_i = Σ_j ω_ij`.
    pub fn degree(&self, i: usize) -> f64 {
        self.degrees[i]
    }

    /// `d_i^r`, the node measure entering the `𝒱` inner product.
    pub fn deg_r(&self, i: usize) -> f64 {
        self.deg_r[i]
    }

    pub fn d_plus(&self) -> f64 {
        self.degrees.iter().cloned().fold(f64::MIN, f64::max)
    }

    pub fn d_minus(&self) -> f64 {
        self.degrees.iter().cloned().fold(f64::MAX, f64::min)
    }

    /// `vol V = Σ_i d_i^r`.
    pub fn vol_total(&self) -> f64 {
        self.deg_r.iter().sum()
    }

    /// Directed adjacency entries of node `i` as `(edge index, neighbor, ω)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let lo = self.offsets[i];
        let hi = self.offsets[i + 1];
        (lo..hi).map(move |e| (e, self.neighbors[e], self.weights[e]))
    }

    /// Neighbors of `i` with weights.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.row(i).map(|(_, j, w)| (j, w))
    }

    pub fn num_directed_entries(&self) -> usize {
        self.neighbors.len()
    }

    /// `ω_ij^q` for directed entry `e`.
    pub fn w_q(&self, e: usize) -> f64 {
        self.w_q[e]
    }

    /// `ω_ij^{1−q}` for directed entry `e`.
    pub fn w_1q(&self, e: usize) -> f64 {
        self.w_1q[e]
    }

    /// `ω_ij^{2q−1}` for directed entry `e`.
    pub fn w_2q1(&self, e: usize) -> f64 {
        self.w_2q1[e]
    }

    /// Directed entry index of `(i, j)`, if the edge exists.
    pub fn entry(&self, i: usize, j: usize) -> Option<usize> {
        let lo = self.offsets[i];
        let hi = self.offsets[i + 1];
        self.neighbors[lo..hi]
            .binary_search(&j)
            .ok()
            .map(|k| lo + k)
    }

    /// `ω_ij`, zero when `(i, j)` is not an edge.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.entry(i, j).map_or(0.0, |e| self.weights[e])
    }

    pub fn is_unweighted(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    /// Edge list with every undirected edge listed once, `i < j`.
    pub fn undirected_edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for (j, w) in self.neighbors(i) {
                if i < j {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    /// Rebuilds the same topology with different calculus parameters.
    pub fn with_params(&self, q: f64, r: f64) -> Result<Graph> {
        Graph::new(self.n, &self.undirected_edges(), q, r)
    }

    /// Connected component label per node, labels are 0-based in discovery order.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            stack.push(s);
            while let Some(i) = stack.pop() {
                for (j, _) in self.neighbors(i) {
                    if label[j] == usize::MAX {
                        label[j] = next;
                        stack.push(j);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn num_components(&self) -> usize {
        self.component_labels().iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() == 1
    }
}

/// Real-valued function on the nodes, `u : V → ℝ`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeFunction(pub Vec<f64>);

impl NodeFunction {
    pub fn zeros(n: usize) -> Self {
        NodeFunction(vec![0.0; n])
    }

    pub fn constant(n: usize, c: f64) -> Self {
        NodeFunction(vec![c; n])
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> f64) -> Self {
        NodeFunction((0..n).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    /// Max norm `‖u‖_{𝒱,∞} = max_i |u_i|`.
    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
    }
}

impl std::ops::Index<usize> for NodeFunction {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl std::ops::IndexMut<usize> for NodeFunction {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl From<Vec<f64>> for NodeFunction {
    fn from(v: Vec<f64>) -> Self {
        NodeFunction(v)
    }
}

/// Skew-symmetric function on the directed edges, `φ_ij = −φ_ji`, zero off
/// the edge set. Values are stored parallel to the graph's directed entries.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFunction {
    values: Vec<f64>,
}

impl EdgeFunction {
    pub fn zeros(g: &Graph) -> Self {
        EdgeFunction {
            values: vec![0.0; g.num_directed_entries()],
        }
    }

    /// Builds `φ_ij = f(i, j)` over directed entries; the caller must supply
    /// a skew-symmetric `f` (checked in debug builds).
    pub fn from_fn(g: &Graph, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut values = vec![0.0; g.num_directed_entries()];
        for i in 0..g.n() {
            for (e, j, _) in g.row(i) {
                values[e] = f(i, j);
            }
        }
        let out = EdgeFunction { values };
        debug_assert!(out.is_skew(g, 1e-12));
        out
    }

    pub fn value(&self, e: usize) -> f64 {
        self.values[e]
    }

    pub fn set(&mut self, e: usize, v: f64) {
        self.values[e] = v;
    }

    /// `φ_ij`, zero when `(i, j)` is not an edge.
    pub fn get(&self, g: &Graph, i: usize, j: usize) -> f64 {
        g.entry(i, j).map_or(0.0, |e| self.values[e])
    }

    pub fn norm_inf(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
    }

    pub fn is_skew(&self, g: &Graph, tol: f64) -> bool {
        for i in 0..g.n() {
            for (e, j, _) in g.row(i) {
                if j > i {
                    continue;
                }
                let back = g.entry(j, i).expect("symmetric adjacency");
                if (self.values[e] + self.values[back]).abs() > tol {
                    return false;
                }
            }
        }
        true
    }
}

/// Subset of nodes, stored as sorted distinct indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    members: Vec<usize>,
}

impl NodeSet {
    pub fn new(mut members: Vec<usize>, n: usize) -> Result<Self> {
        members.sort_unstable();
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidInput(format!("duplicate node {}", w[0])));
            }
        }
        if let Some(&last) = members.last() {
            if last >= n {
                return Err(Error::NodeOutOfRange { idx: last, n });
            }
        }
        Ok(NodeSet { members })
    }

    /// Builds from indices known to be valid; sorts and deduplicates.
    pub fn from_indices(members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        NodeSet { members }
    }

    pub fn empty() -> Self {
        NodeSet {
            members: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        NodeSet {
            members: (0..n).collect(),
        }
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        NodeSet {
            members: mask
                .iter()
                .enumerate()
                .filter_map(|(i, &b)| b.then_some(i))
                .collect(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &i in &self.members {
            m[i] = true;
        }
        m
    }

    pub fn complement(&self, n: usize) -> NodeSet {
        let mask = self.mask(n);
        NodeSet {
            members: (0..n).filter(|&i| !mask[i]).collect(),
        }
    }

    /// Indicator `χ_S` as a node function.
    pub fn indicator(&self, n: usize) -> NodeFunction {
        let mut u = NodeFunction::zeros(n);
        for &i in &self.members {
            u[i] = 1.0;
        }
        u
    }

    /// `±1`-valued phase function `χ_S − χ_{S^c}`.
    pub fn phase(&self, n: usize) -> NodeFunction {
        let mut u = NodeFunction::constant(n, -1.0);
        for &i in &self.members {
            u[i] = 1.0;
        }
        u
    }

    /// `vol S = Σ_{i∈S} d_i^r`.
    pub fn vol(&self, g: &Graph) -> f64 {
        self.members.iter().map(|&i| g.deg_r(i)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_complete_graph() {
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                edges.push((i, j, 1.0));
            }
        }
        let g = Graph::new(4, &edges, 1.0, 0.0).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 6);
        for i in 0..4 {
            assert_eq!(g.degree(i), 3.0);
        }
    }

    #[test]
    fn smallest_valid_graph() {
        let g = Graph::new(2, &[(0, 1, 1.0)], 1.0, 0.0).unwrap();
        assert_eq!(g.degree(0), 1.0);
        assert_eq!(g.degree(1), 1.0);
    }

    #[test]
    fn rejects_isolated_node() {
        let err = Graph::new(3, &[(0, 1, 1.0)], 1.0, 0.0).unwrap_err();
        assert!(matches!(err, Error::IsolatedNode(2)));
    }

    #[test]
    fn rejects_self_loop_and_bad_weight() {
        assert!(matches!(
            Graph::new(2, &[(0, 0, 1.0), (0, 1, 1.0)], 1.0, 0.0),
            Err(Error::SelfLoop(0))
        ));
        assert!(matches!(
            Graph::new(2, &[(0, 1, -2.0)], 1.0, 0.0),
            Err(Error::NegativeWeight(0, 1, _))
        ));
        assert!(matches!(
            Graph::new(2, &[(0, 1, 0.0)], 1.0, 0.0),
            Err(Error::NegativeWeight(0, 1, _))
        ));
    }

    #[test]
    fn duplicate_handling() {
        // same weight via opposite orientation unifies
        let g = Graph::new(2, &[(0, 1, 2.0), (1, 0, 2.0)], 1.0, 0.0).unwrap();
        assert_eq!(g.edge_count(), 1);
        // conflicting weight is rejected
        assert!(matches!(
            Graph::new(2, &[(0, 1, 2.0), (1, 0, 3.0)], 1.0, 0.0),
            Err(Error::ConflictingDuplicate(_, _))
        ));
        // literal duplicate entry is rejected
        assert!(matches!(
            Graph::new(2, &[(0, 1, 2.0), (0, 1, 2.0)], 1.0, 0.0),
            Err(Error::ConflictingDuplicate(_, _))
        ));
    }

    #[test]
    fn rejects_bad_params() {
        assert!(Graph::new(2, &[(0, 1, 1.0)], 0.3, 0.0).is_err());
        assert!(Graph::new(2, &[(0, 1, 1.0)], 1.0, 1.5).is_err());
    }

    #[test]
    fn components() {
        let g = Graph::new(4, &[(0, 1, 1.0), (2, 3, 1.0)], 1.0, 0.0).unwrap();
        assert_eq!(g.num_components(), 2);
        assert!(!g.is_connected());
    }

    #[test]
    fn node_set_ops() {
        let s = NodeSet::new(vec![3, 1], 5).unwrap();
        assert_eq!(s.members(), &[1, 3]);
        assert!(s.contains(3));
        assert_eq!(s.complement(5).members(), &[0, 2, 4]);
        assert!(NodeSet::new(vec![1, 1], 5).is_err());
        assert!(NodeSet::new(vec![5], 5).is_err());
    }
}
