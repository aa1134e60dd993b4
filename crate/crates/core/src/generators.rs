//! Deterministic constructors for the example graph families, their plot
//! layouts, and the canned initial sets used by the repro experiments.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};
use crate::rng::Pcg32;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Complete graph `K_n` with uniform weight `ω`.
pub fn complete(n: usize, omega: f64, q: f64, r: f64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidSize(format!(
            "complete graph needs n ≥ 2, got {n}"
        )));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i, j, omega));
        }
    }
    Graph::new(n, &edges, q, r)
}

/// Star graph `SG_n`: node 0 is the center, nodes `1..n` are leaves.
pub fn star(n: usize, omega: f64, q: f64, r: f64) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidSize(format!(
            "star graph needs n ≥ 3, got {n}"
        )));
    }
    let edges: Vec<_> = (1..n).map(|i| (0, i, omega)).collect();
    Graph::new(n, &edges, q, r)
}

/// Cycle graph `C_n`.
pub fn cycle(n: usize, omega: f64, q: f64, r: f64) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidSize(format!("cycle needs n ≥ 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, omega)).collect();
    Graph::new(n, &edges, q, r)
}

/// 2-torus graph `T²_{n1,n2}`, the Kronecker sum of two cycles. Node `(a, b)`
/// has index `a * n2 + b`.
pub fn torus(n1: usize, n2: usize, omega: f64, q: f64, r: f64) -> Result<Graph> {
    if n1 < 3 || n2 < 3 {
        return Err(Error::InvalidSize(format!(
            "torus needs n1, n2 ≥ 3, got {n1}×{n2}"
        )));
    }
    let idx = |a: usize, b: usize| a * n2 + b;
    let mut edges = Vec::with_capacity(2 * n1 * n2);
    for a in 0..n1 {
        for b in 0..n2 {
            edges.push((idx(a, b), idx((a + 1) % n1, b), omega));
            edges.push((idx(a, b), idx(a, (b + 1) % n2), omega));
        }
    }
    Graph::new(n1 * n2, &edges, q, r)
}

/// Non-periodic `rows × cols` grid, row-major node order.
pub fn grid(rows: usize, cols: usize, omega: f64, q: f64, r: f64) -> Result<Graph> {
    if rows * cols < 2 {
        return Err(Error::InvalidSize(format!(
            "grid needs at least 2 nodes, got {rows}×{cols}"
        )));
    }
    let idx = |row: usize, col: usize| row * cols + col;
    let mut edges = Vec::new();
    for row in 0..rows {
        for col in 0..cols {
            if col + 1 < cols {
                edges.push((idx(row, col), idx(row, col + 1), omega));
            }
            if row + 1 < rows {
                edges.push((idx(row, col), idx(row + 1, col), omega));
            }
        }
    }
    Graph::new(rows * cols, &edges, q, r)
}

/// Regular tree in which every internal node has `children` children and all
/// leaves sit at distance `depth` from the root. Nodes are numbered level by
/// level from the leaves up, left to right; the root is the last node.
pub fn regular_tree(depth: usize, children: usize, omega: f64, q: f64, r: f64) -> Result<Graph> {
    if depth < 1 || children < 2 {
        return Err(Error::InvalidSize(format!(
            "tree needs depth ≥ 1 and children ≥ 2, got depth {depth}, children {children}"
        )));
    }
    // level sizes from leaves (level 0) to root (level `depth`)
    let sizes: Vec<usize> = (0..=depth)
        .map(|l| children.pow((depth - l) as u32))
        .collect();
    let mut level_start = Vec::with_capacity(depth + 1);
    let mut acc = 0;
    for &s in &sizes {
        level_start.push(acc);
        acc += s;
    }
    let n = acc;
    let mut edges = Vec::with_capacity(n - 1);
    for l in 0..depth {
        for k in 0..sizes[l] {
            let child = level_start[l] + k;
            let parent = level_start[l + 1] + k / children;
            edges.push((child, parent, omega));
        }
    }
    Graph::new(n, &edges, q, r)
}

const PHI: f64 = 1.618033988749895;

fn buckyball_coords() -> Vec<[f64; 3]> {
    let bases: [[f64; 3]; 3] = [
        [0.0, 1.0, 3.0 * PHI],
        [1.0, 2.0 + PHI, 2.0 * PHI],
        [2.0, 1.0 + 2.0 * PHI, PHI],
    ];
    let mut pts = Vec::with_capacity(60);
    for base in bases {
        for sx in [1.0, -1.0] {
            for sy in [1.0, -1.0] {
                for sz in [1.0, -1.0] {
                    let p = [sx * base[0], sy * base[1], sz * base[2]];
                    if base[0] == 0.0 && sx < 0.0 {
                        continue; // sign on a zero coordinate duplicates
                    }
                    // the three cyclic rotations
                    pts.push([p[0], p[1], p[2]]);
                    pts.push([p[2], p[0], p[1]]);
                    pts.push([p[1], p[2], p[0]]);
                }
            }
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() < 1e-9));
    pts
}

/// Buckyball (truncated icosahedron) graph: 60 nodes, 90 edges, 3-regular.
/// Built from the canonical vertex coordinates, nodes sorted
/// lexicographically by coordinate; edges connect vertex pairs at the
/// minimal distance 2.
pub fn buckyball(omega: f64, q: f64, r: f64) -> Result<Graph> {
    let pts = buckyball_coords();
    debug_assert_eq!(pts.len(), 60);
    let mut edges = Vec::with_capacity(90);
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d2: f64 = (0..3).map(|k| (pts[i][k] - pts[j][k]).powi(2)).sum();
            if (d2 - 4.0).abs() < 1e-6 {
                edges.push((i, j, omega));
            }
        }
    }
    debug_assert_eq!(edges.len(), 90);
    Graph::new(60, &edges, q, r)
}

/// Configuration for [`adjoined_lattices`]: a square-lattice patch and a
/// triangular-lattice patch of equal height, glued along one shared column.
/// The default patch sizes are a drawing convention.
#[derive(Debug, Clone, Copy)]
pub struct AdjoinedLatticesConfig {
    pub rows: usize,
    pub square_cols: usize,
    pub tri_cols: usize,
}

impl Default for AdjoinedLatticesConfig {
    fn default() -> Self {
        AdjoinedLatticesConfig {
            rows: 12,
            square_cols: 10,
            tri_cols: 10,
        }
    }
}

/// Adjoined square and triangular lattices. Columns `0..square_cols` carry
/// only grid edges; cells to the right of the seam column additionally carry
/// one diagonal each, so interior nodes have degree 4 on the square side and
/// degree 6 on the triangular side. Borders are cut (not periodic), so
/// border nodes have smaller degree. Row-major node order.
pub fn adjoined_lattices(cfg: AdjoinedLatticesConfig, omega: f64, q: f64, r: f64) -> Result<Graph> {
    let (rows, sq, tri) = (cfg.rows, cfg.square_cols, cfg.tri_cols);
    if rows < 2 || sq < 2 || tri < 1 {
        return Err(Error::InvalidSize(format!(
            "adjoined lattices need rows ≥ 2, square_cols ≥ 2, tri_cols ≥ 1, got {rows}, {sq}, {tri}"
        )));
    }
    let cols = sq + tri;
    let idx = |row: usize, col: usize| row * cols + col;
    let mut edges = Vec::new();
    for row in 0..rows {
        for col in 0..cols {
            if col + 1 < cols {
                edges.push((idx(row, col), idx(row, col + 1), omega));
            }
            if row + 1 < rows {
                edges.push((idx(row, col), idx(row + 1, col), omega));
            }
            // triangular cells start at the seam column sq−1
            if col + 1 < cols && row + 1 < rows && col >= sq - 1 {
                edges.push((idx(row, col), idx(row + 1, col + 1), omega));
            }
        }
    }
    Graph::new(rows * cols, &edges, q, r)
}

/// Configuration for the two-moons sample.
#[derive(Debug, Clone, Copy)]
pub struct MoonsConfig {
    pub n_points: usize,
    pub ambient_dim: usize,
    pub noise_sigma: f64,
    pub k: usize,
    pub seed: u64,
}

impl Default for MoonsConfig {
    fn default() -> Self {
        MoonsConfig {
            n_points: 600,
            ambient_dim: 100,
            noise_sigma: 0.1,
            k: 10,
            seed: 1,
        }
    }
}

/// Two-moons similarity graph.
///
/// Planar sample (a drawing convention, fixed here for reproducibility):
/// moon 0 is the upper half circle `(cos θ, sin θ)`, moon 1 is
/// `(1 − cos θ, 1/2 − sin θ)`, with `θ` drawn uniformly from `[0, π)`.
/// Points are embedded in `ℝ^ambient_dim` (remaining coordinates zero) and
/// perturbed by i.i.d. Gaussian noise with standard deviation `noise_sigma`
/// in every ambient coordinate. Edge weights are
/// `w_ij = max{s_i(j), s_j(i)}` with `s_i(j) = exp(−4 ‖x_i − x_j‖² / d_i²)`,
/// `d_i` the Euclidean distance from `x_i` to its `k`-th nearest neighbor,
/// kept for symmetrized k-NN pairs (`j` among the `k` nearest of `i` or vice
/// versa). The draw order is: all moon-0 angles, all moon-1 angles, then
/// noise point-major / coordinate-minor, so a run is fully determined by
/// `seed`.
///
/// Returns the graph (built with `q = 1`, `r = 1`), the ground-truth set
/// (moon 0 = nodes `0..n/2`), and the clean planar coordinates for plotting.
pub fn two_moons(cfg: &MoonsConfig) -> Result<(Graph, NodeSet, Vec<(f64, f64)>)> {
    let n = cfg.n_points;
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidSize(format!(
            "two moons needs an even n_points ≥ 4, got {n}"
        )));
    }
    if cfg.k == 0 || cfg.k >= n {
        return Err(Error::InvalidSize(format!(
            "two moons needs 0 < k < n_points, got k = {}",
            cfg.k
        )));
    }
    if cfg.ambient_dim < 2 {
        return Err(Error::InvalidSize("ambient_dim must be ≥ 2".into()));
    }

    let mut rng = Pcg32::seeded(cfg.seed);
    let half = n / 2;
    let mut planar = Vec::with_capacity(n);
    for _ in 0..half {
        let theta = std::f64::consts::PI * rng.uniform();
        planar.push((theta.cos(), theta.sin()));
    }
    for _ in 0..half {
        let theta = std::f64::consts::PI * rng.uniform();
        planar.push((1.0 - theta.cos(), 0.5 - theta.sin()));
    }

    let dim = cfg.ambient_dim;
    let mut points = vec![0.0f64; n * dim];
    for (i, &(x, y)) in planar.iter().enumerate() {
        points[i * dim] = x;
        points[i * dim + 1] = y;
    }
    for v in points.iter_mut() {
        *v += cfg.noise_sigma * rng.normal();
    }

    let dist2_row = |i: usize| -> Vec<f64> {
        let xi = &points[i * dim..(i + 1) * dim];
        (0..n)
            .map(|j| {
                let xj = &points[j * dim..(j + 1) * dim];
                xi.iter().zip(xj).map(|(a, b)| (a - b) * (a - b)).sum()
            })
            .collect()
    };

    #[cfg(feature = "parallel")]
    let dist2: Vec<Vec<f64>> = (0..n).into_par_iter().map(dist2_row).collect();
    #[cfg(not(feature = "parallel"))]
    let dist2: Vec<Vec<f64>> = (0..n).map(dist2_row).collect();

    // k-th nearest neighbor distance and neighbor sets, ties by index
    let mut knn_sets: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut dk = Vec::with_capacity(n);
    for i in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        order.sort_by(|&a, &b| {
            dist2[i][a]
                .partial_cmp(&dist2[i][b])
                .unwrap()
                .then(a.cmp(&b))
        });
        let kth = order[cfg.k - 1];
        let d = dist2[i][kth].sqrt();
        if !(d > 0.0) {
            return Err(Error::DegenerateSample(format!(
                "node {i} has coincident k-th nearest neighbor"
            )));
        }
        dk.push(d);
        knn_sets.push(order[..cfg.k].to_vec());
    }

    let mut is_knn = vec![false; n * n];
    for (i, set) in knn_sets.iter().enumerate() {
        for &j in set {
            is_knn[i * n + j] = true;
        }
    }

    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if is_knn[i * n + j] || is_knn[j * n + i] {
                let s_ij = (-4.0 * dist2[i][j] / (dk[i] * dk[i])).exp();
                let s_ji = (-4.0 * dist2[i][j] / (dk[j] * dk[j])).exp();
                edges.push((i, j, s_ij.max(s_ji)));
            }
        }
    }

    let graph = Graph::new(n, &edges, 1.0, 1.0)?;
    let truth = NodeSet::from_indices(0..half);
    Ok((graph, truth, planar))
}

/// Canned initial set for the two-moons experiment: the half-plane
/// `y > 1/4` of the clean planar sample. Cuts both moons (keeps most of
/// moon 0, a sliver of moon 1), leaving the dynamics real work to do.
pub fn two_moons_initial(coords: &[(f64, f64)]) -> NodeSet {
    NodeSet::from_indices(
        coords
            .iter()
            .enumerate()
            .filter_map(|(i, &(_, y))| (y > 0.25).then_some(i)),
    )
}

/// Plot layout for a generated family, as `(x, y)` per node.
pub fn layout_cycle(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            (t.cos(), t.sin())
        })
        .collect()
}

pub fn layout_torus(n1: usize, n2: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n1 * n2);
    for a in 0..n1 {
        for b in 0..n2 {
            out.push((a as f64, b as f64));
        }
    }
    out
}

pub fn layout_grid(rows: usize, cols: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(rows * cols);
    for row in 0..rows {
        for col in 0..cols {
            out.push((col as f64, -(row as f64)));
        }
    }
    out
}

pub fn layout_star(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0)];
    out.extend((1..n).map(|i| {
        let t = 2.0 * std::f64::consts::PI * (i - 1) as f64 / (n - 1) as f64;
        (t.cos(), t.sin())
    }));
    out
}

pub fn layout_tree(depth: usize, children: usize) -> Vec<(f64, f64)> {
    let sizes: Vec<usize> = (0..=depth)
        .map(|l| children.pow((depth - l) as u32))
        .collect();
    let width = sizes[0] as f64;
    let mut out = Vec::new();
    for (l, &s) in sizes.iter().enumerate() {
        for k in 0..s {
            let x = (k as f64 + 0.5) * width / s as f64;
            out.push((x, l as f64));
        }
    }
    out
}

/// Planar projection of the buckyball construction coordinates.
pub fn layout_buckyball() -> Vec<(f64, f64)> {
    buckyball_coords().iter().map(|p| (p[0], p[1])).collect()
}

pub fn layout_adjoined(cfg: AdjoinedLatticesConfig) -> Vec<(f64, f64)> {
    layout_grid(cfg.rows, cfg.square_cols + cfg.tri_cols)
}

/// Whether a node set on the `n1 × n2` torus is a vertical strip: a
/// circularly contiguous, nonempty, proper range of full columns.
pub fn is_vertical_strip(n1: usize, n2: usize, s: &NodeSet) -> bool {
    if s.is_empty() || s.len() == n1 * n2 {
        return false;
    }
    let mask = s.mask(n1 * n2);
    let mut cols = vec![false; n1];
    for a in 0..n1 {
        let full = (0..n2).all(|b| mask[a * n2 + b]);
        let empty = (0..n2).all(|b| !mask[a * n2 + b]);
        if !full && !empty {
            return false;
        }
        cols[a] = full;
    }
    let occupied = cols.iter().filter(|&&c| c).count();
    if occupied == 0 || occupied == n1 {
        return false;
    }
    let transitions = (0..n1).filter(|&a| cols[a] != cols[(a + 1) % n1]).count();
    transitions == 2
}

/// Canned initial set for the 32×12 torus experiments: a 14×10 rectangle
/// with a 7×2 notch removed from its upper-right corner (at 32×12: columns
/// 9..23, rows 1..11, notch columns 16..23 × rows 9..11). Hand-reconstructed
/// from a published picture; approximate. Other torus sizes scale the same
/// proportions.
pub fn torus_figure_initial(n1: usize, n2: usize) -> NodeSet {
    let idx = |a: usize, b: usize| a * n2 + b;
    let (a0, a1) = (9 * n1 / 32, 23 * n1 / 32);
    let (b0, b1) = (n2 / 12, 11 * n2 / 12);
    let (notch_w, notch_h) = (7 * n1 / 32, 2 * n2 / 12);
    let mut members = Vec::new();
    for a in a0..a1 {
        for b in b0..b1 {
            let in_notch = a >= a1 - notch_w && b >= b1 - notch_h;
            if !in_notch {
                members.push(idx(a, b));
            }
        }
    }
    NodeSet::from_indices(members)
}

/// Canned 14-node contiguous cap on the buckyball: breadth-first ball grown
/// from node 0 in canonical node order. Hand-reconstructed from a published
/// picture; approximate.
pub fn buckyball_cap14(g: &Graph) -> NodeSet {
    let mut visited = vec![false; g.n()];
    let mut order = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    visited[0] = true;
    queue.push_back(0);
    while let Some(i) = queue.pop_front() {
        order.push(i);
        if order.len() == 14 {
            break;
        }
        for (j, _) in g.neighbors(i) {
            if !visited[j] {
                visited[j] = true;
                queue.push_back(j);
            }
        }
    }
    NodeSet::from_indices(order)
}

/// Canned initial set for the adjoined-lattices experiment: a blob
/// straddling the seam. Hand-reconstructed from a published picture;
/// approximate.
pub fn adjoined_figure_initial(cfg: AdjoinedLatticesConfig) -> NodeSet {
    let cols = cfg.square_cols + cfg.tri_cols;
    let idx = |row: usize, col: usize| row * cols + col;
    let mut members = Vec::new();
    let r0 = cfg.rows / 4;
    let r1 = cfg.rows - cfg.rows / 4;
    let c0 = cfg.square_cols.saturating_sub(4);
    let c1 = (cfg.square_cols + 4).min(cols);
    for row in r0..r1 {
        for col in c0..c1 {
            members.push(idx(row, col));
        }
    }
    NodeSet::from_indices(members)
}
