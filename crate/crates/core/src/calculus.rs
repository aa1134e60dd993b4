//! The `(q, r)`-parameterized discrete calculus: inner products, gradient,
//! divergence, Laplacian, norms, total variations, 1-Laplacian, clustering
//! coefficient, balanced cuts, and the coarea decomposition.

use crate::error::{Error, Result};
use crate::graph::{EdgeFunction, Graph, NodeFunction, NodeSet};

/// `⟨u, v⟩_𝒱 = Σ_i u_i v_i d_i^r`.
pub fn inner_v(g: &Graph, u: &NodeFunction, v: &NodeFunction) -> f64 {
    (0..g.n()).map(|i| u[i] * v[i] * g.deg_r(i)).sum()
}

/// `‖u‖_𝒱`.
pub fn norm_v(g: &Graph, u: &NodeFunction) -> f64 {
    inner_v(g, u, u).max(0.0).sqrt()
}

/// `‖u‖_{𝒱,∞} = max_i |u_i|`.
pub fn norm_v_inf(u: &NodeFunction) -> f64 {
    u.norm_inf()
}

/// `⟨φ, ψ⟩_ℰ = ½ Σ_{ij} φ_ij ψ_ij ω_ij^{2q−1}`.
pub fn inner_e(g: &Graph, phi: &EdgeFunction, psi: &EdgeFunction) -> f64 {
    let mut acc = 0.0;
    for e in 0..g.num_directed_entries() {
        acc += phi.value(e) * psi.value(e) * g.w_2q1(e);
    }
    0.5 * acc
}

/// `‖φ‖_ℰ`.
pub fn norm_e(g: &Graph, phi: &EdgeFunction) -> f64 {
    inner_e(g, phi, phi).max(0.0).sqrt()
}

/// Mass `M(u) = ⟨u, χ_V⟩_𝒱 = Σ_i u_i d_i^r`.
pub fn mass(g: &Graph, u: &NodeFunction) -> f64 {
    (0..g.n()).map(|i| u[i] * g.deg_r(i)).sum()
}

/// Gradient `(∇u)_ij = ω_ij^{1−q} (u_j − u_i)`.
pub fn gradient(g: &Graph, u: &NodeFunction) -> EdgeFunction {
    let mut phi = EdgeFunction::zeros(g);
    for i in 0..g.n() {
        for (e, j, _) in g.row(i) {
            phi.set(e, g.w_1q(e) * (u[j] - u[i]));
        }
    }
    phi
}

/// Divergence `(div φ)_i = d_i^{−r} Σ_j ω_ij^q φ_ji`, the adjoint of the
/// gradient: `⟨∇u, φ⟩_ℰ = ⟨u, div φ⟩_𝒱`.
pub fn divergence(g: &Graph, phi: &EdgeFunction) -> NodeFunction {
    let mut out = NodeFunction::zeros(g.n());
    for i in 0..g.n() {
        let mut acc = 0.0;
        for (e, j, _) in g.row(i) {
            let back = g.entry(j, i).expect("symmetric adjacency");
            acc += g.w_q(e) * phi.value(back);
        }
        out[i] = acc / g.deg_r(i);
    }
    out
}

/// Laplacian `(Δu)_i = d_i^{−r} Σ_j ω_ij (u_i − u_j)`; equals `div(∇u)` and
/// is positive semidefinite.
pub fn laplacian_apply(g: &Graph, u: &NodeFunction) -> NodeFunction {
    let mut out = NodeFunction::zeros(g.n());
    for i in 0..g.n() {
        let mut acc = 0.0;
        for (_, j, w) in g.row(i) {
            acc += w * (u[i] - u[j]);
        }
        out[i] = acc / g.deg_r(i);
    }
    out
}

/// Dirichlet energy `½ ‖∇u‖_ℰ² = ¼ Σ_{ij} ω_ij (u_i − u_j)²`.
pub fn dirichlet_energy(g: &Graph, u: &NodeFunction) -> f64 {
    let mut acc = 0.0;
    for i in 0..g.n() {
        for (_, j, w) in g.row(i) {
            let d = u[i] - u[j];
            acc += w * d * d;
        }
    }
    0.25 * acc
}

/// Anisotropic total variation `TV_a^q(u) = ½ Σ_{ij} ω_ij^q |u_i − u_j|`.
/// On indicators this is the graph cut `Σ_{i∈S, j∈S^c} ω_ij^q`.
pub fn tv_anisotropic(g: &Graph, u: &NodeFunction) -> f64 {
    let mut acc = 0.0;
    for i in 0..g.n() {
        for (e, j, _) in g.row(i) {
            acc += g.w_q(e) * (u[i] - u[j]).abs();
        }
    }
    0.5 * acc
}

/// Graph cut of a set, `TV_a^q(χ_S)` computed directly over cut edges.
pub fn cut_value(g: &Graph, s: &NodeSet) -> f64 {
    let mask = s.mask(g.n());
    let mut acc = 0.0;
    for &i in s.members() {
        for (e, j, _) in g.row(i) {
            if !mask[j] {
                acc += g.w_q(e);
            }
        }
    }
    acc
}

/// `sgn(∇u)` with `sgn(0) = 0`; the maximizer in the dual formulation of
/// `TV_a^q`.
pub fn sign_gradient(g: &Graph, u: &NodeFunction) -> EdgeFunction {
    EdgeFunction::from_fn(g, |i, j| {
        let d = u[j] - u[i];
        if d > 0.0 {
            1.0
        } else if d < 0.0 {
            -1.0
        } else {
            0.0
        }
    })
}

/// Pointwise edge norm `|φ|_i = √((φ·φ)_i)` with
/// `(φ·ψ)_i = ½ Σ_j φ_ij ψ_ij ω_ij^{2q−1}`.
pub fn edge_norm_at(g: &Graph, phi: &EdgeFunction) -> NodeFunction {
    let mut out = NodeFunction::zeros(g.n());
    for i in 0..g.n() {
        let mut acc = 0.0;
        for (e, _, _) in g.row(i) {
            acc += phi.value(e) * phi.value(e) * g.w_2q1(e);
        }
        out[i] = (0.5 * acc).max(0.0).sqrt();
    }
    out
}

/// Isotropic total variation
/// `TV(u) = Σ_i |∇u|_i = (√2/2) Σ_i √(Σ_j ω_ij (u_i − u_j)²)`.
pub fn tv_isotropic(g: &Graph, u: &NodeFunction) -> f64 {
    edge_norm_at(g, &gradient(g, u)).iter().sum()
}

/// The edge field `φ^TV` achieving the isotropic maximum formulation:
/// `φ_ij = (∇u)_ij / |∇u|_i` where `|∇u|_i ≠ 0`, zero otherwise. Not
/// skew-symmetric in general; pair it with [`divergence_extended`].
pub fn tv_isotropic_field(g: &Graph, u: &NodeFunction) -> Vec<f64> {
    let grad = gradient(g, u);
    let norms = edge_norm_at(g, &grad);
    let mut values = vec![0.0; g.num_directed_entries()];
    for i in 0..g.n() {
        if norms[i] == 0.0 {
            continue;
        }
        for (e, _, _) in g.row(i) {
            values[e] = grad.value(e) / norms[i];
        }
    }
    values
}

/// Divergence extended to non-skew edge fields:
/// `(div φ)_i = (2 d_i^r)^{−1} Σ_j ω_ij^q (φ_ji − φ_ij)`. Agrees with
/// [`divergence`] on skew-symmetric inputs.
pub fn divergence_extended(g: &Graph, values: &[f64]) -> NodeFunction {
    let mut out = NodeFunction::zeros(g.n());
    for i in 0..g.n() {
        let mut acc = 0.0;
        for (e, j, _) in g.row(i) {
            let back = g.entry(j, i).expect("symmetric adjacency");
            acc += g.w_q(e) * (values[back] - values[e]);
        }
        out[i] = acc / (2.0 * g.deg_r(i));
    }
    out
}

/// 1-Laplacian `div φ^TV`, the first variation of the isotropic total
/// variation; terms with `|∇u|_j = 0` contribute zero.
pub fn one_laplacian(g: &Graph, u: &NodeFunction) -> NodeFunction {
    divergence_extended(g, &tv_isotropic_field(g, u))
}

/// Coarea decomposition of `TV_a^q`: `u` takes finitely many values, so
/// `∫ TV_a^q(χ_{E(s)}) ds` collapses to a sum over consecutive distinct
/// levels with `E(t) = {i : u_i > t}`.
pub fn coarea_sum(g: &Graph, u: &NodeFunction) -> f64 {
    let mut levels: Vec<f64> = u.iter().cloned().collect();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup();
    let mut acc = 0.0;
    for k in 0..levels.len().saturating_sub(1) {
        let t = levels[k];
        let superlevel = NodeSet::from_indices((0..g.n()).filter(|&i| u[i] > t));
        acc += (levels[k + 1] - t) * cut_value(g, &superlevel);
    }
    acc
}

/// Local clustering coefficient of node `i` on an unweighted graph:
/// `C_i = (d_i (d_i − 1))^{−1} Σ_{j,h ∈ 𝒩_i} ω_jh`.
pub fn clustering_coefficient(g: &Graph, i: usize) -> Result<f64> {
    if !g.is_unweighted() {
        return Err(Error::WeightedGraph);
    }
    let d = g.degree(i);
    if d < 2.0 {
        return Err(Error::DegreeTooSmall(i));
    }
    let nbrs: Vec<usize> = g.neighbors(i).map(|(j, _)| j).collect();
    let mut acc = 0.0;
    for &j in &nbrs {
        for &h in &nbrs {
            if j != h {
                acc += g.weight(j, h);
            }
        }
    }
    Ok(acc / (d * (d - 1.0)))
}

/// Balanced graph cut `C_r(S_1, …, S_k) = Σ_k TV_a^1(χ_{S_k}) / vol S_k`
/// (ratio cut at `r = 0`, normalized cut at `r = 1`). The cut numerator uses
/// `q = 1` regardless of the graph's `q`.
pub fn balanced_cut(g: &Graph, partition: &[NodeSet]) -> Result<f64> {
    let n = g.n();
    let mut owner = vec![usize::MAX; n];
    for (k, part) in partition.iter().enumerate() {
        if part.is_empty() {
            return Err(Error::InvalidPartition);
        }
        for &i in part.members() {
            if i >= n || owner[i] != usize::MAX {
                return Err(Error::InvalidPartition);
            }
            owner[i] = k;
        }
    }
    if owner.contains(&usize::MAX) {
        return Err(Error::InvalidPartition);
    }
    let mut total = 0.0;
    for part in partition {
        let mask = part.mask(n);
        let mut cut1 = 0.0;
        for &i in part.members() {
            for (_, j, w) in g.row(i) {
                if !mask[j] {
                    cut1 += w;
                }
            }
        }
        total += cut1 / part.vol(g);
    }
    Ok(total)
}
