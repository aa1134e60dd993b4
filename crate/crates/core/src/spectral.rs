//! Eigendecomposition of the graph Laplacian, spectral bounds, and the heat
//! semigroup `e^{−tΔ}`.
//!
//! The generalized problem `D^{−r}(D − A) x = λ x`, `xᵀ D^r x = 1`, is solved
//! through the change of variables `y = D^{r/2} x`, which turns it into the
//! symmetric problem `[D^{1−r} − D^{−r/2} A D^{−r/2}] y = λ y` handled by a
//! dense cyclic Jacobi sweep (no external solver, bit-reproducible). Mapping
//! back `x = D^{−r/2} y` gives `𝒱`-orthonormal eigenvectors directly.

use crate::calculus::{inner_v, mass, norm_v};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeFunction, NodeSet};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Eigenvalues (ascending) and `𝒱`-orthonormal eigenvectors of `Δ`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<NodeFunction>,
    /// Spectral radius `ρ = λ_n`.
    pub rho: f64,
}

/// Upper/lower bounds on `λ_2`, `λ_n`, and `ρ` computable without an
/// eigensolve.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SpectralBounds {
    /// `λ_2 ≤ (n−1)^{−1} Σ_i d_i^{1−r}` (trace mean).
    pub lambda2_upper_trace: f64,
    /// `λ_n ≥ (n−1)^{−1} Σ_i d_i^{1−r}` (same trace mean, from below).
    pub lambdan_lower_trace: f64,
    /// For non-complete graphs,
    /// `λ_2 ≤ min_{(i,j)∉E} (d_i d_j^{2r} + d_i^{2r} d_j)/(d_i^r d_j^{2r} + d_i^{2r} d_j^r)`.
    pub lambda2_upper_noncomplete: Option<f64>,
    /// `λ_2 ≤ min_S (vol V) TV_a^1(χ_S) / (vol S · vol S^c)`, evaluated over a
    /// sampled family of sets (singletons plus breadth-first balls from node
    /// 0), so it is an upper bound but not the minimum over all sets.
    pub lambda2_upper_cheeger: f64,
    /// `ρ ≤ 2 d_+^{1−r}`.
    pub rho_upper: f64,
}

const JACOBI_MAX_SWEEPS: usize = 128;

/// Dense cyclic Jacobi for a symmetric matrix stored row-major. Returns
/// (eigenvalues, eigenvector columns).
fn jacobi_symmetric(mut a: Vec<f64>, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    if n == 1 {
        return Ok((vec![a[0]], v));
    }
    let scale: f64 = (0..n * n)
        .map(|k| a[k] * a[k])
        .sum::<f64>()
        .sqrt()
        .max(1e-300);
    let tol = 1e-15 * scale;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p * n + q].abs());
            }
        }
        if off <= tol {
            let eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
            return Ok((eig, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= tol * 1e-2 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // rows/columns p and q of A
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::ConvergenceFailure)
}

/// Full eigendecomposition of `Δ` for the graph's `r`. Eigenvalues are sorted
/// ascending; ties are broken by lexicographic order of the sign-normalized
/// eigenvectors (first component exceeding `1e−9` in magnitude made
/// positive), so the output is deterministic.
pub fn eigendecompose(g: &Graph) -> Result<SpectralDecomposition> {
    let n = g.n();
    let mut m = vec![0.0f64; n * n];
    for i in 0..n {
        m[i * n + i] = g.degree(i) / g.deg_r(i); // d^{1−r}
        let si = g.deg_r(i).sqrt();
        for (_, j, w) in g.row(i) {
            let sj = g.deg_r(j).sqrt();
            m[i * n + j] = -w / (si * sj);
        }
    }
    let (eig, vecs) = jacobi_symmetric(m, n)?;

    let mut cols: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|k| {
            let mut x: Vec<f64> = (0..n)
                .map(|i| vecs[i * n + k] / g.deg_r(i).sqrt())
                .collect();
            // sign normalization
            if let Some(&lead) = x.iter().find(|c| c.abs() > 1e-9) {
                if lead < 0.0 {
                    for c in x.iter_mut() {
                        *c = -*c;
                    }
                }
            }
            (eig[k], x)
        })
        .collect();
    cols.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then_with(|| a.1.partial_cmp(&b.1).unwrap())
    });

    let eigenvalues: Vec<f64> = cols.iter().map(|(l, _)| *l).collect();
    let eigenvectors: Vec<NodeFunction> = cols.into_iter().map(|(_, x)| NodeFunction(x)).collect();
    let rho = *eigenvalues.last().expect("n ≥ 1");
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        rho,
    })
}

impl SpectralDecomposition {
    /// `λ_2`, the algebraic connectivity.
    pub fn lambda2(&self) -> f64 {
        self.eigenvalues[1.min(self.eigenvalues.len() - 1)]
    }

    /// Mean eigenvalue `(Σ_k λ_k)/n`.
    pub fn mean_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().sum::<f64>() / self.eigenvalues.len() as f64
    }

    /// Heat evolution through the spectral expansion
    /// `u(t) = Σ_j e^{−λ_j t} ⟨u_0, v_j⟩_𝒱 v_j`.
    pub fn heat(&self, g: &Graph, u0: &NodeFunction, t: f64) -> NodeFunction {
        let n = g.n();
        let mut out = NodeFunction::zeros(n);
        for (lambda, vec) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let coeff = inner_v(g, u0, vec) * (-lambda * t).exp();
            if coeff == 0.0 {
                continue;
            }
            for i in 0..n {
                out[i] += coeff * vec[i];
            }
        }
        out
    }
}

/// Cheap spectral bounds from degrees, non-edges, and sampled cuts.
pub fn spectral_bounds(g: &Graph) -> SpectralBounds {
    let n = g.n();
    let trace: f64 = (0..n).map(|i| g.degree(i) / g.deg_r(i)).sum();
    let trace_mean = trace / (n as f64 - 1.0).max(1.0);

    let mut noncomplete: Option<f64> = None;
    for i in 0..n {
        let nbrs = g.neighbors(i).map(|(j, _)| j).collect::<Vec<_>>();
        let mut mark = vec![false; n];
        for &j in &nbrs {
            mark[j] = true;
        }
        for j in (i + 1)..n {
            if !mark[j] {
                let (di, dj) = (g.degree(i), g.degree(j));
                let r = g.r();
                let val = (di * dj.powf(2.0 * r) + di.powf(2.0 * r) * dj)
                    / (di.powf(r) * dj.powf(2.0 * r) + di.powf(2.0 * r) * dj.powf(r));
                noncomplete = Some(noncomplete.map_or(val, |b: f64| b.min(val)));
            }
        }
    }

    let vol_v = g.vol_total();
    let cheeger_of = |s: &NodeSet| -> f64 {
        let vs = s.vol(g);
        let vsc = vol_v - vs;
        if vs <= 0.0 || vsc <= 0.0 {
            return f64::INFINITY;
        }
        let mask = s.mask(n);
        let mut cut1 = 0.0;
        for &i in s.members() {
            for (_, j, w) in g.row(i) {
                if !mask[j] {
                    cut1 += w;
                }
            }
        }
        vol_v * cut1 / (vs * vsc)
    };
    let mut family: Vec<NodeSet> = (0..n).map(|i| NodeSet::from_indices([i])).collect();
    // breadth-first ball prefixes from node 0
    let mut visited = vec![false; n];
    let mut order = Vec::new();
    let mut queue = std::collections::VecDeque::from([0usize]);
    visited[0] = true;
    while let Some(i) = queue.pop_front() {
        order.push(i);
        for (j, _) in g.neighbors(i) {
            if !visited[j] {
                visited[j] = true;
                queue.push_back(j);
            }
        }
    }
    for len in 2..order.len() {
        family.push(NodeSet::from_indices(order[..len].iter().cloned()));
    }
    let lambda2_upper_cheeger = family.iter().map(cheeger_of).fold(f64::INFINITY, f64::min);

    SpectralBounds {
        lambda2_upper_trace: trace_mean,
        lambdan_lower_trace: trace_mean,
        lambda2_upper_noncomplete: noncomplete,
        lambda2_upper_cheeger,
        rho_upper: 2.0 * g.d_plus().powf(1.0 - g.r()),
    }
}

/// Heat evolution `e^{−tΔ} u0` without an eigendecomposition.
///
/// Uses the uniformization series: with `θ = 2 d_+^{1−r} ≥ ρ`, the matrix
/// `B = I − Δ/θ` is entrywise nonnegative with unit row sums, and
/// `e^{−tΔ} u = e^{−θt} Σ_k (θt)^k/k! · B^k u`, truncated once the Poisson
/// tail drops below `1e−13`. Long horizons are split into substeps so the
/// leading weight never underflows. This path preserves mass, positivity,
/// and the comparison principle up to the truncation error.
pub fn heat_evolve(g: &Graph, u0: &NodeFunction, t: f64) -> NodeFunction {
    assert!(t >= 0.0, "diffusion time must be nonnegative");
    if t == 0.0 {
        return u0.clone();
    }
    let theta = 2.0 * g.d_plus().powf(1.0 - g.r());
    let steps = ((theta * t) / 500.0).ceil().max(1.0);
    let dt = t / steps;
    let mut u = u0.clone();
    for _ in 0..steps as usize {
        u = uniformization_step(g, &u, theta, dt);
    }
    u
}

fn apply_b(g: &Graph, theta: f64, u: &NodeFunction) -> NodeFunction {
    let row = |i: usize| -> f64 {
        let mut acc = (1.0 - g.degree(i) / (g.deg_r(i) * theta)) * u[i];
        for (_, j, w) in g.row(i) {
            acc += w / (g.deg_r(i) * theta) * u[j];
        }
        acc
    };
    #[cfg(feature = "parallel")]
    {
        if g.n() >= 256 {
            return NodeFunction((0..g.n()).into_par_iter().map(row).collect());
        }
    }
    NodeFunction((0..g.n()).map(row).collect())
}

fn uniformization_step(g: &Graph, u: &NodeFunction, theta: f64, t: f64) -> NodeFunction {
    let n = g.n();
    let x = theta * t;
    let mut term = u.clone(); // B^k u
    let mut weight = (-x).exp(); // Poisson weight at k
    let mut cum = weight;
    let mut out = NodeFunction::zeros(n);
    for i in 0..n {
        out[i] = weight * term[i];
    }
    // the Poisson tail beyond x + 60√x + 60 is negligible even when the
    // accumulated weight stalls an ulp short of 1
    let k_cap = x + 60.0 * x.sqrt() + 60.0;
    let mut k = 1.0f64;
    while 1.0 - cum > 1e-13 && k <= k_cap {
        term = apply_b(g, theta, &term);
        weight *= x / k;
        cum += weight;
        for i in 0..n {
            out[i] += weight * term[i];
        }
        k += 1.0;
    }
    out
}

/// Mixing time after which the diffusion is uniformly within `eps` of its
/// conserved mean:
/// `τ = λ_2^{−1} log(ε^{−1} d_-^{−r/2} ‖u_0 − (vol V)^{−1} M‖_𝒱)`.
/// Returns 0 when `u_0` is already constant; the guarantee
/// `‖u(t) − (vol V)^{−1} M‖_{𝒱,∞} ≤ ε` holds for all `t > τ`.
pub fn mixing_bound(g: &Graph, u0: &NodeFunction, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::ParameterOutOfRange {
            name: "eps",
            value: eps,
            range: "(0, ∞)",
        });
    }
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let mean = mass(g, u0) / g.vol_total();
    let dev = NodeFunction::from_fn(g.n(), |i| u0[i] - mean);
    let dev_norm = norm_v(g, &dev);
    if dev_norm == 0.0 {
        return Ok(0.0);
    }
    let decomp = eigendecompose(g)?;
    let lambda2 = decomp.lambda2();
    Ok((dev_norm / (eps * g.d_minus().powf(g.r() / 2.0))).ln() / lambda2)
}
