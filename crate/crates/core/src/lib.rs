//! Total variation, curvature, and interface dynamics on finite weighted graphs.
//!
//! The discrete calculus is parameterized by `q ∈ [1/2, 1]` and `r ∈ [0, 1]`:
//!
//! * node inner product `⟨u, v⟩ = Σ_i u_i v_i d_i^r`,
//! * edge inner product `⟨φ, ψ⟩ = ½ Σ_{ij} φ_ij ψ_ij ω_ij^{2q−1}`,
//! * gradient `(∇u)_ij = ω_ij^{1−q} (u_j − u_i)`,
//! * divergence `(div φ)_i = d_i^{−r} Σ_j ω_ij^q φ_ji`,
//! * Laplacian `Δ = div ∘ ∇`, positive semidefinite.
//!
//! On top of the calculus ([`calculus`]) sit the Laplacian spectrum and heat
//! semigroup ([`spectral`]), set geometry — normals, curvature, boundaries,
//! graph distances ([`geometry`]) — and three evolutions driven by them:
//! threshold dynamics ([`mbo`]), the Allen-Cahn gradient flow ([`ac`]), and a
//! discrete-time mean curvature flow solved exactly by min-cut ([`mcf`]).
//! [`generators`] builds the standard example graphs (complete, star, cycle,
//! torus, tree, grid, buckyball, adjoined lattices, two moons).
//!
//! All types are immutable after construction and every operation is a pure
//! function; everything here is safe to call concurrently.

pub mod ac;
pub mod calculus;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod maxflow;
pub mod mbo;
pub mod mcf;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{EdgeFunction, Graph, NodeFunction, NodeSet};
