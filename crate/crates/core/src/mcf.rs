//! Discrete-time mean curvature flow: each step minimizes the cut change
//! plus a `(1/∂t)`-weighted distance-to-interface penalty, solved exactly as
//! an s–t minimum cut. Includes the equivalent reduced functional, a convex
//! relaxation whose superlevel sets are step minimizers, and a subgradient
//! optimality certificate extracted from the flow.

use crate::calculus::cut_value;
use crate::error::{Error, Result};
use crate::graph::{EdgeFunction, Graph, NodeFunction, NodeSet};
use crate::maxflow::MaxFlow;

/// Choice among multiple step minimizers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    /// Return the previous set whenever it attains the minimum, making
    /// stationary sets genuine fixed points.
    PreferPrevious,
    /// Return the inclusion-wise minimal minimizer (the intersection of all
    /// minimizers), a canonical deterministic choice.
    LexicographicMin,
}

/// Unary penalty field for the move term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenaltyField {
    /// Graph distance to the interface `Σ = ∂S ∪ ∂(S^c)`; zero on `Σ`, so
    /// interface nodes can move freely at any `∂t`.
    InterfaceDistance,
    /// Experimental: squared distance to the opposite side,
    /// `(d^{S^c})²` on `S` and `(d^S)²` on `S^c`. Bounded below by 1 at
    /// every node, so small `∂t` freezes the flow.
    SplitSquared,
}

#[derive(Debug, Clone, Copy)]
pub struct McfParams {
    pub dt: f64,
    pub max_steps: usize,
    pub tie_break: TieBreak,
    pub penalty: PenaltyField,
}

impl McfParams {
    pub fn new(dt: f64, max_steps: usize) -> Self {
        McfParams {
            dt,
            max_steps,
            tie_break: TieBreak::PreferPrevious,
            penalty: PenaltyField::InterfaceDistance,
        }
    }
}

/// Result of one flow step.
#[derive(Debug, Clone)]
pub struct McfStepResult {
    pub next_set: NodeSet,
    /// Reduced objective value of `next_set` against the previous set.
    pub objective: f64,
    /// Whether the step minimizer is unique (minimal and maximal minimum
    /// cuts coincide).
    pub minimizer_unique: bool,
}

/// Signed unary field `σ`: `+penalty` on `S^c`, `−penalty` on `S`. With the
/// interface distance this is the signed distance `sd^Σ`.
pub fn signed_field(g: &Graph, s: &NodeSet, penalty: PenaltyField) -> Result<NodeFunction> {
    match penalty {
        PenaltyField::InterfaceDistance => crate::geometry::signed_distance(g, s),
        PenaltyField::SplitSquared => {
            if s.is_empty() || s.len() == g.n() {
                return Err(Error::TrivialSet);
            }
            let d_to_s = crate::geometry::graph_distance(g, s)?;
            let d_to_sc = crate::geometry::graph_distance(g, &s.complement(g.n()))?;
            let mask = s.mask(g.n());
            Ok(NodeFunction::from_fn(g.n(), |i| {
                if mask[i] {
                    -d_to_sc[i] * d_to_sc[i]
                } else {
                    d_to_s[i] * d_to_s[i]
                }
            }))
        }
    }
}

/// Move functional
/// `𝓕(Ŝ, S) = TV_a^q(χ_Ŝ) − TV_a^q(χ_S) + (1/∂t) ⟨χ_Ŝ − χ_S, (χ_Ŝ − χ_S) d^Σ⟩_𝒱`.
pub fn mcf_functional(g: &Graph, s_hat: &NodeSet, s: &NodeSet, dt: f64) -> Result<f64> {
    let interface = crate::geometry::sigma(g, s);
    if interface.is_empty() {
        return Err(Error::TrivialSet);
    }
    let d = crate::geometry::graph_distance(g, &interface)?;
    let hm = s_hat.mask(g.n());
    let sm = s.mask(g.n());
    let mut move_term = 0.0;
    for i in 0..g.n() {
        if hm[i] != sm[i] {
            move_term += d[i] * g.deg_r(i);
        }
    }
    Ok(cut_value(g, s_hat) - cut_value(g, s) + move_term / dt)
}

/// Reduced functional `𝓕′(Ŝ, S) = TV_a^q(χ_Ŝ) − TV_a^q(χ_S) + (1/∂t) ⟨χ_Ŝ, sd^Σ⟩_𝒱`;
/// differs from `𝓕` by the `Ŝ`-independent shift `(1/∂t)⟨χ_S, d^Σ⟩_𝒱`, so
/// the minimizers coincide.
pub fn mcf_functional_reduced(g: &Graph, s_hat: &NodeSet, s: &NodeSet, dt: f64) -> Result<f64> {
    let sd = signed_field(g, s, PenaltyField::InterfaceDistance)?;
    Ok(reduced_with_field(g, s_hat, s, &sd, dt))
}

fn reduced_with_field(g: &Graph, s_hat: &NodeSet, s: &NodeSet, sd: &NodeFunction, dt: f64) -> f64 {
    let unary: f64 = s_hat.members().iter().map(|&i| sd[i] * g.deg_r(i)).sum();
    cut_value(g, s_hat) - cut_value(g, s) + unary / dt
}

struct CutSolution {
    s_min: Vec<bool>,
    s_max: Vec<bool>,
}

/// Minimizes `Σ_{i∈Ŝ, j∉Ŝ} ω_ij^q + Σ_{i∈Ŝ} c_i` over `Ŝ ⊂ V` by s–t
/// min-cut. Capacities are scaled to integers when every value is a round
/// multiple of a power of ten (exact arithmetic), otherwise solved in
/// floating point.
fn solve_cut(g: &Graph, unary: &[f64]) -> CutSolution {
    let n = g.n();
    let mut caps: Vec<f64> = Vec::with_capacity(g.edge_count() + n);
    for i in 0..n {
        for (e, j, _) in g.row(i) {
            if i < j {
                caps.push(g.w_q(e));
            }
        }
        caps.push(unary[i].abs());
    }

    let mut scale: Option<f64> = None;
    'scales: for k in 0..=9u32 {
        let f = 10f64.powi(k as i32);
        let mut total = 0.0f64;
        for &c in &caps {
            let scaled = c * f;
            if (scaled - scaled.round()).abs() > 1e-9 * scaled.abs().max(1.0) {
                continue 'scales;
            }
            total += scaled.round().abs();
        }
        if total < 9.0e17 {
            scale = Some(f);
            break;
        }
    }

    let (source, sink) = (n, n + 1);
    if let Some(f) = scale {
        let mut net = MaxFlow::<i128>::new(n + 2, source, sink);
        for i in 0..n {
            for (e, j, _) in g.row(i) {
                if i < j {
                    let c = (g.w_q(e) * f).round() as i128;
                    net.add_edge(i, j, c);
                    net.add_edge(j, i, c);
                }
            }
            let c = (unary[i] * f).round() as i128;
            match c.cmp(&0) {
                std::cmp::Ordering::Greater => {
                    net.add_edge(i, sink, c);
                }
                std::cmp::Ordering::Less => {
                    net.add_edge(source, i, -c);
                }
                std::cmp::Ordering::Equal => {}
            }
        }
        net.run(i128::MAX / 4);
        CutSolution {
            s_min: net.min_cut_source_side()[..n].to_vec(),
            s_max: net.max_cut_source_side()[..n].to_vec(),
        }
    } else {
        let mut net = MaxFlow::<f64>::new(n + 2, source, sink);
        for i in 0..n {
            for (e, j, _) in g.row(i) {
                if i < j {
                    net.add_edge(i, j, g.w_q(e));
                    net.add_edge(j, i, g.w_q(e));
                }
            }
            if unary[i] > 0.0 {
                net.add_edge(i, sink, unary[i]);
            } else if unary[i] < 0.0 {
                net.add_edge(source, i, -unary[i]);
            }
        }
        net.run(f64::INFINITY);
        CutSolution {
            s_min: net.min_cut_source_side()[..n].to_vec(),
            s_max: net.max_cut_source_side()[..n].to_vec(),
        }
    }
}

/// One exact flow step.
pub fn mcf_step(g: &Graph, s: &NodeSet, params: &McfParams) -> Result<McfStepResult> {
    if s.is_empty() || s.len() == g.n() {
        return Err(Error::TrivialSet);
    }
    let sd = signed_field(g, s, params.penalty)?;
    if sd.iter().any(|d| d.is_infinite()) {
        return Err(Error::DisconnectedGraph);
    }
    let unary: Vec<f64> = (0..g.n()).map(|i| sd[i] * g.deg_r(i) / params.dt).collect();
    let sol = solve_cut(g, &unary);

    let s_min = NodeSet::from_mask(&sol.s_min);
    let s_max = NodeSet::from_mask(&sol.s_max);
    let minimizer_unique = s_min == s_max;

    let min_value = reduced_with_field(g, &s_min, s, &sd, params.dt);
    let next_set = match params.tie_break {
        TieBreak::LexicographicMin => s_min,
        TieBreak::PreferPrevious => {
            let prev_value = reduced_with_field(g, s, s, &sd, params.dt);
            if prev_value <= min_value + 1e-9 * (1.0 + min_value.abs()) {
                s.clone()
            } else {
                s_min
            }
        }
    };
    let objective = reduced_with_field(g, &next_set, s, &sd, params.dt);
    Ok(McfStepResult {
        next_set,
        objective,
        minimizer_unique,
    })
}

/// Runs the flow until a fixed point, a trivial set, or `max_steps`.
/// Returns the visited sets, starting with `s0`.
pub fn mcf_run(g: &Graph, s0: &NodeSet, params: &McfParams) -> Result<Vec<NodeSet>> {
    let mut sets = vec![s0.clone()];
    for _ in 0..params.max_steps {
        let current = sets.last().unwrap();
        if current.is_empty() || current.len() == g.n() {
            break;
        }
        let step = mcf_step(g, current, params)?;
        let stationary = step.next_set == *current;
        sets.push(step.next_set);
        if stationary {
            sets.pop();
            break;
        }
    }
    Ok(sets)
}

/// Minimizes the convex relaxation
/// `F(u) = TV_a^q(u) + (1/∂t) ⟨u, sd^Σ⟩_𝒱` over the box `[−m, m]^V`.
///
/// `F` is piecewise linear and positively homogeneous in each term, so the
/// minimum is attained at a box vertex `u* = m (2χ_{S*} − 1)` where `S*`
/// minimizes the step functional; every superlevel set `E(s)`, `s ∈ (−m, m)`,
/// is then a step minimizer. Returns `(u*, E(0))`.
pub fn convex_relaxation_solve(
    g: &Graph,
    s: &NodeSet,
    dt: f64,
    m: f64,
) -> Result<(NodeFunction, NodeSet)> {
    if !(m > 0.0) {
        return Err(Error::ParameterOutOfRange {
            name: "m",
            value: m,
            range: "(0, ∞)",
        });
    }
    let step = mcf_step(
        g,
        s,
        &McfParams {
            dt,
            max_steps: 1,
            tie_break: TieBreak::LexicographicMin,
            penalty: PenaltyField::InterfaceDistance,
        },
    )?;
    let star = step.next_set;
    let u = NodeFunction::from_fn(g.n(), |i| if star.contains(i) { m } else { -m });
    Ok((u, star))
}

/// Relaxation objective `F(u) = TV_a^q(u) + (1/∂t)⟨u, sd^Σ⟩_𝒱`.
pub fn relaxation_objective(g: &Graph, u: &NodeFunction, s: &NodeSet, dt: f64) -> Result<f64> {
    let sd = signed_field(g, s, PenaltyField::InterfaceDistance)?;
    let unary: f64 = (0..g.n()).map(|i| u[i] * sd[i] * g.deg_r(i)).sum();
    Ok(crate::calculus::tv_anisotropic(g, u) + unary / dt)
}

/// Subgradient optimality certificate for the relaxation minimizer,
/// extracted from the residual network of a floating-point flow solve.
#[derive(Debug, Clone)]
pub struct OptimalityCertificate {
    /// Dual edge field with `|φ_ij| ≤ 1`, equal to `sgn((∇u*)_ij)` across
    /// the cut.
    pub phi: EdgeFunction,
    /// `(div φ)_i + (1/∂t) sd_i`; `≤ 0` on `S*` (absorbed by the upper-bound
    /// multiplier) and `≥ 0` off `S*` (lower-bound multiplier).
    pub residual: NodeFunction,
    /// Largest constraint violation over all checks.
    pub max_violation: f64,
}

pub fn optimality_certificate(g: &Graph, s: &NodeSet, dt: f64) -> Result<OptimalityCertificate> {
    if s.is_empty() || s.len() == g.n() {
        return Err(Error::TrivialSet);
    }
    let sd = signed_field(g, s, PenaltyField::InterfaceDistance)?;
    if sd.iter().any(|d| d.is_infinite()) {
        return Err(Error::DisconnectedGraph);
    }
    let n = g.n();
    let (source, sink) = (n, n + 1);
    let mut net = MaxFlow::<f64>::new(n + 2, source, sink);
    // remember arc ids per directed entry
    let mut arc_of = vec![usize::MAX; g.num_directed_entries()];
    for i in 0..n {
        for (e, j, _) in g.row(i) {
            if i < j {
                let back = g.entry(j, i).expect("symmetric adjacency");
                arc_of[e] = net.add_edge(i, j, g.w_q(e));
                arc_of[back] = net.add_edge(j, i, g.w_q(e));
            }
        }
        let c = sd[i] * g.deg_r(i) / dt;
        if c > 0.0 {
            net.add_edge(i, sink, c);
        } else if c < 0.0 {
            net.add_edge(source, i, -c);
        }
    }
    net.run(f64::INFINITY);
    let s_star = net.min_cut_source_side();

    // φ_ij = (f(j→i) − f(i→j)) / ω_ij^q
    let mut phi = EdgeFunction::zeros(g);
    for i in 0..n {
        for (e, j, _) in g.row(i) {
            if i < j {
                let back = g.entry(j, i).expect("symmetric adjacency");
                let net_fwd = net.flow_on(arc_of[e]) - net.flow_on(arc_of[back]);
                let val = -net_fwd / g.w_q(e);
                phi.set(e, val);
                phi.set(back, -val);
            }
        }
    }

    let div_phi = crate::calculus::divergence(g, &phi);
    let residual = NodeFunction::from_fn(n, |i| div_phi[i] + sd[i] / dt);

    let mut violation = 0.0f64;
    for e in 0..g.num_directed_entries() {
        violation = violation.max(phi.value(e).abs() - 1.0);
    }
    for i in 0..n {
        for (e, j, _) in g.row(i) {
            if s_star[i] && !s_star[j] {
                // sgn((∇u*)_ij) = −1 across the cut from S* outward
                violation = violation.max((phi.value(e) + 1.0).abs());
            }
        }
        if s_star[i] {
            violation = violation.max(residual[i]); // needs ≤ 0
        } else {
            violation = violation.max(-residual[i]); // needs ≥ 0
        }
    }
    Ok(OptimalityCertificate {
        phi,
        residual,
        max_violation: violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn functional_examples_on_c4() {
        let g = generators::cycle(4, 1.0, 1.0, 0.0).unwrap();
        let s = NodeSet::from_indices([0]);
        // no move, no cut change
        assert_eq!(mcf_functional(&g, &s, &s, 1.0).unwrap(), 0.0);
        // removing the single node: node 0 lies on Σ, so only the cut drops
        let empty = NodeSet::empty();
        for &dt in &[0.01, 1.0, 100.0] {
            assert!((mcf_functional(&g, &empty, &s, dt).unwrap() + 2.0).abs() < 1e-12);
        }
        assert!(matches!(
            mcf_functional(&g, &s, &NodeSet::empty(), 1.0),
            Err(Error::TrivialSet)
        ));
    }

    #[test]
    fn reduced_functional_shift_is_constant() {
        let g = generators::torus(4, 3, 1.0, 1.0, 0.0).unwrap();
        let s = NodeSet::from_indices([0, 1, 2, 4]);
        let dt = 0.7;
        let shift_of = |s_hat: &NodeSet| {
            mcf_functional(&g, s_hat, &s, dt).unwrap()
                - mcf_functional_reduced(&g, s_hat, &s, dt).unwrap()
        };
        let base = shift_of(&NodeSet::from_indices([0, 5, 6]));
        for cand in [
            NodeSet::empty(),
            NodeSet::from_indices([1, 2, 3]),
            NodeSet::full(g.n()),
        ] {
            assert!((shift_of(&cand) - base).abs() < 1e-10);
        }
    }

    #[test]
    fn single_node_on_cycle_vanishes() {
        let g = generators::cycle(4, 1.0, 1.0, 0.0).unwrap();
        let s = NodeSet::from_indices([0]);
        for &dt in &[0.01, 0.5, 10.0] {
            let step = mcf_step(&g, &s, &McfParams::new(dt, 1)).unwrap();
            assert!(step.next_set.is_empty(), "dt = {dt}");
        }
        let run = mcf_run(&g, &s, &McfParams::new(1.0, 10)).unwrap();
        assert!(run.last().unwrap().is_empty());
        assert_eq!(run.len(), 2);
    }

    #[test]
    fn torus_strip_is_stationary_with_prefer_previous() {
        // ∂t small enough that vanishing outright is more expensive than
        // keeping the strip
        let g = generators::torus(8, 5, 1.0, 1.0, 0.0).unwrap();
        let strip = NodeSet::from_indices((2 * 5..5 * 5).collect::<Vec<_>>());
        let params = McfParams::new(0.2, 1);
        let step = mcf_step(&g, &strip, &params).unwrap();
        assert_eq!(step.next_set, strip);
        // non-uniqueness: widening or shrinking by a boundary line also
        // attains the minimum on a totally geodesic strip
        assert!(!step.minimizer_unique);
        let shrunk = NodeSet::from_indices((3 * 5..4 * 5).collect::<Vec<_>>());
        let widened = NodeSet::from_indices((1 * 5..6 * 5).collect::<Vec<_>>());
        let val = |cand: &NodeSet| mcf_functional_reduced(&g, cand, &strip, params.dt).unwrap();
        assert!((val(&strip) - val(&shrunk)).abs() < 1e-12);
        assert!((val(&strip) - val(&widened)).abs() < 1e-12);
        let run = mcf_run(&g, &strip, &McfParams::new(0.2, 5)).unwrap();
        assert_eq!(run.len(), 1);
    }

    #[test]
    fn convex_relaxation_on_c4() {
        let g = generators::cycle(4, 1.0, 1.0, 0.0).unwrap();
        let s = NodeSet::from_indices([0]);
        let (u, e0) = convex_relaxation_solve(&g, &s, 1.0, 1.0).unwrap();
        assert!(e0.is_empty());
        for i in 0..4 {
            assert_eq!(u[i], -1.0);
        }
        // argmin set independent of the box size
        let (_, e0b) = convex_relaxation_solve(&g, &s, 1.0, 7.5).unwrap();
        assert_eq!(e0, e0b);
    }

    #[test]
    fn certificate_on_small_instances() {
        let g = generators::torus(4, 3, 1.0, 1.0, 0.0).unwrap();
        let s = NodeSet::from_indices([0, 1, 2, 4, 5]);
        for &dt in &[0.1, 1.0, 10.0] {
            let cert = optimality_certificate(&g, &s, dt).unwrap();
            assert!(
                cert.max_violation < 1e-8,
                "dt = {dt}: {}",
                cert.max_violation
            );
        }
    }

    #[test]
    fn split_squared_penalty_freezes() {
        let g = generators::cycle(6, 1.0, 1.0, 0.0).unwrap();
        let s = NodeSet::from_indices([0]);
        let mut params = McfParams::new(0.05, 1);
        params.penalty = PenaltyField::SplitSquared;
        let step = mcf_step(&g, &s, &params).unwrap();
        assert_eq!(step.next_set, s);
        // the default interface distance lets the same set vanish
        let step2 = mcf_step(&g, &s, &McfParams::new(0.05, 1)).unwrap();
        assert!(step2.next_set.is_empty());
    }

    #[test]
    fn errors() {
        let g = generators::cycle(4, 1.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            mcf_step(&g, &NodeSet::empty(), &McfParams::new(1.0, 1)),
            Err(Error::TrivialSet)
        ));
        let disc = crate::graph::Graph::new(4, &[(0, 1, 1.0), (2, 3, 1.0)], 1.0, 0.0).unwrap();
        assert!(matches!(
            mcf_step(&disc, &NodeSet::from_indices([0]), &McfParams::new(1.0, 1)),
            Err(Error::DisconnectedGraph)
        ));
    }
}
