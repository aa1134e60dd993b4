//! The direct subcommands: gen, spectral, geometry, mbo, ac, mcf, bounds.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use gmcf_core::ac::{ac_pinning_bounds, ace_evolve, AcParams};
use gmcf_core::calculus::mass;
use gmcf_core::generators::{self, AdjoinedLatticesConfig, MoonsConfig};
use gmcf_core::graph::{Graph, NodeSet};
use gmcf_core::io;
use gmcf_core::mbo::{mbo_run, mbo_step, tau_bounds, MboParams};
use gmcf_core::mcf::{mcf_step, McfParams, PenaltyField, TieBreak};
use gmcf_core::spectral::{eigendecompose, spectral_bounds};
use gmcf_core::{Error, Result};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    Complete,
    Star,
    Cycle,
    Torus,
    Grid,
    Tree,
    Buckyball,
    AdjoinedLattices,
    TwoMoons,
}

#[derive(Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    /// Node count for complete/star/cycle.
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 32)]
    n1: usize,
    #[arg(long, default_value_t = 12)]
    n2: usize,
    #[arg(long, default_value_t = 3)]
    rows: usize,
    #[arg(long, default_value_t = 3)]
    cols: usize,
    #[arg(long, default_value_t = 3)]
    depth: usize,
    #[arg(long, default_value_t = 2)]
    children: usize,
    #[arg(long, default_value_t = 10)]
    square_cols: usize,
    #[arg(long, default_value_t = 10)]
    tri_cols: usize,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long, default_value_t = 0.0)]
    r: f64,
    #[arg(long, default_value_t = 600)]
    n_points: usize,
    #[arg(long, default_value_t = 100)]
    ambient_dim: usize,
    #[arg(long, default_value_t = 0.1)]
    noise_sigma: f64,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output graph file.
    #[arg(short, long)]
    output: PathBuf,
    /// Optional planar layout file (JSON array of [x, y]).
    #[arg(long)]
    coords: Option<PathBuf>,
    /// Optional ground-truth set file (two-moons only).
    #[arg(long)]
    truth: Option<PathBuf>,
}

pub fn gen(args: GenArgs) -> Result<bool> {
    let (graph, coords, truth): (Graph, Option<Vec<(f64, f64)>>, Option<NodeSet>) =
        match args.family {
            Family::Complete => (
                generators::complete(args.n, args.omega, args.q, args.r)?,
                Some(generators::layout_cycle(args.n)),
                None,
            ),
            Family::Star => (
                generators::star(args.n, args.omega, args.q, args.r)?,
                Some(generators::layout_star(args.n)),
                None,
            ),
            Family::Cycle => (
                generators::cycle(args.n, args.omega, args.q, args.r)?,
                Some(generators::layout_cycle(args.n)),
                None,
            ),
            Family::Torus => (
                generators::torus(args.n1, args.n2, args.omega, args.q, args.r)?,
                Some(generators::layout_torus(args.n1, args.n2)),
                None,
            ),
            Family::Grid => (
                generators::grid(args.rows, args.cols, args.omega, args.q, args.r)?,
                Some(generators::layout_grid(args.rows, args.cols)),
                None,
            ),
            Family::Tree => (
                generators::regular_tree(args.depth, args.children, args.omega, args.q, args.r)?,
                Some(generators::layout_tree(args.depth, args.children)),
                None,
            ),
            Family::Buckyball => (
                generators::buckyball(args.omega, args.q, args.r)?,
                Some(generators::layout_buckyball()),
                None,
            ),
            Family::AdjoinedLattices => {
                let cfg = AdjoinedLatticesConfig {
                    rows: args.rows,
                    square_cols: args.square_cols,
                    tri_cols: args.tri_cols,
                };
                (
                    generators::adjoined_lattices(cfg, args.omega, args.q, args.r)?,
                    Some(generators::layout_adjoined(cfg)),
                    None,
                )
            }
            Family::TwoMoons => {
                let cfg = MoonsConfig {
                    n_points: args.n_points,
                    ambient_dim: args.ambient_dim,
                    noise_sigma: args.noise_sigma,
                    k: args.k,
                    seed: args.seed,
                };
                let (g, truth, coords) = generators::two_moons(&cfg)?;
                (g, Some(coords), Some(truth))
            }
        };

    io::write_graph(&args.output, &graph)?;
    if let Some(path) = args.coords {
        let coords = coords.ok_or_else(|| Error::InvalidInput("no layout for family".into()))?;
        std::fs::write(&path, serde_json::to_string(&coords)?)?;
    }
    if let Some(path) = args.truth {
        let truth = truth
            .ok_or_else(|| Error::InvalidInput("ground truth only exists for two-moons".into()))?;
        io::write_node_set(&path, &truth)?;
    }
    Ok(true)
}

#[derive(Args)]
pub struct SpectralArgs {
    #[arg(long)]
    graph: PathBuf,
}

pub fn spectral(args: SpectralArgs) -> Result<bool> {
    let g = io::read_graph(&args.graph)?;
    let decomp = eigendecompose(&g)?;
    let bounds = spectral_bounds(&g);
    println!(
        "{}",
        serde_json::json!({
            "eigenvalues": decomp.eigenvalues,
            "rho": decomp.rho,
            "bounds": bounds,
        })
    );
    Ok(true)
}

#[derive(Args)]
pub struct GeometryArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    set: PathBuf,
}

pub fn geometry(args: GeometryArgs) -> Result<bool> {
    let g = io::read_graph(&args.graph)?;
    let s = io::read_node_set(&args.set, g.n())?;
    let kappa = gmcf_core::geometry::curvature(&g, &s).values;
    let sd = gmcf_core::geometry::signed_distance(&g, &s).ok();
    println!(
        "{}",
        serde_json::json!({
            "kappa": kappa.as_slice(),
            "boundary": gmcf_core::geometry::boundary(&g, &s).members(),
            "boundary_complement": gmcf_core::geometry::boundary_complement(&g, &s).members(),
            "sigma": gmcf_core::geometry::sigma(&g, &s).members(),
            "reduced_boundary": gmcf_core::geometry::reduced_boundary(&g, &s).members(),
            "signed_distance": sd.as_ref().map(|f| f.as_slice()),
        })
    );
    Ok(true)
}

#[derive(Args)]
pub struct MboArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    init: PathBuf,
    #[arg(long)]
    tau: f64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    /// JSON-lines trace output, one line per iterate.
    #[arg(long)]
    trace: Option<PathBuf>,
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value,
            range: "(0, \u{221e})",
        })
    }
}

pub fn mbo(args: MboArgs) -> Result<bool> {
    require_positive("tau", args.tau)?;
    let g = io::read_graph(&args.graph)?;
    let s0 = io::read_node_set(&args.init, g.n())?;
    let trace = mbo_run(&g, &s0, &MboParams::new(args.tau, args.max_iter))?;
    if let Some(path) = &args.trace {
        let mut file = std::fs::File::create(path)?;
        for (k, set) in trace.sets.iter().enumerate() {
            let line = serde_json::json!({
                "k": k,
                "set": set.members(),
                "tv": trace.tv[k],
                "lyapunov": trace.lyapunov[k],
                "mass": set.vol(&g),
            });
            writeln!(file, "{line}")?;
        }
    }
    println!(
        "{}",
        serde_json::json!({
            "iterations_to_stationary": trace.converged_at,
            "final_set": trace.sets.last().unwrap().members(),
        })
    );
    Ok(true)
}

#[derive(Args)]
pub struct AcArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    init: PathBuf,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-6)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    abs_tol: f64,
    #[arg(long)]
    trace: Option<PathBuf>,
}

pub fn ac(args: AcArgs) -> Result<bool> {
    require_positive("eps", args.eps)?;
    require_positive("t_end", args.t_end)?;
    let g = io::read_graph(&args.graph)?;
    let u0 = io::read_node_function(&args.init, g.n())?;
    let params = AcParams {
        eps: args.eps,
        t_end: args.t_end,
        rel_tol: args.rel_tol,
        abs_tol: args.abs_tol,
        event_detection: true,
    };
    let trace = ace_evolve(&g, &u0, &params)?;
    if let Some(path) = &args.trace {
        let mut file = std::fs::File::create(path)?;
        for (k, t) in trace.times.iter().enumerate() {
            let line = serde_json::json!({
                "t": t,
                "u": trace.states[k].as_slice(),
                "gl": trace.gl_energy[k],
            });
            writeln!(file, "{line}")?;
        }
    }
    println!(
        "{}",
        serde_json::json!({
            "t_final": trace.times.last().unwrap(),
            "stationary_at": trace.stationary_at,
            "sign_changes": trace.sign_changes,
            "gl_final": trace.gl_energy.last().unwrap(),
        })
    );
    Ok(true)
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TieBreakArg {
    PreferPrevious,
    LexicographicMin,
}

#[derive(Args)]
pub struct McfArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    init: PathBuf,
    #[arg(long)]
    dt: f64,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = TieBreakArg::PreferPrevious)]
    tie_break: TieBreakArg,
    /// Experimental squared split-distance penalty instead of the interface
    /// distance.
    #[arg(long, default_value_t = false)]
    split_squared_penalty: bool,
    /// Also run a single threshold-dynamics step with this time step at each
    /// flow step and report whether the two updates coincide.
    #[arg(long)]
    compare_mbo_tau: Option<f64>,
    /// JSON-lines trace output: one line per flow step with its objective.
    #[arg(long)]
    trace: Option<PathBuf>,
}

pub fn mcf(args: McfArgs) -> Result<bool> {
    require_positive("dt", args.dt)?;
    let g = io::read_graph(&args.graph)?;
    let s0 = io::read_node_set(&args.init, g.n())?;
    let params = McfParams {
        dt: args.dt,
        max_steps: args.steps,
        tie_break: match args.tie_break {
            TieBreakArg::PreferPrevious => TieBreak::PreferPrevious,
            TieBreakArg::LexicographicMin => TieBreak::LexicographicMin,
        },
        penalty: if args.split_squared_penalty {
            PenaltyField::SplitSquared
        } else {
            PenaltyField::InterfaceDistance
        },
    };

    let mut trace_file = match &args.trace {
        Some(path) => Some(std::fs::File::create(path)?),
        None => None,
    };
    let mut sets = vec![s0.clone()];
    let mut comparisons = Vec::new();
    for k in 0..params.max_steps {
        let current = sets.last().unwrap().clone();
        if current.is_empty() || current.len() == g.n() {
            break;
        }
        let step = mcf_step(&g, &current, &params)?;
        if let Some(tau) = args.compare_mbo_tau {
            let mbo_next = mbo_step(&g, &current, tau);
            comparisons.push(serde_json::json!({
                "k": k,
                "coincide": mbo_next == step.next_set,
            }));
        }
        if let Some(file) = trace_file.as_mut() {
            let line = serde_json::json!({
                "k": k + 1,
                "set": step.next_set.members(),
                "objective": step.objective,
                "minimizer_unique": step.minimizer_unique,
            });
            writeln!(file, "{line}")?;
        }
        let stationary = step.next_set == current;
        sets.push(step.next_set);
        if stationary {
            sets.pop();
            break;
        }
    }
    println!(
        "{}",
        serde_json::json!({
            "steps": sets.len() - 1,
            "final_set": sets.last().unwrap().members(),
            "mbo_comparison": comparisons,
        })
    );
    Ok(true)
}

#[derive(Args)]
pub struct BoundsArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Node set for the threshold-dynamics time-step bounds.
    #[arg(long)]
    set: Option<PathBuf>,
    /// Initial state for the Allen-Cahn diffuse-scale bounds.
    #[arg(long)]
    u0: Option<PathBuf>,
}

pub fn bounds(args: BoundsArgs) -> Result<bool> {
    let g = io::read_graph(&args.graph)?;
    let mut out = serde_json::Map::new();
    out.insert(
        "spectral".into(),
        serde_json::to_value(spectral_bounds(&g))?,
    );
    if let Some(path) = &args.set {
        let s = io::read_node_set(path, g.n())?;
        out.insert("tau".into(), serde_json::to_value(tau_bounds(&g, &s)?)?);
    }
    if let Some(path) = &args.u0 {
        let u0 = io::read_node_function(path, g.n())?;
        let (eps_rho, eps_kappa) = ac_pinning_bounds(&g, &u0)?;
        out.insert(
            "eps".into(),
            serde_json::json!({
                "eps_rho": eps_rho,
                "eps_kappa": eps_kappa,
                "mass": mass(&g, &u0),
            }),
        );
    }
    println!("{}", serde_json::Value::Object(out));
    Ok(true)
}
