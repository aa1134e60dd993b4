//! Canned experiments with expected-outcome checks. Each experiment is
//! described by a manifest (serialized next to its outputs) that fully
//! determines the run; outputs are a summary JSON, a JSON-lines trace when
//! the method iterates, and a CSV of per-iteration memberships when a planar
//! layout exists.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Args;
use gmcf_core::calculus::balanced_cut;
use gmcf_core::generators::{self, AdjoinedLatticesConfig, MoonsConfig};
use gmcf_core::graph::{Graph, NodeSet};
use gmcf_core::mbo::{mbo_run, mbo_step, HeatPropagator, MboParams};
use gmcf_core::spectral::eigendecompose;
use gmcf_core::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Args)]
pub struct ReproArgs {
    /// One of: complete, star, tree, grid-interval, torus-freeze,
    /// torus-strip, buckyball, lattices, two-moons. Alternatively use
    /// --manifest to run a manifest file.
    name: Option<String>,
    /// Run a manifest from a file instead of a canned experiment.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Output directory (default `repro-out/<name>`).
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

pub const EXPERIMENTS: [&str; 9] = [
    "complete",
    "star",
    "tree",
    "grid-interval",
    "torus-freeze",
    "torus-strip",
    "buckyball",
    "lattices",
    "two-moons",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GraphSpec {
    Complete {
        n: usize,
        omega: f64,
        q: f64,
        r: f64,
    },
    Star {
        n: usize,
        omega: f64,
        q: f64,
        r: f64,
    },
    Grid {
        rows: usize,
        cols: usize,
        omega: f64,
        q: f64,
        r: f64,
    },
    Tree {
        depth: usize,
        children: usize,
        omega: f64,
        q: f64,
        r: f64,
    },
    Torus {
        n1: usize,
        n2: usize,
        omega: f64,
        q: f64,
        r: f64,
    },
    Buckyball {
        omega: f64,
        q: f64,
        r: f64,
    },
    AdjoinedLattices {
        rows: usize,
        square_cols: usize,
        tri_cols: usize,
        omega: f64,
        q: f64,
        r: f64,
    },
    TwoMoons {
        n_points: usize,
        ambient_dim: usize,
        noise_sigma: f64,
        k: usize,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitSpec {
    Set { members: Vec<usize> },
    TorusFigure,
    BuckyballCap,
    AdjoinedFigure,
    MoonsHalfPlane,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MethodSpec {
    /// Spectrum check plus a pinned/trivial bracket around the closed-form
    /// critical step of a one-scale graph.
    CriticalStep {
        expected_eigenvalues: Vec<f64>,
        bracket: f64,
    },
    /// Scan a τ grid until the evolution terminates at the target set, then
    /// confirm the target bipartition minimizes the normalized cut by
    /// exhaustive enumeration.
    TreeScan {
        tau_start: f64,
        tau_step: f64,
        tau_count: usize,
        max_iter: usize,
        target: Vec<usize>,
    },
    /// Closed-form flip interval at one node plus a flip simulation at
    /// interior samples.
    FlipInterval {
        node: usize,
        expected: (f64, f64),
        samples: usize,
    },
    /// One threshold-dynamics evolution with shape/iteration expectations.
    Evolution {
        tau: f64,
        max_iter: usize,
        expect_strip: Option<bool>,
        expected_iterations: Option<usize>,
        iteration_slack: usize,
        strip_stationary_taus: Vec<f64>,
    },
    /// Pinned / shrink / one-step-trivial regime thresholds plus the
    /// closed-form time-step bounds.
    BuckyballRegimes {
        pinned_target: f64,
        trivial_target: f64,
        threshold_slack: f64,
        tau_rho_4dp: f64,
        tau_t_sq_4dp: f64,
        lambda2: f64,
        lambda_n: f64,
        spectrum_tol: f64,
    },
    /// Clustering run scored against the generator's ground truth.
    MoonsClustering {
        tau: f64,
        max_iter: usize,
        min_purity: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub name: String,
    pub seed: u64,
    pub graph: GraphSpec,
    pub init: InitSpec,
    pub method: MethodSpec,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub name: String,
    pub seed: u64,
    pub metrics: serde_json::Map<String, serde_json::Value>,
    pub checks: Vec<Check>,
}

pub fn run(args: ReproArgs) -> Result<bool> {
    let manifest = match (&args.name, &args.manifest) {
        (_, Some(path)) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        (Some(name), None) => canned(name)?,
        (None, None) => {
            return Err(Error::InvalidInput(
                "give an experiment name or --manifest".into(),
            ))
        }
    };
    let out_dir = args
        .out_dir
        .unwrap_or_else(|| PathBuf::from("repro-out").join(&manifest.name));
    let summary = run_manifest(&manifest, &out_dir)?;
    let mut all_pass = true;
    for check in &summary.checks {
        let tag = if check.pass { "PASS" } else { "FAIL" };
        println!("{tag} {}: {}", check.name, check.detail);
        all_pass &= check.pass;
    }
    println!("summary: {}", out_dir.join("summary.json").display());
    Ok(all_pass)
}

pub fn canned(name: &str) -> Result<Manifest> {
    let manifest = match name {
        "complete" => Manifest {
            name: name.into(),
            seed: 1,
            graph: GraphSpec::Complete {
                n: 4,
                omega: 1.0,
                q: 1.0,
                r: 0.0,
            },
            init: InitSpec::Set { members: vec![0] },
            method: MethodSpec::CriticalStep {
                expected_eigenvalues: vec![0.0, 4.0, 4.0, 4.0],
                bracket: 1e-3,
            },
        },
        "star" => Manifest {
            name: name.into(),
            seed: 1,
            graph: GraphSpec::Star {
                n: 5,
                omega: 1.0,
                q: 1.0,
                r: 0.0,
            },
            init: InitSpec::Set { members: vec![0] },
            method: MethodSpec::CriticalStep {
                expected_eigenvalues: vec![0.0, 1.0, 1.0, 1.0, 5.0],
                bracket: 1e-3,
            },
        },
        "tree" => Manifest {
            name: name.into(),
            seed: 1,
            graph: GraphSpec::Tree {
                depth: 3,
                children: 2,
                omega: 1.0,
                q: 1.0,
                r: 0.0,
            },
            init: InitSpec::Set {
                members: vec![0, 1, 2, 3],
            },
            method: MethodSpec::TreeScan {
                tau_start: 0.5,
                tau_step: 0.02,
                tau_count: 76,
                max_iter: 100,
                target: vec![0, 1, 2, 3, 8, 9, 12],
            },
        },
        "grid-interval" => Manifest {
            name: name.into(),
            seed: 1,
            graph: GraphSpec::Grid {
                rows: 3,
                cols: 3,
                omega: 1.0,
                q: 1.0,
                r: 1.0,
            },
            init: InitSpec::Set {
                members: vec![3, 5, 6, 7, 8],
            },
            method: MethodSpec::FlipInterval {
                node: 4,
                expected: (3.0 - 5f64.sqrt(), 3.0 + 5f64.sqrt()),
                samples: 16,
            },
        },
        "torus-freeze" => Manifest {
            name: name.into(),
            seed: 1,
            graph: GraphSpec::Torus {
                n1: 32,
                n2: 12,
                omega: 1.0,
                q: 1.0,
                r: 0.0,
            },
            init: InitSpec::TorusFigure,
            method: MethodSpec::Evolution {
                tau: 1.12,
                max_iter: 60,
                expect_strip: Some(false),
                expected_iterations: Some(4),
                iteration_slack: 2,
                strip_stationary_taus: vec![],
            },
        },
        "torus-strip" => Manifest {
            name: name.into(),
            seed: 1,
            graph: GraphSpec::Torus {
                n1: 32,
                n2: 12,
                omega: 1.0,
                q: 1.0,
                r: 0.0,
            },
            init: InitSpec::TorusFigure,
            method: MethodSpec::Evolution {
                tau: 4.0,
                max_iter: 60,
                expect_strip: Some(true),
                expected_iterations: Some(5),
                iteration_slack: 2,
                strip_stationary_taus: vec![1.12, 4.0],
            },
        },
        "buckyball" => Manifest {
            name: name.into(),
            seed: 1,
            graph: GraphSpec::Buckyball {
                omega: 1.0,
                q: 1.0,
                r: 0.0,
            },
            init: InitSpec::BuckyballCap,
            method: MethodSpec::BuckyballRegimes {
                pinned_target: 1.89,
                trivial_target: 3.54,
                threshold_slack: 0.3,
                tau_rho_4dp: 0.0223,
                tau_t_sq_4dp: 15.1811,
                lambda2: 0.2434,
                lambda_n: 5.6180,
                spectrum_tol: 5e-4,
            },
        },
        "lattices" => Manifest {
            name: name.into(),
            seed: 1,
            graph: GraphSpec::AdjoinedLattices {
                rows: 12,
                square_cols: 10,
                tri_cols: 10,
                omega: 1.0,
                q: 1.0,
                r: 0.0,
            },
            init: InitSpec::AdjoinedFigure,
            method: MethodSpec::Evolution {
                tau: 0.8,
                max_iter: 100,
                expect_strip: None,
                expected_iterations: None,
                iteration_slack: 0,
                strip_stationary_taus: vec![],
            },
        },
        "two-moons" => Manifest {
            name: name.into(),
            seed: 1,
            graph: GraphSpec::TwoMoons {
                n_points: 600,
                ambient_dim: 100,
                noise_sigma: 0.1,
                k: 10,
            },
            init: InitSpec::MoonsHalfPlane,
            method: MethodSpec::MoonsClustering {
                tau: 5.0,
                max_iter: 30,
                min_purity: 0.9,
            },
        },
        other => {
            return Err(Error::UnknownExperiment(format!(
                "{other} (known: {})",
                EXPERIMENTS.join(", ")
            )))
        }
    };
    Ok(manifest)
}

struct BuiltGraph {
    graph: Graph,
    coords: Option<Vec<(f64, f64)>>,
    truth: Option<NodeSet>,
}

fn build(spec: &GraphSpec, seed: u64) -> Result<BuiltGraph> {
    let (graph, coords, truth) = match *spec {
        GraphSpec::Complete { n, omega, q, r } => (
            generators::complete(n, omega, q, r)?,
            Some(generators::layout_cycle(n)),
            None,
        ),
        GraphSpec::Star { n, omega, q, r } => (
            generators::star(n, omega, q, r)?,
            Some(generators::layout_star(n)),
            None,
        ),
        GraphSpec::Grid {
            rows,
            cols,
            omega,
            q,
            r,
        } => (
            generators::grid(rows, cols, omega, q, r)?,
            Some(generators::layout_grid(rows, cols)),
            None,
        ),
        GraphSpec::Tree {
            depth,
            children,
            omega,
            q,
            r,
        } => (
            generators::regular_tree(depth, children, omega, q, r)?,
            Some(generators::layout_tree(depth, children)),
            None,
        ),
        GraphSpec::Torus {
            n1,
            n2,
            omega,
            q,
            r,
        } => (
            generators::torus(n1, n2, omega, q, r)?,
            Some(generators::layout_torus(n1, n2)),
            None,
        ),
        GraphSpec::Buckyball { omega, q, r } => (
            generators::buckyball(omega, q, r)?,
            Some(generators::layout_buckyball()),
            None,
        ),
        GraphSpec::AdjoinedLattices {
            rows,
            square_cols,
            tri_cols,
            omega,
            q,
            r,
        } => {
            let cfg = AdjoinedLatticesConfig {
                rows,
                square_cols,
                tri_cols,
            };
            (
                generators::adjoined_lattices(cfg, omega, q, r)?,
                Some(generators::layout_adjoined(cfg)),
                None,
            )
        }
        GraphSpec::TwoMoons {
            n_points,
            ambient_dim,
            noise_sigma,
            k,
        } => {
            let cfg = MoonsConfig {
                n_points,
                ambient_dim,
                noise_sigma,
                k,
                seed,
            };
            let (g, truth, coords) = generators::two_moons(&cfg)?;
            (g, Some(coords), Some(truth))
        }
    };
    Ok(BuiltGraph {
        graph,
        coords,
        truth,
    })
}

fn build_init(init: &InitSpec, built: &BuiltGraph) -> Result<NodeSet> {
    let g = &built.graph;
    match init {
        InitSpec::Set { members } => NodeSet::new(members.clone(), g.n()),
        InitSpec::TorusFigure => {
            // dimensions recovered from the layout extent
            let coords = built.coords.as_ref().expect("torus has a layout");
            let n2 = coords.iter().filter(|&&(x, _)| x == 0.0).count();
            Ok(generators::torus_figure_initial(g.n() / n2, n2))
        }
        InitSpec::BuckyballCap => Ok(generators::buckyball_cap14(g)),
        InitSpec::AdjoinedFigure => Ok(generators::adjoined_figure_initial(
            AdjoinedLatticesConfig::default(),
        )),
        InitSpec::MoonsHalfPlane => {
            let coords = built
                .coords
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("moons init needs coordinates".into()))?;
            Ok(generators::two_moons_initial(coords))
        }
    }
}

fn write_trace(path: &Path, g: &Graph, trace: &gmcf_core::mbo::MboTrace) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    for (k, set) in trace.sets.iter().enumerate() {
        let line = serde_json::json!({
            "k": k,
            "set": set.members(),
            "tv": trace.tv[k],
            "lyapunov": trace.lyapunov[k],
            "mass": set.vol(g),
        });
        writeln!(file, "{line}")?;
    }
    Ok(())
}

fn write_csv(path: &Path, coords: &[(f64, f64)], sets: &[NodeSet], n: usize) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    let mut header = String::from("node_id,x,y");
    for k in 0..sets.len() {
        header.push_str(&format!(",iter{k}"));
    }
    writeln!(file, "{header}")?;
    let masks: Vec<Vec<bool>> = sets.iter().map(|s| s.mask(n)).collect();
    for i in 0..n {
        let mut row = format!("{},{},{}", i, coords[i].0, coords[i].1);
        for mask in &masks {
            row.push_str(if mask[i] { ",1" } else { ",0" });
        }
        writeln!(file, "{row}")?;
    }
    Ok(())
}

/// Runs a manifest, writes its artifacts, and returns the summary.
pub fn run_manifest(manifest: &Manifest, out_dir: &Path) -> Result<Summary> {
    std::fs::create_dir_all(out_dir)?;
    std::fs::write(
        out_dir.join("manifest.json"),
        serde_json::to_string_pretty(manifest)?,
    )?;

    let built = build(&manifest.graph, manifest.seed)?;
    let s0 = build_init(&manifest.init, &built)?;
    let g = &built.graph;

    let mut metrics = serde_json::Map::new();
    let mut checks = Vec::new();

    match &manifest.method {
        MethodSpec::CriticalStep {
            expected_eigenvalues,
            bracket,
        } => {
            let decomp = eigendecompose(g)?;
            let spectrum_ok = decomp
                .eigenvalues
                .iter()
                .zip(expected_eigenvalues)
                .all(|(a, b)| (a - b).abs() < 1e-8);
            checks.push(Check {
                name: "spectrum_matches_closed_form".into(),
                pass: spectrum_ok,
                detail: format!("eigenvalues {:?}", decomp.eigenvalues),
            });
            let vol_s = s0.vol(g);
            let r_s = vol_s / g.vol_total();
            let tau_c = (r_s.max(1.0 - r_s) / (0.5 - r_s).abs()).ln() / decomp.rho;
            metrics.insert("tau_c".into(), tau_c.into());
            let heat = HeatPropagator::Spectral(g, &decomp);
            let below = gmcf_core::mbo::mbo_step_with(&heat, &s0, tau_c - bracket);
            let above = gmcf_core::mbo::mbo_step_with(&heat, &s0, tau_c + bracket);
            checks.push(Check {
                name: "pinned_below_critical_step".into(),
                pass: below == s0,
                detail: format!("tau = {:.6}", tau_c - bracket),
            });
            let expect_empty = r_s < 0.5;
            let trivial_ok = if expect_empty {
                above.is_empty()
            } else {
                above.len() == g.n()
            };
            checks.push(Check {
                name: "trivial_above_critical_step".into(),
                pass: trivial_ok,
                detail: format!("tau = {:.6}, |next| = {}", tau_c + bracket, above.len()),
            });
        }

        MethodSpec::TreeScan {
            tau_start,
            tau_step,
            tau_count,
            max_iter,
            target,
        } => {
            let target_set = NodeSet::new(target.clone(), g.n())?;
            let decomp = eigendecompose(g)?;
            let heat = HeatPropagator::Spectral(g, &decomp);
            let mut found = None;
            let mut final_trace = None;
            for k in 0..*tau_count {
                let tau = tau_start + tau_step * k as f64;
                let trace =
                    gmcf_core::mbo::mbo_run_with(&heat, &s0, &MboParams::new(tau, *max_iter))?;
                if trace.converged_at.is_some() && *trace.sets.last().unwrap() == target_set {
                    found = Some(tau);
                    final_trace = Some(trace);
                    break;
                }
            }
            metrics.insert("tau_found".into(), serde_json::json!(found));
            checks.push(Check {
                name: "scan_terminates_at_target".into(),
                pass: found.is_some(),
                detail: format!("target {:?}, tau = {:?}", target, found),
            });
            if let Some(trace) = &final_trace {
                write_trace(&out_dir.join("trace.jsonl"), g, trace)?;
                if let Some(coords) = &built.coords {
                    write_csv(&out_dir.join("plot.csv"), coords, &trace.sets, g.n())?;
                }
            }

            // exhaustive normalized-cut minimum over all bipartitions, on
            // the same topology with r = 1 volumes
            let g1 = g.with_params(g.q(), 1.0)?;
            let n = g1.n();
            let mut best = f64::INFINITY;
            let mut best_mask = 0u32;
            for bits in 1..(1u32 << (n - 1)) {
                let part: Vec<usize> = (0..n).filter(|&i| bits >> i & 1 == 1).collect();
                let s = NodeSet::from_indices(part);
                let c = balanced_cut(&g1, &[s.clone(), s.complement(n)])?;
                if c < best {
                    best = c;
                    best_mask = bits;
                }
            }
            let best_set = NodeSet::from_indices((0..n).filter(|&i| best_mask >> i & 1 == 1));
            let matches = best_set == target_set || best_set == target_set.complement(n);
            metrics.insert("min_normalized_cut".into(), best.into());
            checks.push(Check {
                name: "target_minimizes_normalized_cut".into(),
                pass: matches,
                detail: format!("min C_1 = {:.6} at {:?}", best, best_set.members()),
            });
        }

        MethodSpec::FlipInterval {
            node,
            expected,
            samples,
        } => {
            let interval = gmcf_core::mbo::local_flip_interval(g, &s0, *node);
            let formula_ok = match interval {
                Some((t1, t2)) => {
                    (t1 - expected.0).abs() <= 1e-12 && (t2 - expected.1).abs() <= 1e-12
                }
                None => false,
            };
            metrics.insert("interval".into(), serde_json::json!(interval));
            checks.push(Check {
                name: "interval_matches_closed_form".into(),
                pass: formula_ok,
                detail: format!("interval = {:?}", interval),
            });
            if let Some((t1, t2)) = interval {
                let decomp = eigendecompose(g)?;
                let heat = HeatPropagator::Spectral(g, &decomp);
                let was_in = s0.contains(*node);
                let mut flipped = Vec::new();
                for k in 1..=*samples {
                    let tau = t1 + (t2 - t1) * k as f64 / (*samples + 1) as f64;
                    let next = gmcf_core::mbo::mbo_step_with(&heat, &s0, tau);
                    flipped.push(next.contains(*node) != was_in);
                }
                let count = flipped.iter().filter(|&&f| f).count();
                metrics.insert("flips_at_samples".into(), serde_json::json!(flipped));
                checks.push(Check {
                    name: "flip_at_interior_samples".into(),
                    pass: count == *samples,
                    detail: format!("{count}/{samples} interior samples flip"),
                });
                let half = gmcf_core::mbo::mbo_step_with(&heat, &s0, t1 / 2.0);
                checks.push(Check {
                    name: "no_flip_below_interval".into(),
                    pass: half.contains(*node) == was_in,
                    detail: format!("tau = {:.6}", t1 / 2.0),
                });
            }
        }

        MethodSpec::Evolution {
            tau,
            max_iter,
            expect_strip,
            expected_iterations,
            iteration_slack,
            strip_stationary_taus,
        } => {
            let trace = mbo_run(g, &s0, &MboParams::new(*tau, *max_iter))?;
            write_trace(&out_dir.join("trace.jsonl"), g, &trace)?;
            if let Some(coords) = &built.coords {
                write_csv(&out_dir.join("plot.csv"), coords, &trace.sets, g.n())?;
            }
            let final_set = trace.sets.last().unwrap().clone();
            let iterations = trace.converged_at;
            metrics.insert(
                "iterations_to_stationary".into(),
                serde_json::json!(iterations),
            );
            metrics.insert("final_set_size".into(), final_set.len().into());
            checks.push(Check {
                name: "reaches_stationary_state".into(),
                pass: iterations.is_some(),
                detail: format!("iterations = {:?}", iterations),
            });
            if let (GraphSpec::Torus { n1, n2, .. }, Some(expect)) = (&manifest.graph, expect_strip)
            {
                let is_strip = generators::is_vertical_strip(*n1, *n2, &final_set);
                metrics.insert("final_is_strip".into(), is_strip.into());
                checks.push(Check {
                    name: "final_shape".into(),
                    pass: is_strip == *expect,
                    detail: format!("strip = {is_strip}, expected {expect}"),
                });
                for stat_tau in strip_stationary_taus {
                    let next = mbo_step(g, &final_set, *stat_tau);
                    checks.push(Check {
                        name: format!("final_stationary_at_tau_{stat_tau}"),
                        pass: next == final_set,
                        detail: format!("one step at tau = {stat_tau}"),
                    });
                }
            }
            if let Some(expect) = expected_iterations {
                let ok = iterations
                    .map(|k| k.abs_diff(*expect) <= *iteration_slack)
                    .unwrap_or(false);
                checks.push(Check {
                    name: "iterations_near_expected".into(),
                    pass: ok,
                    detail: format!(
                        "got {:?}, expected {expect} ± {iteration_slack}",
                        iterations
                    ),
                });
            }
        }

        MethodSpec::BuckyballRegimes {
            pinned_target,
            trivial_target,
            threshold_slack,
            tau_rho_4dp,
            tau_t_sq_4dp,
            lambda2,
            lambda_n,
            spectrum_tol,
        } => {
            let decomp = eigendecompose(g)?;
            checks.push(Check {
                name: "lambda2_matches".into(),
                pass: (decomp.eigenvalues[1] - lambda2).abs() <= *spectrum_tol,
                detail: format!("lambda2 = {:.6}", decomp.eigenvalues[1]),
            });
            checks.push(Check {
                name: "lambda_n_matches".into(),
                pass: (decomp.rho - lambda_n).abs() <= *spectrum_tol,
                detail: format!("lambda_n = {:.6}", decomp.rho),
            });
            let bounds = gmcf_core::mbo::tau_bounds_with(g, &decomp, &s0)?;
            let round4 = |x: f64| (x * 1e4).round() / 1e4;
            metrics.insert("tau_rho".into(), bounds.tau_rho.into());
            metrics.insert("tau_t".into(), bounds.tau_t.into());
            metrics.insert("tau_t_sq".into(), bounds.tau_t_sq.into());
            checks.push(Check {
                name: "tau_rho_matches_4dp".into(),
                pass: round4(bounds.tau_rho) == *tau_rho_4dp,
                detail: format!("tau_rho = {:.6}", bounds.tau_rho),
            });
            checks.push(Check {
                name: "tau_t_sq_matches_4dp".into(),
                pass: round4(bounds.tau_t_sq) == *tau_t_sq_4dp,
                detail: format!("tau_t_sq = {:.6}", bounds.tau_t_sq),
            });

            let heat = HeatPropagator::Spectral(g, &decomp);
            let pinned_at = |tau: f64| gmcf_core::mbo::mbo_step_with(&heat, &s0, tau) == s0;
            let trivial_at = |tau: f64| {
                let next = gmcf_core::mbo::mbo_step_with(&heat, &s0, tau);
                next.is_empty() || next.len() == g.n()
            };
            let bisect = |mut lo: f64, mut hi: f64, pred: &dyn Fn(f64) -> bool| {
                // pred holds at lo, fails at hi
                for _ in 0..40 {
                    let mid = 0.5 * (lo + hi);
                    if pred(mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            };
            let pinned_threshold = bisect(0.05, 8.0, &pinned_at);
            let trivial_threshold = bisect(8.0, 0.05, &|t: f64| trivial_at(t));
            metrics.insert("pinned_threshold".into(), pinned_threshold.into());
            metrics.insert("trivial_threshold".into(), trivial_threshold.into());
            checks.push(Check {
                name: "pinned_threshold_near_published".into(),
                pass: (pinned_threshold - pinned_target).abs() <= *threshold_slack,
                detail: format!("{pinned_threshold:.3} vs {pinned_target} ± {threshold_slack}"),
            });
            checks.push(Check {
                name: "trivial_threshold_near_published".into(),
                pass: (trivial_threshold - trivial_target).abs() <= *threshold_slack,
                detail: format!("{trivial_threshold:.3} vs {trivial_target} ± {threshold_slack}"),
            });
            // between the regimes the iterates shrink to the empty set over
            // several iterations
            let mid = 0.5 * (pinned_threshold + trivial_threshold);
            let trace = gmcf_core::mbo::mbo_run_with(&heat, &s0, &MboParams::new(mid, 100))?;
            let shrink_ok = trace.sets.last().unwrap().is_empty() && trace.sets.len() > 2;
            checks.push(Check {
                name: "intermediate_regime_shrinks_to_empty".into(),
                pass: shrink_ok,
                detail: format!(
                    "tau = {mid:.3}: sizes {:?}",
                    trace.sets.iter().map(|s| s.len()).collect::<Vec<_>>()
                ),
            });
            let t2 = gmcf_core::mbo::mbo_run_with(&heat, &s0, &MboParams::new(2.0, 100))?;
            metrics.insert("tau2_iterations".into(), serde_json::json!(t2.converged_at));
            checks.push(Check {
                name: "tau2_reaches_steady_state_quickly".into(),
                pass: t2.sets.last().unwrap().is_empty()
                    && t2.converged_at.map(|k| k <= 5).unwrap_or(false),
                detail: format!(
                    "tau = 2: sizes {:?}",
                    t2.sets.iter().map(|s| s.len()).collect::<Vec<_>>()
                ),
            });
            write_trace(&out_dir.join("trace.jsonl"), g, &t2)?;
        }

        MethodSpec::MoonsClustering {
            tau,
            max_iter,
            min_purity,
        } => {
            let truth = built.truth.as_ref().expect("moons ground truth");
            let trace = mbo_run(g, &s0, &MboParams::new(*tau, *max_iter))?;
            write_trace(&out_dir.join("trace.jsonl"), g, &trace)?;
            if let Some(coords) = &built.coords {
                write_csv(&out_dir.join("plot.csv"), coords, &trace.sets, g.n())?;
            }
            let final_set = trace.sets.last().unwrap();
            let sm = final_set.mask(g.n());
            let tm = truth.mask(g.n());
            let agree = (0..g.n()).filter(|&i| sm[i] == tm[i]).count();
            let purity = agree.max(g.n() - agree) as f64 / g.n() as f64;
            metrics.insert("purity".into(), purity.into());
            metrics.insert(
                "iterations_to_stationary".into(),
                serde_json::json!(trace.converged_at),
            );
            checks.push(Check {
                name: "converges_within_iteration_budget".into(),
                pass: trace.converged_at.is_some(),
                detail: format!("iterations = {:?}", trace.converged_at),
            });
            checks.push(Check {
                name: "purity_above_threshold".into(),
                pass: purity >= *min_purity,
                detail: format!("purity = {purity:.4} (threshold {min_purity})"),
            });
        }
    }

    let summary = Summary {
        name: manifest.name.clone(),
        seed: manifest.seed,
        metrics,
        checks,
    };
    std::fs::write(
        out_dir.join("summary.json"),
        serde_json::to_string(&summary)?,
    )?;
    Ok(summary)
}
