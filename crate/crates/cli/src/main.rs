//! Command-line front end: graph generation, spectra and bounds, set
//! geometry, the three evolutions (threshold dynamics, Allen-Cahn, mean
//! curvature flow), and canned reproduction experiments.
//!
//! Exit codes: 0 success / all checks pass, 1 check failure, 2 input error,
//! 3 internal error.

mod commands;
mod repro;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "gmcf",
    version,
    about = "Total variation, curvature, and interface dynamics on weighted graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an example graph (and optional layout / ground truth files).
    Gen(commands::GenArgs),
    /// Eigenvalues, spectral radius, and computable spectral bounds.
    Spectral(commands::SpectralArgs),
    /// Curvature, boundaries, interface, and signed distance of a node set.
    Geometry(commands::GeometryArgs),
    /// Threshold dynamics run with a JSON-lines trace.
    Mbo(commands::MboArgs),
    /// Allen-Cahn trajectory with a JSON-lines trace.
    Ac(commands::AcArgs),
    /// Discrete mean curvature flow via exact min-cut steps.
    Mcf(commands::McfArgs),
    /// Time-step and diffuse-scale bounds for a set or initial state.
    Bounds(commands::BoundsArgs),
    /// Run a canned experiment and compare against its expected outcomes.
    Repro(repro::ReproArgs),
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(args) => commands::gen(args),
        Command::Spectral(args) => commands::spectral(args),
        Command::Geometry(args) => commands::geometry(args),
        Command::Mbo(args) => commands::mbo(args),
        Command::Ac(args) => commands::ac(args),
        Command::Mcf(args) => commands::mcf(args),
        Command::Bounds(args) => commands::bounds(args),
        Command::Repro(args) => repro::run(args),
    };
    match outcome {
        Ok(true) => std::process::exit(0),
        Ok(false) => std::process::exit(1),
        Err(err) => {
            let code = exit_code(&err);
            println!(
                "{}",
                serde_json::json!({ "error": err.to_string(), "exit_code": code })
            );
            std::process::exit(code);
        }
    }
}

fn exit_code(err: &gmcf_core::Error) -> i32 {
    use gmcf_core::Error::*;
    match err {
        ConvergenceFailure | IntegratorFailure(_) => 3,
        _ => 2,
    }
}
