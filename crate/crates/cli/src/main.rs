//! `ising-geometry`: figure data and verification for the all-range Ising
//! spin-1/2 system.
//!
//! Exit codes: 0 success, 1 validation error, 2 verification failure,
//! 3 I/O error.

mod angles;
mod commands;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    ClassifyTopologyArgs, CurvatureProfileArgs, EntVsCurvatureArgs, EntanglementCurveArgs,
    MetricArgs, VerifyArgs,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] ising_geometry::Error),
    #[error("verification failed: first failing check `{0}`")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Core(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ising-geometry",
    version,
    about = "Entanglement and quantum geometry of the all-range Ising model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Geometric entanglement E(chi) for several polar angles.
    EntanglementCurve(EntanglementCurveArgs),
    /// Scalar curvature R(theta) for several spin counts.
    CurvatureProfile(CurvatureProfileArgs),
    /// Entanglement as a function of scalar curvature.
    EntVsCurvature(EntVsCurvatureArgs),
    /// Fubini-Study metric components along theta.
    Metric(MetricArgs),
    /// Topology of the state manifold, as JSON on standard output.
    ClassifyTopology(ClassifyTopologyArgs),
    /// Runs the invariant and oracle suite; prints a JSON report.
    Verify(VerifyArgs),
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::EntanglementCurve(a) => commands::entanglement_curve(a),
        Command::CurvatureProfile(a) => commands::curvature_profile(a),
        Command::EntVsCurvature(a) => commands::ent_vs_curvature(a),
        Command::Metric(a) => commands::metric(a),
        Command::ClassifyTopology(a) => commands::classify(a),
        Command::Verify(a) => commands::verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own exit code 2 would collide with verification failure.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
