use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

mod commands;
mod input;
mod report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Check the building-set axioms.
    Validate,
    /// Structural predicates and the realizability decision.
    Analyze,
    /// List nested sets (all, or only maximal ones).
    Nested,
    /// Decide whether the removahedron realizes the nested fan.
    Realize,
    /// Realize the nested fan with the skew removahedron.
    Skew,
    /// Canonical Minkowski decomposition.
    Decompose,
    /// Cross-check everything against the brute-force oracle.
    Verify,
    /// Print the H- or V-representation.
    Export,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Hrep,
    Vrep,
}

/// Removahedra of building sets, in exact arithmetic.
///
/// INPUT is a JSON building set, an edge list with --graph, or a fixture
/// name (B0, B1, B2, B3, B4, B5', C4-C6, P3-P5; with --graph also Cn, Pn, Kn).
#[derive(Debug, Parser)]
#[command(name = "removahedra", version)]
pub struct Args {
    pub command: Command,
    /// Input file or fixture name; optional for `verify --seed`.
    pub input: Option<String>,
    /// Read INPUT as a graph edge list.
    #[arg(long)]
    pub graph: bool,
    /// Only maximal nested sets (`nested`).
    #[arg(long)]
    pub maximal: bool,
    /// Skew base P/Q, greater than 2 (`skew`, `verify`, `export`).
    #[arg(long, value_name = "P/Q")]
    pub gamma: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Report every failing flip instead of the first one.
    #[arg(long)]
    pub certificates: bool,
    /// Run the randomized suite with this seed (`verify`).
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match commands::run(&args) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.render(args.command, args.format).as_bytes());
            ExitCode::from(report.exit)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
