use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod render;

#[derive(Parser, Debug)]
#[command(name = "plmorse", version, about = "Discrete and piecewise-linear Morse theory on cell complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the Morse, generic and tame conditions and ∂² = 0.
    Validate(Common),
    /// Make a generic Morse function tame without changing its critical cells.
    Tameify(Common),
    /// Critical cells and exceptional pairs.
    Critical(Common),
    /// The discrete gradient vector field.
    GradientField(Common),
    /// Critical cells, ∂̃ and Morse homology.
    MorseComplex(Common),
    /// Barycentric subdivision with the piecewise-linear function.
    Subdivide(Common),
    /// Sample 2-plane sections and check that every angle is acute.
    AuditMetric {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Family::SplitFaces)]
        family: Family,
    },
    /// In-flow and out-flow facets of every simplex of X₁.
    Flows(Common),
    /// PL gradient trajectories between critical vertices.
    Trajectories(Common),
    /// The PL Morse complex d_PL and its homology.
    PlComplex {
        #[command(flatten)]
        common: Common,
        /// Use the reversed flow (-f, dual grading).
        #[arg(long)]
        reversed: bool,
    },
    /// Unstable complexes of critical vertices.
    Unstable(Common),
    /// Stable complexes of critical vertices.
    Stable(Common),
    /// tameify, ∂̃, subdivision, d_PL and homology with all comparisons.
    Pipeline(Common),
    /// Cellular homology of the complex.
    Homology(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Complex file: {"cells": [...]} or {"simplices": [...]}.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    pub complex: Option<PathBuf>,
    /// Builtin complex: point, interval, circle_3, sphere_1..4, torus_7, klein_bottle, rp2_6.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Morse function file: {"values": {"cell": "p/q", ...}}.
    #[arg(long, conflicts_with = "random_morse")]
    pub morse: Option<PathBuf>,
    /// Random generic Morse function from --seed (the default without --morse).
    #[arg(long)]
    pub random_morse: bool,
    /// Metric file: {"default": "equilateral"} or {"grams": {...}}.
    #[arg(long)]
    pub metric: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Source critical cell.
    #[arg(long)]
    pub from: Option<String>,
    /// Target critical cell.
    #[arg(long)]
    pub to: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Dot,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    SplitFaces,
    Chords,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, result) = match &cli.command {
        Command::Validate(c) => (c, commands::validate(c)),
        Command::Tameify(c) => (c, commands::tameify(c)),
        Command::Critical(c) => (c, commands::critical(c)),
        Command::GradientField(c) => (c, commands::gradient_field(c)),
        Command::MorseComplex(c) => (c, commands::morse_complex(c)),
        Command::Subdivide(c) => (c, commands::subdivide(c)),
        Command::AuditMetric { common, family } => (common, commands::audit_metric(common, *family)),
        Command::Flows(c) => (c, commands::flows(c)),
        Command::Trajectories(c) => (c, commands::trajectories(c)),
        Command::PlComplex { common, reversed } => (common, commands::pl_complex(common, *reversed)),
        Command::Unstable(c) => (c, commands::swept(c, false)),
        Command::Stable(c) => (c, commands::swept(c, true)),
        Command::Pipeline(c) => (c, commands::pipeline(c)),
        Command::Homology(c) => (c, commands::homology(c)),
    };
    match result.and_then(|report| commands::emit(common, &report).map(|_| report.passed)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
