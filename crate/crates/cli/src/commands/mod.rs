//! Subcommands. Each `run` returns the process exit code.

use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};
use mixknap_core::Rational;

pub mod bench;
pub mod fdi;
pub mod generate;
pub mod hull;
pub mod separate;
pub mod verify;

/// Exit code for a point inside the hull or a command without a verdict.
pub const EXIT_OK: i32 = 0;
/// Exit code of `verify` when some cut is invalid.
pub const EXIT_INVALID: i32 = 1;
/// Exit code for errors.
pub const EXIT_ERROR: i32 = 2;
/// Exit code of `separate` when a violated cut was found.
pub const EXIT_CUT: i32 = 10;

#[derive(Debug, Parser)]
#[command(name = "mixknap", version, about = "Cutting planes for the mixing set with a knapsack constraint")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random or pass-through instance file.
    Generate(generate::GenerateArgs),
    /// Separate a point (y*, z*) from the hull.
    Separate(separate::SeparateArgs),
    /// Build facet-defining inequalities.
    Fdi(fdi::FdiArgs),
    /// Check cuts against the coefficient polyhedron and the hull.
    Verify(verify::VerifyArgs),
    /// Enumerate hull points, test membership or sample inside points.
    Hull(hull::HullArgs),
    /// Time structured separation over a grid of sizes.
    Bench(bench::BenchArgs),
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Generate(args) => generate::run(&args),
        Command::Separate(args) => separate::run(&args),
        Command::Fdi(args) => fdi::run(&args),
        Command::Verify(args) => verify::run(&args),
        Command::Hull(args) => hull::run(&args),
        Command::Bench(args) => bench::run(&args),
    }
}

pub(crate) fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|e| e.to_string())
}

pub(crate) fn positive_usize(s: &str) -> std::result::Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

pub(crate) fn out_path(out: &Option<PathBuf>) -> Option<&std::path::Path> {
    out.as_deref()
}
