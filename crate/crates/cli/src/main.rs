//! `twistalg`: batch checks on twisted groupoid algebras.
//!
//! Exit codes: 0 when every assertion holds, 1 when one fails, 2 on bad input.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "twistalg", version, about = "Check structure theorems on finite twisted groupoid algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Numerical tolerance for assertions.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tolerance: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a groupoid file and check the cocycle and twist axioms.
    Validate { file: PathBuf },
    /// Summarize a groupoid: orbits, isotropy, effectiveness, minimality.
    Info { file: PathBuf },
    /// Reduced norm of an element given by point-mass coefficients.
    Norm {
        file: PathBuf,
        /// Comma-separated `id=value` pairs, values like `1`, `-0.5`, `1+2i`.
        #[arg(long)]
        coeffs: String,
    },
    /// Wedderburn block sizes of the algebra.
    Blocks { file: PathBuf },
    /// Isometry and coset block structure of the isotropy embedding.
    EmbedCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// The quotient map onto the twisted group algebra at a unit.
    Quotient {
        file: PathBuf,
        #[arg(long)]
        unit: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Injectivity of a homomorphism versus injectivity on the isotropy.
    Uniqueness {
        file: PathBuf,
        #[arg(long)]
        hom: PathBuf,
    },
    /// Groupoid simplicity criterion against the block decomposition.
    Simplicity { file: PathBuf },
    /// State extension analysis for a subalgebra of a matrix algebra.
    States {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, default_value_t = 8)]
        probes: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = commands::Options {
        seed: cli.seed,
        tolerance: cli.tolerance,
    };
    let result = match &cli.command {
        Command::Validate { file } => commands::validate(file, &opts),
        Command::Info { file } => commands::info(file, &opts),
        Command::Norm { file, coeffs } => commands::norm(file, coeffs, &opts),
        Command::Blocks { file } => commands::blocks(file, &opts),
        Command::EmbedCheck { file, samples } => commands::embed_check(file, *samples, &opts),
        Command::Quotient { file, unit, samples } => commands::quotient(file, unit, *samples, &opts),
        Command::Uniqueness { file, hom } => commands::uniqueness(file, hom, &opts),
        Command::Simplicity { file } => commands::simplicity(file, &opts),
        Command::States { algebra, probes } => commands::states(algebra, *probes, &opts),
    };
    match result {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
                for a in report.failures() {
                    eprintln!("assertion failed: {}", a.name);
                }
            } else {
                println!("{}", report.to_text());
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
