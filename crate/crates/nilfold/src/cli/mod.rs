//! Argument parsing, dispatch and exit-code policy.

mod commands;
mod export;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub use report::Report;

/// All checks passed.
pub const EXIT_OK: u8 = 0;
/// A numerical check failed or a computation did not converge.
pub const EXIT_NUMERIC: u8 = 2;
/// Bad flags or a violated precondition.
pub const EXIT_USAGE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "nilfold", version, about = "Splitting integrals and spectral checks for nilpotent unfoldings")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Absolute and relative integrator tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    /// Truncation time of the half-line integrals.
    #[arg(long = "t-cut", global = true, default_value_t = 20.0)]
    pub t_cut: f64,
    /// Truncation time of the homoclinic profile.
    #[arg(long = "T", global = true, default_value_t = 25.0)]
    pub t_end: f64,
    #[arg(long, global = true, default_value_t = 1.0, allow_hyphen_values = true)]
    pub kappa: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Half-line integrals of the Michelson adjoint basis.
    Table1,
    /// Tail bounds of the half-line integrals.
    Table2,
    /// Splitting matrix, tangent of the heteroclinic curve and genericity determinant.
    Het {
        /// Export the adjoint basis as CSV.
        #[arg(long = "adjoint-csv")]
        adjoint_csv: Option<PathBuf>,
    },
    /// Homoclinic profile, splitting gradient and rank checks.
    Hom4d {
        #[arg(long = "P", default_value_t = -2.0, allow_hyphen_values = true)]
        p: f64,
        /// Export the profile (t, u, u', u'', u''') as CSV.
        #[arg(long = "profile-csv")]
        profile_csv: Option<PathBuf>,
    },
    /// Canonical coordinates and energy conservation of the reversible family.
    Hamiltonian {
        #[arg(long)]
        n: usize,
        /// Defaults to the value that normalizes |ν| = 1.
        #[arg(long, allow_hyphen_values = true)]
        nu1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        nu3: Option<f64>,
        /// (ν₃, ν₅, …, ν_{n−1}); overrides --nu3.
        #[arg(long = "nu-odd", value_delimiter = ',', allow_hyphen_values = true)]
        nu_odd: Option<Vec<f64>>,
        /// Initial state; defaults to (0.3, 0.1, −0.2, 0.05, 0, …).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        y0: Option<Vec<f64>>,
        #[arg(long = "t-end", default_value_t = 10.0)]
        t_end: f64,
        /// The run stops once max |yᵢ| exceeds this.
        #[arg(long = "escape-radius", default_value_t = 10.0)]
        escape_radius: f64,
    },
    /// Spectral labels on the reversibility curve, in λ-space, or at the Michelson equilibria.
    Classify(ClassifyArgs),
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// ν₁ on the reversibility curve (requires --nu3).
    #[arg(long, requires = "nu3", allow_hyphen_values = true)]
    pub nu1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu3: Option<f64>,
    /// λ = (λ₁, λ₂, λ₃, λ₄) of the translated family.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambda: Option<Vec<f64>>,
    /// Scan the reversibility curve with this many points.
    #[arg(long)]
    pub scan: Option<usize>,
    /// Spectrum at the Michelson equilibria for speed c.
    #[arg(long = "michelson-c")]
    pub michelson_c: Option<f64>,
}

pub enum Outcome {
    Passed,
    Failed(Vec<String>),
}

/// Marks errors caused by the invocation rather than the numerics.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn exit_code(err: &anyhow::Error) -> u8 {
    use nilfold_core::Error as E;
    for cause in err.chain() {
        if cause.is::<UsageError>() || cause.is::<io::Error>() {
            return EXIT_USAGE;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::InvalidInput(_) | E::Precondition(_) | E::DimensionMismatch { .. } | E::Ambiguous(_) => EXIT_USAGE,
                _ => EXIT_NUMERIC,
            };
        }
    }
    EXIT_NUMERIC
}

pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let g = &cli.global;
    if !(g.tol > 0.0) {
        return Err(UsageError(format!("--tol must be positive, got {}", g.tol)).into());
    }
    let out = commands::dispatch(&cli.command, g)?;
    let mut sink: Box<dyn Write> = match &g.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match out {
        commands::Output::Report(r) => {
            report::render(&r, g.format, &mut sink)?;
            sink.flush()?;
            let failed = r.failed();
            Ok(if failed.is_empty() { Outcome::Passed } else { Outcome::Failed(failed) })
        }
        commands::Output::Scan(rows, r) => {
            if g.format == Format::Csv {
                export::write_scan(&rows, &mut sink)?;
            } else {
                report::render(&r, g.format, &mut sink)?;
            }
            sink.flush()?;
            Ok(Outcome::Passed)
        }
    }
}
