//! `ssdiff`: generate, verify, benchmark and demo the W-function
//! differentiation matrix.
//!
//! Exit codes: 0 success, 1 verification failure or runtime error,
//! 2 usage or configuration error.

mod bench;
mod demo;
mod gen;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ssdiff::jacobidiff::Source;
use ssdiff::specfun::JacobiParams;

#[derive(Debug, Parser)]
#[command(name = "ssdiff", version, about = "Semi-separable differentiation matrices of Jacobi W-functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write D_N as a dense CSV/JSON matrix or as generator JSON.
    Gen(gen::GenArgs),
    /// Cross-validate the constructions and write a JSON report.
    Verify(verify::VerifyArgs),
    /// Time matvec and structured solves for N = 2^12 .. 2^16.
    Bench(bench::BenchArgs),
    /// Run a diffusion or advection stepper and write the norm history.
    Demo(demo::DemoArgs),
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Jacobi exponent alpha (> 0).
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Jacobi exponent beta (> 0).
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub beta: f64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for randomized data.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    ClosedForm,
    Recurrence,
    Oracle,
    Generators,
}

impl From<SourceArg> for Source {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::ClosedForm => Source::ClosedForm,
            SourceArg::Recurrence => Source::Recurrence,
            SourceArg::Oracle => Source::QuadratureOracle,
            SourceArg::Generators => Source::Generators,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A configuration error, reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Whether a command's checks held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Common {
    pub fn params(&self) -> anyhow::Result<JacobiParams> {
        for (flag, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(usage(format!("invalid --{flag} {v}: {flag} must be > 0")));
            }
        }
        Ok(JacobiParams::new(self.alpha, self.beta)?)
    }
}

pub fn check_size(n: usize) -> anyhow::Result<()> {
    if n == 0 {
        return Err(usage("invalid --n 0: n must be >= 1"));
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    match cli.command {
        Command::Gen(args) => gen::run(&args),
        Command::Verify(args) => verify::run(&args),
        Command::Bench(args) => bench::run(&args),
        Command::Demo(args) => demo::run(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
