use clap::{Args, ValueEnum};
use ssdiff::jacobidiff::build;
use ssdiff::spectral::{CayleyStepper, CoeffVector, DiffusionStepper};

use crate::output::{csv_row, float, Sink};
use crate::{check_size, usage, Common, SourceArg, Status};

/// Largest tolerated change of the norm over a Cayley run.
const DRIFT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Implicit Euler for `u_t = u_xx`.
    Diffusion,
    /// Crank-Nicolson (Cayley) for `u_t = u_x`.
    Advection,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[command(flatten)]
    common: Common,
    /// Number of W-function modes.
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    dt: f64,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = SourceArg::Generators)]
    source: SourceArg,
    /// Number of equispaced points in [-0.9, 0.9] at which u is sampled.
    #[arg(long, default_value_t = 0)]
    grid: usize,
    /// Initial condition: the unit coefficient vector of this mode.
    #[arg(long, default_value_t = 0)]
    mode: usize,
}

enum Stepper {
    Diffusion(DiffusionStepper),
    Advection(CayleyStepper),
}

impl Stepper {
    fn step(&self, u: &CoeffVector) -> ssdiff::error::Result<CoeffVector> {
        match self {
            Self::Diffusion(s) => s.step(u),
            Self::Advection(s) => s.step(u),
        }
    }
}

fn grid_points(k: usize) -> Vec<f64> {
    match k {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..k).map(|i| -0.9 + 1.8 * i as f64 / (k - 1) as f64).collect(),
    }
}

pub fn run(args: &DemoArgs) -> anyhow::Result<Status> {
    let params = args.common.params()?;
    check_size(args.n)?;
    if !(args.dt.is_finite() && args.dt > 0.0) {
        return Err(usage(format!("invalid --dt {}: dt must be > 0", args.dt)));
    }
    if args.mode >= args.n {
        return Err(usage(format!("invalid --mode {}: mode must be < n = {}", args.mode, args.n)));
    }
    let b = build(&params, args.n, args.source.into())?;
    let stepper = match args.kind {
        Kind::Diffusion => Stepper::Diffusion(DiffusionStepper::new(&b, args.dt)?),
        Kind::Advection => Stepper::Advection(CayleyStepper::new(&b, args.dt)?),
    };
    let xs = grid_points(args.grid);

    let mut sink = Sink::open(args.common.out.as_deref())?;
    let header = ["step", "t", "l2_norm"].map(String::from).into_iter();
    csv_row(sink.writer(), header.chain(xs.iter().map(|x| format!("u({x:.4})"))))?;

    let mut u = CoeffVector::unit(params, args.n, args.mode)?;
    let initial = u.norm();
    let mut monotone = true;
    let mut drift = 0.0f64;
    for k in 0..=args.steps {
        if k > 0 {
            let prev = u.norm();
            u = stepper.step(&u)?;
            monotone &= u.norm() <= prev;
            drift = drift.max((u.norm() - initial).abs());
        }
        let mut row = vec![k.to_string(), float(k as f64 * args.dt), float(u.norm())];
        for &x in &xs {
            row.push(float(u.reconstruct(x)?));
        }
        csv_row(sink.writer(), row)?;
    }

    let (ok, verdict) = match args.kind {
        Kind::Diffusion => (
            monotone,
            format!(
                "diffusion: l2 norm {} over {} steps",
                if monotone { "non-increasing" } else { "increased" },
                args.steps
            ),
        ),
        Kind::Advection => (
            drift <= DRIFT_TOL,
            format!(
                "advection: max |norm drift| = {drift:.3e} over {} steps (tolerance {DRIFT_TOL:.0e})",
                args.steps
            ),
        ),
    };
    let status = if ok { "PASS" } else { "FAIL" };
    sink.finish_with(&format!("final l2 norm {:.16e}; {verdict}: {status}", u.norm()))?;
    Ok(if ok { Status::Pass } else { Status::Fail })
}
