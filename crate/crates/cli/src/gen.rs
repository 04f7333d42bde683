use clap::Args;
use serde_json::json;
use ssdiff::jacobidiff::{build, BuildData, DiffMatrixBuild};

use crate::output::{csv_row, float, Sink};
use crate::{check_size, Common, Format, SourceArg, Status};

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    common: Common,
    /// Matrix size N.
    #[arg(long, default_value_t = 32)]
    n: usize,
    #[arg(long, value_enum, default_value_t = SourceArg::ClosedForm)]
    source: SourceArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn skew_defect(b: &DiffMatrixBuild) -> anyhow::Result<f64> {
    let mut worst = 0.0f64;
    for m in 0..b.n {
        for k in 0..=m {
            worst = worst.max((b.entry(m, k)? + b.entry(k, m)?).abs());
        }
    }
    Ok(worst)
}

pub fn run(args: &GenArgs) -> anyhow::Result<Status> {
    let params = args.common.params()?;
    check_size(args.n)?;
    let b = build(&params, args.n, args.source.into())?;
    let mut sink = Sink::open(args.common.out.as_deref())?;
    match (args.format, &b.data) {
        (Format::Json, BuildData::Generators(_)) => {
            let g = b.semisep().expect("generator build");
            writeln!(sink.writer(), "{}", g.to_json())?;
        }
        (Format::Json, BuildData::Triangle(_)) => {
            let rows: Vec<Vec<f64>> =
                (0..b.n).map(|m| (0..b.n).map(|k| b.entry(m, k)).collect()).collect::<Result<_, _>>()?;
            let doc = json!({
                "alpha": params.alpha,
                "beta": params.beta,
                "n": b.n,
                "source": b.source.name(),
                "matrix": rows,
            });
            writeln!(sink.writer(), "{doc}")?;
        }
        (Format::Csv, _) => {
            csv_row(sink.writer(), (0..b.n).map(|k| format!("col{k}")))?;
            for m in 0..b.n {
                let row = (0..b.n).map(|k| b.entry(m, k).map(float)).collect::<Result<Vec<_>, _>>()?;
                csv_row(sink.writer(), row)?;
            }
        }
    }
    let defect = skew_defect(&b)?;
    sink.finish_with(&format!("skew defect max|D + D^T| = {defect:.3e} ({}, N = {})", b.source.name(), b.n))?;
    Ok(Status::Pass)
}
