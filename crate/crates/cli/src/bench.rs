use std::hint::black_box;
use std::time::Instant;

use clap::Args;
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ssdiff::jacobidiff::generators;
use ssdiff::semisep::{StructuredLu, DEFAULT_DENSE_CAP};

use crate::output::{csv_row, float, Sink};
use crate::{usage, Common, Status};

const REPS: usize = 10;
/// Sizes whose successive time ratios `--assert-linear` checks.
const ASSERT_RANGE: (usize, usize) = (1 << 14, 1 << 16);
const RATIO_BOUNDS: (f64, f64) = (1.5, 3.0);

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    common: Common,
    /// Smallest size (a power of two).
    #[arg(long, default_value_t = 4096)]
    min_n: usize,
    /// Largest size (a power of two).
    #[arg(long, default_value_t = 65536)]
    max_n: usize,
    /// Fail unless each doubling between 2^14 and 2^16 costs 1.5x to 3x.
    #[arg(long)]
    assert_linear: bool,
}

fn median_ns<F: FnMut()>(mut f: F) -> f64 {
    let mut t: Vec<f64> = (0..REPS)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_nanos() as f64
        })
        .collect();
    t.sort_by(f64::total_cmp);
    0.5 * (t[REPS / 2 - 1] + t[REPS / 2])
}

struct Row {
    op: &'static str,
    n: usize,
    median_ns: f64,
    dense_median_ns: Option<f64>,
    checksum: f64,
}

fn sizes(min: usize, max: usize) -> anyhow::Result<Vec<usize>> {
    if !min.is_power_of_two() || !max.is_power_of_two() || min < 2 || min > max {
        return Err(usage(format!(
            "invalid --min-n {min} / --max-n {max}: need powers of two with 2 <= min-n <= max-n"
        )));
    }
    Ok(std::iter::successors(Some(min), |&n| (n < max).then_some(2 * n)).collect())
}

pub fn run(args: &BenchArgs) -> anyhow::Result<Status> {
    let params = args.common.params()?;
    let sizes = sizes(args.min_n, args.max_n)?;
    if args.assert_linear && (args.min_n > ASSERT_RANGE.0 || args.max_n < ASSERT_RANGE.1) {
        return Err(usage("--assert-linear needs --min-n <= 16384 and --max-n >= 65536"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.common.seed);
    let mut rows = Vec::new();
    for &n in &sizes {
        let g = generators(&params, n)?.expand();
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();

        let y = g.matvec(&v)?;
        let dense_median_ns = if n <= DEFAULT_DENSE_CAP {
            let dense = g.to_dense()?;
            let x = DVector::from_column_slice(&v);
            Some(median_ns(|| {
                black_box(&dense * &x);
            }))
        } else {
            None
        };
        let median = median_ns(|| {
            black_box(g.matvec(&v).expect("sizes match"));
        });
        rows.push(Row { op: "matvec", n, median_ns: median, dense_median_ns, checksum: y.iter().sum() });

        let x = StructuredLu::new(&g, 1.0)?.solve(&v)?;
        let median = median_ns(|| {
            let lu = StructuredLu::new(&g, 1.0).expect("factorization succeeded once");
            black_box(lu.solve(&v).expect("sizes match"));
        });
        rows.push(Row { op: "solve", n, median_ns: median, dense_median_ns: None, checksum: x.iter().sum() });
    }

    let mut sink = Sink::open(args.common.out.as_deref())?;
    csv_row(
        sink.writer(),
        ["op", "n", "median_ns", "ratio_vs_prev", "dense_median_ns", "checksum"].map(String::from),
    )?;
    let mut linear = true;
    let mut offenders = Vec::new();
    for op in ["matvec", "solve"] {
        let series: Vec<&Row> = rows.iter().filter(|r| r.op == op).collect();
        for (i, r) in series.iter().enumerate() {
            let ratio = (i > 0).then(|| r.median_ns / series[i - 1].median_ns);
            if let Some(q) = ratio {
                let checked = series[i - 1].n >= ASSERT_RANGE.0 && r.n <= ASSERT_RANGE.1;
                if checked && !(RATIO_BOUNDS.0..=RATIO_BOUNDS.1).contains(&q) {
                    linear = false;
                    offenders.push(format!("{op} {} -> {}: {q:.2}", series[i - 1].n, r.n));
                }
            }
            csv_row(
                sink.writer(),
                [
                    r.op.to_string(),
                    r.n.to_string(),
                    format!("{:.0}", r.median_ns),
                    ratio.map(|q| format!("{q:.3}")).unwrap_or_default(),
                    r.dense_median_ns.map(|t| format!("{t:.0}")).unwrap_or_default(),
                    float(r.checksum),
                ],
            )?;
        }
    }
    if !args.assert_linear {
        sink.finish_with(&format!("timed {} sizes, {REPS} repetitions each", sizes.len()))?;
        Ok(Status::Pass)
    } else if linear {
        sink.finish_with("linear scaling holds")?;
        Ok(Status::Pass)
    } else {
        sink.finish_with(&format!("linear scaling violated: {}", offenders.join(", ")))?;
        Ok(Status::Fail)
    }
}
