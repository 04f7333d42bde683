use std::path::PathBuf;

use clap::Args;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use ssdiff::jacobidiff::{boundedness_sums, build, generators, Source};
use ssdiff::semisep::{product, product_rank1, product_rank1_variant, SemiSepGenerators, TailVariant};
use ssdiff::specfun::JacobiParams;

use crate::output::Sink;
use crate::{usage, Common, Status};

/// Largest size accepted; the quadrature oracle grows cubically.
const MAX_VERIFY_N: usize = 256;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Matrix size N.
    #[arg(long, default_value_t = 32)]
    n: usize,
    /// Generator JSON (as written by `gen --source generators --format json`)
    /// to compare against the generator route.
    #[arg(long)]
    against: Option<PathBuf>,
}

struct Check {
    name: &'static str,
    max_error: Option<f64>,
    tolerance: f64,
}

impl Check {
    fn new(name: &'static str, max_error: f64, tolerance: f64) -> Self {
        Self { name, max_error: Some(max_error), tolerance }
    }

    fn broken(name: &'static str, tolerance: f64) -> Self {
        Self { name, max_error: None, tolerance }
    }

    fn pass(&self) -> bool {
        self.max_error.is_some_and(|e| e <= self.tolerance)
    }
}

/// Largest `sigma_{r+1} / sigma_1` over the maximal upper blocks
/// `rows 0..=k, cols k+1..n`, which contain every other upper block.
fn upper_rank_defect(d: &DMatrix<f64>, r: usize) -> f64 {
    let n = d.nrows();
    let mut worst = 0.0f64;
    for k in r..n.saturating_sub(r + 1) {
        let block = d.view((0, k + 1), (k + 1, n - k - 1)).clone_owned();
        let mut sv: Vec<f64> = block.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        if sv[0] > 0.0 {
            worst = worst.max(sv[r] / sv[0]);
        }
    }
    worst
}

fn random_rank1(rng: &mut ChaCha8Rng, n: usize) -> anyhow::Result<SemiSepGenerators> {
    let mut v = || (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>();
    let (a, b, c, d, e) = (v(), v(), v(), v(), v());
    Ok(SemiSepGenerators::new(vec![a], vec![b], c, vec![d], vec![e])?)
}

fn rank1_checks(seed: u64) -> anyhow::Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut ts, mut qp) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let n = rng.gen_range(2..=64);
        let ga = random_rank1(&mut rng, n)?;
        let gb = random_rank1(&mut rng, n)?;
        let want = ga.to_dense()? * gb.to_dense()?;
        let scale = want.amax().max(1.0);
        ts = ts.max((product_rank1(&ga, &gb)?.to_dense()? - &want).amax() / scale);
        let alt = product_rank1_variant(&ga, &gb, TailVariant::SuffixQP)?;
        qp = qp.max((alt.to_dense()? - &want).amax() / scale);
    }
    Ok((ts, qp))
}

fn against_file(path: &PathBuf, params: &JacobiParams, n: usize) -> Check {
    const TOL: f64 = 1e-11;
    let Ok(text) = std::fs::read_to_string(path) else {
        return Check::broken("against_file", TOL);
    };
    let Ok(g) = SemiSepGenerators::from_json(&text) else {
        return Check::broken("against_file", TOL);
    };
    if g.size() != n {
        return Check::broken("against_file", TOL);
    }
    let reference = build(params, n, Source::Generators).and_then(|b| b.to_dense());
    match (g.to_dense(), reference) {
        (Ok(x), Ok(y)) => Check::new("against_file", (x - y).amax(), TOL),
        _ => Check::broken("against_file", TOL),
    }
}

fn symmetric_part(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub fn run(args: &VerifyArgs) -> anyhow::Result<Status> {
    let params = args.common.params()?;
    let n = args.n;
    if n == 0 || n > MAX_VERIFY_N {
        return Err(usage(format!("invalid --n {n}: verify needs 1 <= n <= {MAX_VERIFY_N}")));
    }
    let mut checks = Vec::new();
    let mut notes = Vec::new();

    let dense: Vec<DMatrix<f64>> =
        Source::ALL.iter().map(|&s| build(&params, n, s)?.to_dense()).collect::<Result<_, _>>()?;
    let mut agree = 0.0f64;
    for i in 0..dense.len() {
        for j in i + 1..dense.len() {
            agree = agree.max((&dense[i] - &dense[j]).amax());
        }
    }
    checks.push(Check::new("four_route_agreement", agree, 1e-11));

    let skew = dense.iter().map(|d| (d + d.transpose()).amax()).fold(0.0, f64::max);
    checks.push(Check::new("skew_symmetry", skew, 1e-12));

    let d = &dense[0];
    if params.alpha == params.beta {
        let mut worst = 0.0f64;
        for m in 0..n {
            for k in (m % 2..n).step_by(2) {
                worst = worst.max(d[(m, k)].abs());
            }
        }
        checks.push(Check::new("parity", worst, 1e-12));
    }

    checks.push(Check::new("upper_rank_2", upper_rank_defect(d, 2), 1e-10));

    let g = generators(&params, n)?.expand();
    let sq = product(&g, &g)?;
    let d2 = d * d;
    let scale = d2.amax().max(f64::MIN_POSITIVE);
    checks.push(Check::new("square_product", (sq.to_dense()? - &d2).amax() / scale, 1e-11));
    checks.push(Check::new("square_upper_rank_4", upper_rank_defect(&d2, 4), 1e-10));

    let norm2 = d.norm().powi(2).max(f64::MIN_POSITIVE);
    let top = SymmetricEigen::new(symmetric_part(&d2)).eigenvalues.max();
    checks.push(Check::new("square_nsd", (top / norm2).max(0.0), 1e-10));
    let d4 = &d2 * &d2;
    let bottom = SymmetricEigen::new(symmetric_part(&d4)).eigenvalues.min();
    checks.push(Check::new("fourth_power_psd", (-bottom / (norm2 * norm2)).max(0.0), 1e-10));

    let (ts, qp) = rank1_checks(args.common.seed)?;
    checks.push(Check::new("rank1_products", ts, 1e-12));
    notes.push(format!(
        "rank-1 products use the tail t_n * sum_(k>n) b_k s_k; \
         the alternative q_n * sum_(k>n) b_k p_k misses the dense product by {qp:.3e}"
    ));

    match boundedness_sums(&params) {
        Ok(s) => checks.push(Check::new("boundedness_sums", s.max_rel_diff, 1e-8)),
        Err(e) => {
            notes.push(format!("boundedness sums: {e}"));
            checks.push(Check::broken("boundedness_sums", 1e-8));
        }
    }

    if let Some(path) = &args.against {
        let check = against_file(path, &params, n);
        if check.max_error.is_none() {
            notes.push(format!("{} could not be read as size-{n} generators", path.display()));
        }
        checks.push(check);
    }

    let mut table = Map::new();
    for c in &checks {
        table.insert(
            c.name.to_string(),
            json!({ "max_error": c.max_error, "tolerance": c.tolerance, "pass": c.pass() }),
        );
    }
    let all_pass = checks.iter().all(Check::pass);
    let report = json!({
        "schema_version": 1,
        "alpha": params.alpha,
        "beta": params.beta,
        "n": n,
        "seed": args.common.seed,
        "pass": all_pass,
        "checks": Value::Object(table),
        "notes": notes,
    });
    let mut sink = Sink::open(args.common.out.as_deref())?;
    writeln!(sink.writer(), "{}", serde_json::to_string_pretty(&report)?)?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass()).map(|c| c.name).collect();
    let summary = if failed.is_empty() {
        format!("all {} checks passed", checks.len())
    } else {
        format!("failed checks: {}", failed.join(", "))
    };
    sink.finish_with(&summary)?;
    Ok(if all_pass { Status::Pass } else { Status::Fail })
}
