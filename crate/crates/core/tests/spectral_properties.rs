use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ssdiff::jacobidiff::{build, Source};
use ssdiff::specfun::{gauss_jacobi_rule, JacobiParams};
use ssdiff::spectral::{expand, wfun_eval, CayleyStepper, CoeffVector, DiffusionStepper, Route};

fn p(a: f64, b: f64) -> JacobiParams {
    JacobiParams::new(a, b).unwrap()
}

fn random(params: JacobiParams, n: usize, seed: u64) -> CoeffVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CoeffVector::new(params, (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

#[test]
fn plancherel_in_the_span() {
    let params = p(1.5, 2.5);
    let n = 24;
    let c = random(params, n, 1);
    let f = |x: f64| (0..n).map(|k| c.coeffs[k] * wfun_eval(&params, k, x).unwrap()).sum::<f64>();
    let u = expand(&params, f, n).unwrap();
    // int f^2 = int (f / sqrt w)^2 w, a polynomial integrand of degree 2n - 2.
    let rule = gauss_jacobi_rule(1.5, 2.5, n + 4).unwrap();
    let energy = rule.integrate(|x| (f(x) / params.sqrt_weight(x)).powi(2));
    assert!((u.norm().powi(2) - energy).abs() <= 1e-11 * energy.max(1.0));
}

#[test]
fn round_trip_at_chebyshev_points() {
    for (a, b) in [(2.0, 2.0), (0.5, 3.0)] {
        let params = p(a, b);
        let n = 16;
        let poly = |x: f64| 1.0 - 2.0 * x + 0.5 * x.powi(5) - 0.25 * x.powi(15);
        let f = |x: f64| params.sqrt_weight(x) * poly(x);
        let u = expand(&params, f, n).unwrap();
        for j in 0..33 {
            let x = (std::f64::consts::PI * (j as f64 + 0.5) / 33.0).cos();
            assert!((u.reconstruct(x).unwrap() - f(x)).abs() <= 1e-8, "x={x}");
        }
    }
}

#[test]
fn diffusion_energy_is_monotone() {
    let params = p(2.0, 2.0);
    let b = build(&params, 64, Source::Generators).unwrap();
    let stepper = DiffusionStepper::new(&b, 1e-2).unwrap();
    for seed in 0..20 {
        let mut u = random(params, 64, seed);
        let mut last = u.norm();
        for _ in 0..1000 {
            u = stepper.step(&u).unwrap();
            let now = u.norm();
            assert!(now <= last, "seed={seed}");
            last = now;
        }
    }
}

#[test]
fn cayley_conserves_norm_over_long_runs() {
    let params = p(4.0, 2.0);
    let b = build(&params, 64, Source::Generators).unwrap();
    let stepper = CayleyStepper::new(&b, 1e-2).unwrap();
    let mut u = random(params, 64, 77);
    let start = u.norm();
    for _ in 0..1000 {
        u = stepper.step(&u).unwrap();
    }
    assert!((u.norm() - start).abs() <= 1e-10);
}

#[test]
fn structured_and_dense_steppers_agree() {
    for n in [8, 64, 128] {
        let params = p(2.0, 2.0);
        let b = build(&params, n, Source::Generators).unwrap();
        let u0 = random(params, n, n as u64);
        let ds = DiffusionStepper::with_route(&b, 1e-2, Route::Structured).unwrap();
        let dd = DiffusionStepper::with_route(&b, 1e-2, Route::Dense).unwrap();
        let cs = CayleyStepper::with_route(&b, 1e-2, Route::Structured).unwrap();
        let cd = CayleyStepper::with_route(&b, 1e-2, Route::Dense).unwrap();
        let (mut a, mut b2, mut c, mut d) = (u0.clone(), u0.clone(), u0.clone(), u0);
        for _ in 0..20 {
            a = ds.step(&a).unwrap();
            b2 = dd.step(&b2).unwrap();
            c = cs.step(&c).unwrap();
            d = cd.step(&d).unwrap();
            for (x, y) in a.coeffs.iter().zip(&b2.coeffs).chain(c.coeffs.iter().zip(&d.coeffs)) {
                assert!((x - y).abs() <= 1e-9, "n={n}");
            }
        }
    }
}
