use proptest::prelude::*;
use ssdiff::jacobidiff::kappa;
use ssdiff::specfun::{
    connection_check, gauss_jacobi_rule, jacobi_eval, jacobi_reflection_check, pochhammer, JacobiParams,
};

fn grid() -> impl Iterator<Item = f64> {
    (0..101).map(|i| -1.0 + 2.0 * i as f64 / 100.0)
}

#[test]
fn reflection_on_grid() {
    for (a, b) in [(-0.5, 0.3), (0.5, 2.0), (1.0, 1.0), (3.5, -0.9), (4.0, 0.5)] {
        for n in 0..=20 {
            for x in grid() {
                let (l, r) = jacobi_reflection_check(a, b, n, x).unwrap();
                assert!((l - r).abs() <= 1e-12 * l.abs().max(1.0), "a={a} b={b} n={n} x={x}");
            }
        }
    }
}

#[test]
fn connection_on_grid() {
    for a in [0.5, 1.0, 2.0, 4.0] {
        for b in [0.5, 1.0, 2.0, 4.0] {
            for n in 0..=20 {
                for x in grid() {
                    let (first, second) = connection_check(a, b, n, x).unwrap();
                    assert!(first <= 1e-12 && second <= 1e-12, "a={a} b={b} n={n} x={x}");
                }
            }
        }
    }
}

#[test]
fn gram_matrix_is_identity() {
    let n = 20;
    for (a, b) in [(0.5, 0.5), (2.0, 2.0), (4.0, 1.0), (1.5, 3.0)] {
        let params = JacobiParams::new(a, b).unwrap();
        let rule = gauss_jacobi_rule(a, b, n + 1).unwrap();
        for m in 0..=n {
            for k in 0..=m {
                let g = rule.integrate(|x| {
                    kappa(&params, m)
                        * jacobi_eval(a, b, m, x).unwrap()
                        * kappa(&params, k)
                        * jacobi_eval(a, b, k, x).unwrap()
                });
                let want = if m == k { 1.0 } else { 0.0 };
                assert!((g - want).abs() <= 1e-11, "a={a} b={b} ({m},{k}) {g}");
            }
        }
    }
}

proptest! {
    #[test]
    fn pochhammer_composes(z in 0.05f64..20.0, m in 0usize..=10, k in 0usize..=10) {
        let lhs = pochhammer(z, m) * pochhammer(z + m as f64, k);
        let rhs = pochhammer(z, m + k);
        prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs.abs());
    }
}
