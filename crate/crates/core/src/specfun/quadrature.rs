use twofloat::TwoFloat;

use super::gamma::lgamma;
use super::jacobi::orthonormal_coeffs_dd;
use crate::dd;
use crate::error::{Error, Result};

const QL_TOL: f64 = 1e-14;
const QL_MAX_SWEEPS: usize = 50;
const NEWTON_STEPS: usize = 4;

/// Gauss rule for the weight `(1-x)^alpha (1+x)^beta` on `(-1, 1)`.
///
/// Nodes and weights are kept as double-double pairs; `nodes()` and
/// `weights()` return the leading parts.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    alpha: f64,
    beta: f64,
    nodes: Vec<f64>,
    nodes_lo: Vec<f64>,
    weights: Vec<f64>,
    weights_lo: Vec<f64>,
}

impl QuadratureRule {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub(crate) fn node_dd(&self, j: usize) -> TwoFloat {
        TwoFloat::new_add(self.nodes[j], self.nodes_lo[j])
    }

    pub(crate) fn weight_dd(&self, j: usize) -> TwoFloat {
        TwoFloat::new_add(self.weights[j], self.weights_lo[j])
    }

    /// `sum_j w_j f(x_j)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Total mass `2^(a+b+1) Gamma(a+1) Gamma(b+1) / Gamma(a+b+2)`.
pub fn weight_mass(alpha: f64, beta: f64) -> f64 {
    let s = alpha + beta;
    ((s + 1.0) * std::f64::consts::LN_2 + lgamma(alpha + 1.0) + lgamma(beta + 1.0) - lgamma(s + 2.0)).exp()
}

/// `n_nodes`-point Gauss–Jacobi rule.
///
/// Golub–Welsch on the orthonormal recurrence, followed by Newton refinement
/// of the nodes and Christoffel-function weights, both in double-double.
pub fn gauss_jacobi_rule(alpha: f64, beta: f64, n_nodes: usize) -> Result<QuadratureRule> {
    if n_nodes == 0 {
        return Err(Error::Domain("a quadrature rule needs at least one node".into()));
    }
    if !(alpha.is_finite() && beta.is_finite() && alpha > -1.0 && beta > -1.0) {
        return Err(Error::Domain(format!("weight exponents must exceed -1, got ({alpha}, {beta})")));
    }
    let (a_dd, b_dd) = orthonormal_coeffs_dd(alpha, beta, n_nodes);
    let mut d: Vec<f64> = a_dd.iter().map(|&v| f64::from(v)).collect();
    let mut e: Vec<f64> = b_dd.iter().map(|&v| f64::from(v)).collect();
    e.push(0.0);
    let mut z = vec![0.0; n_nodes];
    z[0] = 1.0;
    tridiagonal_ql(&mut d, &mut e, &mut z)?;

    let mut order: Vec<usize> = (0..n_nodes).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));

    let mass = weight_mass(alpha, beta);
    let p0 = dd::recip(TwoFloat::from(mass).sqrt());
    let mut rule = QuadratureRule {
        alpha,
        beta,
        nodes: Vec::with_capacity(n_nodes),
        nodes_lo: Vec::with_capacity(n_nodes),
        weights: Vec::with_capacity(n_nodes),
        weights_lo: Vec::with_capacity(n_nodes),
    };
    for &i in &order {
        let x = newton_polish(TwoFloat::from(d[i]), &a_dd, &b_dd);
        let w = christoffel_weight(x, p0, &a_dd, &b_dd);
        rule.nodes.push(x.hi());
        rule.nodes_lo.push(x.lo());
        rule.weights.push(w.hi());
        rule.weights_lo.push(w.lo());
    }
    let ordered = rule.nodes.windows(2).all(|p| p[0] < p[1]);
    let interior = rule.nodes.iter().all(|&x| x > -1.0 && x < 1.0);
    let positive = rule.weights.iter().all(|&w| w > 0.0);
    if !(ordered && interior && positive) {
        return Err(Error::NoConvergence(format!(
            "Gauss-Jacobi rule ({alpha}, {beta}, {n_nodes}) failed validation"
        )));
    }
    Ok(rule)
}

/// Eigenvalues of the symmetric tridiagonal matrix `(d, e)` by implicit QL.
/// `z` carries the first row of the eigenvector matrix.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= QL_TOL * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > QL_MAX_SWEEPS {
                return Err(Error::NoConvergence(format!(
                    "tridiagonal QL exceeded {QL_MAX_SWEEPS} sweeps at eigenvalue {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Unnormalised `b_Q p_Q(x)` and its derivative.
fn top_polynomial(x: TwoFloat, a: &[TwoFloat], b: &[TwoFloat]) -> (TwoFloat, TwoFloat) {
    let zero = TwoFloat::from(0.0);
    let (mut p_prev, mut p) = (zero, TwoFloat::from(1.0));
    let (mut dp_prev, mut dp) = (zero, zero);
    for n in 0..a.len() {
        let bn = if n == 0 { zero } else { b[n - 1] };
        let mut next = (x - a[n]) * p - bn * p_prev;
        let mut dnext = p + (x - a[n]) * dp - bn * dp_prev;
        if n + 1 < a.len() {
            next = dd::div(next, b[n]);
            dnext = dd::div(dnext, b[n]);
        }
        p_prev = p;
        p = next;
        dp_prev = dp;
        dp = dnext;
    }
    (p, dp)
}

fn newton_polish(mut x: TwoFloat, a: &[TwoFloat], b: &[TwoFloat]) -> TwoFloat {
    for _ in 0..NEWTON_STEPS {
        let (p, dp) = top_polynomial(x, a, b);
        if dp == TwoFloat::from(0.0) {
            break;
        }
        let step = dd::div(p, dp);
        x -= step;
        if step.hi().abs() <= 1e-32 * (1.0 + x.hi().abs()) {
            break;
        }
    }
    x
}

/// `1 / sum_k p_k(x)^2` over the orthonormal polynomials of degree below Q.
fn christoffel_weight(x: TwoFloat, p0: TwoFloat, a: &[TwoFloat], b: &[TwoFloat]) -> TwoFloat {
    let zero = TwoFloat::from(0.0);
    let (mut p_prev, mut p) = (zero, p0);
    let mut sum = p0 * p0;
    for n in 0..a.len() - 1 {
        let bn = if n == 0 { zero } else { b[n - 1] };
        let next = dd::div((x - a[n]) * p - bn * p_prev, b[n]);
        sum += next * next;
        p_prev = p;
        p = next;
    }
    dd::recip(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn moments(alpha: f64, beta: f64, kmax: usize) -> Vec<f64> {
        // Integration by parts against (1-x)^(a+1) (1+x)^(b+1).
        let s = alpha + beta;
        let mut m = vec![weight_mass(alpha, beta)];
        m.push((beta - alpha) * m[0] / (s + 2.0));
        for k in 1..kmax {
            let kf = k as f64;
            let next = (kf * m[k - 1] + (beta - alpha) * m[k]) / (kf + s + 2.0);
            m.push(next);
        }
        m
    }

    #[test]
    fn single_node_examples() {
        let r = gauss_jacobi_rule(0.0, 0.0, 1).unwrap();
        assert!(r.nodes()[0].abs() < 1e-16);
        assert!((r.weights()[0] - 2.0).abs() < 1e-15);
        let r = gauss_jacobi_rule(2.0, 2.0, 1).unwrap();
        assert!(r.nodes()[0].abs() < 1e-16);
        assert!((r.weights()[0] - 16.0 / 15.0).abs() < 1e-15);
        let r = gauss_jacobi_rule(1.0, 0.0, 1).unwrap();
        assert!((r.nodes()[0] + 1.0 / 3.0).abs() < 1e-16);
        assert!((r.weights()[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(gauss_jacobi_rule(0.0, 0.0, 0), Err(Error::Domain(_))));
        assert!(matches!(gauss_jacobi_rule(-1.0, 0.0, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn legendre_three_point() {
        let r = gauss_jacobi_rule(0.0, 0.0, 3).unwrap();
        let x = (0.6f64).sqrt();
        let want = [(-x, 5.0 / 9.0), (0.0, 8.0 / 9.0), (x, 5.0 / 9.0)];
        for (j, (xn, wn)) in want.iter().enumerate() {
            assert!((r.nodes()[j] - xn).abs() < 1e-15);
            assert!((r.weights()[j] - wn).abs() < 1e-15);
        }
    }

    #[test]
    fn monomials_are_exact() {
        for &(a, b) in &[(0.0, 0.0), (0.5, 0.5), (1.0, 3.0), (-0.5, 2.0), (4.0, -0.7)] {
            for q in [1usize, 2, 5, 12, 30] {
                let rule = gauss_jacobi_rule(a, b, q).unwrap();
                let m = moments(a, b, 2 * q);
                for k in 0..2 * q {
                    let got = rule.integrate(|x| x.powi(k as i32));
                    let scale = rule.integrate(|x| x.abs().powi(k as i32));
                    assert!(
                        (got - m[k]).abs() <= 1e-12 * scale.max(m[k].abs()),
                        "({a},{b}) q={q} k={k}: {got} vs {}",
                        m[k]
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn rule_invariants(a in -0.95f64..5.0, b in -0.95f64..5.0, q in 1usize..80) {
            let rule = gauss_jacobi_rule(a, b, q).unwrap();
            prop_assert!(rule.nodes().windows(2).all(|p| p[0] < p[1]));
            prop_assert!(rule.nodes().iter().all(|&x| x > -1.0 && x < 1.0));
            prop_assert!(rule.weights().iter().all(|&w| w > 0.0));
            let total: f64 = rule.weights().iter().sum();
            let mass = weight_mass(a, b);
            prop_assert!((total - mass).abs() <= 1e-12 * mass);
        }
    }
}
