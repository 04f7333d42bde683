use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::dd;
use crate::error::{Error, Result};

/// Exponents of the Jacobi weight `(1-x)^alpha (1+x)^beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiParams {
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParams {
    /// Both exponents must be finite and strictly positive.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Domain(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(Self { alpha, beta })
    }

    pub fn weight(&self, x: f64) -> f64 {
        (1.0 - x).powf(self.alpha) * (1.0 + x).powf(self.beta)
    }

    /// `sqrt(w(x))`, the envelope shared by every W-function.
    pub fn sqrt_weight(&self, x: f64) -> f64 {
        (1.0 - x).powf(0.5 * self.alpha) * (1.0 + x).powf(0.5 * self.beta)
    }
}

fn check_exponents(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha.is_finite() && beta.is_finite() && alpha > -1.0 && beta > -1.0) {
        return Err(Error::Domain(format!("Jacobi exponents must exceed -1, got ({alpha}, {beta})")));
    }
    Ok(())
}

/// `P_n^(alpha,beta)(x)` by the forward three-term recurrence.
pub fn jacobi_eval(alpha: f64, beta: f64, n: usize, x: f64) -> Result<f64> {
    check_exponents(alpha, beta)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    Ok(jacobi_all(alpha, beta, n, x)[n])
}

/// `P_0(x), ..., P_nmax(x)`.
pub(crate) fn jacobi_all(alpha: f64, beta: f64, nmax: usize, x: f64) -> Vec<f64> {
    let s = alpha + beta;
    let mut p = Vec::with_capacity(nmax + 1);
    p.push(1.0);
    if nmax == 0 {
        return p;
    }
    p.push(0.5 * ((s + 2.0) * x + alpha - beta));
    for n in 1..nmax {
        let nf = n as f64;
        let t = 2.0 * nf + s;
        let f = 2.0 * (nf + 1.0) * (nf + s + 1.0) / ((t + 1.0) * (t + 2.0));
        let g = (alpha * alpha - beta * beta) / (t * (t + 2.0));
        let h = 2.0 * (nf + alpha) * (nf + beta) / (t * (t + 1.0));
        let next = ((x + g) * p[n] - h * p[n - 1]) / f;
        p.push(next);
    }
    p
}

/// Double-double twin of `jacobi_all`; coefficients are formed in double-double too.
pub(crate) fn jacobi_all_dd(alpha: f64, beta: f64, nmax: usize, x: TwoFloat) -> Vec<TwoFloat> {
    let a = TwoFloat::from(alpha);
    let b = TwoFloat::from(beta);
    let s = a + b;
    let one = TwoFloat::from(1.0);
    let two = TwoFloat::from(2.0);
    let mut p = Vec::with_capacity(nmax + 1);
    p.push(one);
    if nmax == 0 {
        return p;
    }
    p.push(((s + two) * x + a - b) * 0.5);
    for n in 1..nmax {
        let nf = TwoFloat::from(n as f64);
        let t = two * nf + s;
        let f = dd::div(two * (nf + one) * (nf + s + one), (t + one) * (t + two));
        let g = dd::div(a * a - b * b, t * (t + two));
        let h = dd::div(two * (nf + a) * (nf + b), t * (t + one));
        let next = dd::div((x + g) * p[n] - h * p[n - 1], f);
        p.push(next);
    }
    p
}

/// Returns `(P_n^(a,b)(x), (-1)^n P_n^(b,a)(-x))`, which must coincide.
pub fn jacobi_reflection_check(alpha: f64, beta: f64, n: usize, x: f64) -> Result<(f64, f64)> {
    let lhs = jacobi_eval(alpha, beta, n, x)?;
    let rhs = jacobi_eval(beta, alpha, n, -x)?;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok((lhs, sign * rhs))
}

/// Relative residuals of the two connection identities that lower `beta`
/// (first) and `alpha` (second) by one.
///
/// Each residual is divided by the sum of the magnitudes of its terms.
pub fn connection_check(alpha: f64, beta: f64, n: usize, x: f64) -> Result<(f64, f64)> {
    check_exponents(alpha - 1.0, beta - 1.0)?;
    let s = alpha + beta;
    let nf = n as f64;
    let p = jacobi_all(alpha, beta, n, x);
    let pn = p[n];
    let pm = if n == 0 { 0.0 } else { p[n - 1] };
    let lower_b = jacobi_eval(alpha, beta - 1.0, n, x)?;
    let lower_a = jacobi_eval(alpha - 1.0, beta, n, x)?;
    let rel = |terms: [f64; 3]| {
        let scale: f64 = terms.iter().map(|t| t.abs()).sum();
        let sum: f64 = terms.iter().sum();
        if scale == 0.0 {
            0.0
        } else {
            sum.abs() / scale
        }
    };
    let first = rel([(2.0 * nf + s) * lower_b, -(nf + s) * pn, -(nf + alpha) * pm]);
    let second = rel([(2.0 * nf + s) * lower_a, -(nf + s) * pn, (nf + beta) * pm]);
    Ok((first, second))
}

/// Three-term recurrence of the orthonormal polynomials
/// `x p_n = b_{n+1} p_{n+1} + a_n p_n + b_n p_{n-1}`.
///
/// `a` holds `a_0..a_{n-1}` and `b` holds `b_1..b_{n-1}` (so `b[k]` is `b_{k+1}`).
#[derive(Debug, Clone)]
pub struct OrthonormalRecurrence {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl OrthonormalRecurrence {
    pub fn new(alpha: f64, beta: f64, n: usize) -> Result<Self> {
        check_exponents(alpha, beta)?;
        let (a, b) = orthonormal_coeffs_dd(alpha, beta, n);
        Ok(Self { a: a.into_iter().map(f64::from).collect(), b: b.into_iter().map(f64::from).collect() })
    }
}

/// Orthonormal recurrence coefficients in double-double.
pub(crate) fn orthonormal_coeffs_dd(alpha: f64, beta: f64, n: usize) -> (Vec<TwoFloat>, Vec<TwoFloat>) {
    let al = TwoFloat::from(alpha);
    let be = TwoFloat::from(beta);
    let s = al + be;
    let one = TwoFloat::from(1.0);
    let two = TwoFloat::from(2.0);
    let four = TwoFloat::from(4.0);
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        let kf = TwoFloat::from(k as f64);
        let t = two * kf + s;
        a.push(if k == 0 { dd::div(be - al, s + two) } else { dd::div(be * be - al * al, t * (t + two)) });
    }
    for k in 1..n {
        let kf = TwoFloat::from(k as f64);
        let t = two * kf + s;
        let sq = if k == 1 {
            dd::div(four * (one + al) * (one + be), (t * t) * (t + one))
        } else {
            dd::div(four * kf * (kf + al) * (kf + be) * (kf + s), (t * t) * (t + one) * (t - one))
        };
        b.push(sq.sqrt());
    }
    (a, b)
}
