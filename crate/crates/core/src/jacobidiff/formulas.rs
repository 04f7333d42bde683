//! Closed-form ingredients: normalisation, boundary column, closed-form
//! entries, rank-2 generators and the hypergeometric boundedness sums.

use twofloat::TwoFloat;

use crate::dd;
use crate::error::{Error, Result};
use crate::specfun::{hyper_pfq_at, lgamma, lgamma_diff, JacobiParams};

const LN_2: f64 = std::f64::consts::LN_2;

/// `kappa_n` such that `kappa_n P_n` is orthonormal for the Jacobi weight.
///
/// `kappa_0` comes from log-gamma; higher indices multiply in the rational
/// ratios `kappa_k^2 / kappa_{k-1}^2` in double-double, which avoids the
/// absolute error of log-gamma at large arguments.
pub fn kappa(params: &JacobiParams, n: usize) -> f64 {
    kappa_table(params, n + 1)[n]
}

/// `kappa_0, ..., kappa_{len-1}`.
pub fn kappa_table(params: &JacobiParams, len: usize) -> Vec<f64> {
    let (a, b) = (params.alpha, params.beta);
    let s = a + b;
    let log_sq0 = lgamma(s + 2.0) - lgamma(a + 1.0) - lgamma(b + 1.0) - (s + 1.0) * LN_2;
    let mut sq = TwoFloat::from(log_sq0.exp());
    let mut out = Vec::with_capacity(len);
    for k in 0..len {
        if k > 0 {
            let kf = TwoFloat::from(k as f64);
            let t = kf * 2.0 + s;
            sq = dd::div(sq * (t + 1.0) * kf * (kf + s), (t - 1.0) * (kf + a) * (kf + b));
        }
        out.push(f64::from(sq.sqrt()));
    }
    out
}

/// `(t_m, s_m)`: the integrals of `P_m` against the weights with one
/// exponent lowered by one (`alpha` for `t`, `beta` for `s`).
pub fn t_s_integrals(params: &JacobiParams, m: usize) -> (f64, f64) {
    let (a, b) = (params.alpha, params.beta);
    let s = a + b;
    let mf = m as f64;
    let t = (s * LN_2 + lgamma(a) + lgamma_diff(mf + b + 1.0, mf + s + 1.0)).exp();
    let sm = (s * LN_2 + lgamma(b) + lgamma_diff(mf + a + 1.0, mf + s + 1.0)).exp();
    (t, if m.is_multiple_of(2) { sm } else { -sm })
}

/// Entry `(m, 0)` of the pre-differentiation matrix, `m >= 1`.
///
/// Evaluated from the Pochhammer form and cross-checked against
/// `(alpha/2) t_m - (beta/2) s_m`.
pub fn dtilde_first_column(params: &JacobiParams, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("the boundary column starts at m = 1".into()));
    }
    let (a, b) = (params.alpha, params.beta);
    let s = a + b;
    let mf = m as f64;
    let log_front = (s - 1.0) * LN_2;
    // 2^(s-1) Gamma(a+1) Gamma(b+1) / Gamma(s+m+1) * (b+1)_m, and the alpha twin.
    let up = (log_front + lgamma(a + 1.0) + lgamma_diff(mf + b + 1.0, mf + s + 1.0)).exp();
    let down = (log_front + lgamma(b + 1.0) + lgamma_diff(mf + a + 1.0, mf + s + 1.0)).exp();
    let value = if m.is_multiple_of(2) { up - down } else { up + down };

    let (t, sm) = t_s_integrals(params, m);
    let (x, y) = (0.5 * a * t, 0.5 * b * sm);
    let other = x - y;
    let scale = x.abs() + y.abs();
    if (value - other).abs() > 1e-12 * scale {
        return Err(Error::Consistency(format!("boundary column m={m}: {value:e} vs {other:e}")));
    }
    Ok(value)
}

/// Coefficients of `(x/2) P_n = c_n P_{n-1} + d_n P_n + e_n P_{n+1}`.
pub fn recurrence_coeffs(params: &JacobiParams, n: usize) -> (f64, f64, f64) {
    let (a, b) = (params.alpha, params.beta);
    let nf = n as f64;
    let t = 2.0 * nf + a + b;
    let c = (nf + a) * (nf + b) / (t * (t + 1.0));
    let d = -0.5 * (a * a - b * b) / (t * (t + 2.0));
    let e = (nf + 1.0) * (nf + a + b + 1.0) / ((t + 1.0) * (t + 2.0));
    (c, d, e)
}

/// Recurrence coefficients for indices `0..len`.
#[derive(Debug, Clone)]
pub struct RecurrenceCoeffs {
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    pub e: Vec<f64>,
}

impl RecurrenceCoeffs {
    pub fn new(params: &JacobiParams, len: usize) -> Self {
        let mut out = Self { c: vec![], d: vec![], e: vec![] };
        for n in 0..len {
            let (c, d, e) = recurrence_coeffs(params, n);
            out.c.push(c);
            out.d.push(d);
            out.e.push(e);
        }
        out
    }
}

/// Unsigned closed form for `lo < hi`, equal to the lower-triangle entry
/// `(hi, lo)` up to the calibrated sign.
pub(crate) fn closed_form_raw(params: &JacobiParams, lo: usize, hi: usize) -> f64 {
    let (a, b) = (params.alpha, params.beta);
    let s = a + b;
    let (m, n) = (lo as f64, hi as f64);
    let log_front = lgamma_diff(n + 1.0, n + s + 1.0) - lgamma_diff(m + 1.0, m + s + 1.0)
        + (2.0 * n + s + 1.0).ln()
        + (2.0 * m + s + 1.0).ln();
    let front = 0.25 * (0.5 * log_front).exp();
    let log_ratio = lgamma_diff(m + a + 1.0, m + b + 1.0) - lgamma_diff(n + a + 1.0, n + b + 1.0);
    let ratio = (0.5 * log_ratio).exp();
    let bracket = if (hi - lo).is_multiple_of(2) { ratio - ratio.recip() } else { ratio + ratio.recip() };
    front * bracket
}

/// The four generator entries `(a1, b1, a2, b2)` at index `k`, before
/// orientation calibration.
pub(crate) fn generator_terms(params: &JacobiParams, k: usize) -> (f64, f64, f64, f64) {
    let (a, b) = (params.alpha, params.beta);
    let s = a + b;
    let kf = k as f64;
    let width = (2.0 * kf + s + 1.0).ln();
    let ab = lgamma_diff(kf + a + 1.0, kf + b + 1.0);
    let left = lgamma_diff(kf + s + 1.0, kf + 1.0);
    let a1 = 0.5 * (0.5 * (width - ab + left)).exp();
    let b1 = 0.5 * (0.5 * (width + ab - left)).exp();
    let a2 = 0.5 * (0.5 * (width + ab + left)).exp();
    let b2 = 0.5 * (0.5 * (width - ab - left)).exp();
    let odd = k % 2 == 1;
    (if odd { a1 } else { -a1 }, if odd { -b1 } else { b1 }, a2, b2)
}

/// The three boundedness sums of the right generators, by two routes.
///
/// The sums are taken over the generators rescaled by `1/sqrt(n!)`; with the
/// orthonormal scaling the series diverge whenever `beta <= 1`, reflecting
/// that the differentiation operator is unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundednessSums {
    pub b1_b1: f64,
    pub b1_b2: f64,
    pub b2_b2: f64,
    /// The same sums by direct partial summation.
    pub direct: [f64; 3],
    /// Largest relative disagreement between the two routes.
    pub max_rel_diff: f64,
}

pub fn boundedness_sums(params: &JacobiParams) -> Result<BoundednessSums> {
    let (a, b) = (params.alpha, params.beta);
    let s = a + b;
    let f = |num: &[f64], den: &[f64], z: f64| hyper_pfq_at(num, den, z);
    let square = |p: f64, q: f64| -> Result<f64> {
        let first = 0.25
            * (s + 1.0)
            * (lgamma(p + 1.0) - lgamma(q + 1.0) - lgamma(s + 1.0)).exp()
            * f(&[1.0, p + 1.0], &[q + 1.0, s + 1.0], 1.0)?;
        let second = 0.5
            * (lgamma(p + 2.0) - lgamma(q + 2.0) - lgamma(s + 2.0)).exp()
            * f(&[2.0, p + 2.0], &[q + 2.0, s + 2.0], 1.0)?;
        Ok(first + second)
    };
    let b1_b1 = square(a, b)?;
    let b2_b2 = square(b, a)?;
    let b1_b2 = 0.25 * (s + 1.0) * (-lgamma(s + 1.0)).exp() * f(&[1.0], &[s + 1.0], -1.0)?
        - 0.5 * (-lgamma(s + 2.0)).exp() * f(&[2.0], &[s + 2.0], -1.0)?;

    let mut direct = [0.0f64; 3];
    let mut converged = false;
    for k in 0..10_000usize {
        let (_, b1, _, b2) = generator_terms(params, k);
        let unscale = (-0.5 * lgamma(k as f64 + 1.0)).exp();
        let (u, v) = (b1 * unscale, b2 * unscale);
        let terms = [u * u, u * v, v * v];
        for (acc, t) in direct.iter_mut().zip(terms) {
            *acc += t;
        }
        if k > 4 && terms.iter().zip(&direct).all(|(t, acc)| t.abs() < 1e-14 * acc.abs()) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("boundedness partial sums did not settle".into()));
    }
    let closed = [b1_b1, b1_b2, b2_b2];
    let max_rel_diff = closed
        .iter()
        .zip(&direct)
        .map(|(x, y)| (x - y).abs() / x.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    if max_rel_diff.is_nan() || max_rel_diff > 1e-8 || closed.iter().any(|x| !x.is_finite()) {
        return Err(Error::Consistency(format!(
            "boundedness sums disagree: closed {closed:?}, direct {direct:?}"
        )));
    }
    Ok(BoundednessSums { b1_b1, b1_b2, b2_b2, direct, max_rel_diff })
}
