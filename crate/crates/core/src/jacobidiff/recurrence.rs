use twofloat::TwoFloat;

use super::formulas::RecurrenceCoeffs;
use super::TriangleMatrix;
use crate::dd;
use crate::error::Result;
use crate::specfun::lgamma;
use crate::specfun::JacobiParams;

/// Strict lower triangle of the pre-differentiation matrix by marching the
/// bilateral recurrence one column at a time.
///
/// Column `n + 1` is obtained from columns `n` and `n - 1`:
///
/// ```text
/// e_n X[m][n+1] = c_m X[m-1][n] + (d_m - d_n) X[m][n] + e_m X[m+1][n] - c_n X[m][n-1]
/// ```
///
/// Each step consumes one row of the previous column, so column 0 is seeded
/// from the boundary formula down to row `2N - 1`. Seeds and march run in
/// double-double arithmetic; the Pochhammer symbols of the boundary formula
/// are accumulated as running products.
pub fn dtilde_lower_triangle(params: &JacobiParams, n: usize) -> Result<TriangleMatrix> {
    let rows = 2 * n.max(1);
    let rc = RecurrenceCoeffs::new(params, rows);
    let dd = |v: f64| TwoFloat::from(v);
    let zero = dd(0.0);

    let mut prev = vec![zero; rows];
    let mut col = boundary_column(params, rows);
    let mut out = TriangleMatrix::zeros(n);
    let mut last = rows - 1;
    for k in 0..n {
        for m in k + 1..n {
            out.set(m, k, col[m].hi());
        }
        if k + 2 >= n {
            break;
        }
        let mut next = vec![zero; rows];
        let (ck, dk, ek) = (dd(rc.c[k]), dd(rc.d[k]), dd(rc.e[k]));
        for m in k + 2..last {
            let rhs = dd(rc.c[m]) * col[m - 1] + (dd(rc.d[m]) - dk) * col[m] + dd(rc.e[m]) * col[m + 1]
                - ck * prev[m];
            next[m] = dd::div(rhs, ek);
        }
        last -= 1;
        prev = std::mem::replace(&mut col, next);
    }
    Ok(out)
}

/// `X[m][0] = 2^(s-1) Gamma(a+1) Gamma(b+1) / Gamma(s+m+1) [(b+1)_m - (-1)^m (a+1)_m]`.
fn boundary_column(params: &JacobiParams, rows: usize) -> Vec<TwoFloat> {
    let (a, b) = (params.alpha, params.beta);
    let s = a + b;
    let front =
        ((s - 1.0) * std::f64::consts::LN_2 + lgamma(a + 1.0) + lgamma(b + 1.0) - lgamma(s + 1.0)).exp();
    let (mut up, mut down) = (TwoFloat::from(front), TwoFloat::from(front));
    let mut col = vec![TwoFloat::from(0.0); rows];
    for (m, slot) in col.iter_mut().enumerate().skip(1) {
        let mf = m as f64;
        let denom = TwoFloat::from(mf) + s;
        up = dd::div(up * (TwoFloat::from(mf) + b), denom);
        down = dd::div(down * (TwoFloat::from(mf) + a), denom);
        *slot = if m % 2 == 0 { up - down } else { up + down };
    }
    col
}
