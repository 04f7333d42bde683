use twofloat::TwoFloat;

use crate::dd;
use crate::error::{Error, Result};

/// Below this both log-gamma values are small enough to subtract directly.
const DIRECT_BELOW: f64 = 8.0;

/// Natural log of the gamma function for `z > 0`.
pub fn log_gamma(z: f64) -> Result<f64> {
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::Domain(format!("log_gamma requires finite z > 0, got {z}")));
    }
    Ok(lgamma(z))
}

/// Unchecked variant for callers that have already validated `z > 0`.
#[inline]
pub(crate) fn lgamma(z: f64) -> f64 {
    debug_assert!(z > 0.0);
    libm::lgamma(z)
}

/// `ln Gamma(x) - ln Gamma(y)` for `x, y > 0`, accurate to a few ulps of the
/// difference rather than of the individual log-gamma values.
pub(crate) fn lgamma_diff(x: f64, y: f64) -> f64 {
    debug_assert!(x > 0.0 && y > 0.0);
    if x == y {
        return 0.0;
    }
    if x.max(y) < DIRECT_BELOW {
        return lgamma(x) - lgamma(y);
    }
    const FLOOR: f64 = 20.0;
    let (mut x, mut y) = (x, y);
    let (mut num, mut den) = (TwoFloat::from(1.0), TwoFloat::from(1.0));
    while x < FLOOR || y < FLOOR {
        num *= y;
        den *= x;
        x += 1.0;
        y += 1.0;
    }
    let shift = dd::div(num, den);
    let d = x - y;
    let stirling = (y - 0.5) * (d / y).ln_1p() + d * x.ln() - d + tail(x) - tail(y);
    shift.hi().ln() + shift.lo() / shift.hi() + stirling
}

/// Stirling correction `ln Gamma(z) - [(z - 1/2) ln z - z + ln(2 pi)/2]` for `z >= 20`.
fn tail(z: f64) -> f64 {
    let inv = z.recip();
    let inv2 = inv * inv;
    inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

/// Rising factorial `z (z+1) ... (z+m-1)`; equals 1 when `m == 0`.
pub fn pochhammer(z: f64, m: usize) -> f64 {
    (0..m).fold(1.0, |acc, k| acc * (z + k as f64))
}
