use crate::error::{Error, Result};

const MAX_TERMS: usize = 10_000;

/// Generalised hypergeometric series `pFq(num; den; z)` for `p <= q`.
///
/// Terms are summed until three consecutive terms fall below
/// `1e-16 * (1 + |partial sum|)`.
pub fn hyper_pfq_at(numerators: &[f64], denominators: &[f64], z: f64) -> Result<f64> {
    if numerators.len() > denominators.len() {
        return Err(Error::Unsupported(format!(
            "{}F{} diverges; only p <= q is supported",
            numerators.len(),
            denominators.len()
        )));
    }
    if let Some(d) = denominators.iter().find(|&&d| d <= 0.0 && d == d.round()) {
        return Err(Error::Domain(format!("denominator parameter {d} is a pole")));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let up: f64 = numerators.iter().map(|a| a + kf).product();
        let down: f64 = denominators.iter().map(|b| b + kf).product();
        term *= up / down * z / (kf + 1.0);
        sum += term;
        if term.abs() < 1e-16 * (1.0 + sum.abs()) {
            small += 1;
            if small == 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoConvergence(format!("hypergeometric series did not settle within {MAX_TERMS} terms")))
}
