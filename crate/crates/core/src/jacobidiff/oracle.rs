use std::collections::HashMap;

use twofloat::TwoFloat;

use super::formulas::kappa_table;
use crate::error::{Error, Result};
use crate::specfun::{gauss_jacobi_rule, jacobi_all_dd, JacobiParams, QuadratureRule};

/// `-(1/2) int w' P_m P_n` by Gauss quadrature, using
/// `w' = -alpha w_(alpha-1, beta) + beta w_(alpha, beta-1)`.
///
/// Rules and polynomial tables are cached per rule size.
pub struct QuadratureOracle {
    params: JacobiParams,
    kappa: Vec<f64>,
    cache: HashMap<usize, Tables>,
}

struct Tables {
    low_alpha: (QuadratureRule, Vec<Vec<TwoFloat>>),
    low_beta: (QuadratureRule, Vec<Vec<TwoFloat>>),
}

impl QuadratureOracle {
    pub fn new(params: JacobiParams) -> Self {
        Self { params, kappa: vec![], cache: HashMap::new() }
    }

    fn tables(&mut self, size: usize, degree: usize) -> Result<&Tables> {
        let (a, b) = (self.params.alpha, self.params.beta);
        let stale = self.cache.get(&size).is_some_and(|t| t.low_alpha.1[0].len() <= degree);
        if stale || !self.cache.contains_key(&size) {
            let build = |ra: f64, rb: f64| -> Result<(QuadratureRule, Vec<Vec<TwoFloat>>)> {
                let rule = gauss_jacobi_rule(ra, rb, size)?;
                let polys = (0..size).map(|j| jacobi_all_dd(a, b, degree, rule.node_dd(j))).collect();
                Ok((rule, polys))
            };
            let tables = Tables { low_alpha: build(a - 1.0, b)?, low_beta: build(a, b - 1.0)? };
            self.cache.insert(size, tables);
        }
        Ok(&self.cache[&size])
    }

    /// Pre-differentiation entry for `m > n` with a rule of `rule_size` nodes.
    pub fn dtilde(&mut self, m: usize, n: usize, rule_size: usize) -> Result<TwoFloat> {
        if m <= n {
            return Err(Error::Domain(format!("oracle entries need m > n, got ({m}, {n})")));
        }
        if 2 * rule_size < m + n + 2 {
            return Err(Error::Domain(format!("a {rule_size}-point rule cannot integrate degree {}", m + n)));
        }
        let (a, b) = (self.params.alpha, self.params.beta);
        let t = self.tables(rule_size, m)?;
        let integrate = |(rule, polys): &(QuadratureRule, Vec<Vec<TwoFloat>>)| {
            let mut acc = TwoFloat::from(0.0);
            for (j, p) in polys.iter().enumerate() {
                acc += rule.weight_dd(j) * p[m] * p[n];
            }
            acc
        };
        let i1 = integrate(&t.low_alpha);
        let i2 = integrate(&t.low_beta);
        Ok((TwoFloat::from(a) * i1 - TwoFloat::from(b) * i2) * 0.5)
    }

    /// Normalised entry `D[m][n]`, `m > n`.
    pub fn entry(&mut self, m: usize, n: usize, rule_size: usize) -> Result<f64> {
        let raw = self.dtilde(m, n, rule_size)?;
        if self.kappa.len() <= m {
            self.kappa = kappa_table(&self.params, 2 * m + 2);
        }
        Ok(self.kappa[m] * self.kappa[n] * raw.hi())
    }
}

/// Single oracle entry `D[m][n]` for `m >= n + 1`.
pub fn oracle_entry(params: &JacobiParams, m: usize, n: usize, rule_size: usize) -> Result<f64> {
    QuadratureOracle::new(*params).entry(m, n, rule_size)
}

impl QuadratureOracle {
    /// Strict lower triangle of `D_N`, each entry with `m + n + 2` nodes.
    pub fn lower_triangle(&mut self, size: usize) -> Result<super::TriangleMatrix> {
        let mut out = super::TriangleMatrix::zeros(size);
        for q in 3..2 * size {
            self.tables(q, q - 2)?;
            let deg = q - 2;
            for m in (deg / 2 + 1)..=deg.min(size.saturating_sub(1)) {
                out.set(m, deg - m, self.entry(m, deg - m, q)?);
            }
            self.cache.remove(&q);
        }
        Ok(out)
    }
}
