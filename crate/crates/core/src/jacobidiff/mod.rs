//! The differentiation matrix of Jacobi W-functions.
//!
//! `D[m][n] = <phi_m', phi_n>` is skew-symmetric with zero diagonal. For
//! `m > n` it equals `kappa_m kappa_n X[m][n]` where `X[m][n] = -(1/2) int w' P_m P_n`
//! is the pre-differentiation matrix. Four independent routes build `D_N`:
//!
//! * closed form (gamma-function expression per entry),
//! * recurrence (boundary column plus the bilateral recurrence),
//! * quadrature oracle (Gauss–Jacobi integration of the defining integral),
//! * rank-2 generators.
//!
//! The closed form and generators are oriented against the boundary column
//! at `(1, 0)`; see [`Orientation`].

mod formulas;
mod oracle;
mod recurrence;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use formulas::{
    boundedness_sums, dtilde_first_column, kappa, kappa_table, recurrence_coeffs, t_s_integrals,
    BoundednessSums, RecurrenceCoeffs,
};
pub use oracle::{oracle_entry, QuadratureOracle};
pub use recurrence::dtilde_lower_triangle;

use crate::error::{Error, Result};
use crate::semisep::{SemiSepGenerators, SkewGeneratorPair, DEFAULT_DENSE_CAP};
use crate::specfun::JacobiParams;

/// Construction route for `D_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    ClosedForm,
    Recurrence,
    QuadratureOracle,
    Generators,
}

impl Source {
    pub const ALL: [Source; 4] =
        [Source::ClosedForm, Source::Recurrence, Source::QuadratureOracle, Source::Generators];

    pub fn name(&self) -> &'static str {
        match self {
            Source::ClosedForm => "closed_form",
            Source::Recurrence => "recurrence",
            Source::QuadratureOracle => "quadrature_oracle",
            Source::Generators => "generators",
        }
    }
}

/// Signs applied to the closed form and to the generators so that they agree
/// with the boundary-column entry `D[1][0]`.
///
/// The unsigned closed form `F(lo, hi)` and the raw generator products
/// `a(lo) . b(hi)` both describe the lower-triangle entry `D[hi][lo]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Orientation {
    /// `D[hi][lo] = closed_form_sign * F(lo, hi)`.
    pub closed_form_sign: f64,
    /// Whether the right generators were negated.
    pub generators_flipped: bool,
}

/// Orientation relative to the boundary-column reference `D[1][0]`.
pub fn orientation(params: &JacobiParams) -> Result<Orientation> {
    let reference = kappa(params, 1) * kappa(params, 0) * dtilde_first_column(params, 1)?;
    let raw = formulas::closed_form_raw(params, 0, 1);
    let (a1, _, a2, _) = formulas::generator_terms(params, 0);
    let (_, b1, _, b2) = formulas::generator_terms(params, 1);
    // Upper generator products must reproduce D[0][1] = -D[1][0].
    let upper = a1 * b1 + a2 * b2;
    Ok(Orientation {
        closed_form_sign: if (raw > 0.0) == (reference > 0.0) { 1.0 } else { -1.0 },
        generators_flipped: (upper > 0.0) == (reference > 0.0),
    })
}

/// Entry `D[m][n]` of the closed form, `m != n`.
pub fn d_entry_closed_form(params: &JacobiParams, m: usize, n: usize) -> Result<f64> {
    if m == n {
        return Err(Error::Domain("the diagonal of D is identically zero".into()));
    }
    let sign = orientation(params)?.closed_form_sign;
    Ok(closed_form_oriented(params, sign, m, n))
}

fn closed_form_oriented(params: &JacobiParams, sign: f64, m: usize, n: usize) -> f64 {
    let lower = sign * formulas::closed_form_raw(params, m.min(n), m.max(n));
    if m > n {
        lower
    } else {
        -lower
    }
}

/// Rank-2 skew generators of `D_N`.
pub fn generators(params: &JacobiParams, n: usize) -> Result<SkewGeneratorPair> {
    if n == 0 {
        return Err(Error::Domain("size must be positive".into()));
    }
    let flip = if orientation(params)?.generators_flipped { -1.0 } else { 1.0 };
    let mut a = vec![vec![0.0; n]; 2];
    let mut b = vec![vec![0.0; n]; 2];
    for k in 0..n {
        let (a1, b1, a2, b2) = formulas::generator_terms(params, k);
        a[0][k] = a1;
        a[1][k] = a2;
        b[0][k] = flip * b1;
        b[1][k] = flip * b2;
    }
    SkewGeneratorPair::new(n, a, b)
}

/// Strictly lower triangle of a skew-symmetric matrix, packed by rows.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMatrix {
    n: usize,
    data: Vec<f64>,
}

impl TriangleMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n.saturating_sub(1) / 2] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn index(m: usize, n: usize) -> usize {
        m * (m - 1) / 2 + n
    }

    /// Stored value at `(m, n)`, `m > n`.
    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.data[Self::index(m, n)]
    }

    pub fn set(&mut self, m: usize, n: usize, v: f64) {
        self.data[Self::index(m, n)] = v;
    }

    /// Value of the skew-symmetric completion at any `(m, n)`.
    pub fn skew_entry(&self, m: usize, n: usize) -> f64 {
        use std::cmp::Ordering::*;
        match m.cmp(&n) {
            Greater => self.get(m, n),
            Equal => 0.0,
            Less => -self.get(n, m),
        }
    }
}

/// Storage of a build.
#[derive(Debug, Clone)]
pub enum BuildData {
    Triangle(TriangleMatrix),
    Generators(SkewGeneratorPair),
}

/// `D_N` built by one of the four routes.
#[derive(Debug, Clone)]
pub struct DiffMatrixBuild {
    pub params: JacobiParams,
    pub n: usize,
    pub source: Source,
    pub orientation: Orientation,
    pub data: BuildData,
}

/// Builds `D_N` for the given route.
pub fn build(params: &JacobiParams, n: usize, source: Source) -> Result<DiffMatrixBuild> {
    if n == 0 {
        return Err(Error::Domain("size must be positive".into()));
    }
    let orientation = orientation(params)?;
    let data = match source {
        Source::ClosedForm => {
            let mut t = TriangleMatrix::zeros(n);
            for m in 1..n {
                for k in 0..m {
                    t.set(m, k, closed_form_oriented(params, orientation.closed_form_sign, m, k));
                }
            }
            BuildData::Triangle(t)
        }
        Source::Recurrence => {
            let mut t = dtilde_lower_triangle(params, n)?;
            let kap = kappa_table(params, n);
            for m in 1..n {
                for k in 0..m {
                    t.set(m, k, kap[m] * kap[k] * t.get(m, k));
                }
            }
            BuildData::Triangle(t)
        }
        Source::QuadratureOracle => BuildData::Triangle(QuadratureOracle::new(*params).lower_triangle(n)?),
        Source::Generators => BuildData::Generators(generators(params, n)?),
    };
    Ok(DiffMatrixBuild { params: *params, n, source, orientation, data })
}

impl DiffMatrixBuild {
    pub fn entry(&self, m: usize, n: usize) -> Result<f64> {
        if m >= self.n || n >= self.n {
            return Err(Error::Index { row: m, col: n, size: self.n });
        }
        Ok(match &self.data {
            BuildData::Triangle(t) => t.skew_entry(m, n),
            BuildData::Generators(g) => (0..g.rank())
                .map(|i| {
                    if m < n {
                        g.left()[i][m] * g.right()[i][n]
                    } else if m > n {
                        -(g.right()[i][m] * g.left()[i][n])
                    } else {
                        0.0
                    }
                })
                .sum(),
        })
    }

    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        if self.n > DEFAULT_DENSE_CAP {
            return Err(Error::DenseCap { n: self.n, cap: DEFAULT_DENSE_CAP });
        }
        match &self.data {
            BuildData::Triangle(t) => Ok(DMatrix::from_fn(self.n, self.n, |m, n| t.skew_entry(m, n))),
            BuildData::Generators(g) => g.expand().to_dense(),
        }
    }

    /// Full generators when the build carries them.
    pub fn semisep(&self) -> Option<SemiSepGenerators> {
        match &self.data {
            BuildData::Generators(g) => Some(g.expand()),
            BuildData::Triangle(_) => None,
        }
    }

    /// `D_N v`: `O(N)` for generator builds, `O(N^2)` otherwise.
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n {
            return Err(Error::Dimension { expected: self.n, got: v.len() });
        }
        match &self.data {
            BuildData::Generators(g) => g.expand().matvec(v),
            BuildData::Triangle(t) => {
                let mut out = vec![0.0; self.n];
                for m in 1..self.n {
                    for k in 0..m {
                        let x = t.get(m, k);
                        out[m] += x * v[k];
                        out[k] -= x * v[m];
                    }
                }
                Ok(out)
            }
        }
    }
}
