use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest size `to_dense` materialises unless a cap is passed explicitly.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Generator representation of a semi-separably generated matrix.
///
/// Each of `a`, `b`, `d`, `e` holds `rank` vectors of length `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemiSepGenerators {
    n: usize,
    rank: usize,
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    c: Vec<f64>,
    d: Vec<Vec<f64>>,
    e: Vec<Vec<f64>>,
}

impl SemiSepGenerators {
    pub fn new(
        a: Vec<Vec<f64>>,
        b: Vec<Vec<f64>>,
        c: Vec<f64>,
        d: Vec<Vec<f64>>,
        e: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let g = Self { n: c.len(), rank: a.len(), a, b, c, d, e };
        g.validate()?;
        Ok(g)
    }

    /// Diagonal matrix with rank-0 generators.
    pub fn diagonal(c: Vec<f64>) -> Result<Self> {
        Self::new(vec![], vec![], c, vec![], vec![])
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(vec![1.0; n]).expect("unit diagonal is valid")
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Input("matrix size must be positive".into()));
        }
        for (name, family) in [("a", &self.a), ("b", &self.b), ("d", &self.d), ("e", &self.e)] {
            if family.len() != self.rank {
                return Err(Error::Input(format!(
                    "{name} holds {} vectors but rank is {}",
                    family.len(),
                    self.rank
                )));
            }
            for v in family {
                if v.len() != self.n {
                    return Err(Error::Dimension { expected: self.n, got: v.len() });
                }
            }
        }
        let all = self.a.iter().chain(&self.b).chain(&self.d).chain(&self.e).flatten();
        if !all.chain(&self.c).all(|x| x.is_finite()) {
            return Err(Error::Input("generator entries must be finite".into()));
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn upper_left(&self) -> &[Vec<f64>] {
        &self.a
    }

    pub fn upper_right(&self) -> &[Vec<f64>] {
        &self.b
    }

    pub fn diag(&self) -> &[f64] {
        &self.c
    }

    pub fn lower_left(&self) -> &[Vec<f64>] {
        &self.d
    }

    pub fn lower_right(&self) -> &[Vec<f64>] {
        &self.e
    }

    pub fn entry(&self, m: usize, n: usize) -> Result<f64> {
        if m >= self.n || n >= self.n {
            return Err(Error::Index { row: m, col: n, size: self.n });
        }
        Ok(self.entry_unchecked(m, n))
    }

    #[inline]
    pub(crate) fn entry_unchecked(&self, m: usize, n: usize) -> f64 {
        use std::cmp::Ordering::*;
        match m.cmp(&n) {
            Less => (0..self.rank).map(|i| self.a[i][m] * self.b[i][n]).sum(),
            Equal => self.c[m],
            Greater => (0..self.rank).map(|i| self.d[i][m] * self.e[i][n]).sum(),
        }
    }

    /// `A v` in `O(N r)` by prefix and suffix sweeps.
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n {
            return Err(Error::Dimension { expected: self.n, got: v.len() });
        }
        let n = self.n;
        let mut out: Vec<f64> = self.c.iter().zip(v).map(|(c, x)| c * x).collect();
        for i in 0..self.rank {
            let (a, b) = (&self.a[i], &self.b[i]);
            let mut suffix = 0.0;
            for m in (0..n).rev() {
                out[m] += a[m] * suffix;
                suffix += b[m] * v[m];
            }
            let (d, e) = (&self.d[i], &self.e[i]);
            let mut prefix = 0.0;
            for m in 0..n {
                out[m] += d[m] * prefix;
                prefix += e[m] * v[m];
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        self.to_dense_capped(DEFAULT_DENSE_CAP)
    }

    pub fn to_dense_capped(&self, cap: usize) -> Result<DMatrix<f64>> {
        if self.n > cap {
            return Err(Error::DenseCap { n: self.n, cap });
        }
        Ok(DMatrix::from_fn(self.n, self.n, |m, n| self.entry_unchecked(m, n)))
    }

    /// Sum with generator lists concatenated and diagonals added.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        let cat = |x: &[Vec<f64>], y: &[Vec<f64>]| x.iter().chain(y).cloned().collect();
        Self::new(
            cat(&self.a, &other.a),
            cat(&self.b, &other.b),
            self.c.iter().zip(&other.c).map(|(x, y)| x + y).collect(),
            cat(&self.d, &other.d),
            cat(&self.e, &other.e),
        )
    }

    /// Multiplies every entry by `s` (left generators and diagonal are scaled).
    pub fn scale(&self, s: f64) -> Self {
        let sc = |f: &[Vec<f64>]| f.iter().map(|v| v.iter().map(|x| s * x).collect()).collect();
        Self {
            n: self.n,
            rank: self.rank,
            a: sc(&self.a),
            b: self.b.clone(),
            c: self.c.iter().map(|x| s * x).collect(),
            d: sc(&self.d),
            e: self.e.clone(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            n: self.n,
            rank: self.rank,
            a: self.e.clone(),
            b: self.d.clone(),
            c: self.c.clone(),
            d: self.b.clone(),
            e: self.a.clone(),
        }
    }

    /// Leading `n x n` block.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.n {
            return Err(Error::Dimension { expected: self.n, got: n });
        }
        let cut = |f: &[Vec<f64>]| f.iter().map(|v| v[..n].to_vec()).collect();
        Ok(Self {
            n,
            rank: self.rank,
            a: cut(&self.a),
            b: cut(&self.b),
            c: self.c[..n].to_vec(),
            d: cut(&self.d),
            e: cut(&self.e),
        })
    }

    pub(crate) fn check_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension { expected: self.n, got: other.n });
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("generators serialise")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let g: Self =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("bad generator JSON: {e}")))?;
        g.validate()?;
        Ok(g)
    }
}

/// Generators of a skew-symmetric matrix: only the upper pairs are stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkewGeneratorPair {
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    n: usize,
}

impl SkewGeneratorPair {
    pub fn new(n: usize, a: Vec<Vec<f64>>, b: Vec<Vec<f64>>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Input(format!("{} left vectors but {} right vectors", a.len(), b.len())));
        }
        for v in a.iter().chain(&b) {
            if v.len() != n {
                return Err(Error::Dimension { expected: n, got: v.len() });
            }
        }
        Ok(Self { a, b, n })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn left(&self) -> &[Vec<f64>] {
        &self.a
    }

    pub fn right(&self) -> &[Vec<f64>] {
        &self.b
    }

    /// Full generators with `c = 0`, `d = b`, `e = -a`.
    pub fn expand(&self) -> SemiSepGenerators {
        let neg: Vec<Vec<f64>> = self.a.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
        SemiSepGenerators {
            n: self.n,
            rank: self.a.len(),
            a: self.a.clone(),
            b: self.b.clone(),
            c: vec![0.0; self.n],
            d: self.b.clone(),
            e: neg,
        }
    }
}
