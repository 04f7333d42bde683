use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Square banded matrix with lower bandwidth `p` and upper bandwidth `q`,
/// stored as `p + q + 1` diagonals. `diags[k]` holds offset `k - p`,
/// indexed by row.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    p: usize,
    q: usize,
    diags: Vec<Vec<f64>>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, p: usize, q: usize) -> Self {
        Self { n, p, q, diags: vec![vec![0.0; n]; p + q + 1] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.p
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.q
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.p >= i && j <= i + self.q
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.diags[j + self.p - i][i]
        } else {
            0.0
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) -> Result<()> {
        if !self.in_band(i, j) {
            return Err(Error::Index { row: i, col: j, size: self.n });
        }
        self.diags[j + self.p - i][i] = v;
        Ok(())
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n {
            return Err(Error::Dimension { expected: self.n, got: v.len() });
        }
        Ok((0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.p);
                let hi = (i + self.q).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * v[j]).sum()
            })
            .collect())
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// LU with partial pivoting confined to the band.
    pub fn factor(&self) -> Result<BandedLu> {
        BandedLu::new(self)
    }
}

/// `P A = L U` for a banded `A`. Row interchanges widen `U` to bandwidth `p + q`.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    p: usize,
    width: usize,
    data: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    fn new(a: &BandedMatrix) -> Result<Self> {
        let (n, p, q) = (a.n, a.p, a.q);
        let width = 2 * p + q + 1;
        let mut lu = Self { n, p, width, data: vec![0.0; n * width], pivots: vec![0; n] };
        // A pivot below rounding level of its own column counts as zero.
        let mut column_scale = vec![0.0f64; n];
        for i in 0..n {
            let lo = i.saturating_sub(p);
            let hi = (i + q).min(n.saturating_sub(1));
            for j in lo..=hi {
                let v = a.get(i, j);
                column_scale[j] = column_scale[j].max(v.abs());
                *lu.at_mut(i, j) = v;
            }
        }
        let ubw = p + q;
        for k in 0..n {
            let last_row = (k + p).min(n - 1);
            let mut piv = k;
            for i in k + 1..=last_row {
                if lu.at(i, k).abs() > lu.at(piv, k).abs() {
                    piv = i;
                }
            }
            if lu.at(piv, k).abs() <= f64::EPSILON * column_scale[k] {
                return Err(Error::Singular { index: k });
            }
            lu.pivots[k] = piv;
            let last_col = (k + ubw).min(n - 1);
            if piv != k {
                for j in k..=last_col {
                    let t = lu.at(k, j);
                    *lu.at_mut(k, j) = lu.at(piv, j);
                    *lu.at_mut(piv, j) = t;
                }
            }
            let pivot = lu.at(k, k);
            for i in k + 1..=last_row {
                let l = lu.at(i, k) / pivot;
                *lu.at_mut(i, k) = l;
                if l != 0.0 {
                    for j in k + 1..=last_col {
                        let u = lu.at(k, j);
                        *lu.at_mut(i, j) -= l * u;
                    }
                }
            }
        }
        Ok(lu)
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j + self.p - i]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[i * self.width + j + self.p - i]
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if rhs.len() != n {
            return Err(Error::Dimension { expected: n, got: rhs.len() });
        }
        let mut x = rhs.to_vec();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
            let last_row = (k + self.p).min(n - 1);
            for i in k + 1..=last_row {
                x[i] -= self.at(i, k) * x[k];
            }
        }
        let ubw = self.width - self.p - 1;
        for k in (0..n).rev() {
            let last_col = (k + ubw).min(n - 1);
            let mut s = x[k];
            for j in k + 1..=last_col {
                s -= self.at(k, j) * x[j];
            }
            x[k] = s / self.at(k, k);
        }
        Ok(x)
    }
}
