use super::banded::{BandedLu, BandedMatrix};
use super::generators::SemiSepGenerators;
use crate::error::{Error, Result};

/// Factorisation of `shift * I + A` for semi-separable `A` of rank `r`.
///
/// The running sums `y_m = sum_{j<m} e_j x_j` and `z_m = sum_{j>m} b_j x_j`
/// become extra unknowns. Interleaving `(y_m, x_m, z_m)` turns the system
/// into a sparse one with both bandwidths `2r + 1`, which is factored by
/// banded LU with partial pivoting. Each running sum is stored divided by
/// the largest generator entry it has accumulated so far, which keeps the
/// embedded system well scaled when generators grow or decay with the index.
#[derive(Debug, Clone)]
pub struct StructuredLu {
    n: usize,
    r: usize,
    band: BandedLu,
}

/// `out[m] = max_{j in prefix before m} |v[j]|`, scanning forward or backward.
fn running_max(v: &[f64], forward: bool) -> Vec<f64> {
    let n = v.len();
    let mut out = vec![0.0; n];
    let mut acc = 0.0f64;
    for step in 0..n {
        let m = if forward { step } else { n - 1 - step };
        out[m] = acc;
        acc = acc.max(v[m].abs());
    }
    out
}

impl StructuredLu {
    pub fn new(g: &SemiSepGenerators, shift: f64) -> Result<Self> {
        let n = g.size();
        let r = g.rank();
        let w = 2 * r + 1;
        let (a, b, c, d, e) = (g.upper_left(), g.upper_right(), g.diag(), g.lower_left(), g.lower_right());
        let sigma: Vec<Vec<f64>> = e.iter().map(|v| running_max(v, true)).collect();
        let tau: Vec<Vec<f64>> = b.iter().map(|v| running_max(v, false)).collect();
        let unit = |s: f64| if s > 0.0 { s } else { 1.0 };
        let mut band = BandedMatrix::zeros(n * w, w, w);
        for m in 0..n {
            let base = m * w;
            let x = base + r;
            for k in 0..r {
                let (y, z) = (base + k, x + 1 + k);
                // sigma_m y_m = sigma_{m-1} y_{m-1} + e_{m-1} x_{m-1}, divided by sigma_m.
                let sm = unit(sigma[k][m]);
                band.set(y, y, 1.0)?;
                if m > 0 {
                    band.set(y, y - w, -sigma[k][m - 1] / sm)?;
                    band.set(y, x - w, -e[k][m - 1] / sm)?;
                }
                // tau_m z_m = tau_{m+1} z_{m+1} + b_{m+1} x_{m+1}, divided by tau_m.
                let tm = unit(tau[k][m]);
                band.set(z, z, 1.0)?;
                if m + 1 < n {
                    band.set(z, z + w, -tau[k][m + 1] / tm)?;
                    band.set(z, x + w, -b[k][m + 1] / tm)?;
                }
                band.set(x, y, d[k][m] * sm)?;
                band.set(x, z, a[k][m] * tm)?;
            }
            band.set(x, x, c[m] + shift)?;
        }
        let band = band.factor().map_err(|err| match err {
            Error::Singular { index } => Error::Singular { index: index / w },
            other => other,
        })?;
        Ok(Self { n, r, band })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let (n, w) = (self.n, 2 * self.r + 1);
        if rhs.len() != n {
            return Err(Error::Dimension { expected: n, got: rhs.len() });
        }
        let mut full = vec![0.0; n * w];
        for (m, v) in rhs.iter().enumerate() {
            full[m * w + self.r] = *v;
        }
        let sol = self.band.solve(&full)?;
        Ok((0..n).map(|m| sol[m * w + self.r]).collect())
    }
}

/// Solves `(shift * I + A) x = rhs` in `O(N)` for fixed rank.
pub fn solve_structured(g: &SemiSepGenerators, shift: f64, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != g.size() {
        return Err(Error::Dimension { expected: g.size(), got: rhs.len() });
    }
    StructuredLu::new(g, shift)?.solve(rhs)
}

#[cfg(test)]
mod tests {
    use super::super::generators::tests::random_generators;
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_system() {
        let g = SemiSepGenerators::diagonal(vec![2.0, 4.0, -5.0]).unwrap();
        let x = solve_structured(&g, 0.0, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(x, vec![0.5, 0.25, -0.2]);
    }

    #[test]
    fn singular_system_is_reported() {
        let g = SemiSepGenerators::diagonal(vec![1.0, 0.0, 1.0]).unwrap();
        assert_eq!(solve_structured(&g, 0.0, &[1.0; 3]), Err(Error::Singular { index: 1 }));
    }

    #[test]
    fn matches_dense_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(n, r) in &[(1, 2), (3, 2), (40, 1), (100, 3), (257, 4)] {
            let g = random_generators(&mut rng, n, r);
            let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x = solve_structured(&g, 3.0, &rhs).unwrap();
            let dense = g.to_dense().unwrap() + DMatrix::identity(n, n) * 3.0;
            let b = DVector::from_column_slice(&rhs);
            let want = dense.clone().lu().solve(&b).unwrap();
            let xs = DVector::from_column_slice(&x);
            let backward = (&dense * &xs - &b).amax() / (dense.amax() * xs.amax() * n as f64 + b.amax());
            assert!(backward < 1e-13, "n={n} r={r} backward={backward}");
            let dense_backward =
                (&dense * &want - &b).amax() / (dense.amax() * want.amax() * n as f64 + b.amax());
            assert!(dense_backward < 1e-13);
        }
    }

    #[test]
    fn degenerate_generators_are_tolerated() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let g = random_generators(&mut rng, 30, 1);
        let padded = g
            .add(
                &SemiSepGenerators::new(
                    vec![vec![0.0; 30]],
                    vec![vec![0.0; 30]],
                    vec![0.0; 30],
                    vec![vec![0.0; 30]],
                    vec![vec![0.0; 30]],
                )
                .unwrap(),
            )
            .unwrap();
        let rhs = vec![1.0; 30];
        let x = solve_structured(&padded, 2.0, &rhs).unwrap();
        let y = solve_structured(&g, 2.0, &rhs).unwrap();
        for (u, v) in x.iter().zip(&y) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn reproduces_rhs(seed in any::<u64>(), n in 1usize..=64, r in 0usize..=3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_generators(&mut rng, n, r);
            let dense = g.to_dense().unwrap();
            let norm_inf = dense.row_iter().map(|row| row.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
            let shift = 10.0 * norm_inf.max(1.0);
            let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x = solve_structured(&g, shift, &rhs).unwrap();
            let back = g.matvec(&x).unwrap();
            let scale = rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for k in 0..n {
                prop_assert!((back[k] + shift * x[k] - rhs[k]).abs() <= 1e-12 * scale.max(1e-300));
            }
        }
    }
}
