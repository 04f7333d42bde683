#![allow(dead_code)]

use nalgebra::DMatrix;

/// Largest `sigma_{k+1} / sigma_1` over every contiguous submatrix lying
/// strictly above the diagonal with both sides longer than `k`.
pub fn worst_upper_ratio(d: &DMatrix<f64>, k: usize) -> f64 {
    let n = d.nrows();
    let mut worst = 0.0f64;
    for i1 in 0..n {
        for j0 in i1 + 1..n {
            for i0 in 0..=i1 {
                for j1 in j0..n {
                    let (rows, cols) = (i1 - i0 + 1, j1 - j0 + 1);
                    if rows <= k || cols <= k {
                        continue;
                    }
                    let mut sv: Vec<f64> = d
                        .view((i0, j0), (rows, cols))
                        .clone_owned()
                        .singular_values()
                        .iter()
                        .copied()
                        .collect();
                    sv.sort_by(|a, b| b.total_cmp(a));
                    if sv[0] > 0.0 {
                        worst = worst.max(sv[k] / sv[0]);
                    }
                }
            }
        }
    }
    worst
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}
