use super::generators::SemiSepGenerators;
use crate::error::{Error, Result};

/// Which tail term closes the second upper right-hand generator of a rank-1
/// product. Only `SuffixTS` reproduces the dense product; `SuffixQP` is the
/// tempting alternative, kept so verification can show it fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailVariant {
    /// `t_n * sum_{k>n} b_k s_k`
    SuffixTS,
    /// `q_n * sum_{k>n} b_k p_k`
    SuffixQP,
}

/// Generator pieces of the product of two rank-1 parts.
struct Rank1Pieces {
    /// Left vector paired with the second factor's `q`.
    upper_q_left: Vec<f64>,
    /// Right vector paired with the first factor's `a`.
    upper_a_right: Vec<f64>,
    diag: Vec<f64>,
    /// Left vector paired with the second factor's `t`.
    lower_t_left: Vec<f64>,
    /// Right vector paired with the first factor's `d`.
    lower_d_right: Vec<f64>,
}

struct Part<'a> {
    left_up: &'a [f64],
    right_up: &'a [f64],
    diag: &'a [f64],
    left_lo: &'a [f64],
    right_lo: &'a [f64],
}

fn rank1_pieces(x: &Part, y: &Part, variant: TailVariant) -> Rank1Pieces {
    let (a, b, f, d, e) = (x.left_up, x.right_up, x.diag, x.left_lo, x.right_lo);
    let (p, q, r, s, t) = (y.left_up, y.right_up, y.diag, y.left_lo, y.right_lo);
    let n = f.len();

    // ep[k] = sum_{j<k} e_j p_j, and likewise for bp and es; bs[k] = sum_{j>k} b_j s_j.
    let prefix = |u: &[f64], v: &[f64]| {
        let mut out = vec![0.0; n + 1];
        for k in 0..n {
            out[k + 1] = out[k] + u[k] * v[k];
        }
        out
    };
    let suffix = |u: &[f64], v: &[f64]| {
        let mut out = vec![0.0; n];
        for k in (0..n.saturating_sub(1)).rev() {
            out[k] = out[k + 1] + u[k + 1] * v[k + 1];
        }
        out
    };
    let ep = prefix(e, p);
    let bp = prefix(b, p);
    let es = prefix(e, s);
    let bs = suffix(b, s);

    let mut pieces = Rank1Pieces {
        upper_q_left: vec![0.0; n],
        upper_a_right: vec![0.0; n],
        diag: vec![0.0; n],
        lower_t_left: vec![0.0; n],
        lower_d_right: vec![0.0; n],
    };
    let bp_tail = match variant {
        TailVariant::SuffixTS => None,
        TailVariant::SuffixQP => Some(suffix(b, p)),
    };
    for k in 0..n {
        pieces.upper_q_left[k] = d[k] * ep[k] + f[k] * p[k] - a[k] * bp[k + 1];
        let tail = match &bp_tail {
            None => t[k] * bs[k],
            Some(bpt) => q[k] * bpt[k],
        };
        pieces.upper_a_right[k] = q[k] * bp[k] + b[k] * r[k] + tail;
        pieces.diag[k] = d[k] * q[k] * ep[k] + f[k] * r[k] + a[k] * t[k] * bs[k];
        pieces.lower_t_left[k] = d[k] * es[k] + f[k] * s[k] + a[k] * bs[k];
        pieces.lower_d_right[k] = q[k] * ep[k] + e[k] * r[k] - t[k] * es[k + 1];
    }
    pieces
}

fn part_of<'a>(g: &'a SemiSepGenerators, i: usize, zeros: &'a [f64], with_diag: bool) -> Part<'a> {
    let pick = |family: &'a [Vec<f64>]| -> &'a [f64] {
        if g.rank() == 0 {
            zeros
        } else {
            &family[i]
        }
    };
    Part {
        left_up: pick(g.upper_left()),
        right_up: pick(g.upper_right()),
        diag: if with_diag { g.diag() } else { zeros },
        left_lo: pick(g.lower_left()),
        right_lo: pick(g.lower_right()),
    }
}

fn require_rank1(g: &SemiSepGenerators) -> Result<()> {
    if g.rank() != 1 {
        return Err(Error::Rank { expected: 1, got: g.rank() });
    }
    Ok(())
}

/// Product of two rank-1 matrices as rank-2 generators.
///
/// Tail sums run to the last index, so the result is exactly the product of
/// the two `N x N` matrices. Upper pairs are ordered `(., q)` then `(a, .)`;
/// lower pairs `(., t)` then `(d, .)`.
pub fn product_rank1(ga: &SemiSepGenerators, gb: &SemiSepGenerators) -> Result<SemiSepGenerators> {
    product_rank1_variant(ga, gb, TailVariant::SuffixTS)
}

pub fn product_rank1_variant(
    ga: &SemiSepGenerators,
    gb: &SemiSepGenerators,
    variant: TailVariant,
) -> Result<SemiSepGenerators> {
    ga.check_size(gb)?;
    require_rank1(ga)?;
    require_rank1(gb)?;
    let zeros = vec![0.0; ga.size()];
    let x = part_of(ga, 0, &zeros, true);
    let y = part_of(gb, 0, &zeros, true);
    let pc = rank1_pieces(&x, &y, variant);
    SemiSepGenerators::new(
        vec![pc.upper_q_left, x.left_up.to_vec()],
        vec![y.right_up.to_vec(), pc.upper_a_right],
        pc.diag,
        vec![pc.lower_t_left, x.left_lo.to_vec()],
        vec![y.right_lo.to_vec(), pc.lower_d_right],
    )
}

/// Product of a rank-`s` and a rank-`r` matrix with exactly `r + s` generator
/// pairs per triangle.
///
/// Both factors are split into rank-1 parts (the diagonal travels with the
/// first part) and the pairwise products are regrouped: `r` pairs share the
/// second factor's right vectors and `s` pairs share the first factor's left
/// vectors, and symmetrically below the diagonal.
pub fn product(ga: &SemiSepGenerators, gb: &SemiSepGenerators) -> Result<SemiSepGenerators> {
    ga.check_size(gb)?;
    let n = ga.size();
    let (sa, rb) = (ga.rank(), gb.rank());
    let zeros = vec![0.0; n];
    let pieces: Vec<Vec<Rank1Pieces>> = (0..sa.max(1))
        .map(|i| {
            let x = part_of(ga, i, &zeros, i == 0);
            (0..rb.max(1))
                .map(|j| {
                    let y = part_of(gb, j, &zeros, j == 0);
                    rank1_pieces(&x, &y, TailVariant::SuffixTS)
                })
                .collect()
        })
        .collect();

    let sum_over = |get: &dyn Fn(&Rank1Pieces) -> &Vec<f64>, cells: Vec<&Rank1Pieces>| {
        let mut acc = vec![0.0; n];
        for cell in cells {
            for (s, v) in acc.iter_mut().zip(get(cell)) {
                *s += v;
            }
        }
        acc
    };
    let column = |j: usize| pieces.iter().map(|row| &row[j]).collect::<Vec<_>>();
    let row = |i: usize| pieces[i].iter().collect::<Vec<_>>();

    let (mut a, mut b, mut d, mut e) = (vec![], vec![], vec![], vec![]);
    for j in 0..rb {
        a.push(sum_over(&|p| &p.upper_q_left, column(j)));
        b.push(gb.upper_right()[j].clone());
        d.push(sum_over(&|p| &p.lower_t_left, column(j)));
        e.push(gb.lower_right()[j].clone());
    }
    for i in 0..sa {
        a.push(ga.upper_left()[i].clone());
        b.push(sum_over(&|p| &p.upper_a_right, row(i)));
        d.push(ga.lower_left()[i].clone());
        e.push(sum_over(&|p| &p.lower_d_right, row(i)));
    }
    let c = sum_over(&|p| &p.diag, pieces.iter().flatten().collect());
    SemiSepGenerators::new(a, b, c, d, e)
}

/// Product of two size-`M` generator sets, truncated to the leading `n x n`
/// block. Tail sums therefore extend to `M`, which approximates the product
/// of the underlying infinite operators better than multiplying truncations.
pub fn product_with_horizon(
    ga: &SemiSepGenerators,
    gb: &SemiSepGenerators,
    n: usize,
) -> Result<SemiSepGenerators> {
    product(ga, gb)?.truncate(n)
}
