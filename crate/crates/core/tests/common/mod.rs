//! Reference implementations used as oracles. Nothing here goes through the
//! library's SVD-based rank path.
#![allow(dead_code)]

use mes_core::{PureState, C64};
use nalgebra::DMatrix;

/// Row-major multi-index of `flat` over `dims`.
pub fn unflatten(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; dims.len()];
    for p in (0..dims.len()).rev() {
        idx[p] = flat % dims[p];
        flat /= dims[p];
    }
    idx
}

fn mixed_radix(idx: &[usize], parties: &[usize], dims: &[usize]) -> usize {
    parties.iter().fold(0, |acc, &p| acc * dims[p] + idx[p])
}

/// Flattening by direct multi-index bookkeeping: rows enumerate `subset`
/// (ascending), columns the remaining parties (ascending).
pub fn naive_flatten(state: &PureState, subset: &[usize]) -> DMatrix<C64> {
    let dims = state.dims();
    let mut rows_p = subset.to_vec();
    rows_p.sort_unstable();
    let cols_p: Vec<usize> = (0..dims.len()).filter(|p| !rows_p.contains(p)).collect();
    let nr: usize = rows_p.iter().map(|&p| dims[p]).product();
    let nc: usize = cols_p.iter().map(|&p| dims[p]).product();
    let mut m = DMatrix::zeros(nr, nc);
    for (flat, a) in state.amplitudes().iter().enumerate() {
        let idx = unflatten(flat, dims);
        m[(mixed_radix(&idx, &rows_p, dims), mixed_radix(&idx, &cols_p, dims))] = *a;
    }
    m
}

/// `(L_1 (x) ... (x) L_n) |psi>` by summing over input and output indices.
pub fn naive_apply(state: &PureState, ops: &[DMatrix<C64>]) -> Vec<C64> {
    let dims = state.dims();
    let out_dims: Vec<usize> = ops.iter().map(|m| m.nrows()).collect();
    let total_out: usize = out_dims.iter().product();
    let mut out = vec![C64::new(0.0, 0.0); total_out];
    for (o, slot) in out.iter_mut().enumerate() {
        let oi = unflatten(o, &out_dims);
        for (i, a) in state.amplitudes().iter().enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            let ii = unflatten(i, dims);
            let coeff = (0..dims.len()).fold(C64::new(1.0, 0.0), |c, p| c * ops[p][(oi[p], ii[p])]);
            *slot += coeff * a;
        }
    }
    out
}

/// Exact integer matrix of a complex matrix whose entries are real integers.
pub fn to_integer(m: &DMatrix<C64>) -> Vec<Vec<i128>> {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| {
                    let z = m[(r, c)];
                    assert!(z.im == 0.0 && z.re.fract() == 0.0, "entry {z} is not an integer");
                    z.re as i128
                })
                .collect()
        })
        .collect()
}

/// Rank by fraction-free (Bareiss) elimination; exact for integer input.
pub fn exact_rank(m: &[Vec<i128>]) -> usize {
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let (mut rank, mut prev) = (0usize, 1i128);
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for j in c + 1..cols {
                a[r][j] = (a[rank][c] * a[r][j] - a[r][c] * a[rank][j]) / prev;
            }
            a[r][c] = 0;
        }
        prev = a[rank][c];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Exact determinant by Bareiss elimination.
pub fn exact_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut a = m.to_vec();
    let (mut prev, mut sign) = (1i128, 1i128);
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| a[r][k] != 0) else { return 0 };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Kernel of a full-rank `d x (d+1)` integer matrix via signed maximal
/// minors (generalized cross product).
pub fn cofactor_kernel(m: &[Vec<i128>]) -> Vec<i128> {
    let d = m.len();
    assert_eq!(m[0].len(), d + 1);
    (0..=d)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * exact_det(&minor)
        })
        .collect()
}

pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
