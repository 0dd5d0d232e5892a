//! Small dense linear-algebra helpers.
//!
//! Matrices are `nalgebra::DMatrix<C64>` throughout; decompositions go
//! through faer's full SVD, whose singular vectors stay accurate on
//! rank-deficient complex input.

use std::sync::OnceLock;

use faer::linalg::solvers::Svd;
use faer::Mat;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// Default relative tolerance for numerical rank decisions.
pub const DEFAULT_RANK_EPS: f64 = 1e-9;

/// Environment variable that overrides [`DEFAULT_RANK_EPS`].
pub const RANK_EPS_ENV: &str = "MES_RANK_EPS";

/// The rank tolerance in effect for this process.
///
/// Reads `MES_RANK_EPS` once; unparsable or non-positive values fall back to
/// the default.
pub fn rank_eps() -> f64 {
    static EPS: OnceLock<f64> = OnceLock::new();
    *EPS.get_or_init(|| {
        std::env::var(RANK_EPS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v > 0.0)
            .unwrap_or(DEFAULT_RANK_EPS)
    })
}

/// Full SVD `m = U diag(s) V^dagger`; `s` has `min(rows, cols)` entries in
/// non-increasing order.
fn svd(m: &DMatrix<C64>) -> (DMatrix<C64>, Vec<f64>, DMatrix<C64>) {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return (DMatrix::identity(rows, rows), Vec::new(), DMatrix::identity(cols, cols));
    }
    let a = Mat::<C64>::from_fn(rows, cols, |i, j| m[(i, j)]);
    let d = Svd::new(a.as_ref()).expect("SVD converges");
    let (u, v) = (d.U(), d.V());
    let s: Vec<f64> = d.S().column_vector().iter().map(|z| z.re).collect();
    debug_assert!(s.windows(2).all(|w| w[0] >= w[1]));
    (
        DMatrix::from_fn(rows, rows, |i, j| u[(i, j)]),
        s,
        DMatrix::from_fn(cols, cols, |i, j| v[(i, j)]),
    )
}

/// Singular values in non-increasing order.
pub fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    svd(m).1
}

/// Number of singular values strictly above `eps * sigma_max`.
pub fn numerical_rank(singular_values: &[f64], eps: f64) -> usize {
    let smax = singular_values.iter().copied().fold(0.0_f64, f64::max);
    if smax == 0.0 {
        return 0;
    }
    singular_values.iter().filter(|&&s| s > eps * smax).count()
}

pub fn matrix_rank(m: &DMatrix<C64>, eps: f64) -> usize {
    numerical_rank(&singular_values(m), eps)
}

/// Orthonormal basis (as columns) of the orthogonal complement of the column
/// space of `vectors`, with the column-space rank decided at `eps`.
pub fn orthocomplement(vectors: &DMatrix<C64>, eps: f64) -> DMatrix<C64> {
    let dim = vectors.nrows();
    let (u, sv, _) = svd(vectors);
    let rank = numerical_rank(&sv, eps);
    u.columns(rank, dim - rank).into_owned()
}

/// Orthonormal basis (as columns) of the column space of `vectors`.
pub fn column_space(vectors: &DMatrix<C64>, eps: f64) -> DMatrix<C64> {
    let (u, sv, _) = svd(vectors);
    let rank = numerical_rank(&sv, eps);
    u.columns(0, rank).into_owned()
}

/// Full singular value decomposition `m = U diag(s) V^dagger` with square
/// unitaries `U` (rows x rows) and `V` (cols x cols).
pub fn full_svd(m: &DMatrix<C64>) -> (DMatrix<C64>, Vec<f64>, DMatrix<C64>) {
    svd(m)
}

/// Invertible `p`, `q` with `p * m * q^T` equal to the truncated identity of
/// the numerical rank of `m`. Returns `(p, q, rank)`.
pub fn bipartite_normal_form(m: &DMatrix<C64>, eps: f64) -> (DMatrix<C64>, DMatrix<C64>, usize) {
    let (rows, cols) = m.shape();
    let (u, s, v) = full_svd(m);
    let rank = numerical_rank(&s, eps);
    let mut scale = DMatrix::<C64>::identity(rows, rows);
    for i in 0..rank {
        scale[(i, i)] = C64::new(1.0 / s[i], 0.0);
    }
    let p = scale * u.adjoint();
    let q = v.transpose();
    debug_assert_eq!(q.shape(), (cols, cols));
    (p, q, rank)
}

/// Frobenius norm.
pub fn frobenius(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn rank_of_zero_matrix_is_zero() {
        assert_eq!(numerical_rank(&[0.0, 0.0], 1e-9), 0);
        assert_eq!(matrix_rank(&DMatrix::zeros(3, 2), 1e-9), 0);
    }

    #[test]
    fn rank_counts_relative_to_largest() {
        assert_eq!(numerical_rank(&[10.0, 1e-7, 1e-9], 1e-9), 2);
        assert_eq!(numerical_rank(&[1.0, 1e-9], 1e-9), 1);
    }

    #[test]
    fn orthocomplement_of_single_basis_vector() {
        let v = DMatrix::from_column_slice(3, 1, &[c(1.0), c(0.0), c(0.0)]);
        let perp = orthocomplement(&v, 1e-9);
        assert_eq!(perp.shape(), (3, 2));
        let overlap = v.adjoint() * &perp;
        assert!(overlap.iter().all(|z| z.norm() < 1e-12));
        let gram = perp.adjoint() * &perp;
        assert!((gram - DMatrix::identity(2, 2)).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn orthocomplement_with_more_vectors_than_dimension() {
        // three vectors in C^2 spanning only e0
        let v = DMatrix::from_row_slice(2, 3, &[c(1.0), c(2.0), c(-1.0), c(0.0), c(0.0), c(0.0)]);
        let perp = orthocomplement(&v, 1e-9);
        assert_eq!(perp.ncols(), 1);
        assert!((perp[(1, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normal_form_reaches_truncated_identity() {
        let m = DMatrix::from_row_slice(
            2,
            3,
            &[c(1.0), C64::new(0.0, 2.0), c(0.5), c(2.0), C64::new(0.0, 4.0), c(1.0)],
        );
        let (p, q, rank) = bipartite_normal_form(&m, 1e-9);
        assert_eq!(rank, 1);
        let j = &p * &m * q.transpose();
        for r in 0..2 {
            for col in 0..3 {
                let expect = if r == col && r < rank { 1.0 } else { 0.0 };
                assert!((j[(r, col)] - c(expect)).norm() < 1e-12);
            }
        }
        assert_eq!(matrix_rank(&p, 1e-9), 2);
        assert_eq!(matrix_rank(&q, 1e-9), 3);
    }

    #[test]
    fn full_svd_reconstructs_rank_deficient_complex_input() {
        let mut rng = crate::random::seeded(5);
        for k in 0..200 {
            let m = crate::random::low_rank_matrix(3 + k % 2, 4, 1 + k % 3, &mut rng);
            let (u, s, v) = full_svd(&m);
            let mut sigma = DMatrix::<C64>::zeros(m.nrows(), m.ncols());
            for (i, x) in s.iter().enumerate() {
                sigma[(i, i)] = c(*x);
            }
            let err = frobenius(&(&u * sigma * v.adjoint() - &m)) / frobenius(&m);
            assert!(err < 1e-13, "draw {k}: relative error {err:e}");
        }
    }
}
