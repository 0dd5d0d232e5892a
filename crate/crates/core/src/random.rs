//! Seeded random states and local operators.
//!
//! All randomness in the crate flows through [`seeded`], so every randomized
//! result is a pure function of its seed.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg;
use crate::tensor::{DimsProfile, LocalOperatorTuple, PureState, TensorError};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Ratio `sigma_min / sigma_max` below which a random invertible draw is
/// rejected.
pub const MIN_CONDITION_RATIO: f64 = 1e-3;

/// Standard complex Gaussian, `E|z|^2 = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<C64> {
    (0..len).map(|_| complex_gaussian(rng)).collect()
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Gaussian `d x d` matrix, redrawn until it is well conditioned.
pub fn invertible_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<C64> {
    loop {
        let m = gaussian_matrix(d, d, rng);
        let sv = linalg::singular_values(&m);
        let (smax, smin) = (sv[0], sv[sv.len() - 1]);
        if smin >= MIN_CONDITION_RATIO * smax {
            return m;
        }
    }
}

/// Gaussian `rows x cols` matrix of rank at most `rank`.
pub fn low_rank_matrix<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rank: usize,
    rng: &mut R,
) -> DMatrix<C64> {
    gaussian_matrix(rows, rank, rng) * gaussian_matrix(rank, cols, rng)
}

pub fn invertible_tuple<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> LocalOperatorTuple {
    LocalOperatorTuple::new(dims.iter().map(|&d| invertible_matrix(d, rng)).collect())
        .expect("dims are positive")
}

/// Square local operators of random rank; at least one is rank deficient
/// whenever some party has dimension above one.
pub fn singular_tuple<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> LocalOperatorTuple {
    let forced = loop {
        let p = rng.random_range(0..dims.len());
        if dims[p] > 1 || dims.iter().all(|&d| d == 1) {
            break p;
        }
    };
    let ops = dims
        .iter()
        .enumerate()
        .map(|(p, &d)| {
            let max_rank = if p == forced && d > 1 { d - 1 } else { d };
            let rank = rng.random_range(1..=max_rank);
            low_rank_matrix(d, d, rank, rng)
        })
        .collect();
    LocalOperatorTuple::new(ops).expect("dims are positive")
}

/// Gaussian amplitudes over the whole space; full local ranks with
/// probability one.
pub fn gaussian_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<PureState, TensorError> {
    let profile = DimsProfile::new(dims.to_vec())?;
    let amps = gaussian_vector(profile.total(), rng);
    PureState::new(profile, amps)
}

/// Sum of `terms` random product vectors.
pub fn low_rank_state<R: Rng + ?Sized>(
    dims: &[usize],
    terms: usize,
    rng: &mut R,
) -> Result<PureState, TensorError> {
    let profile = DimsProfile::new(dims.to_vec())?;
    let mut amps = vec![C64::new(0.0, 0.0); profile.total()];
    for _ in 0..terms.max(1) {
        let factors: Vec<Vec<C64>> = dims.iter().map(|&d| gaussian_vector(d, rng)).collect();
        let term = PureState::product(&factors)?;
        for (a, t) in amps.iter_mut().zip(term.amplitudes()) {
            *a += t;
        }
    }
    PureState::new(profile, amps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_reproducible() {
        let a = gaussian_state(&[2, 3], &mut seeded(7)).unwrap();
        let b = gaussian_state(&[2, 3], &mut seeded(7)).unwrap();
        assert_eq!(a, b);
        let c = gaussian_state(&[2, 3], &mut seeded(8)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn invertible_draws_are_conditioned() {
        let mut rng = seeded(1);
        for _ in 0..20 {
            let m = invertible_matrix(4, &mut rng);
            let sv = linalg::singular_values(&m);
            assert!(sv[3] >= MIN_CONDITION_RATIO * sv[0]);
        }
    }

    #[test]
    fn singular_tuple_has_a_deficient_operator() {
        let mut rng = seeded(3);
        for _ in 0..20 {
            let t = singular_tuple(&[3, 2, 2], &mut rng);
            assert!(!t.is_invertible());
        }
    }
}
