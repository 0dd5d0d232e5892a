//! Explicit states and state families.
//!
//! Every constructor returns unnormalized states with small integer
//! amplitudes where the construction allows it, so flattening ranks and
//! decompositions can be checked without tolerance games.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::linalg::{self, rank_eps};
use crate::random::{self, SeededRng};
use crate::rank::ProductDecomposition;
use crate::tensor::{self, DimsProfile, PureState, TensorError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructError {
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("largest dimension {d1} is below the product {tail} of the others")]
    ConditionViolated { d1: usize, tail: usize },
    #[error("bad profile: {0}")]
    BadProfile(String),
    #[error("class index {r} outside 1..={max}")]
    BadClassIndex { r: usize, max: usize },
    #[error("augmentation made no progress after {0} draws")]
    AugmentStalled(usize),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn require_sorted(profile: &DimsProfile) -> Result<(), ConstructError> {
    if !profile.is_sorted() {
        return Err(ConstructError::BadProfile(format!(
            "{profile} is not sorted non-increasing"
        )));
    }
    Ok(())
}

fn require_tripartite(profile: &DimsProfile) -> Result<(usize, usize, usize), ConstructError> {
    if profile.n() != 3 {
        return Err(ConstructError::BadProfile(format!(
            "{profile} is not tripartite"
        )));
    }
    require_sorted(profile)?;
    let d = profile.dims();
    Ok((d[0], d[1], d[2]))
}

/// `sum_{i<d} |i>|i>`.
pub fn epr(d: usize) -> Result<PureState, ConstructError> {
    if d < 2 {
        return Err(ConstructError::BadDimension(format!("EPR state needs d >= 2, got {d}")));
    }
    let mut amps = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        amps[i * d + i] = one();
    }
    Ok(PureState::from_dims(&[d, d], amps)?.with_label(format!("epr({d})")))
}

/// `sum_{i<d} |i,...,i>` over `parties` parties.
pub fn ghz(parties: usize, d: usize) -> Result<PureState, ConstructError> {
    if parties < 2 || d < 2 {
        return Err(ConstructError::BadDimension(format!(
            "GHZ state needs at least 2 parties of dimension >= 2, got {parties} x {d}"
        )));
    }
    let profile = DimsProfile::new(vec![d; parties])?;
    let mut amps = vec![C64::new(0.0, 0.0); profile.total()];
    for i in 0..d {
        amps[profile.flat_index(&vec![i; parties])] = one();
    }
    Ok(PureState::new(profile, amps)?.with_label(format!("ghz({parties},{d})")))
}

/// Qubit W state: the sum of all basis vectors with exactly one `1`.
pub fn w_state(parties: usize) -> Result<PureState, ConstructError> {
    if parties < 2 {
        return Err(ConstructError::BadDimension(format!(
            "W state needs at least 2 parties, got {parties}"
        )));
    }
    let profile = DimsProfile::new(vec![2; parties])?;
    let mut amps = vec![C64::new(0.0, 0.0); profile.total()];
    for p in 0..parties {
        amps[1 << (parties - 1 - p)] = one();
    }
    Ok(PureState::new(profile, amps)?.with_label(format!("w({parties})")))
}

/// `sum_j |j> |decode(j)>` where `decode(j)` is the `j`-th lexicographic
/// basis vector of parties `1..n`. Requires sorted dims with the first
/// dimension at least the product of the others.
pub fn mes_state(profile: &DimsProfile) -> Result<PureState, ConstructError> {
    if profile.n() < 2 {
        return Err(ConstructError::BadProfile(format!("{profile} has fewer than two parties")));
    }
    require_sorted(profile)?;
    let d1 = profile.dims()[0];
    let tail = profile.total() / d1;
    if d1 < tail {
        return Err(ConstructError::ConditionViolated { d1, tail });
    }
    let mut amps = vec![C64::new(0.0, 0.0); profile.total()];
    for j in 0..tail {
        amps[j * tail + j] = one();
    }
    Ok(PureState::new(profile.clone(), amps)?.with_label(format!("mes({profile})")))
}

/// Basis triples `(a, b, c)` of the rank-`d1` maximal state.
fn rank_d1_triples(d1: usize, d2: usize, d3: usize) -> Vec<(usize, usize, usize)> {
    let mut triples: Vec<(usize, usize, usize)> = (0..d3).map(|i| (i, i, i)).collect();
    triples.extend((d3..d2).map(|i| (i, i, 0)));
    let mut used = vec![false; d2 * d3];
    for &(_, b, c) in &triples {
        used[b * d3 + c] = true;
    }
    let mut free = (0..d2 * d3).filter(|&bc| !used[bc]);
    for i in d2..d1 {
        let bc = free.next().expect("d1 <= d2 d3 leaves enough unused pairs");
        triples.push((i, bc / d3, bc % d3));
    }
    triples
}

fn rank_d1_checked(profile: &DimsProfile) -> Result<Vec<(usize, usize, usize)>, ConstructError> {
    let (d1, d2, d3) = require_tripartite(profile)?;
    if d1 > d2 * d3 {
        return Err(ConstructError::BadProfile(format!(
            "{profile} needs d1 <= d2 d3"
        )));
    }
    Ok(rank_d1_triples(d1, d2, d3))
}

/// Maximal state of tensor rank exactly `d1` in a sorted tripartite space
/// with `d1 <= d2 d3`:
/// `sum_{i<d3} |iii> + sum_{d3<=i<d2} |ii0> + sum_{d2<=i<d1} |i a_i c_i>`
/// with `(a_i, c_i)` the lexicographically first pairs not used earlier.
pub fn maximal_rank_d1(profile: &DimsProfile) -> Result<PureState, ConstructError> {
    let triples = rank_d1_checked(profile)?;
    let mut amps = vec![C64::new(0.0, 0.0); profile.total()];
    for (a, b, c) in triples {
        amps[profile.flat_index(&[a, b, c])] = one();
    }
    Ok(PureState::new(profile.clone(), amps)?.with_label(format!("maximal-rank-d1({profile})")))
}

/// The `d1` product terms of [`maximal_rank_d1`].
pub fn maximal_rank_d1_certificate(
    profile: &DimsProfile,
) -> Result<ProductDecomposition, ConstructError> {
    let triples = rank_d1_checked(profile)?;
    let terms: Vec<_> = triples
        .into_iter()
        .map(|(a, b, c)| vec![vec![(1.0, a)], vec![(1.0, b)], vec![(1.0, c)]])
        .collect();
    Ok(ProductDecomposition::from_sparse(profile.dims(), &terms).expect("indices in range"))
}

/// Draws allowed per augmentation step before giving up.
const AUGMENT_ATTEMPTS: usize = 64;

/// Unit vector orthogonal to the columns of `support`, preferring the
/// computational basis vector with the largest residual.
fn complement_unit_vector(support: &DMatrix<C64>, d: usize) -> Vec<C64> {
    let mut best: Option<(f64, Vec<C64>)> = None;
    for j in 0..d {
        let mut e = DMatrix::<C64>::zeros(d, 1);
        e[(j, 0)] = one();
        let r = &e - support * (support.adjoint() * &e);
        let norm = linalg::frobenius(&r);
        if best.as_ref().is_none_or(|(b, _)| norm > *b + 1e-12) {
            best = Some((norm, r.iter().map(|z| z / norm).collect()));
        }
    }
    best.expect("d >= 1").1
}

fn random_complement_vector(support: &DMatrix<C64>, d: usize, rng: &mut SeededRng) -> Vec<C64> {
    let perp = linalg::orthocomplement(support, rank_eps());
    let g = random::gaussian_matrix(perp.ncols(), 1, rng);
    let v = &perp * g;
    let norm = linalg::frobenius(&v);
    debug_assert_eq!(v.nrows(), d);
    v.iter().map(|z| z / norm).collect()
}

/// Adds product terms until every party has full local rank.
///
/// Each step adds one product vector whose factor on every rank-deficient
/// party is orthogonal to that party's current support (so the input is
/// recovered by projecting onto the input supports) and whose factor on
/// full parties is `|0>`. A step is kept only if it raises the rank of every
/// deficient party; otherwise the factors are redrawn at random from `seed`.
pub fn augment_to_full_ranks(state: &PureState, seed: u64) -> Result<PureState, ConstructError> {
    if state.n() < 2 {
        return Err(ConstructError::BadProfile("augmentation needs at least two parties".into()));
    }
    let mut rng = random::seeded(seed);
    let dims = state.dims().to_vec();
    let mut cur = state.clone();
    loop {
        let ranks = tensor::local_ranks(&cur).local_ranks;
        let deficient: Vec<usize> = (0..dims.len()).filter(|&p| ranks[p] < dims[p]).collect();
        if deficient.is_empty() {
            return Ok(cur);
        }
        let supports: Vec<DMatrix<C64>> = deficient
            .iter()
            .map(|&p| tensor::party_support(&cur, p))
            .collect::<Result<_, _>>()?;

        let mut accepted = None;
        for attempt in 0..AUGMENT_ATTEMPTS {
            let factors: Vec<Vec<C64>> = (0..dims.len())
                .map(|p| match deficient.iter().position(|&q| q == p) {
                    Some(k) if attempt == 0 => complement_unit_vector(&supports[k], dims[p]),
                    Some(k) => random_complement_vector(&supports[k], dims[p], &mut rng),
                    None if attempt == 0 => {
                        let mut e = vec![C64::new(0.0, 0.0); dims[p]];
                        e[0] = one();
                        e
                    }
                    None => random::gaussian_vector(dims[p], &mut rng),
                })
                .collect();
            let term = PureState::product(&factors)?;
            let amps: Vec<C64> =
                cur.amplitudes().iter().zip(term.amplitudes()).map(|(a, b)| a + b).collect();
            let next = PureState::new(cur.profile().clone(), amps)?;
            let next_ranks = tensor::local_ranks(&next).local_ranks;
            let grew = deficient.iter().all(|&p| next_ranks[p] > ranks[p]);
            let kept = (0..dims.len()).all(|p| next_ranks[p] >= ranks[p]);
            if grew && kept {
                accepted = Some(next);
                break;
            }
        }
        cur = accepted.ok_or(ConstructError::AugmentStalled(AUGMENT_ATTEMPTS))?;
    }
}

/// Maximal state in a `(d2 d3 - 1) x d2 x d3` space whose complement has
/// Schmidt rank `r`: `sum_i |i> |beta_i>` with `{beta_i}` an orthonormal
/// basis of the orthocomplement of `sum_{j<r} |jj>`.
pub fn canonical_maximal(profile: &DimsProfile, r: usize) -> Result<PureState, ConstructError> {
    let (d1, d2, d3) = require_tripartite(profile)?;
    if d1 + 1 != d2 * d3 {
        return Err(ConstructError::BadProfile(format!("{profile} does not have d1 = d2 d3 - 1")));
    }
    let max = d2.min(d3);
    if r == 0 || r > max {
        return Err(ConstructError::BadClassIndex { r, max });
    }
    let rest = d2 * d3;
    let mut omega = DMatrix::<C64>::zeros(rest, 1);
    for j in 0..r {
        omega[(j * d3 + j, 0)] = one();
    }
    let basis = linalg::orthocomplement(&omega, rank_eps());
    debug_assert_eq!(basis.ncols(), d1);
    let mut amps = vec![C64::new(0.0, 0.0); profile.total()];
    for i in 0..d1 {
        for bc in 0..rest {
            amps[i * rest + bc] = basis[(bc, i)];
        }
    }
    Ok(PureState::new(profile.clone(), amps)?.with_label(format!("canonical({profile},{r})")))
}

/// The two maximal-class representatives of the `3 x 2 x 2` space:
/// `|0>|00> + |1>|01> + |2>|11>` and `|0>|00> + |1>(|01> + |10>) + |2>|11>`.
pub fn maximal_322_representatives() -> [PureState; 2] {
    let d = [3, 2, 2];
    let first =
        PureState::from_terms(&d, &[(one(), &[0, 0, 0]), (one(), &[1, 0, 1]), (one(), &[2, 1, 1])])
            .expect("static state")
            .with_label("phi1(3x2x2)");
    let second = PureState::from_terms(
        &d,
        &[(one(), &[0, 0, 0]), (one(), &[1, 0, 1]), (one(), &[1, 1, 0]), (one(), &[2, 1, 1])],
    )
    .expect("static state")
    .with_label("phi2(3x2x2)");
    [first, second]
}

/// `sum_{i,j,k<m} |i,j>|i,k>|k,j>` in `m^2 x m^2 x m^2`, each party's pair
/// `(a, b)` stored at index `a m + b`.
pub fn matmul_tensor(m: usize) -> Result<PureState, ConstructError> {
    if m < 2 {
        return Err(ConstructError::BadDimension(format!("matrix size must be >= 2, got {m}")));
    }
    let d = m * m;
    let profile = DimsProfile::new(vec![d, d, d])?;
    let mut amps = vec![C64::new(0.0, 0.0); profile.total()];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                amps[profile.flat_index(&[i * m + j, i * m + k, k * m + j])] = one();
            }
        }
    }
    Ok(PureState::new(profile, amps)?.with_label(format!("matmul({m})")))
}

/// `Phi_d^{AB} (x) Phi_d^{CD}` and `Phi_d^{AC} (x) Phi_d^{BD}`, parties
/// ordered `A, B, C, D`.
pub fn case1_pair(d: usize) -> Result<(PureState, PureState), ConstructError> {
    let e = epr(d)?;
    let pair = e.tensor_product(&e);
    let first = pair.clone().with_label(format!("epr-ab-cd({d})"));
    // the product is ordered (A, C, B, D); bring B forward
    let second = pair.permute_parties(&[0, 2, 1, 3])?.with_label(format!("epr-ac-bd({d})"));
    Ok((first, second))
}
