//! Tensor-rank intervals.
//!
//! Lower bounds come from bipartition flattenings and from the known
//! space-rank formulas for tripartite spaces; upper bounds come from explicit
//! product decompositions that are checked amplitude by amplitude. No rank
//! search or numeric fitting is done: a fit cannot tell rank from border rank.

use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::tensor::{self, PureState, TensorError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RankError {
    #[error("space rank formulas need exactly three parties, got {0}")]
    NotTripartite(usize),
    #[error("dims must be sorted non-increasing, got {0:?}")]
    Unsorted(Vec<usize>),
    #[error("decomposition shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("decomposition term {0} is the zero product")]
    ZeroTerm(usize),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Where a bound came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSource {
    /// Schmidt rank across some bipartition.
    Flattening,
    /// Expansion over a product basis of all parties but the largest.
    BasisExpansion,
    /// `d1 + floor(sqrt(2k + 2)) - 2` for deficiency `k >= 1`.
    DeficiencyLowerBound,
    /// `d2 d3 - ceil(k / 2)` for `0 <= k <= 4`, `k <= max(d2, d3)`.
    SmallDeficiencyExact,
    /// A verified product decomposition.
    Certificate,
}

impl BoundSource {
    pub fn tag(self) -> &'static str {
        match self {
            BoundSource::Flattening => "flattening",
            BoundSource::BasisExpansion => "basis-expansion",
            BoundSource::DeficiencyLowerBound => "deficiency-lower-bound",
            BoundSource::SmallDeficiencyExact => "small-deficiency-exact",
            BoundSource::Certificate => "certificate",
        }
    }
}

/// `lower <= rank <= upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankBound {
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    pub provenance: Vec<BoundSource>,
}

impl RankBound {
    fn new(lower: usize, upper: usize, mut provenance: Vec<BoundSource>) -> Self {
        assert!(lower <= upper, "rank interval [{lower}, {upper}] is empty");
        provenance.sort();
        provenance.dedup();
        Self { lower, upper, exact: lower == upper, provenance }
    }

    pub fn exact_value(&self) -> Option<usize> {
        self.exact.then_some(self.lower)
    }
}

/// `sum_t v_t^(0) (x) v_t^(1) (x) ... (x) v_t^(n-1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductDecomposition {
    terms: Vec<Vec<Vec<C64>>>,
}

impl ProductDecomposition {
    pub fn new(terms: Vec<Vec<Vec<C64>>>) -> Result<Self, RankError> {
        if let Some(first) = terms.first() {
            let dims: Vec<usize> = first.iter().map(Vec::len).collect();
            for (t, term) in terms.iter().enumerate() {
                let these: Vec<usize> = term.iter().map(Vec::len).collect();
                if these != dims {
                    return Err(RankError::ShapeMismatch(format!(
                        "term {t} has factor lengths {these:?}, term 0 has {dims:?}"
                    )));
                }
                if term.is_empty() || term.iter().any(|v| v.iter().all(|z| z.norm() == 0.0)) {
                    return Err(RankError::ZeroTerm(t));
                }
            }
        }
        Ok(Self { terms })
    }

    /// Terms whose factors are real basis-index combinations, e.g.
    /// `[(1, 0), (-1, 1)]` for `|0> - |1>`.
    pub fn from_sparse(dims: &[usize], terms: &[Vec<Vec<(f64, usize)>>]) -> Result<Self, RankError> {
        let dense = terms
            .iter()
            .map(|term| {
                if term.len() != dims.len() {
                    return Err(RankError::ShapeMismatch(format!(
                        "{} factors for {} parties",
                        term.len(),
                        dims.len()
                    )));
                }
                term.iter()
                    .zip(dims)
                    .map(|(factor, &d)| {
                        let mut v = vec![C64::new(0.0, 0.0); d];
                        for &(c, i) in factor {
                            if i >= d {
                                return Err(RankError::ShapeMismatch(format!(
                                    "basis index {i} out of range for dimension {d}"
                                )));
                            }
                            v[i] += C64::new(c, 0.0);
                        }
                        Ok(v)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(dense)
    }

    pub fn terms(&self) -> &[Vec<Vec<C64>>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn without_term(&self, index: usize) -> Self {
        let mut terms = self.terms.clone();
        terms.remove(index);
        Self { terms }
    }

    fn check_shape(&self, dims: &[usize]) -> Result<(), RankError> {
        for (t, term) in self.terms.iter().enumerate() {
            let these: Vec<usize> = term.iter().map(Vec::len).collect();
            if these != dims {
                return Err(RankError::ShapeMismatch(format!(
                    "term {t} has factor lengths {these:?}, state has dims {dims:?}"
                )));
            }
        }
        Ok(())
    }

    /// Dense amplitudes of the sum over a space with the given dims.
    pub fn expand(&self, dims: &[usize]) -> Result<Vec<C64>, RankError> {
        self.check_shape(dims)?;
        let total: usize = dims.iter().product();
        let mut amps = vec![C64::new(0.0, 0.0); total];
        for term in &self.terms {
            let mut prod = vec![C64::new(1.0, 0.0)];
            for f in term {
                prod = prod.iter().flat_map(|&a| f.iter().map(move |&b| a * b)).collect();
            }
            for (a, p) in amps.iter_mut().zip(prod) {
                *a += p;
            }
        }
        Ok(amps)
    }
}

/// Max deviation allowed between a decomposition and its target, after
/// scaling both so the target's largest amplitude has modulus one.
pub const CERTIFICATE_TOL: f64 = 1e-10;

/// Largest amplitude deviation between `state` and the expanded
/// decomposition, relative to the state's largest amplitude.
pub fn decomposition_residual(
    state: &PureState,
    decomposition: &ProductDecomposition,
) -> Result<f64, RankError> {
    let expanded = decomposition.expand(state.dims())?;
    let scale = state.max_abs();
    Ok(state
        .amplitudes()
        .iter()
        .zip(&expanded)
        .map(|(a, b)| (a - b).norm() / scale)
        .fold(0.0, f64::max))
}

pub fn verify_decomposition(
    state: &PureState,
    decomposition: &ProductDecomposition,
) -> Result<bool, RankError> {
    Ok(decomposition_residual(state, decomposition)? <= CERTIFICATE_TOL)
}

/// Largest Schmidt rank over all bipartitions.
pub fn flattening_lower_bound(state: &PureState) -> usize {
    tensor::local_ranks(state)
        .bipartition_ranks
        .values()
        .copied()
        .max()
        .unwrap_or(1)
}

/// Rank interval of a single state: flattening lower bound, trivial upper
/// bound, tightened by a certificate when one verifies.
pub fn state_rank_bounds(
    state: &PureState,
    certificate: Option<&ProductDecomposition>,
) -> Result<RankBound, RankError> {
    let lower = flattening_lower_bound(state);
    let mut upper = state.profile().tail_product();
    let mut provenance = vec![BoundSource::Flattening, BoundSource::BasisExpansion];
    if let Some(cert) = certificate {
        if verify_decomposition(state, cert)? && cert.len() < upper {
            upper = cert.len();
            provenance.retain(|s| *s != BoundSource::BasisExpansion);
            provenance.push(BoundSource::Certificate);
        }
    }
    Ok(RankBound::new(lower, upper.max(lower), provenance))
}

fn isqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Bounds on the maximal tensor rank over a whole `d1 x d2 x d3` space.
pub fn space_rank_bounds(dims: &[usize]) -> Result<RankBound, RankError> {
    if dims.len() != 3 {
        return Err(RankError::NotTripartite(dims.len()));
    }
    if dims.windows(2).any(|w| w[0] < w[1]) {
        return Err(RankError::Unsorted(dims.to_vec()));
    }
    let (d1, d2, d3) = (dims[0], dims[1], dims[2]);
    let tail = d2 * d3;
    if d1 >= tail {
        return Ok(RankBound::new(
            tail,
            tail,
            vec![BoundSource::Flattening, BoundSource::BasisExpansion],
        ));
    }
    let k = tail - d1;
    let mut lower = d1;
    let mut provenance = vec![BoundSource::Flattening];
    let gat = d1 + isqrt(2 * k as u64 + 2) as usize - 2;
    if gat > lower {
        lower = gat;
        provenance = vec![BoundSource::DeficiencyLowerBound];
    }
    if k <= 4 && k <= d2.max(d3) {
        let exact = tail - k.div_ceil(2);
        debug_assert!(exact >= lower);
        return Ok(RankBound::new(exact, exact, vec![BoundSource::SmallDeficiencyExact]));
    }
    provenance.push(BoundSource::BasisExpansion);
    Ok(RankBound::new(lower, tail, provenance))
}

/// Strassen's seven products for the 2x2 matrix-multiplication tensor.
///
/// The tensor has parties `(Z, X, Y)` indexed by matrix entries `(i, j)` at
/// `2 * i + j`, with `Z_ij = sum_k X_ik Y_kj`. Each term is
/// `(coefficients of M_t in Z) (x) (X-side linear form) (x) (Y-side linear form)`.
pub fn strassen_decomposition() -> ProductDecomposition {
    const A11: usize = 0;
    const A12: usize = 1;
    const A21: usize = 2;
    const A22: usize = 3;
    let p = |i| (1.0, i);
    let m = |i| (-1.0, i);
    // (Z combination, X form, Y form) for M1..M7
    let terms: Vec<Vec<Vec<(f64, usize)>>> = vec![
        vec![vec![p(A11), p(A22)], vec![p(A11), p(A22)], vec![p(A11), p(A22)]],
        vec![vec![p(A21), m(A22)], vec![p(A21), p(A22)], vec![p(A11)]],
        vec![vec![p(A12), p(A22)], vec![p(A11)], vec![p(A12), m(A22)]],
        vec![vec![p(A11), p(A21)], vec![p(A22)], vec![p(A21), m(A11)]],
        vec![vec![m(A11), p(A12)], vec![p(A11), p(A12)], vec![p(A22)]],
        vec![vec![p(A22)], vec![p(A21), m(A11)], vec![p(A11), p(A12)]],
        vec![vec![p(A11)], vec![p(A12), m(A22)], vec![p(A21), p(A22)]],
    ];
    ProductDecomposition::from_sparse(&[4, 4, 4], &terms).expect("static shape")
}
