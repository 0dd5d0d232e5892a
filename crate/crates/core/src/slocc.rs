//! SLOCC predicates and classification.
//!
//! Two states are SLOCC equivalent when an invertible local operator tuple
//! maps one onto the other, and `psi <= phi` when some (possibly singular)
//! tuple maps `phi` onto `psi`. Everything here is decided through ranks of
//! flattenings plus, for the hyperplane profiles `d1 = d2 d3 - 1`, the
//! Schmidt rank of the one-dimensional orthocomplement of the pivot
//! flattening's row space.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::construct::ConstructError;
use crate::linalg::{self, rank_eps};
use crate::tensor::{self, DimsProfile, LocalOperatorTuple, PureState, TensorError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SloccError {
    #[error("need at least two parties")]
    SingleParty,
    #[error("party {party} has dimension {dim}; SLOCC predicates need every dimension >= 2")]
    TrivialParty { party: usize, dim: usize },
    #[error("pivot party {pivot} has local rank {rank}, below its dimension {dim}")]
    PivotRankDeficient { pivot: usize, rank: usize, dim: usize },
    #[error("pivot dimension {pivot_dim} is not below the product {rest} of the other dimensions")]
    NonPositiveK { pivot_dim: usize, rest: usize },
    #[error("not a hyperplane profile (largest dimension = product of the others - 1): {0}")]
    NotHyperplaneProfile(String),
    #[error("state is not maximal: local ranks {ranks:?} for dims {dims:?}")]
    NotMaximal { ranks: Vec<usize>, dims: Vec<usize> },
    #[error("profiles differ: {a:?} vs {b:?}")]
    ProfileMismatch { a: Vec<usize>, b: Vec<usize> },
    #[error("expected a bipartite state, got {0} parties")]
    NotBipartite(usize),
    #[error("largest dimension {d1} is below the product {tail} of the others; no maximum entangled state")]
    ConditionViolated { d1: usize, tail: usize },
    #[error("dims must be sorted non-increasing, got {0:?}")]
    Unsorted(Vec<usize>),
    #[error("class labels differ: {0} vs {1}")]
    LabelMismatch(usize, usize),
    #[error("undecidable: {0}")]
    Undecidable(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

fn require_nontrivial(dims: &[usize]) -> Result<(), SloccError> {
    if dims.len() < 2 {
        return Err(SloccError::SingleParty);
    }
    if let Some(party) = dims.iter().position(|&d| d < 2) {
        return Err(SloccError::TrivialParty { party, dim: dims[party] });
    }
    Ok(())
}

/// Whether the space has a (stochastic) maximum entangled state: the
/// largest dimension is at least the product of the others. Input order is
/// irrelevant.
pub fn mes_exists(dims: &[usize]) -> Result<bool, SloccError> {
    require_nontrivial(dims)?;
    let total: usize = dims.iter().product();
    let max = *dims.iter().max().expect("non-empty");
    Ok(max >= total / max)
}

/// Maximal under SLOCC iff every single-party reduced operator has full rank.
pub fn is_maximal(state: &PureState) -> Result<bool, SloccError> {
    if state.n() < 2 {
        return Err(SloccError::SingleParty);
    }
    Ok(tensor::local_ranks(state).is_full(state.dims()))
}

/// Representative of the complement class of a pivot-full-rank state.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplementClass {
    /// `sum_{i<k} |i> |phi_i^perp>`, with the `k`-dimensional factor at the
    /// pivot's position.
    pub complement_state: PureState,
    pub pivot: usize,
    pub k: usize,
    /// Schmidt rank of the complement for tripartite states with `k = 1`.
    pub label: Option<usize>,
}

/// Writes `state = sum_i |i>^pivot |phi_i>` and returns the state built on
/// an orthonormal basis of `span{phi_i}^perp`.
pub fn complement_map(state: &PureState, pivot: usize) -> Result<ComplementClass, SloccError> {
    let n = state.n();
    if n < 2 {
        return Err(SloccError::SingleParty);
    }
    if pivot >= n {
        return Err(TensorError::PartyOutOfRange { party: pivot, n }.into());
    }
    let dims = state.dims();
    let pivot_dim = dims[pivot];
    let rest = state.profile().total() / pivot_dim;
    let m = state.flatten(&[pivot])?;
    let eps = rank_eps();
    let rank = linalg::matrix_rank(&m, eps);
    if rank < pivot_dim {
        return Err(SloccError::PivotRankDeficient { pivot, rank, dim: pivot_dim });
    }
    if pivot_dim >= rest {
        return Err(SloccError::NonPositiveK { pivot_dim, rest });
    }
    let k = rest - pivot_dim;
    // rows of m are the phi_i; their span is the column space of m^T
    let perp = linalg::orthocomplement(&m.transpose(), eps);
    if perp.ncols() != k {
        return Err(SloccError::Numerical(format!(
            "orthocomplement has dimension {}, expected {k}",
            perp.ncols()
        )));
    }
    let others: Vec<usize> = (0..n).filter(|&p| p != pivot).collect();
    let mut built_dims = vec![k];
    built_dims.extend(others.iter().map(|&p| dims[p]));
    let mut amps = vec![C64::new(0.0, 0.0); k * rest];
    for i in 0..k {
        for col in 0..rest {
            amps[i * rest + col] = perp[(col, i)];
        }
    }
    let built = PureState::from_dims(&built_dims, amps)?;
    let order: Vec<usize> = (0..n)
        .map(|p| if p == pivot { 0 } else { 1 + others.iter().position(|&q| q == p).expect("other") })
        .collect();
    let complement_state = built.permute_parties(&order)?;
    let label = if n == 3 && k == 1 {
        Some(tensor::schmidt_rank(&complement_state, &[others[0]])?.rank)
    } else {
        None
    };
    Ok(ComplementClass { complement_state, pivot, k, label })
}

/// Largest-dimension party, lowest index on ties.
pub fn pivot_party(dims: &[usize]) -> usize {
    let max = dims.iter().copied().max().unwrap_or(0);
    dims.iter().position(|&d| d == max).unwrap_or(0)
}

fn is_hyperplane(dims: &[usize]) -> bool {
    let pivot = pivot_party(dims);
    let total: usize = dims.iter().product();
    dims[pivot] + 1 == total / dims[pivot]
}

/// Maximal-class label of a state in a `(d2 d3 - 1) x d2 x d3` space: the
/// Schmidt rank `1..=min(d2, d3)` of its complement. Two maximal states of
/// such a space are equivalent iff their labels agree.
pub fn classify_hyperplane(state: &PureState) -> Result<usize, SloccError> {
    let dims = state.dims();
    require_nontrivial(dims)?;
    if !is_hyperplane(dims) {
        return Err(SloccError::NotHyperplaneProfile(state.profile().to_string()));
    }
    if state.n() != 3 {
        return Err(SloccError::Undecidable(format!(
            "{} parties: the complement is a {}-party state with no labelling procedure",
            state.n(),
            state.n() - 1
        )));
    }
    let ranks = tensor::local_ranks(state).local_ranks;
    if ranks != dims {
        return Err(SloccError::NotMaximal { ranks, dims: dims.to_vec() });
    }
    let class = complement_map(state, pivot_party(dims))?;
    class
        .label
        .ok_or_else(|| SloccError::Numerical("complement label missing".into()))
}

fn require_same_dims(a: &PureState, b: &PureState) -> Result<(), SloccError> {
    if a.dims() != b.dims() {
        return Err(SloccError::ProfileMismatch { a: a.dims().to_vec(), b: b.dims().to_vec() });
    }
    Ok(())
}

/// Bipartite states are SLOCC equivalent iff their Schmidt ranks agree.
pub fn equiv_bipartite(a: &PureState, b: &PureState) -> Result<bool, SloccError> {
    require_same_dims(a, b)?;
    if a.n() != 2 {
        return Err(SloccError::NotBipartite(a.n()));
    }
    Ok(tensor::schmidt_rank(a, &[0])?.rank == tensor::schmidt_rank(b, &[0])?.rank)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equivalence {
    Equivalent,
    Inequivalent,
}

/// How an equivalence question was settled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceVerdict {
    pub verdict: Equivalence,
    pub reason: &'static str,
}

/// Decides SLOCC equivalence where a sound procedure exists: bipartite
/// states, differing bipartition ranks, and tripartite hyperplane profiles
/// with full pivot rank. Anything else is [`SloccError::Undecidable`].
pub fn decide_equivalence(a: &PureState, b: &PureState) -> Result<EquivalenceVerdict, SloccError> {
    require_same_dims(a, b)?;
    let verdict = |eq: bool, reason| EquivalenceVerdict {
        verdict: if eq { Equivalence::Equivalent } else { Equivalence::Inequivalent },
        reason,
    };
    if a.n() == 1 {
        return Ok(verdict(true, "single-party"));
    }
    if a.n() == 2 {
        return Ok(verdict(equiv_bipartite(a, b)?, "bipartite-schmidt-rank"));
    }
    let ra = tensor::local_ranks(a);
    let rb = tensor::local_ranks(b);
    if ra != rb {
        return Ok(verdict(false, "bipartition-ranks-differ"));
    }
    let dims = a.dims();
    if a.n() == 3 && dims.iter().all(|&d| d >= 2) && is_hyperplane(dims) {
        let pivot = pivot_party(dims);
        if ra.local_ranks[pivot] == dims[pivot] {
            let la = complement_map(a, pivot)?.label;
            let lb = complement_map(b, pivot)?.label;
            if let (Some(la), Some(lb)) = (la, lb) {
                return Ok(verdict(la == lb, "complement-schmidt-rank"));
            }
        }
    }
    Err(SloccError::Undecidable(format!(
        "no equivalence procedure for {} with matching bipartition ranks",
        a.profile()
    )))
}

/// Two cuts on which the Schmidt ranks of `a` and `b` are ordered oppositely,
/// so neither state can be converted into the other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncomparabilityWitness {
    /// Cut where `a` has the smaller rank.
    pub a_lower_cut: Vec<usize>,
    /// Cut where `a` has the larger rank.
    pub a_higher_cut: Vec<usize>,
    /// Ranks of `a` on `(a_lower_cut, a_higher_cut)`.
    pub ranks_a: [usize; 2],
    /// Ranks of `b` on `(a_lower_cut, a_higher_cut)`.
    pub ranks_b: [usize; 2],
}

/// Searches all bipartitions (by size, then lexicographically) for a pair of
/// cuts with opposite rank order. `None` proves nothing.
pub fn incomparability_witness(
    a: &PureState,
    b: &PureState,
) -> Result<Option<IncomparabilityWitness>, SloccError> {
    require_same_dims(a, b)?;
    if a.n() < 2 {
        return Ok(None);
    }
    let ra = tensor::local_ranks(a).bipartition_ranks;
    let rb = tensor::local_ranks(b).bipartition_ranks;
    let cuts = tensor::bipartitions(a.n());
    let lower = cuts.iter().find(|c| ra[*c] < rb[*c]);
    let higher = cuts.iter().find(|c| ra[*c] > rb[*c]);
    Ok(match (lower, higher) {
        (Some(l), Some(h)) => Some(IncomparabilityWitness {
            a_lower_cut: l.clone(),
            a_higher_cut: h.clone(),
            ranks_a: [ra[l], ra[h]],
            ranks_b: [rb[l], rb[h]],
        }),
        _ => None,
    })
}

/// Local tuple `(L1, I, ..., I)` taking the maximum entangled state of
/// `dims` to `target`. Column `j` of `L1` is column `j` of the target's
/// first-party flattening.
pub fn reach_from_mes(dims: &[usize], target: &PureState) -> Result<LocalOperatorTuple, SloccError> {
    if !mes_exists(dims)? {
        let profile = DimsProfile::new(dims.to_vec())?;
        return Err(SloccError::ConditionViolated {
            d1: profile.max_dim(),
            tail: profile.tail_product(),
        });
    }
    if dims.windows(2).any(|w| w[0] < w[1]) {
        return Err(SloccError::Unsorted(dims.to_vec()));
    }
    if target.dims() != dims {
        return Err(SloccError::ProfileMismatch { a: dims.to_vec(), b: target.dims().to_vec() });
    }
    let d1 = dims[0];
    let tail = target.profile().total() / d1;
    let m = target.flatten(&[0])?;
    let mut l1 = DMatrix::<C64>::zeros(d1, d1);
    l1.view_mut((0, 0), (d1, tail)).copy_from(&m);
    let mut ops = vec![l1];
    ops.extend(dims[1..].iter().map(|&d| DMatrix::identity(d, d)));
    Ok(LocalOperatorTuple::new(ops)?)
}

/// Invertible `(L1, L2, L3)` with `(L1 (x) L2 (x) L3) |source> = |target>`
/// for two maximal states of the same hyperplane space with equal labels.
///
/// `L2`, `L3` bring the complement vectors to a common bipartite normal form
/// (transported through the inverse adjoint); `L1` then matches the rows of
/// the pivot flattenings.
pub fn hyperplane_equivalence(
    source: &PureState,
    target: &PureState,
) -> Result<LocalOperatorTuple, SloccError> {
    require_same_dims(source, target)?;
    let dims = source.dims();
    if dims.windows(2).any(|w| w[0] < w[1]) {
        return Err(SloccError::Unsorted(dims.to_vec()));
    }
    let (ls, lt) = (classify_hyperplane(source)?, classify_hyperplane(target)?);
    if ls != lt {
        return Err(SloccError::LabelMismatch(ls, lt));
    }
    let (d1, d2, d3) = (dims[0], dims[1], dims[2]);
    let eps = rank_eps();
    let as_matrix = |s: &PureState| -> Result<DMatrix<C64>, SloccError> {
        let c = complement_map(s, 0)?.complement_state;
        Ok(DMatrix::from_row_slice(d2, d3, c.amplitudes()))
    };
    let (c_src, c_tgt) = (as_matrix(source)?, as_matrix(target)?);
    let (p_src, q_src, _) = linalg::bipartite_normal_form(&c_src, eps);
    let (p_tgt, q_tgt, _) = linalg::bipartite_normal_form(&c_tgt, eps);
    let singular = || SloccError::Numerical("singular matrix in normal form".into());
    let g2 = p_tgt.try_inverse().ok_or_else(singular)? * p_src;
    let g3 = q_tgt.try_inverse().ok_or_else(singular)? * q_src;
    let l2 = g2.adjoint().try_inverse().ok_or_else(singular)?;
    let l3 = g3.adjoint().try_inverse().ok_or_else(singular)?;

    let moved = tensor::apply_local(
        source,
        &LocalOperatorTuple::new(vec![DMatrix::identity(d1, d1), l2.clone(), l3.clone()])?,
    )?;
    let rows_moved = moved.flatten(&[0])?;
    let rows_tgt = target.flatten(&[0])?;
    let gram = &rows_tgt * rows_tgt.adjoint();
    let pinv = rows_tgt.adjoint() * gram.try_inverse().ok_or_else(singular)?;
    let coeffs = rows_moved * pinv;
    let l1 = coeffs.try_inverse().ok_or_else(singular)?;
    Ok(LocalOperatorTuple::new(vec![l1, l2, l3])?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Finiteness {
    Yes,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum ClassCount {
    Exact(usize),
    AtMost(usize),
}

/// Result that matched a catalog entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogSource {
    /// A maximum entangled state exists, so it spans the only maximal class.
    MesExists,
    /// `d1 = d2 d3 - 1`: exactly `min(d2, d3)` maximal classes.
    HyperplaneCount,
    /// Maximal classes inject into the SLOCC classes of `k x d2 x ... x dn`.
    ComplementCorrespondence,
    /// One of the finite families derived from the `d3 = 2, d2 <= 3` result.
    FiniteFamily,
    /// Known class list of `3 x 2 x 2` (eight classes overall).
    KnownClassList,
    /// Known count of five maximal classes in `4 x 3 x 2`.
    KnownMaximalCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub dims: Vec<usize>,
    pub finite: Finiteness,
    pub max_class_count: Option<ClassCount>,
    /// Number of all SLOCC classes, where known.
    pub total_class_count: Option<usize>,
    pub sources: Vec<CatalogSource>,
}

/// Pattern match of a space against the known finiteness results. Never
/// classifies anything itself.
pub fn finite_class_catalog(dims: &[usize]) -> Result<CatalogEntry, SloccError> {
    require_nontrivial(dims)?;
    let mut s = dims.to_vec();
    s.sort_unstable_by(|a, b| b.cmp(a));
    let (d1, n) = (s[0], s.len());
    let tail: usize = s[1..].iter().product();
    let entry = |finite, max, total, sources: Vec<CatalogSource>| CatalogEntry {
        dims: s.clone(),
        finite,
        max_class_count: max,
        total_class_count: total,
        sources,
    };
    use CatalogSource::*;

    if d1 >= tail {
        return Ok(entry(Finiteness::Yes, Some(ClassCount::Exact(1)), None, vec![MesExists]));
    }
    if n == 3 {
        let (d2, d3) = (s[1], s[2]);
        if s == [3, 2, 2] {
            return Ok(entry(
                Finiteness::Yes,
                Some(ClassCount::Exact(2)),
                Some(8),
                vec![HyperplaneCount, KnownClassList],
            ));
        }
        if s == [4, 3, 2] {
            return Ok(entry(
                Finiteness::Yes,
                Some(ClassCount::Exact(5)),
                None,
                vec![ComplementCorrespondence, FiniteFamily, KnownMaximalCount],
            ));
        }
        if d1 + 1 == tail {
            return Ok(entry(
                Finiteness::Yes,
                Some(ClassCount::Exact(d2.min(d3))),
                None,
                vec![HyperplaneCount],
            ));
        }
        // (2m-2) x m x 2, (2m-3) x m x 2, (3m-2) x m x 2, under the standing
        // assumption 1 <= k < d2 d3 / 2 for the complement correspondence
        let k = tail - d1;
        let family = d3 == 2 && [2 * d2 - 2, 2 * d2 - 3, 3 * d2 - 2].contains(&d1);
        if family && 2 * k < tail {
            return Ok(entry(Finiteness::Yes, None, None, vec![ComplementCorrespondence, FiniteFamily]));
        }
    }
    if n == 4 && s[3] == 2 && (2..=3).contains(&s[2]) && d1 + 1 == 2 * s[1] * s[2] {
        return Ok(entry(Finiteness::Yes, None, None, vec![ComplementCorrespondence, FiniteFamily]));
    }
    if d1 + 1 == tail {
        // one-to-one with the SLOCC classes of the remaining parties, whose
        // finiteness is not known here
        return Ok(entry(Finiteness::Unknown, None, None, vec![ComplementCorrespondence]));
    }
    Ok(entry(Finiteness::Unknown, None, None, vec![]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{self, maximal_322_representatives};

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    fn basis_state(dims: &[usize], terms: &[&[usize]]) -> PureState {
        let t: Vec<(C64, &[usize])> = terms.iter().map(|&i| (one(), i)).collect();
        PureState::from_terms(dims, &t).unwrap()
    }

    #[test]
    fn mes_exists_examples() {
        assert!(mes_exists(&[4, 2, 2]).unwrap());
        assert!(!mes_exists(&[2, 2, 2]).unwrap());
        assert!(mes_exists(&[2, 2]).unwrap());
        assert!(!mes_exists(&[3, 3, 3, 3]).unwrap());
        assert!(mes_exists(&[2, 4, 2]).unwrap());
        assert_eq!(mes_exists(&[4, 1]), Err(SloccError::TrivialParty { party: 1, dim: 1 }));
        assert_eq!(mes_exists(&[4]), Err(SloccError::SingleParty));
    }

    #[test]
    fn is_maximal_examples() {
        let [phi1, phi2] = maximal_322_representatives();
        assert!(is_maximal(&phi1).unwrap());
        assert!(is_maximal(&phi2).unwrap());
        assert!(!is_maximal(&basis_state(&[2, 2, 2], &[&[0, 0, 0], &[1, 0, 1]])).unwrap());
        assert!(is_maximal(&construct::ghz(3, 2).unwrap()).unwrap());
    }

    #[test]
    fn complement_of_phi1_is_10() {
        let [phi1, _] = maximal_322_representatives();
        let c = complement_map(&phi1, 0).unwrap();
        assert_eq!((c.k, c.label), (1, Some(1)));
        let v = c.complement_state;
        assert_eq!(v.dims(), &[1, 2, 2]);
        // span{|10>} up to phase
        assert!((v.amplitude(&[0, 1, 0]).norm() - 1.0).abs() < 1e-12);
        assert!(v.amplitude(&[0, 0, 0]).norm() < 1e-12);
        assert!(v.amplitude(&[0, 0, 1]).norm() < 1e-12);
        assert!(v.amplitude(&[0, 1, 1]).norm() < 1e-12);
    }

    #[test]
    fn complement_of_phi2_is_singlet() {
        let [_, phi2] = maximal_322_representatives();
        let c = complement_map(&phi2, 0).unwrap();
        assert_eq!(c.label, Some(2));
        let v = c.complement_state;
        let (a01, a10) = (v.amplitude(&[0, 0, 1]), v.amplitude(&[0, 1, 0]));
        assert!((a01 + a10).norm() < 1e-12);
        assert!((a01.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn complement_of_three_term_state() {
        let s = basis_state(&[3, 2, 2], &[&[0, 0, 0], &[1, 0, 1], &[2, 1, 0]]);
        let c = complement_map(&s, 0).unwrap();
        assert_eq!(c.label, Some(1));
        assert!((c.complement_state.amplitude(&[0, 1, 1]).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complement_places_factor_at_pivot() {
        let [phi1, _] = maximal_322_representatives();
        let moved = phi1.permute_parties(&[1, 0, 2]).unwrap();
        let c = complement_map(&moved, 1).unwrap();
        assert_eq!(c.complement_state.dims(), &[2, 1, 2]);
        assert_eq!(c.label, Some(1));
        assert!((c.complement_state.amplitude(&[1, 0, 0]).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complement_errors() {
        let s = basis_state(&[3, 2, 2], &[&[0, 0, 0], &[1, 1, 1]]);
        assert!(matches!(complement_map(&s, 0), Err(SloccError::PivotRankDeficient { .. })));
        let mes = construct::mes_state(&DimsProfile::new(vec![4, 2, 2]).unwrap()).unwrap();
        assert!(matches!(complement_map(&mes, 0), Err(SloccError::NonPositiveK { .. })));
    }

    #[test]
    fn complement_with_larger_k() {
        // 2x2x2 GHZ: pivot flattening rows |00>, |11>, complement spanned by |01>, |10>
        let c = complement_map(&construct::ghz(3, 2).unwrap(), 0).unwrap();
        assert_eq!((c.k, c.label), (2, None));
        assert_eq!(tensor::local_ranks(&c.complement_state).local_ranks[0], 2);
    }

    #[test]
    fn classify_examples_and_errors() {
        let [phi1, phi2] = maximal_322_representatives();
        assert_eq!(classify_hyperplane(&phi1), Ok(1));
        assert_eq!(classify_hyperplane(&phi2), Ok(2));
        let ghz = construct::ghz(3, 2).unwrap();
        assert!(matches!(classify_hyperplane(&ghz), Err(SloccError::NotHyperplaneProfile(_))));
        let s = basis_state(&[3, 2, 2], &[&[0, 0, 0], &[1, 0, 1], &[2, 0, 0]]);
        assert!(matches!(classify_hyperplane(&s), Err(SloccError::NotMaximal { .. })));
        let four = basis_state(&[7, 2, 2, 2], &[&[0, 0, 0, 0]]);
        assert!(matches!(classify_hyperplane(&four), Err(SloccError::Undecidable(_))));
    }

    #[test]
    fn equiv_bipartite_examples() {
        let a = basis_state(&[2, 2], &[&[0, 0], &[1, 1]]);
        let b = PureState::from_terms(&[2, 2], &[(one(), &[0, 0]), (C64::new(2.0, 0.0), &[1, 1])])
            .unwrap();
        assert!(equiv_bipartite(&a, &b).unwrap());
        assert!(!equiv_bipartite(&basis_state(&[2, 2], &[&[0, 0]]), &a).unwrap());
        let singlet =
            PureState::from_terms(&[2, 2], &[(one(), &[0, 1]), (-one(), &[1, 0])]).unwrap();
        assert!(!equiv_bipartite(&basis_state(&[2, 2], &[&[1, 0]]), &singlet).unwrap());
        assert!(matches!(
            equiv_bipartite(&a, &basis_state(&[2, 3], &[&[0, 0]])),
            Err(SloccError::ProfileMismatch { .. })
        ));
        let g = construct::ghz(3, 2).unwrap();
        assert_eq!(equiv_bipartite(&g, &g), Err(SloccError::NotBipartite(3)));
    }

    #[test]
    fn decide_equivalence_cases() {
        let [phi1, phi2] = maximal_322_representatives();
        assert_eq!(decide_equivalence(&phi1, &phi2).unwrap().verdict, Equivalence::Inequivalent);
        assert_eq!(decide_equivalence(&phi2, &phi2).unwrap().verdict, Equivalence::Equivalent);
        let ghz = construct::ghz(3, 2).unwrap();
        let w = construct::w_state(3).unwrap();
        assert!(matches!(decide_equivalence(&ghz, &w), Err(SloccError::Undecidable(_))));
        let prod = basis_state(&[2, 2, 2], &[&[0, 0, 0]]);
        assert_eq!(decide_equivalence(&ghz, &prod).unwrap().reason, "bipartition-ranks-differ");
    }

    #[test]
    fn witness_examples() {
        let (a, b) = construct::case1_pair(2).unwrap();
        let w = incomparability_witness(&a, &b).unwrap().unwrap();
        assert_eq!(w.a_lower_cut, vec![0, 1]);
        assert_eq!(w.a_higher_cut, vec![0, 2]);
        assert_eq!((w.ranks_a, w.ranks_b), ([1, 4], [4, 1]));
        let g = construct::ghz(3, 2).unwrap();
        assert_eq!(incomparability_witness(&g, &g).unwrap(), None);
        let [phi1, phi2] = maximal_322_representatives();
        assert_eq!(incomparability_witness(&phi1, &phi2).unwrap(), None);
    }

    #[test]
    fn reach_examples() {
        let target = basis_state(&[4, 2, 2], &[&[0, 0, 0]]);
        let t = reach_from_mes(&[4, 2, 2], &target).unwrap();
        let l1 = &t.ops()[0];
        for r in 0..4 {
            for c in 0..4 {
                let e = if r == 0 && c == 0 { one() } else { C64::new(0.0, 0.0) };
                assert_eq!(l1[(r, c)], e);
            }
        }
        assert_eq!(t.ops()[1], DMatrix::identity(2, 2));

        let target = basis_state(&[4, 2, 2], &[&[0, 0, 0], &[1, 1, 1]]);
        let t = reach_from_mes(&[4, 2, 2], &target).unwrap();
        let mes = construct::mes_state(&DimsProfile::new(vec![4, 2, 2]).unwrap()).unwrap();
        let out = tensor::apply_local(&mes, &t).unwrap();
        assert_eq!(out.max_deviation(&target), Some(0.0));

        let target =
            PureState::from_terms(&[2, 2], &[(one(), &[0, 0]), (C64::new(2.0, 0.0), &[1, 1])])
                .unwrap();
        let t = reach_from_mes(&[2, 2], &target).unwrap();
        assert_eq!(t.ops()[0], DMatrix::from_diagonal(&nalgebra::dvector![one(), C64::new(2.0, 0.0)]));

        assert!(matches!(
            reach_from_mes(&[3, 2, 2], &basis_state(&[3, 2, 2], &[&[0, 0, 0]])),
            Err(SloccError::ConditionViolated { d1: 3, tail: 4 })
        ));
        assert!(matches!(
            reach_from_mes(&[4, 2, 2], &basis_state(&[4, 4], &[&[0, 0]])),
            Err(SloccError::ProfileMismatch { .. })
        ));
    }

    #[test]
    fn catalog_entries() {
        let e = finite_class_catalog(&[4, 3, 2]).unwrap();
        assert_eq!((e.finite, e.max_class_count), (Finiteness::Yes, Some(ClassCount::Exact(5))));
        let e = finite_class_catalog(&[7, 2, 2, 2]).unwrap();
        assert_eq!(e.finite, Finiteness::Yes);
        assert!(e.sources.contains(&CatalogSource::FiniteFamily));
        let e = finite_class_catalog(&[2, 2, 2]).unwrap();
        assert_eq!((e.finite, e.max_class_count), (Finiteness::Unknown, None));
        let e = finite_class_catalog(&[2, 3, 2]).unwrap();
        assert_eq!(e.dims, vec![3, 2, 2]);
        assert_eq!(e.max_class_count, Some(ClassCount::Exact(2)));
        assert_eq!(e.total_class_count, Some(8));
        assert_eq!(finite_class_catalog(&[5, 3, 2]).unwrap().max_class_count, Some(ClassCount::Exact(2)));
        assert_eq!(finite_class_catalog(&[6, 4, 2]).unwrap().finite, Finiteness::Yes);
        assert_eq!(finite_class_catalog(&[5, 4, 2]).unwrap().finite, Finiteness::Yes);
        assert_eq!(finite_class_catalog(&[4, 2, 2]).unwrap().max_class_count, Some(ClassCount::Exact(1)));
        let e = finite_class_catalog(&[26, 3, 3, 3]).unwrap();
        assert_eq!(e.finite, Finiteness::Unknown);
        assert_eq!(e.sources, vec![CatalogSource::ComplementCorrespondence]);
        assert_eq!(finite_class_catalog(&[17, 3, 3, 2]).unwrap().finite, Finiteness::Yes);
        assert!(matches!(finite_class_catalog(&[3, 1, 2]), Err(SloccError::TrivialParty { .. })));
    }
}
