//! Dense multipartite pure states and local operator algebra.
//!
//! Amplitudes are stored row-major over the multi-index with party 0 varying
//! slowest, so for dims `(d0, d1, d2)` the basis vector `|i, j, k>` lives at
//! flat index `(i * d1 + j) * d2 + k`. States are never normalized: every
//! statement made about them here is projective.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::linalg::{self, rank_eps};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorError {
    #[error("a state needs at least one party")]
    NoParties,
    #[error("party {party} has dimension 0")]
    ZeroDimension { party: usize },
    #[error("expected {expected} amplitudes for the given dims, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("all amplitudes are zero")]
    ZeroState,
    #[error("party subset must be non-empty and proper, got {subset:?} for {n} parties")]
    EmptyOrFullSubset { subset: Vec<usize>, n: usize },
    #[error("party index {party} out of range for {n} parties")]
    PartyOutOfRange { party: usize, n: usize },
    #[error("party {party} listed more than once")]
    DuplicateParty { party: usize },
    #[error("operator shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("the local operators annihilate the state")]
    ZeroResult,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

/// Subsystem dimensions `d_0, ..., d_{n-1}` in the order the parties appear.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DimsProfile {
    dims: Vec<usize>,
}

impl DimsProfile {
    pub fn new(dims: Vec<usize>) -> Result<Self, TensorError> {
        if dims.is_empty() {
            return Err(TensorError::NoParties);
        }
        if let Some(party) = dims.iter().position(|&d| d == 0) {
            return Err(TensorError::ZeroDimension { party });
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    /// Dimension of the whole space.
    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn max_dim(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(1)
    }

    pub fn is_sorted(&self) -> bool {
        self.dims.windows(2).all(|w| w[0] >= w[1])
    }

    /// The same dimensions in non-increasing order.
    pub fn sorted(&self) -> DimsProfile {
        let mut dims = self.dims.clone();
        dims.sort_unstable_by(|a, b| b.cmp(a));
        DimsProfile { dims }
    }

    /// Product of all dimensions but the largest one.
    pub fn tail_product(&self) -> usize {
        self.total() / self.max_dim()
    }

    /// `d2 * d3 - d1` of the sorted profile, for tripartite profiles only.
    /// Negative when the largest party exceeds the product of the others.
    pub fn deficiency(&self) -> Option<i64> {
        if self.n() != 3 {
            return None;
        }
        let s = self.sorted();
        Some((s.dims[1] * s.dims[2]) as i64 - s.dims[0] as i64)
    }

    /// Row-major strides (party 0 slowest).
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.n()];
        for i in (0..self.n().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.n());
        multi
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &d)| {
                debug_assert!(i < d);
                acc * d + i
            })
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.n()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = flat % d;
            flat /= d;
        }
        out
    }
}

impl fmt::Display for DimsProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// A nonzero, unnormalized pure state over a [`DimsProfile`].
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    profile: DimsProfile,
    amps: Vec<C64>,
    label: Option<String>,
}

impl PureState {
    pub fn new(profile: DimsProfile, amps: Vec<C64>) -> Result<Self, TensorError> {
        let expected = profile.total();
        if amps.len() != expected {
            return Err(TensorError::LengthMismatch { expected, got: amps.len() });
        }
        if amps.iter().all(|z| z.norm() == 0.0) {
            return Err(TensorError::ZeroState);
        }
        Ok(Self { profile, amps, label: None })
    }

    /// Validating constructor from raw dims and amplitudes.
    pub fn from_dims(dims: &[usize], amps: Vec<C64>) -> Result<Self, TensorError> {
        Self::new(DimsProfile::new(dims.to_vec())?, amps)
    }

    /// Sum of `coefficient * |multi-index>` basis terms.
    pub fn from_terms(dims: &[usize], terms: &[(C64, &[usize])]) -> Result<Self, TensorError> {
        let profile = DimsProfile::new(dims.to_vec())?;
        let mut amps = vec![C64::new(0.0, 0.0); profile.total()];
        for (coef, idx) in terms {
            if idx.len() != profile.n() {
                return Err(TensorError::ShapeMismatch(format!(
                    "basis term {idx:?} has {} indices for {} parties",
                    idx.len(),
                    profile.n()
                )));
            }
            if let Some(party) = idx.iter().zip(dims).position(|(&i, &d)| i >= d) {
                return Err(TensorError::ShapeMismatch(format!(
                    "basis index {} out of range for party {party} of dimension {}",
                    idx[party], dims[party]
                )));
            }
            amps[profile.flat_index(idx)] += *coef;
        }
        Self::new(profile, amps)
    }

    /// The product state `|v_0> |v_1> ... |v_{n-1}>`.
    pub fn product(factors: &[Vec<C64>]) -> Result<Self, TensorError> {
        let dims: Vec<usize> = factors.iter().map(Vec::len).collect();
        let profile = DimsProfile::new(dims)?;
        let mut amps = vec![C64::new(1.0, 0.0)];
        for f in factors {
            amps = amps.iter().flat_map(|&a| f.iter().map(move |&b| a * b)).collect();
        }
        Self::new(profile, amps)
    }

    pub fn profile(&self) -> &DimsProfile {
        &self.profile
    }

    pub fn dims(&self) -> &[usize] {
        self.profile.dims()
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn amplitude(&self, multi: &[usize]) -> C64 {
        self.amps[self.profile.flat_index(multi)]
    }

    pub fn max_abs(&self) -> f64 {
        self.amps.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Multiplies every amplitude by `c`. Fails only for `c = 0`.
    pub fn scaled(&self, c: C64) -> Result<Self, TensorError> {
        let amps = self.amps.iter().map(|&z| z * c).collect();
        Ok(Self { label: self.label.clone(), ..Self::new(self.profile.clone(), amps)? })
    }

    /// Largest absolute amplitude difference to `other`; `None` when the
    /// dims differ.
    pub fn max_deviation(&self, other: &PureState) -> Option<f64> {
        if self.dims() != other.dims() {
            return None;
        }
        Some(
            self.amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        )
    }

    /// Matrix with rows indexed by the parties in `subset` (ascending) and
    /// columns by the remaining parties (ascending).
    pub fn flatten(&self, subset: &[usize]) -> Result<DMatrix<C64>, TensorError> {
        let rows_parties = validate_subset(subset, self.n(), true)?;
        Ok(self.flatten_unchecked(&rows_parties))
    }

    fn flatten_unchecked(&self, rows_parties: &[usize]) -> DMatrix<C64> {
        let n = self.n();
        let dims = self.dims();
        let mut in_rows = vec![false; n];
        for &p in rows_parties {
            in_rows[p] = true;
        }
        let nrows: usize = rows_parties.iter().map(|&p| dims[p]).product();
        let ncols = self.profile.total() / nrows;
        let mut m = DMatrix::<C64>::zeros(nrows, ncols);
        for (flat, &a) in self.amps.iter().enumerate() {
            let multi = self.profile.multi_index(flat);
            let (mut r, mut c) = (0, 0);
            for p in 0..n {
                if in_rows[p] {
                    r = r * dims[p] + multi[p];
                } else {
                    c = c * dims[p] + multi[p];
                }
            }
            m[(r, c)] = a;
        }
        m
    }

    /// `|self> (x) |other>`, with `other`'s parties appended after ours.
    pub fn tensor_product(&self, other: &PureState) -> PureState {
        let mut dims = self.dims().to_vec();
        dims.extend_from_slice(other.dims());
        let amps = self
            .amps
            .iter()
            .flat_map(|&a| other.amps.iter().map(move |&b| a * b))
            .collect();
        PureState::new(DimsProfile { dims }, amps).expect("product of nonzero states is nonzero")
    }

    /// Reorders parties so that new party `j` is old party `order[j]`.
    pub fn permute_parties(&self, order: &[usize]) -> Result<PureState, TensorError> {
        let groups = order.iter().map(|&p| vec![p]).collect();
        group_parties(self, &PartyPartition::new(groups, self.n())?)
    }
}

/// Checks a party subset; returns it sorted. `proper` additionally rejects
/// the empty and the full set.
fn validate_subset(subset: &[usize], n: usize, proper: bool) -> Result<Vec<usize>, TensorError> {
    let mut seen = vec![false; n];
    for &p in subset {
        if p >= n {
            return Err(TensorError::PartyOutOfRange { party: p, n });
        }
        if seen[p] {
            return Err(TensorError::DuplicateParty { party: p });
        }
        seen[p] = true;
    }
    if proper && (subset.is_empty() || subset.len() == n) {
        return Err(TensorError::EmptyOrFullSubset { subset: subset.to_vec(), n });
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    Ok(sorted)
}

/// Complement of a party subset in `0..n`, ascending.
pub fn complement(subset: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|p| !subset.contains(p)).collect()
}

/// Proper subsets containing party 0, by increasing size then
/// lexicographically. Each bipartition of `n` parties appears exactly once.
pub fn bipartitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..n {
        // choose size-1 companions for party 0 from 1..n, lexicographically
        let k = size - 1;
        let mut combo: Vec<usize> = (1..=k).collect();
        loop {
            let mut cut = Vec::with_capacity(size);
            cut.push(0);
            cut.extend_from_slice(&combo);
            out.push(cut);
            let Some(i) = (0..k).rev().find(|&i| combo[i] < n - k + i) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    out
}

/// Schmidt rank across a bipartition, with the full singular spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpectrum {
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

pub fn schmidt_rank(state: &PureState, subset: &[usize]) -> Result<SchmidtSpectrum, TensorError> {
    let m = state.flatten(subset)?;
    let singular_values = linalg::singular_values(&m);
    let rank = linalg::numerical_rank(&singular_values, rank_eps());
    Ok(SchmidtSpectrum { rank, singular_values })
}

/// Rank of the single-party reduced operators and of every bipartition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    pub local_ranks: Vec<usize>,
    /// Keyed by the side of the cut that contains party 0.
    pub bipartition_ranks: BTreeMap<Vec<usize>, usize>,
}

impl RankProfile {
    /// Rank across `subset : complement(subset)`, either side accepted.
    pub fn across(&self, subset: &[usize]) -> Option<usize> {
        let mut key = subset.to_vec();
        key.sort_unstable();
        if !key.contains(&0) {
            key = complement(&key, self.local_ranks.len());
        }
        self.bipartition_ranks.get(&key).copied()
    }

    pub fn is_full(&self, dims: &[usize]) -> bool {
        self.local_ranks.iter().zip(dims).all(|(r, d)| r == d)
    }
}

pub fn local_ranks(state: &PureState) -> RankProfile {
    let n = state.n();
    if n == 1 {
        return RankProfile { local_ranks: vec![1], bipartition_ranks: BTreeMap::new() };
    }
    let eps = rank_eps();
    let mut bipartition_ranks = BTreeMap::new();
    for cut in bipartitions(n) {
        let m = state.flatten_unchecked(&cut);
        bipartition_ranks.insert(cut, linalg::matrix_rank(&m, eps));
    }
    let local_ranks = (0..n)
        .map(|p| {
            let key = if p == 0 { vec![0] } else { complement(&[p], n) };
            bipartition_ranks[&key]
        })
        .collect();
    RankProfile { local_ranks, bipartition_ranks }
}

/// One linear operator per party. Operator `i` maps party `i`'s input
/// dimension (its column count) to its output dimension (row count).
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperatorTuple {
    ops: Vec<DMatrix<C64>>,
}

impl LocalOperatorTuple {
    pub fn new(ops: Vec<DMatrix<C64>>) -> Result<Self, TensorError> {
        if ops.is_empty() {
            return Err(TensorError::NoParties);
        }
        if let Some(i) = ops.iter().position(|m| m.nrows() == 0 || m.ncols() == 0) {
            return Err(TensorError::ShapeMismatch(format!("operator {i} has an empty shape")));
        }
        Ok(Self { ops })
    }

    pub fn identity(dims: &[usize]) -> Self {
        Self { ops: dims.iter().map(|&d| DMatrix::identity(d, d)).collect() }
    }

    pub fn ops(&self) -> &[DMatrix<C64>] {
        &self.ops
    }

    pub fn into_ops(self) -> Vec<DMatrix<C64>> {
        self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn input_dims(&self) -> Vec<usize> {
        self.ops.iter().map(|m| m.ncols()).collect()
    }

    pub fn output_dims(&self) -> Vec<usize> {
        self.ops.iter().map(|m| m.nrows()).collect()
    }

    /// Every operator is square with numerically full rank.
    pub fn is_invertible(&self) -> bool {
        let eps = rank_eps();
        self.ops
            .iter()
            .all(|m| m.is_square() && linalg::matrix_rank(m, eps) == m.nrows())
    }
}

/// Multiplicative slack below which a transformed state counts as zero.
const ZERO_RESULT_RTOL: f64 = 1e-13;

/// `(L_0 (x) ... (x) L_{n-1}) |state>`.
pub fn apply_local(state: &PureState, ops: &LocalOperatorTuple) -> Result<PureState, TensorError> {
    if ops.len() != state.n() {
        return Err(TensorError::ShapeMismatch(format!(
            "{} operators for {} parties",
            ops.len(),
            state.n()
        )));
    }
    for (i, (m, &d)) in ops.ops.iter().zip(state.dims()).enumerate() {
        if m.ncols() != d {
            return Err(TensorError::ShapeMismatch(format!(
                "operator {i} has {} columns, party {i} has dimension {d}",
                m.ncols()
            )));
        }
    }

    let mut dims = state.dims().to_vec();
    let mut cur = state.amps.clone();
    for (i, m) in ops.ops.iter().enumerate() {
        let outer: usize = dims[..i].iter().product();
        let inner: usize = dims[i + 1..].iter().product();
        let (d_out, d_in) = m.shape();
        let mut next = vec![C64::new(0.0, 0.0); outer * d_out * inner];
        for o in 0..outer {
            for a in 0..d_out {
                let dst = (o * d_out + a) * inner;
                for b in 0..d_in {
                    let coef = m[(a, b)];
                    if coef.norm_sqr() == 0.0 {
                        continue;
                    }
                    let src = (o * d_in + b) * inner;
                    for t in 0..inner {
                        next[dst + t] += coef * cur[src + t];
                    }
                }
            }
        }
        dims[i] = d_out;
        cur = next;
    }

    let out_norm = cur.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let scale: f64 = ops.ops.iter().map(linalg::frobenius).product::<f64>() * state.norm();
    if out_norm == 0.0 || out_norm <= ZERO_RESULT_RTOL * scale {
        return Err(TensorError::ZeroResult);
    }
    PureState::new(DimsProfile { dims }, cur)
}

/// Ordered groups of parties; each group becomes one party of the coarsened
/// state, its internal multi-index ordered as listed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyPartition {
    groups: Vec<Vec<usize>>,
}

impl PartyPartition {
    pub fn new(groups: Vec<Vec<usize>>, n: usize) -> Result<Self, TensorError> {
        let mut seen = vec![false; n];
        for g in &groups {
            if g.is_empty() {
                return Err(TensorError::InvalidPartition("empty group".into()));
            }
            for &p in g {
                if p >= n {
                    return Err(TensorError::InvalidPartition(format!(
                        "party {p} out of range for {n} parties"
                    )));
                }
                if seen[p] {
                    return Err(TensorError::InvalidPartition(format!("party {p} appears twice")));
                }
                seen[p] = true;
            }
        }
        if let Some(p) = seen.iter().position(|s| !s) {
            return Err(TensorError::InvalidPartition(format!("party {p} is not covered")));
        }
        Ok(Self { groups })
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn party_count(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }
}

/// Coarsens `state` so each partition group is a single party. Amplitudes
/// are only re-indexed.
pub fn group_parties(state: &PureState, partition: &PartyPartition) -> Result<PureState, TensorError> {
    if partition.party_count() != state.n() {
        return Err(TensorError::InvalidPartition(format!(
            "partition covers {} parties, state has {}",
            partition.party_count(),
            state.n()
        )));
    }
    let dims = state.dims();
    let new_dims: Vec<usize> = partition
        .groups
        .iter()
        .map(|g| g.iter().map(|&p| dims[p]).product())
        .collect();
    let new_profile = DimsProfile { dims: new_dims };
    let mut amps = vec![C64::new(0.0, 0.0); state.amps.len()];
    for (flat, &a) in state.amps.iter().enumerate() {
        let multi = state.profile.multi_index(flat);
        let idx = partition.groups.iter().fold(0, |acc, g| {
            let group_dim: usize = g.iter().map(|&p| dims[p]).product();
            let digit = g.iter().fold(0, |d, &p| d * dims[p] + multi[p]);
            acc * group_dim + digit
        });
        amps[idx] = a;
    }
    Ok(PureState { profile: new_profile, amps, label: state.label.clone() })
}

/// Orthonormal basis of party `party`'s reduced-operator support, as columns.
pub fn party_support(state: &PureState, party: usize) -> Result<DMatrix<C64>, TensorError> {
    if party >= state.n() {
        return Err(TensorError::PartyOutOfRange { party, n: state.n() });
    }
    let m = state.flatten_unchecked(&[party]);
    Ok(linalg::column_space(&m, rank_eps()))
}

/// Orthogonal projector onto each party's support. Applying it returns the
/// state unchanged.
pub fn support_projectors(state: &PureState) -> LocalOperatorTuple {
    let ops = (0..state.n())
        .map(|p| {
            let u = party_support(state, p).expect("party in range");
            &u * u.adjoint()
        })
        .collect();
    LocalOperatorTuple { ops }
}
