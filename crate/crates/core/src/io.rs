//! JSON interchange for states, operator tuples and decompositions.
//!
//! Complex numbers are `[re, im]`; a bare number is read as a real value.
//!
//! ```text
//! state:          {"dims": [3, 2, 2], "amps": [[1, 0], ...], "label": "phi"}
//! operators:      {"ops": [{"rows": 2, "cols": 2, "entries": [[1, 0], ...]}, ...]}
//! decomposition:  {"terms": [[[[1, 0], [0, 0]], ...], ...]}
//! ```
//!
//! Matrix entries are row-major. A state may also be read out of a CLI
//! report, i.e. an object whose `"result"` field is a state.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::rank::{ProductDecomposition, RankError};
use crate::tensor::{LocalOperatorTuple, PureState, TensorError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("matrix {index}: expected {expected} entries for {rows}x{cols}, got {got}")]
    MatrixSize { index: usize, rows: usize, cols: usize, expected: usize, got: usize },
    #[error("invalid state: {0}")]
    State(#[from] TensorError),
    #[error("invalid decomposition: {0}")]
    Decomposition(#[from] RankError),
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum JsonComplex {
    Pair([f64; 2]),
    Real(f64),
}

impl From<JsonComplex> for C64 {
    fn from(z: JsonComplex) -> Self {
        match z {
            JsonComplex::Pair([re, im]) => C64::new(re, im),
            JsonComplex::Real(re) => C64::new(re, 0.0),
        }
    }
}

fn pair(z: &C64) -> JsonComplex {
    JsonComplex::Pair([z.re, z.im])
}

#[derive(Debug, Serialize, Deserialize)]
struct StateJson {
    dims: Vec<usize>,
    amps: Vec<JsonComplex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<JsonComplex>,
}

#[derive(Debug, Serialize, Deserialize)]
struct OpsJson {
    ops: Vec<MatrixJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DecompositionJson {
    terms: Vec<Vec<Vec<JsonComplex>>>,
}

pub fn state_to_value(state: &PureState) -> Value {
    let json = StateJson {
        dims: state.dims().to_vec(),
        amps: state.amplitudes().iter().map(pair).collect(),
        label: state.label().map(str::to_owned),
    };
    serde_json::to_value(json).expect("state serializes")
}

pub fn state_from_value(value: &Value) -> Result<PureState, FormatError> {
    let inner = match value.get("result") {
        Some(r) if value.get("dims").is_none() => r,
        _ => value,
    };
    let json: StateJson = serde_json::from_value(inner.clone())?;
    let amps = json.amps.into_iter().map(C64::from).collect();
    let state = PureState::from_dims(&json.dims, amps)?;
    Ok(match json.label {
        Some(l) => state.with_label(l),
        None => state,
    })
}

pub fn state_from_str(s: &str) -> Result<PureState, FormatError> {
    state_from_value(&serde_json::from_str(s)?)
}

pub fn matrix_to_value(m: &DMatrix<C64>) -> Value {
    let entries = (0..m.nrows())
        .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
        .map(|(r, c)| pair(&m[(r, c)]))
        .collect();
    serde_json::to_value(MatrixJson { rows: m.nrows(), cols: m.ncols(), entries })
        .expect("matrix serializes")
}

pub fn ops_to_value(ops: &LocalOperatorTuple) -> Value {
    Value::Object(
        [("ops".to_owned(), Value::Array(ops.ops().iter().map(matrix_to_value).collect()))]
            .into_iter()
            .collect(),
    )
}

pub fn ops_from_value(value: &Value) -> Result<LocalOperatorTuple, FormatError> {
    let inner = match value.get("result") {
        Some(r) if value.get("ops").is_none() => r,
        _ => value,
    };
    let json: OpsJson = serde_json::from_value(inner.clone())?;
    let mut ops = Vec::with_capacity(json.ops.len());
    for (index, m) in json.ops.into_iter().enumerate() {
        let expected = m.rows * m.cols;
        if m.entries.len() != expected {
            return Err(FormatError::MatrixSize {
                index,
                rows: m.rows,
                cols: m.cols,
                expected,
                got: m.entries.len(),
            });
        }
        let entries: Vec<C64> = m.entries.into_iter().map(C64::from).collect();
        ops.push(DMatrix::from_row_slice(m.rows, m.cols, &entries));
    }
    Ok(LocalOperatorTuple::new(ops)?)
}

pub fn ops_from_str(s: &str) -> Result<LocalOperatorTuple, FormatError> {
    ops_from_value(&serde_json::from_str(s)?)
}

pub fn decomposition_to_value(d: &ProductDecomposition) -> Value {
    let terms = d
        .terms()
        .iter()
        .map(|t| t.iter().map(|f| f.iter().map(pair).collect()).collect())
        .collect();
    serde_json::to_value(DecompositionJson { terms }).expect("decomposition serializes")
}

pub fn decomposition_from_value(value: &Value) -> Result<ProductDecomposition, FormatError> {
    let json: DecompositionJson = serde_json::from_value(value.clone())?;
    let terms = json
        .terms
        .into_iter()
        .map(|t| t.into_iter().map(|f| f.into_iter().map(C64::from).collect()).collect())
        .collect();
    Ok(ProductDecomposition::new(terms)?)
}

pub fn decomposition_from_str(s: &str) -> Result<ProductDecomposition, FormatError> {
    decomposition_from_value(&serde_json::from_str(s)?)
}

pub fn read_value(path: &Path) -> Result<Value, FormatError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
    Ok(serde_json::from_str(&text)?)
}
