//! SLOCC analysis of multipartite pure states.
//!
//! States are dense amplitude vectors in row-major order (party 0 slowest).
//! Ranks are numerical: a singular value counts when it exceeds
//! `eps * sigma_max`, with `eps` from [`linalg::rank_eps`].

pub mod construct;
pub mod io;
pub mod linalg;
pub mod random;
pub mod rank;
pub mod slocc;
pub mod tensor;

pub use num_complex::Complex64 as C64;
pub use tensor::{DimsProfile, LocalOperatorTuple, PureState, TensorError};
