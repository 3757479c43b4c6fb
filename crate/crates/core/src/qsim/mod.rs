//! Dense state-vector and density-matrix simulation over registers of
//! arbitrary finite dimension.
//!
//! Basis tuples use mixed radix with register 0 most significant. Pure
//! states are capped at [`MAX_AMPLITUDES`] amplitudes; reduced density
//! matrices at [`MAX_KEPT_DIM`].

use thiserror::Error;

mod density;
pub mod eigen;
mod isometry;
mod matrix;
mod metrics;
pub mod random;
mod state;

pub use density::{helstrom_advantage, trace_distance, DensityMatrix, HERMITIAN_TOL, PSD_TOL, TRACE_TOL};
pub use isometry::{BasisPermutation, LinearIsometry, ISOMETRY_TOL};
pub use matrix::{inner, norm, CMatrix};
pub use metrics::{entangle_reference, entanglement_fidelity, schmidt, Schmidt, SCHMIDT_CUTOFF};
pub use state::{
    index_to_tuple, strides, tuple_to_index, PureState, Register, RegisterSystem, MAX_AMPLITUDES, MAX_KEPT_DIM,
    NORM_TOL,
};

pub type C64 = num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QsimError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{size} amplitudes exceed the cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("state is not normalized (got {0})")]
    NotNormalized(f64),
    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("operator is not positive (eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("map is not an isometry (deviation {0:e})")]
    NotIsometry(f64),
    #[error("basis map is not a bijection")]
    NotBijective,
    #[error("register {0} out of range")]
    BadRegister(usize),
    #[error("register {0} listed twice")]
    DuplicateRegister(usize),
    #[error("kept dimension {dim} exceeds the cap of {cap}")]
    KeptTooLarge { dim: usize, cap: usize },
    #[error("register dimension {0} is not supported")]
    BadDimension(usize),
    #[error("bipartition has an empty side")]
    EmptyCut,
}
