//! Exact-arithmetic homological algebra for finite-dimensional associative
//! algebras.
//!
//! The crate computes Hochschild homology and cohomology, the induced
//! operations (cup product, Gerstenhaber bracket, cap product, Connes
//! operator), cyclic homology with the ISB long exact sequence, and
//! machine-checks that all of this structure is preserved under derived
//! equivalences given by explicit two-sided tilting data.
//!
//! Everything is computed over `Q` or a prime field, with sparse exact
//! linear algebra underneath; there is no floating point anywhere.
//!
//! The heavy inner loops (boundary-matrix assembly, identity checking,
//! trace-map columns) are data-parallel via `rayon` when the default
//! `parallel` feature is enabled; disabling it yields a fully sequential
//! build with identical results.

pub mod algebra;
pub mod calculus;
pub mod cyclic;
pub mod hochschild;
pub mod par;
pub mod report;
pub mod scalar;
pub mod sparse;
pub mod transport;

pub use algebra::{Algebra, Quiver};
pub use report::{Check, Report};
pub use scalar::{Field, Scalar};
pub use sparse::{HomologySpace, SparseMatrix, SparseVec};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("scalars from different fields were mixed: {0:?} vs {1:?}")]
    FieldMismatch(Field, Field),
    #[error("{0} is not invertible")]
    NotInvertible(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("path algebra is infinite-dimensional: {0}")]
    InfiniteDimensional(String),
    #[error("a declared boundary is not in the cycle span (column {0})")]
    BoundaryNotInCycleSpan(usize),
    #[error("chain map assertion failed: {0}")]
    ChainMap(String),
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
