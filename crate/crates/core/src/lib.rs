pub mod algebra;
pub mod calculi;
pub mod complex;
pub mod connections;
pub mod error;
pub mod hochschild;
pub mod io;
pub mod lie_weil;
pub mod linalg;
pub mod ym;

pub use error::{NcError, Result};
pub use linalg::{Matrix, Rational, Scalar, SparseVec, Subspace};
