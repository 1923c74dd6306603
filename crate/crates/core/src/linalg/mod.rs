//! Exact linear algebra over the Gaussian rationals.

mod matrix;
mod rational;
mod scalar;
mod sparse;
mod subspace;

pub use matrix::{Echelon, Matrix};
pub use rational::{ParseRationalError, Rational};
pub use scalar::Scalar;
pub use sparse::{Acc, SparseVec};
pub use subspace::{quotient_coords, restrict, Quotient, Subspace};
