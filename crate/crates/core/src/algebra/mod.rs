//! Finite-dimensional algebras, Lie algebras and bimodules.

pub mod bimodule;
pub mod finite;
pub mod graded;
pub mod lie;

pub use bimodule::{Bimodule, StarBimodule};
pub use finite::{
    center, check_algebra, derivations, direct_sum, matrix_algebra, tensor_product, truncated_poly, AlgebraReport,
    Derivations, FiniteAlgebra,
};
pub use graded::FreeGradedAlgebra;
pub use lie::{check_lie, commutator_lie, LieAlgebraData, LieReport};
