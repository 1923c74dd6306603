//! Cochain complexes, graded differential algebras and Lie algebra operations.

pub mod cochain;
pub mod gda;
pub mod operation;

pub use cochain::{kunneth_check, tensor_complex, verify_homotopy, CochainComplex, CohomologyReport};
pub use gda::{check_gda, kunneth_gda, quotient_gda, skew_tensor, sub_gda, Bilinear, GdaReport, GradedDiffAlgebra};
pub use operation::{
    basic_subcomplex, constrained_subcomplex, constrained_subspaces, invariant_subcomplex, verify_operation,
    Constraint, OperationData, OperationReport,
};
