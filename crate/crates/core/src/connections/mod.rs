//! Connections, first-order operators, the symplectic structure of `M_n` and flat connections.

pub mod connection;
pub mod flat;
pub mod gauge;
pub mod presentation;
pub mod symbols;
pub mod symplectic;

pub use connection::{
    bimodule_sigma, connection_curvature, curvature_report, degree_bimodule, derivation_connection_check, dual_connection,
    hermitian_checks, is_psd, opposite_algebra, opposite_gda, opposite_module, CurvatureReport, DerivationConnectionReport,
    DualConnection, Hermitian, HermitianReport, LeftSetting, RightConnection,
};
pub use flat::{casimir_label, flat_classify, flat_representative, is_flat, partitions, su2_irrep, FlatClass, FlatReport};
pub use gauge::{curvature_formula, gauge_connection, matrix_hermitian, matrix_module};
pub use presentation::{ad_i, epsilon, mn_presentation, pauli_basis, MnPresentation};
pub use symbols::{
    first_order_space, first_order_symbols, random_bimodule, random_first_order, random_non_first_order, rep_bimodule, FirstOrderReport,
    SmallAlgebra,
};
pub use symplectic::{symplectic_mn, Symplectic, SymplecticReport};
