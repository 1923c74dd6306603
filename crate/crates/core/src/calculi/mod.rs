//! Differential calculi over a finite-dimensional algebra.
pub mod der;
pub mod diagram;
pub mod duality;
pub mod quotient;
pub mod universal;

pub use der::{der_calculus, derivation_lie, DerCalculus};
pub use diagram::{canonical_operation, diagram_check, Calculus, DiagramReport};
pub use duality::{
    a_dual, bidual_map, canonical_kernel, centralize, diagonal_test, intertwiners, is_central, z_dual, ADual, Bidual, CenterModule,
    Centralization, MapSpace, ZDual,
};
pub use quotient::{
    factor_derivation, induced_omega1_z, is_graded_commutative, kahler_check, kahler_module, omega_diag, omega_z, FactorMode, KahlerReport,
    QuotientCalculus, QuotientKind,
};
pub use universal::{
    ambient_d, ambient_homotopy, extension_to_tensor, factor_cocycle, induced_omega1_u, omega1_u, omega_u, universal_factor,
    verify_ambient_homotopy, CocycleFactorization, FirstOrderCalculus, UniversalCalculus,
};
