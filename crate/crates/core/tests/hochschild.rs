use nc_core::algebra::bimodule::Bimodule;
use nc_core::algebra::finite::{complex_numbers, matrix_algebra, truncated_poly};
use nc_core::complex::{verify_homotopy, verify_operation};
use nc_core::hochschild::{
    basic_cohomology, canonical_operation, cochain_algebra, cochain_homotopy, hochschild_cohomology,
    invariant_cohomology,
};

#[test]
fn m2_hochschild_with_coefficients_in_itself() {
    let a = matrix_algebra(2).unwrap();
    let r = hochschild_cohomology(&a, &Bimodule::regular(&a), 3).unwrap();
    assert_eq!(r.dims, vec![1, 0, 0, 0]);
    assert!(!r.truncated);
    assert_eq!(r.normalized_dims, r.dims);
}

#[test]
fn c_hochschild() {
    let c = complex_numbers();
    let r = hochschild_cohomology(&c, &Bimodule::regular(&c), 4).unwrap();
    assert_eq!(r.dims, vec![1, 0, 0, 0, 0]);
}

#[test]
fn cochain_homotopy_contracts() {
    for a in [matrix_algebra(2).unwrap(), truncated_poly(2).unwrap()] {
        let g = cochain_algebra(&a, 5).unwrap();
        let h = cochain_homotopy(&a, 5).unwrap();
        verify_homotopy(&g.as_complex(), &h, 1..=4).unwrap();
    }
}

#[test]
fn m2_basic_cohomology() {
    let a = matrix_algebra(2).unwrap();
    let h = basic_cohomology(&a, 4).unwrap();
    assert_eq!(h.dims, vec![1, 0, 1, 0, 2]);
    assert!(!h.truncated);
}

#[test]
fn invariant_cohomology_is_trivial() {
    let a = matrix_algebra(2).unwrap();
    let h = invariant_cohomology(&a, 3).unwrap();
    assert_eq!(h.dims, vec![1, 0, 0, 0]);
}

#[test]
fn canonical_operation_on_m2() {
    let a = matrix_algebra(2).unwrap();
    let g = cochain_algebra(&a, 4).unwrap();
    let r = verify_operation(&g, &canonical_operation(&a, 4));
    assert!(r.ok(), "{:?}", r.failures);
}
