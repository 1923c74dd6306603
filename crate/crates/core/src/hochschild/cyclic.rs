//! Antisymmetrization operators on `C(A)` and the cyclic complex.
//!
//! `omega` in `C^{n+1}(A)` is read as the `A*`-valued cochain
//! `(x_1..x_n) -> (y -> omega(x_1..x_n, y))`, which has the same coordinates.

use serde::Serialize;

use super::{check_size, hochschild_complex, tuple_digits, tuple_index};
use crate::algebra::bimodule::Bimodule;
use crate::algebra::finite::{scalar_coboundary, FiniteAlgebra};
use crate::algebra::lie::sort_sign;
use crate::error::Result;
use crate::linalg::{Matrix, Scalar, Subspace};

/// `omega -> sum_pi eps(pi) omega(x_pi(1)..x_pi(n))` over the given permutations.
pub fn permutation_operator(da: usize, n: usize, perms: &[Vec<usize>]) -> Matrix {
    let size = da.pow(n as u32);
    let signed: Vec<(Scalar, &Vec<usize>)> = perms
        .iter()
        .map(|p| {
            let (s, _) = sort_sign(p).expect("permutation");
            (Scalar::int(s), p)
        })
        .collect();
    let mut t = Vec::with_capacity(size * perms.len());
    for row in 0..size {
        let x = tuple_digits(row, da, n);
        for (s, p) in &signed {
            let permuted: Vec<usize> = p.iter().map(|&k| x[k]).collect();
            t.push((row, tuple_index(&permuted, da), s.clone()));
        }
    }
    Matrix::from_triplets(size, size, t)
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for k in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=k).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    q
                })
            })
            .collect();
    }
    out
}

fn cyclic_permutations(n: usize) -> Vec<Vec<usize>> {
    (0..n.max(1)).map(|s| (0..n).map(|k| (k + s) % n).collect()).collect()
}

/// Full antisymmetrization `S` on `C^n(A)`.
pub fn antisymmetrizer(da: usize, n: usize) -> Matrix {
    permutation_operator(da, n, &all_permutations(n))
}

/// Cyclic antisymmetrization `C` on `C^n(A)`.
pub fn cyclic_operator(da: usize, n: usize) -> Matrix {
    if n == 0 {
        return Matrix::identity(1);
    }
    permutation_operator(da, n, &cyclic_permutations(n))
}

/// `C d - d_H C` from `C^n(A)` to `C^{n+1}(A)`, with `d_H` the coboundary of
/// `C^{n-1}(A, A*)`. Zero for every algebra; `n >= 1`.
pub fn intertwining_defect(a: &FiniteAlgebra, n: usize) -> Result<Matrix> {
    let da = a.dim();
    let dual = Bimodule::dual(a);
    let lhs = cyclic_operator(da, n + 1).mul(&scalar_coboundary(a, n));
    let rhs = super::hochschild_coboundary(a, &dual, n - 1)?.mul(&cyclic_operator(da, n));
    Ok(lhs.sub(&rhs))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CyclicReport {
    /// Cohomology of `(Im C, d_H)`; entry `k` lives on `C^{k+1}(A)`.
    pub dims: Vec<usize>,
    /// Dimensions of `Im C` per degree.
    pub cochain_dims: Vec<usize>,
    pub truncated: bool,
}

/// Cohomology of `(Im C, d_H)` in degrees `0..=upto`.
pub fn cyclic_cohomology(a: &FiniteAlgebra, upto: usize) -> Result<CyclicReport> {
    let da = a.dim();
    check_size("cyclic complex", upto + 1, da.saturating_pow(upto as u32 + 2))?;
    let c = hochschild_complex(a, &Bimodule::dual(a), upto)?;
    let subs: Vec<Subspace> = (0..=upto).map(|k| Subspace::image_of(&cyclic_operator(da, k + 1))).collect();
    let cochain_dims = subs.iter().map(|s| s.dim()).collect();
    let h = c.restrict(&subs)?.cohomology()?;
    Ok(CyclicReport { dims: h.dims, cochain_dims, truncated: h.truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::finite::{complex_numbers, matrix_algebra, truncated_poly};
    use crate::linalg::SparseVec;

    #[test]
    fn degree_one_cyclic_is_identity() {
        assert_eq!(cyclic_operator(3, 1), Matrix::identity(3));
    }

    #[test]
    fn symmetric_cochain_killed_by_s() {
        // omega(x, y) = omega(y, x) on a 2-dim space
        let w = SparseVec::from_entries(vec![(1, Scalar::one()), (2, Scalar::one()), (0, Scalar::int(5))]);
        assert!(antisymmetrizer(2, 2).apply(&w).is_zero());
    }

    #[test]
    fn intertwining_holds() {
        for a in [matrix_algebra(2).unwrap(), truncated_poly(3).unwrap()] {
            for n in 1..=3 {
                assert!(intertwining_defect(&a, n).unwrap().is_zero(), "degree {n}");
            }
        }
    }

    #[test]
    fn cyclic_of_c_alternates() {
        let r = cyclic_cohomology(&complex_numbers(), 4).unwrap();
        assert_eq!(r.dims, vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn morita_spot_check() {
        let r = cyclic_cohomology(&matrix_algebra(2).unwrap(), 2).unwrap();
        assert_eq!(r.dims, vec![1, 0, 1]);
    }
}
