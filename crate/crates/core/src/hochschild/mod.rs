//! Hochschild cochains, the cochain algebra `C(A)` and its canonical operation.
//!
//! `C^n(A, M)` has coordinates `tuple * dim(M) + m`, where `tuple` reads
//! `(x_1..x_n)` in base `dim(A)` with `x_1` most significant.

pub mod cyclic;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::bimodule::{kron, BalancedTensor, Bimodule};
use crate::algebra::finite::{scalar_coboundary, FiniteAlgebra};
use crate::algebra::lie::commutator_lie;
use crate::complex::{
    basic_subcomplex, constrained_subcomplex, Bilinear, CochainComplex, CohomologyReport, Constraint,
    GradedDiffAlgebra, OperationData,
};
use crate::error::{NcError, Result};
use crate::linalg::{Matrix, Scalar, SparseVec, Subspace};

pub use cyclic::{cyclic_cohomology, cyclic_operator, intertwining_defect, permutation_operator, CyclicReport};

/// Largest degree accepted by the cochain builders.
pub const MAX_DEGREE: usize = 6;

/// Per-degree dimension cap, overridable through `NC_MAX_DIM`.
pub fn max_dim() -> usize {
    std::env::var("NC_MAX_DIM").ok().and_then(|s| s.parse().ok()).unwrap_or(20_000)
}

/// Rejects a degree range whose largest space exceeds the caps.
pub fn check_size(what: &str, upto: usize, largest: usize) -> Result<()> {
    if upto > MAX_DEGREE {
        return Err(NcError::TooLarge(format!("{what}: degree {upto} exceeds the cap {MAX_DEGREE}")));
    }
    let cap = max_dim();
    if largest > cap {
        return Err(NcError::TooLarge(format!("{what}: estimated dimension {largest} exceeds {cap} (NC_MAX_DIM)")));
    }
    Ok(())
}

fn pow(d: usize, n: usize) -> usize {
    d.checked_pow(n as u32).unwrap_or(usize::MAX)
}

/// Digits of `idx` in base `d`, most significant first.
pub fn tuple_digits(mut idx: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for k in (0..n).rev() {
        out[k] = idx % d;
        idx /= d;
    }
    out
}

pub fn tuple_index(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

fn sign(odd: bool) -> Scalar {
    if odd {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

fn require_bimodule(a: &FiniteAlgebra, m: &Bimodule) -> Result<()> {
    if m.left_actions().len() != a.dim() || m.right_actions().len() != a.dim() {
        return Err(NcError::input("coefficient module must be an (A, A)-bimodule"));
    }
    Ok(())
}

/// `d_H: C^n(A, M) -> C^{n+1}(A, M)`.
pub fn hochschild_coboundary(a: &FiniteAlgebra, m: &Bimodule, n: usize) -> Result<Matrix> {
    require_bimodule(a, m)?;
    let (da, dm) = (a.dim(), m.dim());
    let block = pow(da, n);
    let inner = scalar_coboundary(a, n).kron(&Matrix::identity(dm));
    let mut t = Vec::new();
    for x0 in 0..da {
        for (e, row) in m.left_actions()[x0].rows_iter().enumerate() {
            for (f, v) in row.iter() {
                for r in 0..block {
                    t.push((x0 * block * dm + r * dm + e, r * dm + f, v.clone()));
                }
            }
        }
    }
    let s = sign(n % 2 == 0);
    for xn in 0..da {
        for (e, row) in m.right_actions()[xn].rows_iter().enumerate() {
            let v_s: Vec<(usize, Scalar)> = row.iter().map(|(f, v)| (f, v * &s)).collect();
            for r in 0..block {
                for (f, v) in &v_s {
                    t.push(((r * da + xn) * dm + e, r * dm + f, v.clone()));
                }
            }
        }
    }
    Ok(inner.add(&Matrix::from_triplets(block * da * dm, block * dm, t)))
}

/// `C(A, M)` through degree `upto`, with `d_upto` kept as the top map.
pub fn hochschild_complex(a: &FiniteAlgebra, m: &Bimodule, upto: usize) -> Result<CochainComplex> {
    check_size("Hochschild complex", upto, m.dim().saturating_mul(pow(a.dim(), upto + 1)))?;
    let dims: Vec<usize> = (0..=upto).map(|n| m.dim() * pow(a.dim(), n)).collect();
    let d = (0..upto).map(|n| hochschild_coboundary(a, m, n)).collect::<Result<Vec<_>>>()?;
    CochainComplex::new(dims, d)?.with_top(hochschild_coboundary(a, m, upto)?)
}

/// Normalized cochains in degree `n`: those vanishing when any argument is `1l`.
pub fn normalized_subspace(a: &FiniteAlgebra, dm: usize, n: usize) -> Result<Subspace> {
    let u = a.unit_required()?;
    let da = a.dim();
    let amb = dm * pow(da, n);
    let mut rows = Vec::new();
    for k in 0..n {
        for rest in 0..pow(da, n - 1) {
            let digits = tuple_digits(rest, da, n - 1);
            for e in 0..dm {
                let mut ent = Vec::with_capacity(u.nnz());
                for (i, c) in u.iter() {
                    let mut full = digits.clone();
                    full.insert(k, i);
                    ent.push((tuple_index(&full, da) * dm + e, c.clone()));
                }
                rows.push(SparseVec::from_entries(ent));
            }
        }
    }
    Ok(Subspace::kernel_of(&Matrix::from_rows(amb, rows)))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HochschildReport {
    pub dims: Vec<usize>,
    pub normalized_dims: Vec<usize>,
    pub truncated: bool,
}

/// `dim H^n(A, M)` for `n <= upto`, cross-checked against the normalized subcomplex.
pub fn hochschild_cohomology(a: &FiniteAlgebra, m: &Bimodule, upto: usize) -> Result<HochschildReport> {
    let c = hochschild_complex(a, m, upto)?;
    let full = c.cohomology()?;
    let subs = (0..=upto).map(|n| normalized_subspace(a, m.dim(), n)).collect::<Result<Vec<_>>>()?;
    let norm = c.restrict(&subs)?.cohomology()?;
    if full.dims != norm.dims {
        return Err(NcError::property(
            "normalized cohomology",
            format!("full {:?} differs from normalized {:?}", full.dims, norm.dims),
        ));
    }
    Ok(HochschildReport { dims: full.dims, normalized_dims: norm.dims, truncated: full.truncated })
}

/// Cup product `C^p(A, M) x C^q(A, N) -> C^{p+q}(A, M (x)_A N)`.
/// `beta` has degree `q`; the degree of `alpha` is implicit in its coordinates.
pub fn cup(t: &BalancedTensor, a_dim: usize, alpha: &SparseVec, beta: &SparseVec, q: usize) -> SparseVec {
    let (dm, dn, dt) = (t.left_dim, t.right_dim, t.dim());
    let block_b = pow(a_dim, q);
    // group coordinates by argument tuples
    let mut by_a: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for (i, c) in alpha.iter() {
        let e = by_a.entry(i / dm).or_default();
        *e = e.add(&SparseVec::from_sorted(vec![(i % dm, c.clone())]));
    }
    let mut by_b: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for (i, c) in beta.iter() {
        let e = by_b.entry(i / dn).or_default();
        *e = e.add(&SparseVec::from_sorted(vec![(i % dn, c.clone())]));
    }
    let mut ent = Vec::new();
    for (&ta, va) in &by_a {
        for (&tb, vb) in &by_b {
            let cls = t.project().apply(&kron(va, vb, dn));
            let tup = ta * block_b + tb;
            ent.extend(cls.iter().map(|(k, c)| (tup * dt + k, c.clone())));
        }
    }
    SparseVec::from_entries(ent)
}

/// The graded algebra `C(A)` of multilinear forms with its differential,
/// through degree `upto`; the top map `d_upto` lands in `C^{upto+1}(A)`.
pub fn cochain_algebra(a: &FiniteAlgebra, upto: usize) -> Result<GradedDiffAlgebra> {
    let da = a.dim();
    check_size("cochain algebra", upto, pow(da, upto + 1))?;
    let dims: Vec<usize> = (0..=upto).map(|n| pow(da, n)).collect();
    let d: Vec<Matrix> = (0..upto).map(|n| scalar_coboundary(a, n)).collect();
    let mut products = BTreeMap::new();
    for p in 0..=upto {
        for q in 0..=upto - p {
            let (l, r) = (dims[p], dims[q]);
            products.insert((p, q), Bilinear::from_fn(l, r, dims[p + q], |i, j| SparseVec::unit(i * r + j)));
        }
    }
    Ok(GradedDiffAlgebra::new(dims, d, products, SparseVec::unit(0))?.with_top(scalar_coboundary(a, upto)))
}

/// `omega -> omega(1l, x_1, ..)` from `C^n(A)` to `C^{n-1}(A)`.
pub fn unit_insertion(a: &FiniteAlgebra, n: usize) -> Result<Matrix> {
    let u = a.unit_required()?;
    let da = a.dim();
    if n == 0 {
        return Ok(Matrix::zeros(0, 1));
    }
    let block = pow(da, n - 1);
    let t = (0..block).flat_map(|r| u.iter().map(move |(i, c)| (r, i * block + r, c.clone()))).collect();
    Ok(Matrix::from_triplets(block, block * da, t))
}

/// Contracting homotopy of `C(A)`: `h(omega) = -omega(1l, ..)`, so that
/// `dh + hd = id` in positive degrees for the differential used here.
pub fn cochain_homotopy(a: &FiniteAlgebra, upto: usize) -> Result<Vec<Matrix>> {
    (0..=upto).map(|n| Ok(unit_insertion(a, n)?.neg())).collect()
}

/// `i_a omega(x_1..x_{n-1}) = sum_k (-1)^k omega(x_1..x_k, a, x_{k+1}..)` for basis `a`.
pub fn insertion_operator(da: usize, a_idx: usize, n: usize) -> Matrix {
    if n == 0 {
        return Matrix::zeros(0, 1);
    }
    let block = pow(da, n - 1);
    let mut t = Vec::with_capacity(block * n);
    for r in 0..block {
        let digits = tuple_digits(r, da, n - 1);
        for k in 0..n {
            let mut full = digits.clone();
            full.insert(k, a_idx);
            t.push((r, tuple_index(&full, da), sign(k % 2 == 1)));
        }
    }
    Matrix::from_triplets(block, block * da, t)
}

/// The operation `a -> i_a` of the commutator Lie algebra on `C(A)`,
/// with contractions through degree `upto + 1`.
pub fn canonical_operation(a: &FiniteAlgebra, upto: usize) -> OperationData {
    let da = a.dim();
    let i = (0..da).map(|x| (0..=upto + 1).map(|n| insertion_operator(da, x, n)).collect()).collect();
    OperationData { lie: commutator_lie(a), i }
}

/// Basic cohomology of `A` through degree `upto`.
pub fn basic_cohomology(a: &FiniteAlgebra, upto: usize) -> Result<CohomologyReport> {
    let g = cochain_algebra(a, upto)?;
    let op = canonical_operation(a, upto);
    basic_subcomplex(&g, &op, upto)?.cohomology()
}

/// Cohomology of the invariant subcomplex of `C(A)`.
pub fn invariant_cohomology(a: &FiniteAlgebra, upto: usize) -> Result<CohomologyReport> {
    let g = cochain_algebra(a, upto)?;
    let op = canonical_operation(a, upto);
    constrained_subcomplex(&g, &op, upto, Constraint::Invariant)?.0.cohomology()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::bimodule::tensor_over;
    use crate::algebra::finite::{complex_numbers, matrix_algebra, truncated_poly};
    use crate::complex::{check_gda, verify_homotopy, verify_operation};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> SparseVec {
        SparseVec::from_dense(&(0..n).map(|_| Scalar::gaussian(rng.gen_range(-3..=3), rng.gen_range(-2..=2))).collect::<Vec<_>>())
    }

    #[test]
    fn degree_zero_coboundary_is_commutator() {
        let a = matrix_algebra(2).unwrap();
        let m = Bimodule::regular(&a);
        let d0 = hochschild_coboundary(&a, &m, 0).unwrap();
        let m0 = SparseVec::unit(1);
        let dm0 = d0.apply(&m0);
        for x in 0..4 {
            let xv = SparseVec::unit(x);
            let want = a.product(&xv, &m0).sub(&a.product(&m0, &xv));
            let got = SparseVec::from_entries(
                dm0.iter().filter(|(k, _)| k / 4 == x).map(|(k, c)| (k % 4, c.clone())).collect(),
            );
            assert_eq!(got, want);
        }
    }

    #[test]
    fn d_h_squares_to_zero() {
        for a in [matrix_algebra(2).unwrap(), truncated_poly(2).unwrap()] {
            for m in [Bimodule::regular(&a), Bimodule::dual(&a)] {
                for n in 0..3 {
                    let d0 = hochschild_coboundary(&a, &m, n).unwrap();
                    let d1 = hochschild_coboundary(&a, &m, n + 1).unwrap();
                    assert!(d1.mul(&d0).is_zero());
                }
            }
        }
    }

    #[test]
    fn derivations_are_cocycles() {
        let a = truncated_poly(3).unwrap();
        let m = Bimodule::regular(&a);
        let d1 = hochschild_coboundary(&a, &m, 1).unwrap();
        for der in crate::algebra::derivations(&a).der_matrices(3) {
            // C^1(A, A) coordinate x * 3 + e is the e-component of D(x)
            let v = SparseVec::from_entries(
                (0..3).flat_map(|x| der.col(x).iter().map(|(e, c)| (x * 3 + e, c.clone())).collect::<Vec<_>>()).collect(),
            );
            assert!(d1.apply(&v).is_zero());
        }
    }

    #[test]
    fn small_cohomologies() {
        let c = complex_numbers();
        let r = hochschild_cohomology(&c, &Bimodule::regular(&c), 3).unwrap();
        assert_eq!(r.dims, vec![1, 0, 0, 0]);
        let a = truncated_poly(2).unwrap();
        let r = hochschild_cohomology(&a, &Bimodule::regular(&a), 2).unwrap();
        assert_eq!(&r.dims[..2], &[2, 1]);
        assert_eq!(r.dims, r.normalized_dims);
    }

    #[test]
    fn cup_is_associative_and_leibniz() {
        let a = matrix_algebra(2).unwrap();
        let reg = Bimodule::regular(&a);
        let t = tensor_over(&reg, &reg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, q) in [(0, 0), (1, 1), (1, 0), (0, 2)] {
            let alpha = random_vec(&mut rng, 4 * pow(4, p));
            let beta = random_vec(&mut rng, 4 * pow(4, q));
            let ab = cup(&t, 4, &alpha, &beta, q);
            let lhs = hochschild_coboundary(&a, &t.module, p + q).unwrap().apply(&ab);
            let da = hochschild_coboundary(&a, &reg, p).unwrap().apply(&alpha);
            let db = hochschild_coboundary(&a, &reg, q).unwrap().apply(&beta);
            let rhs = cup(&t, 4, &da, &beta, q).add(&cup(&t, 4, &alpha, &db, q + 1).scale(&sign(p % 2 == 1)));
            assert_eq!(lhs, rhs, "degrees ({p}, {q})");
        }
    }

    #[test]
    fn cochain_algebra_is_a_gda_with_operation() {
        let a = matrix_algebra(2).unwrap();
        let g = cochain_algebra(&a, 3).unwrap();
        let r = check_gda(&g);
        assert!(r.ok(), "{:?}", r.failures);
        let op = canonical_operation(&a, 3);
        let r = verify_operation(&g, &op);
        assert!(r.ok(), "{:?}", r.failures);
    }

    #[test]
    fn homotopy_sign() {
        let a = truncated_poly(2).unwrap();
        let g = cochain_algebra(&a, 5).unwrap();
        let c = g.as_complex();
        let h = cochain_homotopy(&a, 5).unwrap();
        verify_homotopy(&c, &h, 1..=4).unwrap();
        let unsigned: Vec<Matrix> = (0..=5).map(|n| unit_insertion(&a, n).unwrap()).collect();
        assert!(verify_homotopy(&c, &unsigned, 1..=4).is_err());
    }

    #[test]
    fn size_cap() {
        let a = matrix_algebra(2).unwrap();
        assert!(matches!(cochain_algebra(&a, 7), Err(NcError::TooLarge(_))));
    }
}
