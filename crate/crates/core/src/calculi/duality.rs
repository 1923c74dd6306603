//! `A`-duality between bimodules and modules over the center, central and
//! diagonal bimodules.

use crate::algebra::bimodule::Bimodule;
use crate::algebra::finite::{center, FiniteAlgebra};
use crate::error::{NcError, Result};
use crate::linalg::{Matrix, Quotient, Scalar, SparseVec, Subspace};

/// A module over `Z(A)`; `action[k]` is the k-th basis vector of the center
/// (as returned by [`center`]) acting on the module.
#[derive(Clone, Debug, PartialEq)]
pub struct CenterModule {
    pub dim: usize,
    pub action: Vec<Matrix>,
}

impl CenterModule {
    /// `Z(A)` acting on itself.
    pub fn center_of(a: &FiniteAlgebra) -> Self {
        let z = center(a);
        let action = z
            .basis()
            .iter()
            .map(|x| {
                let imgs: Vec<SparseVec> = z.basis().iter().map(|y| a.product(x, y)).collect();
                z.coords_matrix(&imgs).expect("center is a subalgebra")
            })
            .collect();
        CenterModule { dim: z.dim(), action }
    }
}

/// A space of linear maps with one matrix per basis vector.
#[derive(Clone, Debug)]
pub struct MapSpace {
    pub maps: Vec<Matrix>,
    space: Subspace,
}

impl MapSpace {
    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    /// Coordinates of `f` in the basis, if `f` belongs to the space.
    pub fn coords(&self, f: &Matrix) -> Option<SparseVec> {
        self.space.coords(&flatten(f))
    }

    fn coords_matrix(&self, fs: &[Matrix]) -> Option<Matrix> {
        let cols: Option<Vec<SparseVec>> = fs.iter().map(|f| self.coords(f)).collect();
        Some(Matrix::from_cols(self.dim(), &cols?))
    }
}

fn flatten(f: &Matrix) -> SparseVec {
    let c = f.ncols();
    let mut e = Vec::new();
    for (r, row) in f.rows_iter().enumerate() {
        e.extend(row.iter().map(|(s, v)| (r * c + s, v.clone())));
    }
    SparseVec::from_sorted(e)
}

fn unflatten(v: &SparseVec, rows: usize, cols: usize) -> Matrix {
    Matrix::from_triplets(rows, cols, v.iter().map(|(k, x)| (k / cols, k % cols, x.clone())).collect())
}

/// Linear maps `f: V -> W` with `f s = t f` for every pair `(s, t)`.
pub fn intertwiners(src_dim: usize, dst_dim: usize, pairs: &[(&Matrix, &Matrix)]) -> MapSpace {
    let var = |r: usize, s: usize| r * src_dim + s;
    let mut rows = Vec::new();
    for (s_act, t_act) in pairs {
        let s_cols = s_act.cols_vec();
        for r in 0..dst_dim {
            let t_row = t_act.row(r);
            for (s, sc) in s_cols.iter().enumerate() {
                let mut e: Vec<(usize, Scalar)> = sc.iter().map(|(q, c)| (var(r, q), c.clone())).collect();
                e.extend(t_row.iter().map(|(t, c)| (var(t, s), -c)));
                rows.push(SparseVec::from_entries(e));
            }
        }
    }
    let space = Subspace::kernel_of(&Matrix::from_rows(src_dim * dst_dim, rows));
    let maps = space.basis().iter().map(|v| unflatten(v, dst_dim, src_dim)).collect();
    MapSpace { maps, space }
}

/// `M^{*_A} = Hom_A^A(M, A)` with its `Z(A)`-module structure `(z phi)(m) = z phi(m)`.
#[derive(Clone, Debug)]
pub struct ADual {
    pub homs: MapSpace,
    pub module: CenterModule,
}

pub fn a_dual(a: &FiniteAlgebra, m: &Bimodule) -> ADual {
    let reg = Bimodule::regular(a);
    let pairs: Vec<(&Matrix, &Matrix)> = m
        .left_actions()
        .iter()
        .zip(reg.left_actions())
        .chain(m.right_actions().iter().zip(reg.right_actions()))
        .collect();
    let homs = intertwiners(m.dim(), a.dim(), &pairs);
    let action = center(a)
        .basis()
        .iter()
        .map(|z| {
            let lz = a.left_mult(z);
            let imgs: Vec<Matrix> = homs.maps.iter().map(|f| lz.mul(f)).collect();
            homs.coords_matrix(&imgs).expect("A-dual is a Z(A)-module")
        })
        .collect();
    ADual { module: CenterModule { dim: homs.dim(), action }, homs }
}

/// `N^{*_A} = Hom_Z(N, A)` with `(a psi b)(n) = a psi(n) b`.
#[derive(Clone, Debug)]
pub struct ZDual {
    pub homs: MapSpace,
    pub module: Bimodule,
}

pub fn z_dual(a: &FiniteAlgebra, n: &CenterModule) -> Result<ZDual> {
    let z = center(a);
    if n.action.len() != z.dim() {
        return Err(NcError::input("center module needs one action matrix per center basis vector"));
    }
    let lz: Vec<Matrix> = z.basis().iter().map(|x| a.left_mult(x)).collect();
    let pairs: Vec<(&Matrix, &Matrix)> = n.action.iter().zip(&lz).collect();
    let homs = intertwiners(n.dim, a.dim(), &pairs);
    let induce = |act: &dyn Fn(&Matrix) -> Matrix| -> Result<Matrix> {
        let imgs: Vec<Matrix> = homs.maps.iter().map(act).collect();
        homs.coords_matrix(&imgs).ok_or_else(|| NcError::property("A-dual", "not stable under A"))
    };
    let mut left = Vec::with_capacity(a.dim());
    let mut right = Vec::with_capacity(a.dim());
    for x in 0..a.dim() {
        let (l, r) = (a.left_mult(&SparseVec::unit(x)), a.right_mult(&SparseVec::unit(x)));
        left.push(induce(&|f: &Matrix| l.mul(f))?);
        right.push(induce(&|f: &Matrix| r.mul(f))?);
    }
    let module = Bimodule::new(homs.dim(), left, right)?;
    Ok(ZDual { homs, module })
}

/// The evaluation map `c: M -> M^{*_A *_A}`, `c(m)(phi) = phi(m)`.
#[derive(Clone, Debug)]
pub struct Bidual {
    pub dual: ADual,
    pub bidual: ZDual,
    pub c: Matrix,
}

pub fn bidual_map(a: &FiniteAlgebra, m: &Bimodule) -> Result<Bidual> {
    let dual = a_dual(a, m);
    let bidual = z_dual(a, &dual.module)?;
    let k = dual.homs.dim();
    let mut cols = Vec::with_capacity(m.dim());
    for j in 0..m.dim() {
        let vals: Vec<SparseVec> = dual.homs.maps.iter().map(|f| f.col(j)).collect();
        let ev = Matrix::from_cols(a.dim(), &vals);
        debug_assert_eq!(ev.ncols(), k);
        cols.push(bidual.homs.coords(&ev).ok_or_else(|| NcError::property("bidual", "evaluation is not Z-linear"))?);
    }
    let c = Matrix::from_cols(bidual.homs.dim(), &cols);
    if !super::universal::is_bimodule_map(&c, m, &bidual.module) {
        return Err(NcError::property("bidual", "evaluation is not a bimodule map"));
    }
    Ok(Bidual { dual, bidual, c })
}

/// `ker c`, the intersection of the kernels of all bimodule maps `M -> A`.
pub fn canonical_kernel(a: &FiniteAlgebra, m: &Bimodule) -> Subspace {
    let dual = a_dual(a, m);
    if dual.homs.dim() == 0 {
        return Subspace::full(m.dim());
    }
    let refs: Vec<&Matrix> = dual.homs.maps.iter().collect();
    Subspace::kernel_of(&Matrix::vstack(&refs))
}

/// `M` is diagonal when `c` is injective.
pub fn diagonal_test(a: &FiniteAlgebra, m: &Bimodule) -> bool {
    canonical_kernel(a, m).dim() == 0
}

pub fn is_central(a: &FiniteAlgebra, m: &Bimodule) -> bool {
    center(a).basis().iter().all(|z| m.left_act(z) == m.right_act(z))
}

/// `[Z(A), M]`, spanned by `z m - m z`.
pub fn center_commutators(a: &FiniteAlgebra, m: &Bimodule) -> Subspace {
    let mut vs = Vec::new();
    for z in center(a).basis() {
        vs.extend(m.left_act(z).sub(&m.right_act(z)).cols_vec());
    }
    Subspace::span(m.dim(), &vs)
}

/// Restriction of the actions to an invariant subspace, in its coordinates.
pub fn sub_bimodule(m: &Bimodule, s: &Subspace) -> Result<Bimodule> {
    let restrict = |act: &Matrix| {
        s.coords_matrix(&act.apply_all(s.basis())).ok_or_else(|| NcError::property("sub-bimodule", "not invariant"))
    };
    let left = m.left_actions().iter().map(restrict).collect::<Result<Vec<_>>>()?;
    let right = m.right_actions().iter().map(restrict).collect::<Result<Vec<_>>>()?;
    Bimodule::new(s.dim(), left, right)
}

/// Induced actions on `M / K` for a sub-bimodule `K`.
pub fn quotient_bimodule(m: &Bimodule, k: &Subspace) -> Result<(Bimodule, Quotient)> {
    for act in m.left_actions().iter().chain(m.right_actions()) {
        if k.basis().iter().any(|v| !k.contains(&act.apply(v))) {
            return Err(NcError::property("quotient", "killed subspace is not a sub-bimodule"));
        }
    }
    let q = k.quotient();
    let induce = |act: &Matrix| q.project.mul(act).mul(&q.section);
    let left = m.left_actions().iter().map(induce).collect();
    let right = m.right_actions().iter().map(induce).collect();
    Ok((Bimodule::new(q.dim, left, right)?, q))
}

/// `E_Z = E / [Z(A), E]` and `E^Z`, the largest central sub-bimodule.
#[derive(Clone, Debug)]
pub struct Centralization {
    pub lower: Bimodule,
    pub lower_quotient: Quotient,
    pub upper: Bimodule,
    pub upper_subspace: Subspace,
}

pub fn centralize(a: &FiniteAlgebra, e: &Bimodule) -> Result<Centralization> {
    let (lower, lower_quotient) = quotient_bimodule(e, &center_commutators(a, e))?;
    let mut blocks = Vec::new();
    for z in center(a).basis() {
        let comm = e.left_act(z).sub(&e.right_act(z));
        for l in e.left_actions() {
            for r in e.right_actions() {
                blocks.push(comm.mul(l).mul(r));
            }
        }
    }
    let upper_subspace = if blocks.is_empty() {
        Subspace::full(e.dim())
    } else {
        let refs: Vec<&Matrix> = blocks.iter().collect();
        Subspace::kernel_of(&Matrix::vstack(&refs))
    };
    let upper = sub_bimodule(e, &upper_subspace)?;
    if !is_central(a, &lower) || !is_central(a, &upper) {
        return Err(NcError::property("centralization", "result is not central"));
    }
    Ok(Centralization { lower, lower_quotient, upper, upper_subspace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::finite::{matrix_algebra, truncated_poly};
    use crate::calculi::universal::omega1_u;

    #[test]
    fn dual_of_a_is_center_and_back() {
        for a in [matrix_algebra(2).unwrap(), truncated_poly(3).unwrap()] {
            let d = a_dual(&a, &Bimodule::regular(&a));
            assert_eq!(d.homs.dim(), center(&a).dim());
            let zd = z_dual(&a, &CenterModule::center_of(&a)).unwrap();
            assert_eq!(zd.homs.dim(), a.dim());
            assert!(diagonal_test(&a, &Bimodule::regular(&a)));
        }
    }

    #[test]
    fn omega1_u_of_m2_duals() {
        let a = matrix_algebra(2).unwrap();
        let f = omega1_u(&a).unwrap();
        let b = bidual_map(&a, &f.module).unwrap();
        assert_eq!(b.dual.homs.dim(), 3);
        assert_eq!(b.bidual.homs.dim(), 12);
        assert_eq!(b.c.rank(), 12);
    }

    #[test]
    fn centralization_of_tensor_square() {
        let a = truncated_poly(2).unwrap();
        let reg = Bimodule::regular(&a);
        let t = crate::algebra::bimodule::tensor_over(&reg, &reg).unwrap();
        // A (x)_C A with the outer actions
        let outer = Bimodule::new(
            4,
            (0..2).map(|x| a.left_mult(&SparseVec::unit(x)).kron(&Matrix::identity(2))).collect(),
            (0..2).map(|x| Matrix::identity(2).kron(&a.right_mult(&SparseVec::unit(x)))).collect(),
        )
        .unwrap();
        let c = centralize(&a, &outer).unwrap();
        // for commutative A, E_Z = A (x)_A A = A
        assert_eq!(c.lower.dim(), t.dim());
        assert_eq!(c.lower.dim(), 2);
    }

    #[test]
    fn central_module_is_fixed() {
        let a = truncated_poly(3).unwrap();
        let reg = Bimodule::regular(&a);
        let c = centralize(&a, &reg).unwrap();
        assert_eq!(c.lower.dim(), 3);
        assert_eq!(c.upper.dim(), 3);
    }
}
