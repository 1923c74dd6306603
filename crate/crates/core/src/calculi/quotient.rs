//! Quotients of `Omega_u`: the calculus `Omega_Z` killing `[Z(A), Omega^1_u]`
//! and the diagonal calculus killing the kernel of `c`, plus the Kähler oracle
//! for commutative algebras.

use serde::Serialize;

use super::duality::{canonical_kernel, center_commutators, diagonal_test, is_central, quotient_bimodule};
use super::universal::{check_leibniz, universal_factor, FirstOrderCalculus, UniversalCalculus};
use crate::algebra::bimodule::{tensor_over, BalancedTensor, Bimodule};
use crate::algebra::finite::{center, tensor_product, FiniteAlgebra};
use crate::complex::{quotient_gda, GradedDiffAlgebra};
use crate::error::{NcError, Result};
use crate::linalg::{Matrix, Quotient, Scalar, SparseVec, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QuotientKind {
    Central,
    Diagonal,
}

#[derive(Clone, Debug)]
pub struct QuotientCalculus {
    kind: QuotientKind,
    base: UniversalCalculus,
    /// Ideal slices for degrees `0..=max_degree + 1`.
    killed: Vec<Subspace>,
    quotients: Vec<Quotient>,
    gda: GradedDiffAlgebra,
}

pub fn omega_z(a: &FiniteAlgebra, max_degree: usize) -> Result<QuotientCalculus> {
    QuotientCalculus::new(UniversalCalculus::new(a, max_degree)?, QuotientKind::Central)
}

pub fn omega_diag(a: &FiniteAlgebra, max_degree: usize) -> Result<QuotientCalculus> {
    QuotientCalculus::new(UniversalCalculus::new(a, max_degree)?, QuotientKind::Diagonal)
}

/// `span{a g b}` for `g` in `gens`.
fn bimodule_closure(u: &UniversalCalculus, n: usize, gens: &[SparseVec]) -> Subspace {
    let da = u.algebra().dim();
    let mut vs = Vec::with_capacity(gens.len() * da * da);
    for g in gens {
        for x in 0..da {
            let left = u.left_mul(n, &SparseVec::unit(x), g);
            for y in 0..da {
                vs.push(u.right_mul(n, &left, &SparseVec::unit(y)));
            }
        }
    }
    Subspace::span(u.dim(n), &vs)
}

/// Slices `I_0..I_{N+1}` of the ideal generated by `gen1` and `d(gen1)`.
pub fn ideal_slices(u: &UniversalCalculus, gen1: &Subspace) -> Vec<Subspace> {
    let top = u.max_degree() + 1;
    let mut out = vec![Subspace::zero(u.dim(0))];
    out.push(bimodule_closure(u, 1, gen1.basis()));
    for n in 2..=top {
        let prev = &out[n - 1];
        let mut vs = Vec::new();
        for w in 0..u.dim(1) {
            let w = SparseVec::unit(w);
            for g in prev.basis() {
                vs.push(u.mul(1, &w, n - 1, g));
                vs.push(u.mul(n - 1, g, 1, &w));
            }
        }
        if n == 2 {
            let dg: Vec<SparseVec> = out[1].basis().iter().map(|g| u.d(1).apply(g)).collect();
            vs.extend(bimodule_closure(u, 2, &dg).basis().iter().cloned());
        }
        out.push(Subspace::span(u.dim(n), &vs));
    }
    out
}

impl QuotientCalculus {
    pub fn new(base: UniversalCalculus, kind: QuotientKind) -> Result<Self> {
        let a = base.algebra();
        let omega1 = base.bimodule(1);
        let gen1 = match kind {
            QuotientKind::Central => center_commutators(a, &omega1),
            QuotientKind::Diagonal => canonical_kernel(a, &omega1),
        };
        let killed = ideal_slices(&base, &gen1);
        if killed[1] != gen1 {
            return Err(NcError::property("ideal", "degree-1 slice differs from its generators"));
        }
        let (gda, quotients) = quotient_gda(base.gda(), &killed)?;
        Ok(QuotientCalculus { kind, base, killed, quotients, gda })
    }

    pub fn kind(&self) -> QuotientKind {
        self.kind
    }

    pub fn base(&self) -> &UniversalCalculus {
        &self.base
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        self.base.algebra()
    }

    pub fn max_degree(&self) -> usize {
        self.base.max_degree()
    }

    pub fn gda(&self) -> &GradedDiffAlgebra {
        &self.gda
    }

    pub fn dims(&self) -> Vec<usize> {
        self.gda.dims().to_vec()
    }

    /// Ideal slice in degree `n <= max_degree + 1`.
    pub fn killed(&self, n: usize) -> &Subspace {
        &self.killed[n]
    }

    pub fn quotient(&self, n: usize) -> &Quotient {
        &self.quotients[n]
    }

    /// Degree `n` as an `(A, A)`-bimodule, `n <= max_degree + 1`.
    pub fn bimodule(&self, n: usize) -> Result<Bimodule> {
        Ok(quotient_bimodule(&self.base.bimodule(n), &self.killed[n])?.0)
    }

    pub fn first_order(&self) -> Result<FirstOrderCalculus> {
        let module = self.bimodule(1)?;
        let d = self.quotients[1].project.mul(self.base.d(0));
        Ok(FirstOrderCalculus { module, d })
    }

    /// `Q i S`, after checking that `i` maps the ideal slice of degree `n` into that of degree `n - 1`.
    pub fn descend(&self, i: &Matrix, n: usize) -> Result<Matrix> {
        if self.killed[n].basis().iter().any(|v| !self.killed[n - 1].contains(&i.apply(v))) {
            return Err(NcError::property("descent", format!("ideal not preserved in degree {n}")));
        }
        Ok(self.quotients[n - 1].project.mul(i).mul(&self.quotients[n].section))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FactorMode {
    Universal,
    Central,
    Diagonal,
}

/// The bimodule map `i_d` out of `Omega^1` of the given calculus with `d = i_d d_mode`.
pub fn factor_derivation(a: &FiniteAlgebra, target: &Bimodule, d: &Matrix, mode: FactorMode) -> Result<Matrix> {
    check_leibniz(a, target, d)?;
    let iu = universal_factor(a, target, d)?;
    let kind = match mode {
        FactorMode::Universal => return Ok(iu),
        FactorMode::Central => {
            if !is_central(a, target) {
                return Err(NcError::property("central", "target bimodule is not central"));
            }
            QuotientKind::Central
        }
        FactorMode::Diagonal => {
            if !diagonal_test(a, target) {
                return Err(NcError::property("diagonal", "target bimodule is not diagonal"));
            }
            QuotientKind::Diagonal
        }
    };
    let q = QuotientCalculus::new(UniversalCalculus::new(a, 1)?, kind)?;
    if q.killed(1).basis().iter().any(|v| !iu.apply(v).is_zero()) {
        return Err(NcError::property("factorization", "i_d does not vanish on the killed subspace"));
    }
    let q1 = q.quotient(1);
    let map = iu.mul(&q1.section);
    let fo = q.first_order()?;
    if map.mul(&q1.project) != iu || map.mul(&fo.d) != *d {
        return Err(NcError::property("factorization", "d != i_d d"));
    }
    Ok(map)
}

/// `Omega^1_Z(phi)`, induced from `Omega^1_u(phi)` when it preserves the killed subspaces.
pub fn induced_omega1_z(a: &FiniteAlgebra, b: &FiniteAlgebra, phi: &Matrix) -> Result<Matrix> {
    let fu = super::universal::induced_omega1_u(a, b, phi)?;
    let (za, zb) = (omega_z(a, 1)?, omega_z(b, 1)?);
    if za.killed(1).basis().iter().any(|v| !zb.killed(1).contains(&fu.apply(v))) {
        return Err(NcError::property("functoriality", "[Z, Omega^1] is not mapped into [Z, Omega^1]"));
    }
    let f = zb.quotient(1).project.mul(&fu).mul(&za.quotient(1).section);
    let (da, db) = (za.first_order()?.d, zb.first_order()?.d);
    if db.mul(phi) != f.mul(&da) {
        return Err(NcError::property("functoriality", "d phi != Omega^1_Z(phi) d"));
    }
    Ok(f)
}

/// `xy = (-1)^{pq} yx` on all product tables.
pub fn is_graded_commutative(g: &GradedDiffAlgebra) -> bool {
    g.products().iter().all(|(&(p, q), t)| {
        let Some(back) = g.product_table(q, p) else { return true };
        let sign = if (p * q) % 2 == 1 { -Scalar::one() } else { Scalar::one() };
        (0..t.left).all(|i| (0..t.right).all(|j| *t.basis(i, j) == back.basis(j, i).scale(&sign)))
    })
}

pub fn is_commutative(a: &FiniteAlgebra) -> bool {
    center(a).dim() == a.dim()
}

/// Kähler differentials `I / I^2` with `I = ker(m: A (x) A -> A)`, as a
/// symmetric bimodule, with `d x = 1 (x) x - x (x) 1` in its coordinates.
pub fn kahler_module(a: &FiniteAlgebra) -> Result<FirstOrderCalculus> {
    if !is_commutative(a) {
        return Err(NcError::input("Kähler differentials need a commutative algebra"));
    }
    let da = a.dim();
    let unit = a.unit_required()?;
    let aa = tensor_product(a, a);
    let i = Subspace::kernel_of(&a.mult_matrix());
    let sq: Vec<SparseVec> =
        i.basis().iter().flat_map(|x| i.basis().iter().map(|y| aa.product(x, y))).collect();
    let i2 = Subspace::span(da * da, &sq);
    let q = Subspace::span(i.dim(), &i.coords_matrix(i2.basis()).expect("I^2 in I").cols_vec()).quotient();
    let coords = |v: &SparseVec| q.project.apply(&i.coords(v).expect("element of I"));
    let acts = (0..da)
        .map(|x| {
            let lx = a.left_mult(&SparseVec::unit(x)).kron(&Matrix::identity(da));
            let cols: Vec<SparseVec> = (0..q.dim).map(|k| coords(&lx.apply(&i.from_coords(&q.section.col(k))))).collect();
            Matrix::from_cols(q.dim, &cols)
        })
        .collect::<Vec<_>>();
    let module = Bimodule::new(q.dim, acts.clone(), acts)?;
    let dcols: Vec<SparseVec> = (0..da)
        .map(|x| {
            let e = SparseVec::unit(x);
            coords(&crate::algebra::bimodule::kron(unit, &e, da).sub(&crate::algebra::bimodule::kron(&e, unit, da)))
        })
        .collect();
    let d = Matrix::from_cols(q.dim, &dcols);
    check_leibniz(a, &module, &d)?;
    Ok(FirstOrderCalculus { module, d })
}

/// One degree of `Lambda_A(K)` built as `K (x)_A Lambda^{n-1} / (k k' r + k' k r)`.
struct Wedge {
    module: Bimodule,
    tensor: Option<BalancedTensor>,
    quotient: Option<Quotient>,
}

impl Wedge {
    fn wedge(&self, k: &SparseVec, r: &SparseVec) -> SparseVec {
        let t = self.tensor.as_ref().expect("positive degree");
        self.quotient.as_ref().expect("positive degree").project.apply(&t.class_of(k, r))
    }
}

/// Dimensions of `Lambda^n_A(K)` for a symmetric bimodule `K`, `n = 0..=upto`.
pub fn exterior_dims(a: &FiniteAlgebra, k: &Bimodule, upto: usize) -> Result<Vec<usize>> {
    let mut levels = vec![Wedge { module: Bimodule::regular(a), tensor: None, quotient: None }];
    for n in 1..=upto {
        let t = tensor_over(k, &levels[n - 1].module)?;
        let mut rel = Vec::new();
        if n >= 2 {
            let prev = &levels[n - 1];
            let rest = levels[n - 2].module.dim();
            for x in 0..k.dim() {
                for y in x..k.dim() {
                    for r in 0..rest {
                        let r = SparseVec::unit(r);
                        let (ex, ey) = (SparseVec::unit(x), SparseVec::unit(y));
                        let v = t.class_of(&ex, &prev.wedge(&ey, &r)).add(&t.class_of(&ey, &prev.wedge(&ex, &r)));
                        rel.push(v);
                    }
                }
            }
        }
        let (module, q) = quotient_bimodule(&t.module, &Subspace::span(t.dim(), &rel))?;
        levels.push(Wedge { module, tensor: Some(t), quotient: Some(q) });
    }
    Ok(levels.iter().map(|l| l.module.dim()).collect())
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct KahlerReport {
    pub omega_z_dims: Vec<usize>,
    pub exterior_dims: Vec<usize>,
    pub graded_commutative: bool,
    pub ok: bool,
}

/// Compares `Omega_Z` with the exterior algebra over `A` of the Kähler module.
pub fn kahler_check(a: &FiniteAlgebra, upto: usize) -> Result<KahlerReport> {
    let k = kahler_module(a)?;
    let exterior_dims = exterior_dims(a, &k.module, upto)?;
    let omega_z_dims = if a.dim() == 1 {
        let mut v = vec![0; upto + 1];
        v[0] = 1;
        v
    } else {
        omega_z(a, upto.max(1))?.dims()[..=upto].to_vec()
    };
    let graded_commutative = a.dim() == 1 || is_graded_commutative(omega_z(a, upto.max(1))?.gda());
    let ok = graded_commutative && omega_z_dims == exterior_dims;
    Ok(KahlerReport { omega_z_dims, exterior_dims, graded_commutative, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::finite::{complex_numbers, matrix_algebra, truncated_poly};
    use crate::complex::check_gda;

    #[test]
    fn m2_quotients_are_trivial() {
        let a = matrix_algebra(2).unwrap();
        for q in [omega_z(&a, 2).unwrap(), omega_diag(&a, 2).unwrap()] {
            assert_eq!(q.dims(), vec![4, 12, 36]);
        }
    }

    #[test]
    fn truncated_poly_omega1_z() {
        assert_eq!(omega_z(&truncated_poly(2).unwrap(), 1).unwrap().dims(), vec![2, 1]);
        assert_eq!(omega_z(&truncated_poly(3).unwrap(), 1).unwrap().dims(), vec![3, 2]);
    }

    #[test]
    fn quotient_is_a_gda() {
        let q = omega_z(&truncated_poly(3).unwrap(), 2).unwrap();
        let r = check_gda(q.gda());
        assert!(r.ok(), "{:?}", r);
        assert!(is_graded_commutative(q.gda()));
    }

    #[test]
    fn kahler_agrees() {
        let r = kahler_check(&truncated_poly(3).unwrap(), 2).unwrap();
        assert_eq!(r.exterior_dims, vec![3, 2, 0]);
        assert!(r.ok, "{r:?}");
        let c = kahler_check(&complex_numbers(), 2).unwrap();
        assert_eq!(c.exterior_dims, vec![1, 0, 0]);
        assert!(c.ok);
    }

    #[test]
    fn kahler_rejects_noncommutative() {
        assert!(kahler_check(&matrix_algebra(2).unwrap(), 1).unwrap_err().is_input());
    }

    #[test]
    fn factor_modes() {
        let a = truncated_poly(2).unwrap();
        let k = kahler_module(&a).unwrap();
        let iz = factor_derivation(&a, &k.module, &k.d, FactorMode::Central).unwrap();
        assert_eq!(iz.rank(), 1);
        let u = super::super::universal::omega1_u(&a).unwrap();
        let err = factor_derivation(&a, &u.module, &u.d, FactorMode::Central).unwrap_err();
        assert!(!err.is_input());
    }

    #[test]
    fn induced_z_map_on_inclusion() {
        let a = truncated_poly(2).unwrap();
        let b = tensor_product(&a, &a);
        let phi = Matrix::from_cols(4, &[SparseVec::unit(0), SparseVec::unit(2)]);
        let f = induced_omega1_z(&a, &b, &phi).unwrap();
        assert_eq!((f.ncols(), f.rank()), (1, 1));
    }

    #[test]
    fn central_calculus_has_central_differentials() {
        // d(z) a = a d(z) in Omega^1_Z
        for a in [truncated_poly(3).unwrap(), matrix_algebra(2).unwrap()] {
            let fo = omega_z(&a, 1).unwrap().first_order().unwrap();
            for z in center(&a).basis() {
                let dz = fo.d.apply(z);
                for x in 0..a.dim() {
                    let e = SparseVec::unit(x);
                    assert_eq!(fo.module.right_act(&e).apply(&dz), fo.module.left_act(&e).apply(&dz));
                }
            }
        }
    }
}
