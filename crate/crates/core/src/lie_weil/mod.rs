//! Chevalley-Eilenberg complexes, invariant polynomials and the Weil algebra.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::algebra::graded::FreeGradedAlgebra;
use crate::algebra::lie::{ce_coboundary, check_lie, exterior_differential, LieAlgebraData, Subsets};
use crate::complex::{
    constrained_subcomplex, constrained_subspaces, Bilinear, CochainComplex, CohomologyReport, Constraint,
    GradedDiffAlgebra, OperationData,
};
use crate::error::{NcError, Result};
use crate::linalg::{Matrix, Scalar, SparseVec, Subspace};

/// A representation `X -> pi(X)` of a Lie algebra on `C^dim`.
#[derive(Clone, Debug)]
pub struct LieModule {
    pub dim: usize,
    pub action: Vec<Matrix>,
}

impl LieModule {
    /// Validates `[pi(X), pi(Y)] = pi([X, Y])` on basis pairs.
    pub fn new(g: &LieAlgebraData, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        if action.len() != g.dim() || action.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(NcError::input("action matrices have the wrong count or shape"));
        }
        let m = LieModule { dim, action };
        for x in 0..g.dim() {
            for y in x + 1..g.dim() {
                if m.action[x].commutator(&m.action[y]) != m.act(g.basis_bracket(x, y)) {
                    return Err(NcError::property("representation", format!("[pi(X{x}), pi(X{y})] != pi([X{x}, X{y}])")));
                }
            }
        }
        Ok(m)
    }

    pub fn trivial(g: &LieAlgebraData) -> Self {
        LieModule { dim: 1, action: vec![Matrix::zeros(1, 1); g.dim()] }
    }

    pub fn adjoint(g: &LieAlgebraData) -> Self {
        LieModule { dim: g.dim(), action: (0..g.dim()).map(|x| g.ad(x)).collect() }
    }

    pub fn act(&self, v: &SparseVec) -> Matrix {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (k, c) in v.iter() {
            out = out.axpy(c, &self.action[k]);
        }
        out
    }
}

/// `C_wedge(g, E)` through degree `min(upto, dim g)`; complete when that reaches `dim g`.
pub fn ce_complex(g: &LieAlgebraData, e: &LieModule, upto: usize) -> Result<CochainComplex> {
    let n = g.dim();
    let top = upto.min(n);
    let dims: Vec<usize> = (0..=top).map(|k| Subsets::new(n, k).len() * e.dim).collect();
    let d: Vec<Matrix> = (0..top).map(|k| ce_coboundary(g, &e.action, e.dim, k)).collect();
    let c = CochainComplex::new(dims, d)?;
    if top == n {
        Ok(c.complete())
    } else {
        c.with_top(ce_coboundary(g, &e.action, e.dim, top))
    }
}

/// A free graded-commutative algebra with a differential as a GDA through degree
/// `upto`. Without `complete`, `free` must reach degree `upto + 1` for the top map.
fn free_gda(free: &FreeGradedAlgebra, d: &[Option<Matrix>], upto: usize, complete: bool) -> Result<GradedDiffAlgebra> {
    let dims: Vec<usize> = (0..=upto).map(|n| free.dim(n)).collect();
    let mut products = BTreeMap::new();
    for p in 0..=upto {
        for q in 0..=upto - p {
            let t = Bilinear::from_fn(dims[p], dims[q], dims[p + q], |i, j| {
                free.product(p, &SparseVec::unit(i), q, &SparseVec::unit(j)).expect("in range")
            });
            products.insert((p, q), t);
        }
    }
    let dm: Vec<Matrix> = d[..upto].iter().map(|m| m.clone().expect("in range")).collect();
    let gda = GradedDiffAlgebra::new(dims, dm, products, SparseVec::unit(0))?;
    if complete {
        return Ok(gda.complete());
    }
    Ok(match d.get(upto).and_then(|m| m.clone()) {
        Some(top) => gda.with_top(top),
        None => gda,
    })
}

/// `Lambda g*` with its Lie differential, all degrees.
pub fn exterior_algebra(g: &LieAlgebraData) -> Result<GradedDiffAlgebra> {
    let (lam, d) = exterior_differential(g, g.dim());
    free_gda(&lam, &d, g.dim(), true)
}

/// Exponent vectors of degree `n` in `k` variables, in lexicographic order
/// of their sorted index multisets.
pub fn monomials(k: usize, n: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(start: usize, k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == n {
            let mut e = vec![0u16; k];
            for &i in cur.iter() {
                e[i] += 1;
            }
            out.push(e);
            return;
        }
        for i in start..k {
            cur.push(i);
            rec(i, k, n, cur, out);
            cur.pop();
        }
    }
    rec(0, k, n, &mut cur, &mut out);
    out
}

/// Invariant homogeneous polynomials of degree `n` on `g`, in the monomial basis
/// of `monomials(dim g, n)` (variables are the coordinates on `g`).
pub fn invariant_polynomials(g: &LieAlgebraData, n: usize) -> Subspace {
    let k = g.dim();
    let basis = monomials(k, n);
    let index: HashMap<&Vec<u16>, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for x in 0..k {
        // L_X P(y) = sum_{j,l} f^l_{xj} y_j dP/dy_l
        let cols: Vec<SparseVec> = basis
            .iter()
            .map(|m| {
                let mut ent = Vec::new();
                for l in 0..k {
                    if m[l] == 0 {
                        continue;
                    }
                    for j in 0..k {
                        let f = g.structure_constant(l, x, j);
                        if f.is_zero() {
                            continue;
                        }
                        let mut t = m.clone();
                        t[l] -= 1;
                        t[j] += 1;
                        ent.push((index[&t], &f * &Scalar::int(m[l] as i64)));
                    }
                }
                SparseVec::from_entries(ent)
            })
            .collect();
        rows.extend(Matrix::from_cols(basis.len(), &cols).into_rows());
    }
    Subspace::kernel_of(&Matrix::from_rows(basis.len(), rows))
}

/// `W(g)` through `max_degree` with the generator layout and its operation.
#[derive(Clone, Debug)]
pub struct WeilAlgebra {
    pub gda: GradedDiffAlgebra,
    pub free: FreeGradedAlgebra,
    /// Generators `0..dim g` are `A^a`, `dim g..2 dim g` are `F^a`.
    pub lie_dim: usize,
}

impl WeilAlgebra {
    pub fn a(&self, alpha: usize) -> SparseVec {
        self.free.generator(alpha)
    }

    pub fn f(&self, alpha: usize) -> SparseVec {
        self.free.generator(self.lie_dim + alpha)
    }
}

/// `dA = -1/2 [A, A] + F`, `dF = -[A, F]`, with `i_X A^a = X^a`, `i_X F^a = 0`.
pub fn weil_build(g: &LieAlgebraData, max_degree: usize) -> Result<(WeilAlgebra, OperationData)> {
    if max_degree < 2 {
        return Err(NcError::input("the Weil algebra needs max degree at least 2"));
    }
    let r = check_lie(g);
    if !r.ok() {
        return Err(NcError::property("Jacobi", r.failures.join("; ")));
    }
    let n = g.dim();
    let mut degs = vec![1; n];
    degs.extend(vec![2; n]);
    let free = FreeGradedAlgebra::new(degs, max_degree + 1);
    let half = Scalar::frac(-1, 2);
    let mut images = Vec::with_capacity(2 * n);
    for a in 0..n {
        let mut v = free.generator(n + a);
        for b in 0..n {
            for c in 0..n {
                let f = g.structure_constant(a, b, c);
                if !f.is_zero() {
                    let p = free.product(1, &free.generator(b), 1, &free.generator(c)).unwrap();
                    v = v.axpy(&(&half * &f), &p);
                }
            }
        }
        images.push(v);
    }
    for a in 0..n {
        let mut v = SparseVec::new();
        for b in 0..n {
            for c in 0..n {
                let f = g.structure_constant(a, b, c);
                if !f.is_zero() {
                    let p = free.product(1, &free.generator(b), 2, &free.generator(n + c)).unwrap();
                    v = v.axpy(&-f, &p);
                }
            }
        }
        images.push(v);
    }
    let d = free.derivation(1, &images);
    let gda = free_gda(&free, &d, max_degree, false)?;
    let mut contractions = Vec::with_capacity(n);
    for x in 0..n {
        let imgs: Vec<SparseVec> =
            (0..2 * n).map(|k| if k == x { SparseVec::unit(0) } else { SparseVec::new() }).collect();
        let i: Vec<Matrix> = free.derivation(-1, &imgs).into_iter().map(|m| m.expect("lowers degree")).collect();
        contractions.push(i);
    }
    let op = OperationData::new(g.clone(), contractions)?;
    Ok((WeilAlgebra { gda, free, lie_dim: n }, op))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WeilBasicReport {
    pub dims: Vec<usize>,
    /// `dim I^k_S(g)` at degree `2k`, zero in odd degrees.
    pub expected: Vec<usize>,
    pub truncated: bool,
}

impl WeilBasicReport {
    pub fn matches(&self) -> bool {
        self.dims == self.expected
    }
}

pub fn weil_basic_cohomology(g: &LieAlgebraData, upto: usize) -> Result<WeilBasicReport> {
    let (w, op) = weil_build(g, upto.max(2))?;
    let (c, _) = constrained_subcomplex(&w.gda, &op, upto, Constraint::Basic)?;
    let h = c.cohomology()?;
    let expected =
        (0..=upto).map(|k| if k % 2 == 0 { invariant_polynomials(g, k / 2).dim() } else { 0 }).collect();
    Ok(WeilBasicReport { dims: h.dims, expected, truncated: h.truncated })
}

pub fn weil_invariant_cohomology(g: &LieAlgebraData, upto: usize) -> Result<CohomologyReport> {
    let (w, op) = weil_build(g, upto.max(2))?;
    constrained_subcomplex(&w.gda, &op, upto, Constraint::Invariant)?.0.cohomology()
}

/// Horizontal elements of `W(g)` per degree, and whether they equal the span
/// of monomials in the `F^a` alone.
pub fn weil_horizontal_is_symmetric(g: &LieAlgebraData, upto: usize) -> Result<bool> {
    let (w, op) = weil_build(g, upto.max(2))?;
    let subs = constrained_subspaces(&w.gda, &op, upto, Constraint::Horizontal)?;
    let n = g.dim();
    Ok(subs.iter().enumerate().all(|(deg, s)| {
        let sym: Vec<SparseVec> = w.free.basis(deg)
            .iter()
            .enumerate()
            .filter(|(_, m)| m[..n].iter().all(|&e| e == 0))
            .map(|(i, _)| SparseVec::unit(i))
            .collect();
        s == &Subspace::span(w.gda.dim(deg), &sym)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::lie::{abelian, gl, sl2};
    use crate::complex::{check_gda, verify_operation};

    #[test]
    fn ce_examples() {
        let a1 = abelian(1);
        assert_eq!(ce_complex(&a1, &LieModule::trivial(&a1), 3).unwrap().cohomology().unwrap().dims, vec![1, 1]);
        let s = sl2();
        assert_eq!(ce_complex(&s, &LieModule::trivial(&s), 3).unwrap().cohomology().unwrap().dims, vec![1, 0, 0, 1]);
        let h = ce_complex(&s, &LieModule::adjoint(&s), 3).unwrap().cohomology().unwrap();
        assert_eq!(h.dims[0], 0);
    }

    #[test]
    fn adjoint_module_is_valid() {
        let s = sl2();
        let ad = LieModule::adjoint(&s);
        assert!(LieModule::new(&s, 3, ad.action).is_ok());
        let bad = vec![Matrix::identity(3), Matrix::zeros(3, 3), Matrix::zeros(3, 3)];
        assert!(LieModule::new(&s, 3, bad).is_err());
    }

    #[test]
    fn invariant_polynomial_dims() {
        let s = sl2();
        assert_eq!(invariant_polynomials(&s, 0).dim(), 1);
        assert_eq!(invariant_polynomials(&s, 1).dim(), 0);
        assert_eq!(invariant_polynomials(&s, 2).dim(), 1);
        let g = gl(2).unwrap();
        assert_eq!(invariant_polynomials(&g, 1).dim(), 1);
        assert_eq!(invariant_polynomials(&g, 2).dim(), 2);
    }

    #[test]
    fn weil_sl2() {
        let (w, op) = weil_build(&sl2(), 5).unwrap();
        assert_eq!(&w.gda.dims()[..5], &[1, 3, 6, 10, 15]);
        let r = check_gda(&w.gda);
        assert!(r.ok(), "{:?}", r.failures);
        let r = verify_operation(&w.gda, &op);
        assert!(r.ok(), "{:?}", r.failures);
        let h = w.gda.as_complex().cohomology().unwrap();
        assert_eq!(&h.dims[..5], &[1, 0, 0, 0, 0]);
        let b = weil_basic_cohomology(&sl2(), 4).unwrap();
        assert_eq!(b.dims, vec![1, 0, 0, 0, 1]);
        assert!(b.matches());
    }

    #[test]
    fn weil_abelian_and_horizontal() {
        let b = weil_basic_cohomology(&abelian(1), 4).unwrap();
        assert_eq!(b.dims, vec![1, 0, 1, 0, 1]);
        assert!(weil_horizontal_is_symmetric(&sl2(), 4).unwrap());
        assert_eq!(weil_invariant_cohomology(&sl2(), 4).unwrap().dims, vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn exterior_matches_ce() {
        let s = sl2();
        let e = exterior_algebra(&s).unwrap();
        let c = ce_complex(&s, &LieModule::trivial(&s), 3).unwrap();
        assert_eq!(e.differentials(), c.differentials());
        let k = crate::complex::kunneth_gda(&e, &e, 4).unwrap();
        assert_eq!(k, vec![1, 0, 0, 2, 0]);
    }
}
