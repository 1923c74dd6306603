//! Operations of a Lie algebra in a graded differential algebra.

use serde::Serialize;

use super::cochain::CochainComplex;
use super::gda::GradedDiffAlgebra;
use crate::algebra::lie::LieAlgebraData;
use crate::error::{NcError, Result};
use crate::linalg::{Matrix, SparseVec, Subspace};

/// Contractions `i[x][n]: degree n -> degree n - 1` for each Lie basis element.
/// `i[x][0]` is the empty map out of degree 0.
#[derive(Clone, Debug)]
pub struct OperationData {
    pub lie: LieAlgebraData,
    pub i: Vec<Vec<Matrix>>,
}

impl OperationData {
    pub fn new(lie: LieAlgebraData, i: Vec<Vec<Matrix>>) -> Result<Self> {
        if i.len() != lie.dim() {
            return Err(NcError::input("need one contraction per Lie basis element"));
        }
        Ok(OperationData { lie, i })
    }

    /// The zero operation of `lie` on `g`.
    pub fn zero(lie: LieAlgebraData, g: &GradedDiffAlgebra) -> Self {
        let dims = g.dims();
        let per: Vec<Matrix> =
            (0..dims.len()).map(|n| Matrix::zeros(if n == 0 { 0 } else { dims[n - 1] }, dims[n])).collect();
        let i = vec![per; lie.dim()];
        OperationData { lie, i }
    }

    pub fn contraction(&self, x: usize, n: usize) -> &Matrix {
        &self.i[x][n]
    }

    /// `i_v` for a general Lie element `v`.
    pub fn contraction_of(&self, v: &SparseVec, n: usize) -> Matrix {
        let m = &self.i[0][n];
        let mut out = Matrix::zeros(m.nrows(), m.ncols());
        for (k, c) in v.iter() {
            out = out.axpy(c, &self.i[k][n]);
        }
        out
    }

    /// `L_X = i_X d + d i_X` on degree `n`; needs `d` out of degree `n`.
    pub fn lie_derivative(&self, g: &GradedDiffAlgebra, x: usize, n: usize) -> Option<Matrix> {
        let d_n = g.d(n)?;
        let mut l = match self.i[x].get(n + 1) {
            Some(i) => i.mul(d_n),
            None if d_n.nrows() == 0 => Matrix::zeros(g.dim(n), g.dim(n)),
            None => return None,
        };
        if n > 0 {
            l = l.add(&g.d(n - 1)?.mul(&self.i[x][n]));
        }
        Some(l)
    }

    pub fn lie_derivative_of(&self, g: &GradedDiffAlgebra, v: &SparseVec, n: usize) -> Option<Matrix> {
        let mut out = Matrix::zeros(g.dim(n), g.dim(n));
        for (k, c) in v.iter() {
            out = out.axpy(c, &self.lie_derivative(g, k, n)?);
        }
        Some(out)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq, Default)]
pub struct OperationReport {
    pub antiderivation: bool,
    pub anticommute: bool,
    /// `[L_X, i_Y] = i_[X,Y]`.
    pub equivariance: bool,
    /// `[L_X, L_Y] = L_[X,Y]`.
    pub lie_homomorphism: bool,
    /// `L_X d = d L_X`.
    pub commutes_with_d: bool,
    pub failures: Vec<String>,
    pub truncated: Vec<String>,
}

impl OperationReport {
    pub fn ok(&self) -> bool {
        self.antiderivation && self.anticommute && self.equivariance && self.lie_homomorphism && self.commutes_with_d
    }
}

pub fn verify_operation(g: &GradedDiffAlgebra, op: &OperationData) -> OperationReport {
    let top = g.max_degree();
    let ld = op.lie.dim();
    let mut r = OperationReport {
        antiderivation: true,
        anticommute: true,
        equivariance: true,
        lie_homomorphism: true,
        commutes_with_d: true,
        ..Default::default()
    };
    let e = SparseVec::unit;

    for x in 0..ld {
        let ix = &op.i[x];
        'deg: for p in 0..=top {
            for q in 0..=top - p {
                if p + q == 0 {
                    continue;
                }
                let Some(pq) = g.product_table(p, q) else { continue };
                let left = if p > 0 { g.product_table(p - 1, q) } else { None };
                let right = if q > 0 { g.product_table(p, q - 1) } else { None };
                if (p > 0 && left.is_none()) || (q > 0 && right.is_none()) {
                    r.truncated.push(format!("antiderivation ({p}, {q})"));
                    continue;
                }
                for a in 0..g.dim(p) {
                    let ia = if p > 0 { Some(ix[p].col(a)) } else { None };
                    for b in 0..g.dim(q) {
                        let lhs = ix[p + q].apply(pq.basis(a, b));
                        let mut rhs = SparseVec::new();
                        if let (Some(t), Some(ia)) = (left, &ia) {
                            rhs = rhs.add(&t.apply(ia, &e(b)));
                        }
                        if let Some(t) = right {
                            let ib = ix[q].col(b);
                            let term = t.apply(&e(a), &ib);
                            rhs = if p % 2 == 1 { rhs.sub(&term) } else { rhs.add(&term) };
                        }
                        if lhs != rhs {
                            r.antiderivation = false;
                            r.failures.push(format!("i_{x} is not an antiderivation in degrees ({p}, {q})"));
                            break 'deg;
                        }
                    }
                }
            }
        }
    }

    for n in 2..=top {
        for x in 0..ld {
            for y in x..ld {
                let s = op.i[x][n - 1].mul(&op.i[y][n]).add(&op.i[y][n - 1].mul(&op.i[x][n]));
                if !s.is_zero() {
                    r.anticommute = false;
                    r.failures.push(format!("i_{x} i_{y} + i_{y} i_{x} != 0 in degree {n}"));
                }
            }
        }
    }

    // L on degrees below the truncation; degree `top` needs d out of it.
    let ls: Vec<Vec<Option<Matrix>>> =
        (0..ld).map(|x| (0..=top).map(|n| op.lie_derivative(g, x, n)).collect()).collect();
    for n in 0..=top {
        if ls.iter().any(|l| l[n].is_none()) {
            r.truncated.push(format!("Lie derivative in degree {n}"));
        }
    }
    for x in 0..ld {
        for y in 0..ld {
            let br = op.lie.basis_bracket(x, y);
            for n in 1..=top {
                let (Some(lx_lo), Some(lx_hi)) = (&ls[x][n - 1], &ls[x][n]) else { continue };
                let lhs = lx_lo.mul(&op.i[y][n]).sub(&op.i[y][n].mul(lx_hi));
                if lhs != op.contraction_of(br, n) {
                    r.equivariance = false;
                    r.failures.push(format!("[L_{x}, i_{y}] != i_[{x},{y}] in degree {n}"));
                }
            }
            if y <= x {
                continue;
            }
            for n in 0..=top {
                let (Some(lx), Some(ly)) = (&ls[x][n], &ls[y][n]) else { continue };
                let mut want = Matrix::zeros(g.dim(n), g.dim(n));
                for (k, c) in br.iter() {
                    want = want.axpy(c, ls[k][n].as_ref().unwrap());
                }
                if lx.mul(ly).sub(&ly.mul(lx)) != want {
                    r.lie_homomorphism = false;
                    r.failures.push(format!("[L_{x}, L_{y}] != L_[{x},{y}] in degree {n}"));
                }
            }
        }
        for n in 0..top {
            let (Some(lo), Some(hi)) = (&ls[x][n], &ls[x][n + 1]) else { continue };
            let d = g.d(n).unwrap();
            if d.mul(lo) != hi.mul(d) {
                r.commutes_with_d = false;
                r.failures.push(format!("L_{x} does not commute with d in degree {n}"));
            }
        }
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Constraint {
    Horizontal,
    Invariant,
    Basic,
}

/// Per-degree subspaces cut out by the operation, through degree `upto`.
pub fn constrained_subspaces(
    g: &GradedDiffAlgebra,
    op: &OperationData,
    upto: usize,
    kind: Constraint,
) -> Result<Vec<Subspace>> {
    if upto > g.max_degree() {
        return Err(NcError::input(format!("degree {upto} exceeds the truncation {}", g.max_degree())));
    }
    let mut subs = Vec::with_capacity(upto + 1);
    for n in 0..=upto {
        let mut blocks: Vec<Matrix> = Vec::new();
        for x in 0..op.lie.dim() {
            if kind != Constraint::Invariant && n > 0 {
                blocks.push(op.i[x][n].clone());
            }
            if kind != Constraint::Horizontal {
                let l = op.lie_derivative(g, x, n).ok_or_else(|| {
                    NcError::input(format!("invariance in degree {n} needs d out of degree {n} (truncated)"))
                })?;
                blocks.push(l);
            }
        }
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let s = if refs.is_empty() {
            Subspace::full(g.dim(n))
        } else {
            Subspace::kernel_of(&Matrix::vstack(&refs))
        };
        subs.push(s);
    }
    Ok(subs)
}

/// Restriction of the complex of `g` to the subspaces of `kind`, through `upto`.
pub fn constrained_subcomplex(
    g: &GradedDiffAlgebra,
    op: &OperationData,
    upto: usize,
    kind: Constraint,
) -> Result<(CochainComplex, Vec<Subspace>)> {
    let subs = constrained_subspaces(g, op, upto, kind)?;
    let c = g.truncated_complex(upto).restrict(&subs)?;
    Ok((c, subs))
}

pub fn basic_subcomplex(g: &GradedDiffAlgebra, op: &OperationData, upto: usize) -> Result<CochainComplex> {
    Ok(constrained_subcomplex(g, op, upto, Constraint::Basic)?.0)
}

pub fn invariant_subcomplex(g: &GradedDiffAlgebra, op: &OperationData, upto: usize) -> Result<CochainComplex> {
    Ok(constrained_subcomplex(g, op, upto, Constraint::Invariant)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::lie::{abelian, exterior_differential, gl, sl2};
    use crate::complex::gda::{check_gda, Bilinear};
    use std::collections::BTreeMap;

    /// `Lambda g*` with its Lie differential as a complete GDA.
    fn exterior(g: &LieAlgebraData) -> GradedDiffAlgebra {
        let (lam, d) = exterior_differential(g, g.dim());
        let n = g.dim();
        let mut products = BTreeMap::new();
        for p in 0..=n {
            for q in 0..=n - p {
                let t = Bilinear::from_fn(lam.dim(p), lam.dim(q), lam.dim(p + q), |i, j| {
                    lam.product(p, &SparseVec::unit(i), q, &SparseVec::unit(j)).unwrap()
                });
                products.insert((p, q), t);
            }
        }
        let d: Vec<Matrix> = d.into_iter().take(n).map(|m| m.unwrap()).collect();
        GradedDiffAlgebra::new(lam.dims(), d, products, SparseVec::unit(0)).unwrap().complete()
    }

    #[test]
    fn zero_operation_is_an_operation() {
        let g = exterior(&sl2());
        let op = OperationData::zero(abelian(2), &g);
        let r = verify_operation(&g, &op);
        assert!(r.ok(), "{:?}", r.failures);
        let b = basic_subcomplex(&g, &op, 3).unwrap();
        assert_eq!(b.dims(), g.dims());
    }

    #[test]
    fn sl2_exterior_gda_and_negated_differential() {
        let g = exterior(&sl2());
        assert!(check_gda(&g).ok());
        assert_eq!(g.as_complex().cohomology().unwrap().dims, vec![1, 0, 0, 1]);
        // d_2 vanishes on Lambda^2 sl(2)*, so negating d_1 there keeps Leibniz; gl(2) does not.
        let g = exterior(&gl(2).unwrap());
        assert!(check_gda(&g).ok());
        let mut d = g.differentials().to_vec();
        d[1] = d[1].neg();
        let bad = GradedDiffAlgebra::new(g.dims().to_vec(), d, g.products().clone(), SparseVec::unit(0)).unwrap();
        assert!(!check_gda(&bad).leibniz);
    }
}
