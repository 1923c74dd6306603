//! Bimodules given by action matrices, and balanced tensor products.

use super::finite::FiniteAlgebra;
use crate::error::{NcError, Result};
use crate::linalg::{quotient_coords, Matrix, Quotient, SparseVec};

/// An `(A, B)`-bimodule. `left[i]` is `m -> e_i m`, `right[j]` is `m -> m f_j`.
/// One-sided modules leave the other list empty.
#[derive(Clone, Debug, PartialEq)]
pub struct Bimodule {
    dim: usize,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
}

fn combine(mats: &[Matrix], x: &SparseVec, dim: usize) -> Matrix {
    let mut out = Matrix::zeros(dim, dim);
    for (i, c) in x.iter() {
        out = out.axpy(c, &mats[i]);
    }
    out
}

impl Bimodule {
    pub fn new(dim: usize, left: Vec<Matrix>, right: Vec<Matrix>) -> Result<Self> {
        for m in left.iter().chain(&right) {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(NcError::input("action matrix has the wrong shape"));
            }
        }
        Ok(Bimodule { dim, left, right })
    }

    pub fn left_module(dim: usize, left: Vec<Matrix>) -> Result<Self> {
        Bimodule::new(dim, left, Vec::new())
    }

    pub fn right_module(dim: usize, right: Vec<Matrix>) -> Result<Self> {
        Bimodule::new(dim, Vec::new(), right)
    }

    /// `A` as an `(A, A)`-bimodule.
    pub fn regular(a: &FiniteAlgebra) -> Self {
        let d = a.dim();
        let left = (0..d).map(|i| a.left_mult(&SparseVec::unit(i))).collect();
        let right = (0..d).map(|i| a.right_mult(&SparseVec::unit(i))).collect();
        Bimodule { dim: d, left, right }
    }

    /// `A*` with `(a phi b)(y) = phi(b y a)`, in the dual basis.
    pub fn dual(a: &FiniteAlgebra) -> Self {
        let d = a.dim();
        let left = (0..d)
            .map(|x| {
                let t = (0..d)
                    .flat_map(|j| (0..d).map(move |y| (y, j)))
                    .filter_map(|(y, j)| {
                        let c = a.basis_product(y, x).get(j);
                        (!c.is_zero()).then_some((y, j, c))
                    })
                    .collect();
                Matrix::from_triplets(d, d, t)
            })
            .collect();
        let right = (0..d)
            .map(|x| {
                let t = (0..d)
                    .flat_map(|j| (0..d).map(move |y| (y, j)))
                    .filter_map(|(y, j)| {
                        let c = a.basis_product(x, y).get(j);
                        (!c.is_zero()).then_some((y, j, c))
                    })
                    .collect();
                Matrix::from_triplets(d, d, t)
            })
            .collect();
        Bimodule { dim: d, left, right }
    }

    /// `V (x) A` with `A` acting on the right only (free right module of rank `k`).
    pub fn free_right(a: &FiniteAlgebra, k: usize) -> Self {
        let reg = Bimodule::regular(a);
        let right = reg.right.iter().map(|r| Matrix::identity(k).kron(r)).collect();
        Bimodule { dim: k * a.dim(), left: Vec::new(), right }
    }

    pub fn free_left(a: &FiniteAlgebra, k: usize) -> Self {
        let reg = Bimodule::regular(a);
        let left = reg.left.iter().map(|l| Matrix::identity(k).kron(l)).collect();
        Bimodule { dim: k * a.dim(), left, right: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_actions(&self) -> &[Matrix] {
        &self.left
    }

    pub fn right_actions(&self) -> &[Matrix] {
        &self.right
    }

    pub fn has_left(&self) -> bool {
        !self.left.is_empty()
    }

    pub fn has_right(&self) -> bool {
        !self.right.is_empty()
    }

    pub fn left_act(&self, x: &SparseVec) -> Matrix {
        combine(&self.left, x, self.dim)
    }

    pub fn right_act(&self, x: &SparseVec) -> Matrix {
        combine(&self.right, x, self.dim)
    }

    /// Forget one side.
    pub fn left_part(&self) -> Bimodule {
        Bimodule { dim: self.dim, left: self.left.clone(), right: Vec::new() }
    }

    pub fn right_part(&self) -> Bimodule {
        Bimodule { dim: self.dim, left: Vec::new(), right: self.right.clone() }
    }

    /// Change of basis `m = P m'` (columns of `p` are the new basis).
    pub fn conjugate(&self, p: &Matrix) -> Result<Bimodule> {
        let pinv = super::finite::invert(p).ok_or_else(|| NcError::input("singular change of basis"))?;
        let f = |m: &Matrix| pinv.mul(m).mul(p);
        Ok(Bimodule { dim: self.dim, left: self.left.iter().map(f).collect(), right: self.right.iter().map(f).collect() })
    }

    /// Checks module axioms against the acting algebras.
    pub fn check(&self, a: Option<&FiniteAlgebra>, b: Option<&FiniteAlgebra>) -> Vec<String> {
        let mut fails = Vec::new();
        if let Some(a) = a.filter(|_| self.has_left()) {
            if self.left.len() != a.dim() {
                fails.push("left action count mismatch".into());
                return fails;
            }
            for i in 0..a.dim() {
                for j in 0..a.dim() {
                    if self.left[i].mul(&self.left[j]) != self.left_act(a.basis_product(i, j)) {
                        fails.push(format!("left action not multiplicative at ({i}, {j})"));
                    }
                }
            }
            if let Some(u) = a.unit() {
                if self.left_act(u) != Matrix::identity(self.dim) {
                    fails.push("left unit does not act as identity".into());
                }
            }
        }
        if let Some(b) = b.filter(|_| self.has_right()) {
            if self.right.len() != b.dim() {
                fails.push("right action count mismatch".into());
                return fails;
            }
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    if self.right[j].mul(&self.right[i]) != self.right_act(b.basis_product(i, j)) {
                        fails.push(format!("right action not multiplicative at ({i}, {j})"));
                    }
                }
            }
            if let Some(u) = b.unit() {
                if self.right_act(u) != Matrix::identity(self.dim) {
                    fails.push("right unit does not act as identity".into());
                }
            }
        }
        for l in &self.left {
            for r in &self.right {
                if l.mul(r) != r.mul(l) {
                    fails.push("left and right actions do not commute".into());
                    return fails;
                }
            }
        }
        fails
    }
}

/// `M (x)_B N` as a quotient of `M (x) N` (index `m dim(N) + n`), keeping the
/// outer actions.
#[derive(Clone, Debug)]
pub struct BalancedTensor {
    pub module: Bimodule,
    pub quotient: Quotient,
    pub left_dim: usize,
    pub right_dim: usize,
}

impl BalancedTensor {
    pub fn dim(&self) -> usize {
        self.quotient.dim
    }

    /// Class of `m (x) n`.
    pub fn class_of(&self, m: &SparseVec, n: &SparseVec) -> SparseVec {
        self.quotient.project.apply(&kron(m, n, self.right_dim))
    }

    /// Matrix `M (x) N -> M (x)_B N`.
    pub fn project(&self) -> &Matrix {
        &self.quotient.project
    }

    pub fn section(&self) -> &Matrix {
        &self.quotient.section
    }
}

pub fn kron(m: &SparseVec, n: &SparseVec, n_dim: usize) -> SparseVec {
    let mut e = Vec::with_capacity(m.nnz() * n.nnz());
    for (i, a) in m.iter() {
        for (j, b) in n.iter() {
            e.push((i * n_dim + j, a * b));
        }
    }
    SparseVec::from_sorted(e)
}

/// `M (x)_B N` for `M` with a right `B`-action and `N` with a left `B`-action.
pub fn tensor_over(m: &Bimodule, n: &Bimodule) -> Result<BalancedTensor> {
    if m.right.len() != n.left.len() {
        return Err(NcError::input("tensor factors are not over the same algebra"));
    }
    let (dm, dn) = (m.dim, n.dim);
    let mut killed = Vec::new();
    for (rb, lb) in m.right.iter().zip(&n.left) {
        // (m b) (x) n - m (x) (b n) on basis pairs
        let relator = rb.kron(&Matrix::identity(dn)).sub(&Matrix::identity(dm).kron(lb));
        killed.extend(relator.cols_vec());
    }
    let q = quotient_coords(dm * dn, &killed);
    let induce = |act: &Matrix| q.project.mul(act).mul(&q.section);
    let left = m.left.iter().map(|l| induce(&l.kron(&Matrix::identity(dn)))).collect();
    let right = n.right.iter().map(|r| induce(&Matrix::identity(dm).kron(r))).collect();
    let module = Bimodule::new(q.dim, left, right)?;
    Ok(BalancedTensor { module, quotient: q, left_dim: dm, right_dim: dn })
}

/// A bimodule over a *-algebra with a conjugate-linear involution
/// `m* = S conj(m)` satisfying `(a m b)* = b* m* a*`.
#[derive(Clone, Debug)]
pub struct StarBimodule {
    pub module: Bimodule,
    pub star: Matrix,
}

impl StarBimodule {
    pub fn regular(a: &FiniteAlgebra) -> Option<Self> {
        Some(StarBimodule { module: Bimodule::regular(a), star: a.star_matrix()?.clone() })
    }

    pub fn apply_star(&self, m: &SparseVec) -> SparseVec {
        self.star.apply(&m.conj())
    }

    pub fn check(&self, a: &FiniteAlgebra) -> Vec<String> {
        let mut fails = self.module.check(Some(a), Some(a));
        let d = self.module.dim;
        if self.star.mul(&self.star.conj()) != Matrix::identity(d) {
            fails.push("module involution is not involutive".into());
        }
        for i in 0..a.dim() {
            let ai = SparseVec::unit(i);
            let ai_star = a.star(&ai).expect("star algebra");
            for m in 0..d {
                let mv = SparseVec::unit(m);
                // (a m)* = m* a*
                let lhs = self.apply_star(&self.module.left[i].apply(&mv));
                let rhs = self.module.right_act(&ai_star).apply(&self.apply_star(&mv));
                if lhs != rhs {
                    fails.push(format!("(a m)* != m* a* at ({i}, {m})"));
                    return fails;
                }
            }
        }
        fails
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::finite::{matrix_algebra, truncated_poly};

    #[test]
    fn regular_and_dual_are_bimodules() {
        for a in [matrix_algebra(2).unwrap(), truncated_poly(3).unwrap()] {
            assert!(Bimodule::regular(&a).check(Some(&a), Some(&a)).is_empty());
            assert!(Bimodule::dual(&a).check(Some(&a), Some(&a)).is_empty());
            assert!(StarBimodule::regular(&a).unwrap().check(&a).is_empty());
        }
    }

    #[test]
    fn a_tensor_a_over_a_is_a() {
        let a = matrix_algebra(2).unwrap();
        let r = Bimodule::regular(&a);
        let t = tensor_over(&r, &r).unwrap();
        assert_eq!(t.dim(), 4);
        assert!(t.module.check(Some(&a), Some(&a)).is_empty());
    }

    #[test]
    fn one_sided_regular_modules() {
        // A as a right module tensored with A as a left module.
        let a = matrix_algebra(2).unwrap();
        let reg = Bimodule::regular(&a);
        let rows = Bimodule::right_module(4, reg.right_actions().to_vec()).unwrap();
        let cols = Bimodule::left_module(4, reg.left_actions().to_vec()).unwrap();
        assert_eq!(tensor_over(&rows, &cols).unwrap().dim(), 4);
    }
}
