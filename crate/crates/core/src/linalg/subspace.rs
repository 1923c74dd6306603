//! Subspaces of `Q(i)^n` in canonical reduced form, quotients and restriction.

use super::matrix::{Echelon, Matrix};
use super::scalar::Scalar;
use super::sparse::SparseVec;

/// A subspace stored by its reduced row echelon basis.
///
/// Basis vector `k` has a 1 at `pivots[k]` and zeros at every other pivot, so
/// the coordinates of a member `v` are just `v[pivots[k]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[SparseVec]) -> Self {
        let mut e = Echelon::from_rows(ambient, vectors.iter());
        e.reduce();
        let pivots = e.pivot_cols();
        Subspace { ambient, basis: e.into_rows(), pivots }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: (0..ambient).map(SparseVec::unit).collect(), pivots: (0..ambient).collect() }
    }

    pub fn kernel_of(m: &Matrix) -> Self {
        Subspace::span(m.ncols(), &m.kernel())
    }

    pub fn image_of(m: &Matrix) -> Self {
        Subspace::span(m.nrows(), &m.cols_vec())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_cols(self.ambient, &self.basis)
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not a member.
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        let c: Vec<(usize, Scalar)> =
            self.pivots.iter().enumerate().map(|(k, &p)| (k, v.get(p))).filter(|(_, x)| !x.is_zero()).collect();
        let mut rest = v.clone();
        for (k, x) in &c {
            rest = rest.axpy(&-x.clone(), &self.basis[*k]);
        }
        rest.is_zero().then(|| SparseVec::from_sorted(c))
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Coordinates of each vector as the columns of a `dim x vs.len()` matrix.
    pub fn coords_matrix(&self, vs: &[SparseVec]) -> Option<Matrix> {
        let cols: Option<Vec<SparseVec>> = vs.iter().map(|v| self.coords(v)).collect();
        Some(Matrix::from_cols(self.dim(), &cols?))
    }

    pub fn from_coords(&self, c: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (k, x) in c.iter() {
            out = out.axpy(x, &self.basis[k]);
        }
        out
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &all)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        // Equations of `other`, then solve them on `self`.
        let eqs = other.annihilator();
        if eqs.is_empty() {
            return self.clone();
        }
        let e = Matrix::from_rows(self.ambient, eqs);
        let restricted = e.mul(&self.basis_matrix());
        let ker = restricted.kernel();
        let vs: Vec<SparseVec> = ker.iter().map(|c| self.from_coords(c)).collect();
        Subspace::span(self.ambient, &vs)
    }

    /// Linear functionals (as row vectors) vanishing exactly on this subspace.
    pub fn annihilator(&self) -> Vec<SparseVec> {
        Matrix::from_rows(self.ambient, self.basis.clone()).kernel()
    }

    /// Complement-coordinates for the quotient `ambient / self`.
    pub fn quotient(&self) -> Quotient {
        let piv: std::collections::HashSet<usize> = self.pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.ambient).filter(|j| !piv.contains(j)).collect();
        let mut pos = vec![usize::MAX; self.ambient];
        for (k, &j) in free.iter().enumerate() {
            pos[j] = k;
        }
        let mut t: Vec<(usize, usize, Scalar)> = free.iter().enumerate().map(|(k, &j)| (k, j, Scalar::one())).collect();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            for (j, v) in b.iter() {
                if j != p {
                    t.push((pos[j], p, -v));
                }
            }
        }
        let q = free.len();
        let project = Matrix::from_triplets(q, self.ambient, t);
        let section =
            Matrix::from_triplets(self.ambient, q, free.iter().enumerate().map(|(k, &j)| (j, k, Scalar::one())).collect());
        Quotient { dim: q, project, section }
    }

    /// The image of this subspace under `m`.
    pub fn map(&self, m: &Matrix) -> Subspace {
        Subspace::span(m.nrows(), &m.apply_all(&self.basis))
    }
}

/// `project` kills the subspace; `project * section = id`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub dim: usize,
    pub project: Matrix,
    pub section: Matrix,
}

/// `ambient / killed`, with `killed` given by spanning vectors.
pub fn quotient_coords(ambient: usize, killed: &[SparseVec]) -> Quotient {
    Subspace::span(ambient, killed).quotient()
}

/// Restrict `m: V -> W` to subspaces `src` of V and `dst` of W, in their coordinates.
/// Returns `None` if `m(src)` is not contained in `dst`.
pub fn restrict(m: &Matrix, src: &Subspace, dst: &Subspace) -> Option<Matrix> {
    let imgs = m.apply_all(src.basis());
    dst.coords_matrix(&imgs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: &[i64]) -> SparseVec {
        SparseVec::from_dense(&x.iter().map(|&a| Scalar::int(a)).collect::<Vec<_>>())
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(a.intersect(&b), Subspace::span(3, &[v(&[0, 1, 0])]));
        assert_eq!(a.sum(&b).dim(), 3);
        assert!(a.contains(&v(&[2, -3, 0])));
        assert!(!a.contains(&v(&[0, 0, 1])));
    }

    #[test]
    fn quotient_kills_and_splits() {
        let k = Subspace::span(4, &[v(&[1, 1, 0, 0]), v(&[0, 0, 1, 2])]);
        let q = k.quotient();
        assert_eq!(q.dim, 2);
        for b in k.basis() {
            assert!(q.project.apply(b).is_zero());
        }
        assert_eq!(q.project.mul(&q.section), Matrix::identity(2));
    }

    proptest! {
        #[test]
        fn dim_formula(a in proptest::collection::vec(proptest::collection::vec(-2i64..3, 5), 1..4),
                       b in proptest::collection::vec(proptest::collection::vec(-2i64..3, 5), 1..4)) {
            let sa = Subspace::span(5, &a.iter().map(|x| v(x)).collect::<Vec<_>>());
            let sb = Subspace::span(5, &b.iter().map(|x| v(x)).collect::<Vec<_>>());
            let i = sa.intersect(&sb);
            prop_assert_eq!(sa.dim() + sb.dim(), sa.sum(&sb).dim() + i.dim());
            prop_assert!(sa.contains_space(&i) && sb.contains_space(&i));
        }
    }
}
