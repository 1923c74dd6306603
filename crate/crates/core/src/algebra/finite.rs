//! Finite-dimensional associative *-algebras given by structure constants.

use serde::Serialize;

use crate::error::{NcError, Result};
use crate::linalg::{Acc, Matrix, Scalar, SparseVec, Subspace};

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteAlgebra {
    dim: usize,
    labels: Vec<String>,
    /// `mul[i * dim + j] = e_i e_j`.
    mul: Vec<SparseVec>,
    unit: Option<SparseVec>,
    /// Involution `x* = S conj(x)`.
    star: Option<Matrix>,
}

impl FiniteAlgebra {
    /// Builds an algebra from basis products. No axioms are checked here.
    pub fn new(
        dim: usize,
        labels: Vec<String>,
        mul: Vec<SparseVec>,
        unit: Option<SparseVec>,
        star: Option<Matrix>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(NcError::input("algebra dimension must be positive"));
        }
        if labels.len() != dim {
            return Err(NcError::input(format!("expected {dim} basis labels, got {}", labels.len())));
        }
        if mul.len() != dim * dim {
            return Err(NcError::input("multiplication table has the wrong size"));
        }
        if mul.iter().any(|v| v.max_index().is_some_and(|k| k >= dim)) {
            return Err(NcError::input("multiplication index out of range"));
        }
        if let Some(u) = &unit {
            if u.max_index().is_some_and(|k| k >= dim) {
                return Err(NcError::input("unit index out of range"));
            }
            if u.is_zero() {
                return Err(NcError::input("unit must be nonzero"));
            }
        }
        if let Some(s) = &star {
            if s.nrows() != dim || s.ncols() != dim {
                return Err(NcError::input("star matrix has the wrong shape"));
            }
        }
        Ok(FiniteAlgebra { dim, labels, mul, unit, star })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> SparseVec) -> Self {
        let mul = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        let labels = (0..dim).map(|i| format!("e{i}")).collect();
        FiniteAlgebra::new(dim, labels, mul, None, None).expect("valid table")
    }

    pub fn with_unit(mut self, unit: SparseVec) -> Self {
        self.unit = Some(unit);
        self
    }

    pub fn with_star(mut self, star: Matrix) -> Self {
        self.star = Some(star);
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> Option<&SparseVec> {
        self.unit.as_ref()
    }

    pub fn unit_required(&self) -> Result<&SparseVec> {
        self.unit.as_ref().ok_or_else(|| NcError::input("unit required"))
    }

    pub fn star_matrix(&self) -> Option<&Matrix> {
        self.star.as_ref()
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.mul[i * self.dim + j]
    }

    pub fn product(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc = Acc::new(self.dim);
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let c = a * b;
                acc.axpy(&c, &self.mul[i * self.dim + j]);
            }
        }
        acc.take()
    }

    pub fn commutator(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        self.product(x, y).sub(&self.product(y, x))
    }

    /// Matrix of `y -> x y`.
    pub fn left_mult(&self, x: &SparseVec) -> Matrix {
        let cols: Vec<SparseVec> = (0..self.dim).map(|j| self.product(x, &SparseVec::unit(j))).collect();
        Matrix::from_cols(self.dim, &cols)
    }

    /// Matrix of `y -> y x`.
    pub fn right_mult(&self, x: &SparseVec) -> Matrix {
        let cols: Vec<SparseVec> = (0..self.dim).map(|j| self.product(&SparseVec::unit(j), x)).collect();
        Matrix::from_cols(self.dim, &cols)
    }

    /// The multiplication map `A (x) A -> A` as a `dim x dim^2` matrix.
    pub fn mult_matrix(&self) -> Matrix {
        Matrix::from_cols(self.dim, &self.mul)
    }

    pub fn star(&self, x: &SparseVec) -> Option<SparseVec> {
        self.star.as_ref().map(|s| s.apply(&x.conj()))
    }

    /// First basis index with a nonzero unit coordinate.
    pub fn unit_pivot(&self) -> Result<usize> {
        Ok(self.unit_required()?.leading().expect("nonzero unit"))
    }

    /// Expresses the algebra in a new basis whose vectors are the columns of `p`.
    pub fn change_basis(&self, p: &Matrix, labels: Vec<String>) -> Result<FiniteAlgebra> {
        let pinv = invert(p).ok_or_else(|| NcError::input("change of basis is singular"))?;
        let cols = p.cols_vec();
        let mut mul = Vec::with_capacity(self.dim * self.dim);
        for a in &cols {
            for b in &cols {
                mul.push(pinv.apply(&self.product(a, b)));
            }
        }
        let unit = self.unit.as_ref().map(|u| pinv.apply(u));
        // x' = P^-1 x; star' = P^-1 S conj(P) conj(x').
        let star = self.star.as_ref().map(|s| pinv.mul(s).mul(&p.conj()));
        FiniteAlgebra::new(self.dim, labels, mul, unit, star)
    }

    /// Basis with the unit as element 0, replacing `e_pivot`.
    pub fn unit_first(&self) -> Result<(FiniteAlgebra, Matrix)> {
        let u = self.unit_required()?.clone();
        let p = self.unit_pivot()?;
        let mut cols = vec![u];
        let mut labels = vec!["1".to_string()];
        for j in 0..self.dim {
            if j != p {
                cols.push(SparseVec::unit(j));
                labels.push(self.labels[j].clone());
            }
        }
        let m = Matrix::from_cols(self.dim, &cols);
        Ok((self.change_basis(&m, labels)?, m))
    }
}

/// Inverse of a square matrix, if it exists.
pub fn invert(m: &Matrix) -> Option<Matrix> {
    let n = m.nrows();
    if m.ncols() != n {
        return None;
    }
    let sols = m.solve_many(&(0..n).map(SparseVec::unit).collect::<Vec<_>>())?;
    let inv = Matrix::from_cols(n, &sols);
    inv.mul(m).eq(&Matrix::identity(n)).then_some(inv)
}

pub fn complex_numbers() -> FiniteAlgebra {
    FiniteAlgebra::new(1, vec!["1".into()], vec![SparseVec::unit(0)], Some(SparseVec::unit(0)), Some(Matrix::identity(1)))
        .expect("valid")
}

/// `M_n(C)` with basis `e_ab` at index `a n + b` and `e_ab* = e_ba`.
pub fn matrix_algebra(n: usize) -> Result<FiniteAlgebra> {
    if n == 0 {
        return Err(NcError::input("matrix size must be positive"));
    }
    let dim = n * n;
    let mut mul = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let (a, b) = (i / n, i % n);
            let (c, d) = (j / n, j % n);
            mul.push(if b == c { SparseVec::unit(a * n + d) } else { SparseVec::new() });
        }
    }
    let unit = SparseVec::from_entries((0..n).map(|a| (a * n + a, Scalar::one())).collect());
    let star = Matrix::from_triplets(dim, dim, (0..dim).map(|i| ((i % n) * n + i / n, i, Scalar::one())).collect());
    let labels = (0..dim).map(|i| format!("e{}{}", i / n + 1, i % n + 1)).collect();
    FiniteAlgebra::new(dim, labels, mul, Some(unit), Some(star))
}

/// `C[x]/(x^k)` with basis `1, x, ..., x^{k-1}` and `x* = x`.
pub fn truncated_poly(k: usize) -> Result<FiniteAlgebra> {
    if k == 0 {
        return Err(NcError::input("truncation order must be positive"));
    }
    let mul = (0..k * k)
        .map(|t| {
            let s = t / k + t % k;
            if s < k {
                SparseVec::unit(s)
            } else {
                SparseVec::new()
            }
        })
        .collect();
    let labels = (0..k).map(|i| if i == 0 { "1".to_string() } else { format!("x^{i}") }).collect();
    FiniteAlgebra::new(k, labels, mul, Some(SparseVec::unit(0)), Some(Matrix::identity(k)))
}

/// Commutative algebra `C^n` of diagonal matrices.
pub fn diagonal_algebra(n: usize) -> Result<FiniteAlgebra> {
    if n == 0 {
        return Err(NcError::input("dimension must be positive"));
    }
    let mul = (0..n * n).map(|t| if t / n == t % n { SparseVec::unit(t / n) } else { SparseVec::new() }).collect();
    let unit = SparseVec::from_entries((0..n).map(|i| (i, Scalar::one())).collect());
    FiniteAlgebra::new(n, (0..n).map(|i| format!("p{i}")).collect(), mul, Some(unit), Some(Matrix::identity(n)))
}

pub fn direct_sum(a: &FiniteAlgebra, b: &FiniteAlgebra) -> FiniteAlgebra {
    let (m, n) = (a.dim, b.dim);
    let dim = m + n;
    let mut mul = vec![SparseVec::new(); dim * dim];
    for i in 0..m {
        for j in 0..m {
            mul[i * dim + j] = a.basis_product(i, j).clone();
        }
    }
    for i in 0..n {
        for j in 0..n {
            mul[(m + i) * dim + m + j] = b.basis_product(i, j).remap(|k| Some(k + m));
        }
    }
    let unit = match (&a.unit, &b.unit) {
        (Some(u), Some(v)) => Some(u.add(&v.remap(|k| Some(k + m)))),
        _ => None,
    };
    let star = match (&a.star, &b.star) {
        (Some(s), Some(t)) => Some(block_diag(s, t)),
        _ => None,
    };
    let labels = a.labels.iter().map(|l| format!("{l}_1")).chain(b.labels.iter().map(|l| format!("{l}_2"))).collect();
    FiniteAlgebra::new(dim, labels, mul, unit, star).expect("valid")
}

pub fn block_diag(s: &Matrix, t: &Matrix) -> Matrix {
    let top = Matrix::hstack(&[s, &Matrix::zeros(s.nrows(), t.ncols())]);
    let bot = Matrix::hstack(&[&Matrix::zeros(t.nrows(), s.ncols()), t]);
    Matrix::vstack(&[&top, &bot])
}

fn kron_vec(x: &SparseVec, y: &SparseVec, ny: usize) -> SparseVec {
    let mut e = Vec::with_capacity(x.nnz() * y.nnz());
    for (i, a) in x.iter() {
        for (j, b) in y.iter() {
            e.push((i * ny + j, a * b));
        }
    }
    SparseVec::from_sorted(e)
}

/// `A (x) B` with basis `e_i (x) f_j` at index `i dim(B) + j`.
pub fn tensor_product(a: &FiniteAlgebra, b: &FiniteAlgebra) -> FiniteAlgebra {
    let (m, n) = (a.dim, b.dim);
    let dim = m * n;
    let mut mul = Vec::with_capacity(dim * dim);
    for x in 0..dim {
        for y in 0..dim {
            let (i, j) = (x / n, x % n);
            let (k, l) = (y / n, y % n);
            mul.push(kron_vec(a.basis_product(i, k), b.basis_product(j, l), n));
        }
    }
    let unit = match (&a.unit, &b.unit) {
        (Some(u), Some(v)) => Some(kron_vec(u, v, n)),
        _ => None,
    };
    let star = match (&a.star, &b.star) {
        (Some(s), Some(t)) => Some(s.kron(t)),
        _ => None,
    };
    let mut labels = Vec::with_capacity(dim);
    for la in &a.labels {
        for lb in &b.labels {
            labels.push(format!("{la}*{lb}"));
        }
    }
    FiniteAlgebra::new(dim, labels, mul, unit, star).expect("valid")
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AlgebraReport {
    pub dim: usize,
    /// Direct check on all basis triples.
    pub associative: bool,
    /// `d^2 = 0` on `C^1 -> C^2 -> C^3` with `d w(x, y) = -w(xy)`.
    pub d_squared_zero: bool,
    pub unit_ok: Option<bool>,
    pub star_ok: Option<bool>,
    pub failures: Vec<String>,
}

impl AlgebraReport {
    pub fn ok(&self) -> bool {
        self.associative && self.d_squared_zero && self.unit_ok != Some(false) && self.star_ok != Some(false)
    }
}

/// Scalar Hochschild coboundary `C^n(A) -> C^{n+1}(A)`:
/// `d w(x_0..x_n) = sum_{k=1}^n (-1)^k w(.., x_{k-1} x_k, ..)`.
///
/// Coordinates of `C^n` are indexed by tuples `(i_1..i_n)` read in base `dim`.
pub fn scalar_coboundary(a: &FiniteAlgebra, n: usize) -> Matrix {
    let d = a.dim;
    let src = d.pow(n as u32);
    let tgt = d.pow(n as u32 + 1);
    let mut rows = Vec::with_capacity(tgt);
    let mut digits = vec![0usize; n + 1];
    for t in 0..tgt {
        let mut r = t;
        for k in (0..=n).rev() {
            digits[k] = r % d;
            r /= d;
        }
        let mut acc: Vec<(usize, Scalar)> = Vec::new();
        for k in 1..=n {
            let prod = a.basis_product(digits[k - 1], digits[k]);
            if prod.is_zero() {
                continue;
            }
            // index of (x_0..x_{k-2}, m, x_{k+1}..x_n) with m ranging over prod
            let mut pre = 0usize;
            for &x in &digits[..k - 1] {
                pre = pre * d + x;
            }
            let mut post = 0usize;
            for &x in &digits[k + 1..] {
                post = post * d + x;
            }
            let post_len = n - k;
            let scale = d.pow(post_len as u32);
            for (m, c) in prod.iter() {
                let idx = (pre * d + m) * scale + post;
                acc.push((idx, if k % 2 == 0 { c.clone() } else { -c }));
            }
        }
        rows.push(SparseVec::from_entries(acc));
    }
    Matrix::from_rows(src, rows)
}

pub fn check_algebra(a: &FiniteAlgebra) -> AlgebraReport {
    let d = a.dim;
    let mut failures = Vec::new();
    let mut associative = true;
    'outer: for i in 0..d {
        for j in 0..d {
            let ij = a.basis_product(i, j);
            for k in 0..d {
                let left = a.product(ij, &SparseVec::unit(k));
                let right = a.product(&SparseVec::unit(i), a.basis_product(j, k));
                if left != right {
                    associative = false;
                    failures.push(format!(
                        "associativity fails on ({}, {}, {})",
                        a.labels[i], a.labels[j], a.labels[k]
                    ));
                    break 'outer;
                }
            }
        }
    }
    let d1 = scalar_coboundary(a, 1);
    let d2 = scalar_coboundary(a, 2);
    let d_squared_zero = d2.mul(&d1).is_zero();
    if !d_squared_zero {
        failures.push("d^2 != 0 on C^1(A)".to_string());
    }
    let unit_ok = a.unit.as_ref().map(|u| {
        let ok = (0..d).all(|j| {
            let e = SparseVec::unit(j);
            a.product(u, &e) == e && a.product(&e, u) == e
        });
        if !ok {
            failures.push("unit fails".to_string());
        }
        ok
    });
    let star_ok = a.star.as_ref().map(|s| {
        let invol = s.mul(&s.conj()) == Matrix::identity(d);
        let anti = (0..d).all(|i| {
            (0..d).all(|j| {
                let lhs = a.star(a.basis_product(i, j)).unwrap();
                let rhs = a.product(&a.star(&SparseVec::unit(j)).unwrap(), &a.star(&SparseVec::unit(i)).unwrap());
                lhs == rhs
            })
        });
        if !invol {
            failures.push("star is not involutive".to_string());
        }
        if !anti {
            failures.push("star is not antimultiplicative".to_string());
        }
        invol && anti
    });
    AlgebraReport { dim: d, associative, d_squared_zero, unit_ok, star_ok, failures }
}

/// Validates an algebra for downstream use, naming the first failed axiom.
pub fn require_valid(a: &FiniteAlgebra) -> Result<()> {
    let r = check_algebra(a);
    if !r.associative {
        return Err(NcError::property("associativity", r.failures.join("; ")));
    }
    if r.unit_ok == Some(false) {
        return Err(NcError::property("unit", "unit element does not act as identity"));
    }
    if r.star_ok == Some(false) {
        return Err(NcError::property("involution", r.failures.join("; ")));
    }
    Ok(())
}

pub fn center(a: &FiniteAlgebra) -> Subspace {
    let d = a.dim;
    let mut rows = Vec::new();
    for j in 0..d {
        // columns i: e_i e_j - e_j e_i
        let cols: Vec<SparseVec> =
            (0..d).map(|i| a.basis_product(i, j).sub(a.basis_product(j, i))).collect();
        rows.extend(Matrix::from_cols(d, &cols).into_rows());
    }
    Subspace::kernel_of(&Matrix::from_rows(d, rows))
}

#[derive(Clone, Debug)]
pub struct Derivations {
    /// Derivations as vectorized matrices (`D[k][i]` at index `k dim + i`).
    pub der: Subspace,
    pub inner: Subspace,
    pub out_dim: usize,
}

impl Derivations {
    pub fn der_matrices(&self, dim: usize) -> Vec<Matrix> {
        self.der.basis().iter().map(|v| unvec(v, dim)).collect()
    }
}

pub fn vec_matrix(m: &Matrix) -> SparseVec {
    let n = m.ncols();
    let mut e = Vec::new();
    for (k, r) in m.rows_iter().enumerate() {
        for (i, v) in r.iter() {
            e.push((k * n + i, v.clone()));
        }
    }
    SparseVec::from_sorted(e)
}

pub fn unvec(v: &SparseVec, n: usize) -> Matrix {
    Matrix::from_triplets(n, n, v.iter().map(|(t, x)| (t / n, t % n, x.clone())).collect())
}

/// `ad(x) = [x, .]` as a matrix.
pub fn ad(a: &FiniteAlgebra, x: &SparseVec) -> Matrix {
    a.left_mult(x).sub(&a.right_mult(x))
}

pub fn derivations(a: &FiniteAlgebra) -> Derivations {
    let d = a.dim;
    let var = |k: usize, i: usize| k * d + i;
    let mut rows = Vec::new();
    for i in 0..d {
        for j in 0..d {
            // D(e_i e_j) - D(e_i) e_j - e_i D(e_j), component m
            let mut per: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); d];
            for (k, c) in a.basis_product(i, j).iter() {
                for (m, row) in per.iter_mut().enumerate() {
                    row.push((var(m, k), c.clone()));
                }
            }
            for k in 0..d {
                for (m, c) in a.basis_product(k, j).iter() {
                    per[m].push((var(k, i), -c));
                }
                for (m, c) in a.basis_product(i, k).iter() {
                    per[m].push((var(k, j), -c));
                }
            }
            rows.extend(per.into_iter().map(SparseVec::from_entries));
        }
    }
    let der = Subspace::kernel_of(&Matrix::from_rows(d * d, rows));
    let inner_vecs: Vec<SparseVec> = (0..d).map(|x| vec_matrix(&ad(a, &SparseVec::unit(x)))).collect();
    let inner = Subspace::span(d * d, &inner_vecs);
    let out_dim = der.dim() - inner.dim();
    Derivations { der, inner, out_dim }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_algebra_is_valid() {
        let m2 = matrix_algebra(2).unwrap();
        let r = check_algebra(&m2);
        assert!(r.ok(), "{:?}", r.failures);
        assert_eq!(center(&m2).dim(), 1);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(truncated_poly(0).is_err());
        assert!(matrix_algebra(0).is_err());
    }

    #[test]
    fn m2_multiplication_map_rank() {
        let m = matrix_algebra(2).unwrap().mult_matrix();
        assert_eq!((m.nrows(), m.ncols()), (4, 16));
        assert_eq!(m.rank(), 4);
        assert_eq!(m.kernel().len(), 12);
    }

    #[test]
    fn derivation_dimensions() {
        let m2 = matrix_algebra(2).unwrap();
        let d = derivations(&m2);
        assert_eq!((d.der.dim(), d.inner.dim(), d.out_dim), (3, 3, 0));
        let p3 = truncated_poly(3).unwrap();
        let d = derivations(&p3);
        assert_eq!((d.der.dim(), d.inner.dim()), (2, 0));
    }

    #[test]
    fn unit_first_basis() {
        let m2 = matrix_algebra(2).unwrap();
        let (b, _) = m2.unit_first().unwrap();
        assert_eq!(b.unit().unwrap(), &SparseVec::unit(0));
        assert!(check_algebra(&b).ok());
    }

    #[test]
    fn sums_and_tensors_stay_valid() {
        let a = truncated_poly(2).unwrap();
        let b = matrix_algebra(2).unwrap();
        assert!(check_algebra(&direct_sum(&a, &b)).ok());
        let t = tensor_product(&a, &b);
        assert_eq!(t.dim(), 8);
        assert!(check_algebra(&t).ok());
        assert_eq!(center(&t).dim(), 2);
    }

    #[test]
    fn nonassociative_table_fails_both_ways() {
        // e0 e0 = e1, everything else zero except e1 e0 = e0.
        let t = FiniteAlgebra::from_fn(2, |i, j| match (i, j) {
            (0, 0) => SparseVec::unit(1),
            (1, 0) => SparseVec::unit(0),
            _ => SparseVec::new(),
        });
        let r = check_algebra(&t);
        assert!(!r.associative && !r.d_squared_zero);
        assert!(require_valid(&t).unwrap_err().to_string().contains("associativity"));
    }
}
