//! Finite-dimensional Lie algebras and alternating cochains on them.

use std::collections::HashMap;

use serde::Serialize;

use super::finite::FiniteAlgebra;
use super::graded::FreeGradedAlgebra;
use crate::error::{NcError, Result};
use crate::linalg::{Matrix, Scalar, SparseVec};

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraData {
    dim: usize,
    labels: Vec<String>,
    /// `bracket[i * dim + j] = [X_i, X_j]`.
    bracket: Vec<SparseVec>,
}

impl LieAlgebraData {
    pub fn new(dim: usize, labels: Vec<String>, bracket: Vec<SparseVec>) -> Result<Self> {
        if labels.len() != dim || bracket.len() != dim * dim {
            return Err(NcError::input("bracket table has the wrong size"));
        }
        if bracket.iter().any(|v| v.max_index().is_some_and(|k| k >= dim)) {
            return Err(NcError::input("bracket index out of range"));
        }
        Ok(LieAlgebraData { dim, labels, bracket })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> SparseVec) -> Self {
        let bracket = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        LieAlgebraData { dim, labels: (0..dim).map(|i| format!("X{i}")).collect(), bracket }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &SparseVec {
        &self.bracket[i * self.dim + j]
    }

    pub fn bracket(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out = out.axpy(&(a * b), &self.bracket[i * self.dim + j]);
            }
        }
        out
    }

    /// Structure constant `f^k_{ij}`.
    pub fn structure_constant(&self, k: usize, i: usize, j: usize) -> Scalar {
        self.bracket[i * self.dim + j].get(k)
    }

    /// `ad(X_i)` as a matrix on the algebra.
    pub fn ad(&self, i: usize) -> Matrix {
        let cols: Vec<SparseVec> = (0..self.dim).map(|j| self.basis_bracket(i, j).clone()).collect();
        Matrix::from_cols(self.dim, &cols)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }
}

pub fn abelian(n: usize) -> LieAlgebraData {
    LieAlgebraData::from_fn(n, |_, _| SparseVec::new())
}

/// `sl(2)` in the basis `e, f, h`.
pub fn sl2() -> LieAlgebraData {
    let v = |e: &[(usize, i64)]| SparseVec::from_entries(e.iter().map(|&(i, c)| (i, Scalar::int(c))).collect());
    LieAlgebraData::from_fn(3, |i, j| match (i, j) {
        (0, 1) => v(&[(2, 1)]),
        (1, 0) => v(&[(2, -1)]),
        (2, 0) => v(&[(0, 2)]),
        (0, 2) => v(&[(0, -2)]),
        (2, 1) => v(&[(1, -2)]),
        (1, 2) => v(&[(1, 2)]),
        _ => SparseVec::new(),
    })
    .with_labels(vec!["e".into(), "f".into(), "h".into()])
}

/// `gl(n)` as the commutator algebra of `M_n`.
pub fn gl(n: usize) -> Result<LieAlgebraData> {
    Ok(commutator_lie(&super::finite::matrix_algebra(n)?))
}

/// The Lie algebra `(A, [x, y] = xy - yx)`.
pub fn commutator_lie(a: &FiniteAlgebra) -> LieAlgebraData {
    let d = a.dim();
    let bracket =
        (0..d * d).map(|k| a.basis_product(k / d, k % d).sub(a.basis_product(k % d, k / d))).collect();
    LieAlgebraData { dim: d, labels: a.labels().to_vec(), bracket }
}

/// Lie algebra spanned by given matrices, closed under commutators.
pub fn matrix_lie(mats: &[Matrix]) -> Result<LieAlgebraData> {
    let n = mats.len();
    let vecs: Vec<SparseVec> = mats.iter().map(super::finite::vec_matrix).collect();
    let amb = mats.first().map_or(0, |m| m.nrows() * m.ncols());
    let basis = Matrix::from_cols(amb, &vecs);
    if basis.rank() != n {
        return Err(NcError::input("matrices are linearly dependent"));
    }
    let mut bracket = Vec::with_capacity(n * n);
    for x in mats {
        for y in mats {
            let c = super::finite::vec_matrix(&x.commutator(y));
            let coeffs = basis.solve(&c).ok_or_else(|| NcError::property("closure", "span not closed under commutators"))?;
            bracket.push(coeffs);
        }
    }
    Ok(LieAlgebraData { dim: n, labels: (0..n).map(|i| format!("X{i}")).collect(), bracket })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LieReport {
    pub dim: usize,
    pub antisymmetric: bool,
    /// Direct Jacobi identity on all basis triples.
    pub jacobi: bool,
    /// `d^2 = 0` on `Lambda^1 -> Lambda^3` for `d w(X, Y) = -w([X, Y])`.
    pub d_squared_zero: bool,
    pub failures: Vec<String>,
}

impl LieReport {
    pub fn ok(&self) -> bool {
        self.antisymmetric && self.jacobi && self.d_squared_zero
    }
}

/// The exterior algebra `Lambda g*` with `d theta^a = -1/2 f^a_{bc} theta^b theta^c`
/// extended as an antiderivation. Returns the algebra and the matrices of `d`.
pub fn exterior_differential(g: &LieAlgebraData, max_degree: usize) -> (FreeGradedAlgebra, Vec<Option<Matrix>>) {
    let n = g.dim;
    let lam = FreeGradedAlgebra::new(vec![1; n], max_degree.min(n));
    let half = Scalar::frac(-1, 2);
    let images: Vec<SparseVec> = (0..n)
        .map(|a| {
            if max_degree < 2 {
                return SparseVec::new();
            }
            let mut acc = SparseVec::new();
            for b in 0..n {
                for c in 0..n {
                    let f = g.structure_constant(a, b, c);
                    if f.is_zero() {
                        continue;
                    }
                    let p = lam.product(1, &lam.generator(b), 1, &lam.generator(c)).unwrap();
                    acc = acc.axpy(&(&half * &f), &p);
                }
            }
            acc
        })
        .collect();
    let d = lam.derivation(1, &images);
    (lam, d)
}

pub fn check_lie(g: &LieAlgebraData) -> LieReport {
    let n = g.dim;
    let mut failures = Vec::new();
    let mut antisymmetric = true;
    for i in 0..n {
        for j in 0..=i {
            let s = g.basis_bracket(i, j).add(g.basis_bracket(j, i));
            if !s.is_zero() {
                antisymmetric = false;
                failures.push(format!("antisymmetry fails on ({}, {})", g.labels[i], g.labels[j]));
            }
        }
    }
    let mut jacobi = true;
    'outer: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (x, y, z) = (SparseVec::unit(i), SparseVec::unit(j), SparseVec::unit(k));
                let t = g
                    .bracket(&x, &g.bracket(&y, &z))
                    .add(&g.bracket(&y, &g.bracket(&z, &x)))
                    .add(&g.bracket(&z, &g.bracket(&x, &y)));
                if !t.is_zero() {
                    jacobi = false;
                    failures.push(format!("Jacobi fails on ({}, {}, {})", g.labels[i], g.labels[j], g.labels[k]));
                    break 'outer;
                }
            }
        }
    }
    let d_squared_zero = if n < 3 {
        // Lambda^3 vanishes; compare through Lambda^2 only.
        true
    } else {
        let (_, d) = exterior_differential(g, 3);
        let d1 = d[1].as_ref().unwrap();
        let d2 = d[2].as_ref().unwrap();
        d2.mul(d1).is_zero()
    };
    if !d_squared_zero {
        failures.push("d^2 != 0 on Lambda^1".to_string());
    }
    LieReport { dim: n, antisymmetric, jacobi, d_squared_zero, failures }
}

/// Increasing `k`-subsets of `0..n` in lexicographic order, with a reverse index.
#[derive(Clone, Debug)]
pub struct Subsets {
    pub list: Vec<Vec<usize>>,
    pub index: HashMap<Vec<usize>, usize>,
}

impl Subsets {
    pub fn new(n: usize, k: usize) -> Self {
        let mut list = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut list);
        let index = list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Subsets { list, index }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }
}

/// Sorts a tuple of distinct indices, returning the permutation sign; `None` on repeats.
pub fn sort_sign(t: &[usize]) -> Option<(i64, Vec<usize>)> {
    let mut v = t.to_vec();
    let mut sign = 1i64;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, v))
}

/// Chevalley-Eilenberg coboundary `C^n(g, E) -> C^{n+1}(g, E)` on alternating
/// cochains. Coordinates: `subset_index * dim(E) + e`. `action[k]` is the
/// matrix of `X_k` on `E`.
pub fn ce_coboundary(g: &LieAlgebraData, action: &[Matrix], e_dim: usize, n: usize) -> Matrix {
    let gd = g.dim;
    assert_eq!(action.len(), gd);
    let src = Subsets::new(gd, n);
    let tgt = Subsets::new(gd, n + 1);
    let mut rows = Vec::with_capacity(tgt.len() * e_dim);
    for tup in &tgt.list {
        let mut per: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); e_dim];
        for k in 0..=n {
            let mut rest = tup.clone();
            rest.remove(k);
            let s = src.index[&rest];
            let sign = if k % 2 == 0 { Scalar::one() } else { -Scalar::one() };
            for (e, row) in action[tup[k]].rows_iter().enumerate() {
                for (f, v) in row.iter() {
                    per[e].push((s * e_dim + f, &sign * v));
                }
            }
        }
        for r in 0..=n {
            for s in r + 1..=n {
                let br = g.basis_bracket(tup[r], tup[s]);
                if br.is_zero() {
                    continue;
                }
                let mut rest: Vec<usize> = tup.clone();
                rest.remove(s);
                rest.remove(r);
                for (t, c) in br.iter() {
                    let mut full = vec![t];
                    full.extend_from_slice(&rest);
                    if let Some((sg, sorted)) = sort_sign(&full) {
                        let idx = src.index[&sorted];
                        let sign = if (r + s) % 2 == 0 { sg } else { -sg };
                        let coef = c * &Scalar::int(sign);
                        for (e, row) in per.iter_mut().enumerate() {
                            row.push((idx * e_dim + e, coef.clone()));
                        }
                    }
                }
            }
        }
        rows.extend(per.into_iter().map(SparseVec::from_entries));
    }
    Matrix::from_rows(src.len() * e_dim, rows)
}

/// Contraction `i_X w = w(X, ...)` for basis `X_k` on `C^n(g, E)`.
pub fn ce_contraction(gd: usize, e_dim: usize, k: usize, n: usize) -> Matrix {
    assert!(n >= 1);
    let src = Subsets::new(gd, n);
    let tgt = Subsets::new(gd, n - 1);
    let mut t = Vec::new();
    for (si, tup) in src.list.iter().enumerate() {
        if let Some(pos) = tup.iter().position(|&x| x == k) {
            let mut rest = tup.clone();
            rest.remove(pos);
            let ti = tgt.index[&rest];
            let sign = if pos % 2 == 0 { Scalar::one() } else { -Scalar::one() };
            for e in 0..e_dim {
                t.push((ti * e_dim + e, si * e_dim + e, sign.clone()));
            }
        }
    }
    Matrix::from_triplets(tgt.len() * e_dim, src.len() * e_dim, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_and_gl2_are_lie() {
        assert!(check_lie(&sl2()).ok());
        let g = gl(2).unwrap();
        let r = check_lie(&g);
        assert!(r.ok(), "{:?}", r.failures);
    }

    #[test]
    fn trivial_ce_matches_exterior_differential() {
        for g in [sl2(), gl(2).unwrap()] {
            let (_, d) = exterior_differential(&g, g.dim());
            let triv: Vec<Matrix> = (0..g.dim()).map(|_| Matrix::zeros(1, 1)).collect();
            for n in 0..g.dim() {
                let ce = ce_coboundary(&g, &triv, 1, n);
                assert_eq!(&ce, d[n].as_ref().unwrap(), "degree {n}");
            }
        }
    }

    #[test]
    fn sort_sign_counts_transpositions() {
        assert_eq!(sort_sign(&[2, 0, 1]), Some((1, vec![0, 1, 2])));
        assert_eq!(sort_sign(&[1, 0]), Some((-1, vec![0, 1])));
        assert_eq!(sort_sign(&[1, 1]), None);
    }

    #[test]
    fn broken_jacobi_detected_by_both_checks() {
        // [X0, X1] = X1, [X1, X2] = X0, [X0, X2] = 0 fails Jacobi.
        let v = |i: usize, c: i64| SparseVec::from_entries(vec![(i, Scalar::int(c))]);
        let g = LieAlgebraData::from_fn(3, |i, j| match (i, j) {
            (0, 1) => v(1, 1),
            (1, 0) => v(1, -1),
            (1, 2) => v(0, 1),
            (2, 1) => v(0, -1),
            _ => SparseVec::new(),
        });
        let r = check_lie(&g);
        assert!(r.antisymmetric && !r.jacobi);
        assert_eq!(r.jacobi, r.d_squared_zero);
    }
}
