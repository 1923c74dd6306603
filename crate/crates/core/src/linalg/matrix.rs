//! Row-sparse exact matrices and Gaussian elimination over Q(i).

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use super::scalar::Scalar;
use super::sparse::{Acc, SparseVec};

/// Matrix acting on column vectors, stored as sparse rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![SparseVec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix { rows: n, cols: n, data: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn scalar_identity(n: usize, c: &Scalar) -> Self {
        Matrix { rows: n, cols: n, data: (0..n).map(|i| SparseVec::unit(i).scale(c)).collect() }
    }

    pub fn from_rows(cols: usize, data: Vec<SparseVec>) -> Self {
        debug_assert!(data.iter().all(|r| r.max_index().map_or(true, |m| m < cols)));
        Matrix { rows: data.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(rows: usize, cols: &[SparseVec]) -> Self {
        Matrix::from_rows(rows, cols.to_vec()).transpose()
    }

    pub fn from_dense(rows: Vec<Vec<Scalar>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix { rows: rows.len(), cols, data: rows.iter().map(|r| SparseVec::from_dense(r)).collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_dense(rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect())
    }

    pub fn from_triplets(rows: usize, cols: usize, t: Vec<(usize, usize, Scalar)>) -> Self {
        let mut per: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); rows];
        for (i, j, v) in t {
            assert!(i < rows && j < cols, "triplet out of range");
            per[i].push((j, v));
        }
        Matrix { rows, cols, data: per.into_iter().map(SparseVec::from_entries).collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        Matrix {
            rows,
            cols,
            data: (0..rows)
                .map(|i| SparseVec::from_sorted((0..cols).map(|j| (j, f(i, j))).collect()))
                .collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &SparseVec> {
        self.data.iter()
    }

    pub fn into_rows(self) -> Vec<SparseVec> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        let mut e = std::mem::take(&mut self.data[i]).into_entries();
        e.retain(|x| x.0 != j);
        e.push((j, v));
        self.data[i] = SparseVec::from_entries(e);
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.nnz()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_zero())
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        self.data.iter().map(|r| r.to_dense(self.cols)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut per: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, v) in r.iter() {
                per[j].push((i, v.clone()));
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data: per.into_iter().map(SparseVec::from_sorted).collect() }
    }

    pub fn conj(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|r| r.conj()).collect() }
    }

    pub fn conj_transpose(&self) -> Matrix {
        self.transpose().conj()
    }

    /// Column `j` as a sparse vector.
    pub fn col(&self, j: usize) -> SparseVec {
        SparseVec::from_sorted(
            self.data.iter().enumerate().filter_map(|(i, r)| r.get_ref(j).map(|v| (i, v.clone()))).collect(),
        )
    }

    pub fn cols_vec(&self) -> Vec<SparseVec> {
        self.transpose().data
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|r| r.scale(c)).collect() }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&-Scalar::one())
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.axpy(&Scalar::one(), other)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.axpy(&-Scalar::one(), other)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Scalar, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.axpy(c, b)).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let mut acc = Acc::new(other.cols);
        let data = self
            .data
            .iter()
            .map(|r| {
                for (k, v) in r.iter() {
                    acc.axpy(v, &other.data[k]);
                }
                acc.take()
            })
            .collect();
        Matrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_sorted(
            self.data.iter().enumerate().map(|(i, r)| (i, r.dot(v))).filter(|(_, x)| !x.is_zero()).collect(),
        )
    }

    pub fn apply_dense(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|r| {
                let mut s = Scalar::zero();
                for (j, x) in r.iter() {
                    s.add_mul(x, &v[j]);
                }
                s
            })
            .collect()
    }

    /// Apply to many column vectors at once.
    pub fn apply_all(&self, vs: &[SparseVec]) -> Vec<SparseVec> {
        let t = self.transpose();
        let mut acc = Acc::new(self.rows);
        vs.iter()
            .map(|v| {
                for (k, x) in v.iter() {
                    acc.axpy(x, &t.data[k]);
                }
                acc.take()
            })
            .collect()
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * other.rows);
        for ra in &self.data {
            for rb in &other.data {
                let mut e = Vec::with_capacity(ra.nnz() * rb.nnz());
                for (j, a) in ra.iter() {
                    for (l, b) in rb.iter() {
                        e.push((j * other.cols + l, a * b));
                    }
                }
                data.push(SparseVec::from_sorted(e));
            }
        }
        Matrix { rows: self.rows * other.rows, cols: self.cols * other.cols, data }
    }

    pub fn vstack(blocks: &[&Matrix]) -> Matrix {
        let cols = blocks.first().map_or(0, |b| b.cols);
        assert!(blocks.iter().all(|b| b.cols == cols), "vstack width mismatch");
        let data: Vec<SparseVec> = blocks.iter().flat_map(|b| b.data.iter().cloned()).collect();
        Matrix { rows: data.len(), cols, data }
    }

    pub fn hstack(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.first().map_or(0, |b| b.rows);
        assert!(blocks.iter().all(|b| b.rows == rows), "hstack height mismatch");
        let mut data = vec![Vec::new(); rows];
        let mut off = 0;
        for b in blocks {
            for (i, r) in b.data.iter().enumerate() {
                data[i].extend(r.iter().map(|(j, v)| (j + off, v.clone())));
            }
            off += b.cols;
        }
        Matrix { rows, cols: off, data: data.into_iter().map(SparseVec::from_sorted).collect() }
    }

    /// Rows `r` of `self`, in order.
    pub fn select_rows(&self, r: &[usize]) -> Matrix {
        Matrix { rows: r.len(), cols: self.cols, data: r.iter().map(|&i| self.data[i].clone()).collect() }
    }

    /// Columns `c` of `self`, in order.
    pub fn select_cols(&self, c: &[usize]) -> Matrix {
        let mut pos = vec![usize::MAX; self.cols];
        for (k, &j) in c.iter().enumerate() {
            pos[j] = k;
        }
        Matrix {
            rows: self.rows,
            cols: c.len(),
            data: self.data.iter().map(|r| r.remap(|j| (pos[j] != usize::MAX).then_some(pos[j]))).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        Echelon::from_rows(self.cols, self.data.iter()).rank()
    }

    /// Reduced row echelon form; returns `(R, pivot_columns)` with zero rows dropped.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut e = Echelon::from_rows(self.cols, self.data.iter());
        e.reduce();
        let piv = e.pivot_cols();
        (Matrix { rows: piv.len(), cols: self.cols, data: e.into_rows() }, piv)
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut e = Echelon::from_rows(self.cols, self.data.iter());
        e.reduce();
        e.kernel()
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// Pivot-only solution of `self x = b` (free variables set to zero).
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        self.solve_many(&[b.clone()]).map(|mut v| v.remove(0))
    }

    /// Solves `self X = B` column by column; `None` if any column is inconsistent.
    pub fn solve_many(&self, bs: &[SparseVec]) -> Option<Vec<SparseVec>> {
        let n = self.cols;
        let k = bs.len();
        let mut aug = vec![Vec::new(); self.rows];
        for (c, b) in bs.iter().enumerate() {
            for (i, v) in b.iter() {
                assert!(i < self.rows, "right-hand side too long");
                aug[i].push((n + c, v.clone()));
            }
        }
        let rows: Vec<SparseVec> = self
            .data
            .iter()
            .zip(aug)
            .map(|(r, a)| {
                let mut e = r.entries().to_vec();
                e.extend(a);
                SparseVec::from_sorted(e)
            })
            .collect();
        let mut e = Echelon::from_rows(n + k, rows.iter());
        if e.pivot_cols().iter().any(|&p| p >= n) {
            return None;
        }
        e.reduce();
        let mut sols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); k];
        for (p, r) in e.pivot_rows() {
            for (j, v) in r.iter() {
                if j >= n {
                    sols[j - n].push((p, v.clone()));
                }
            }
        }
        Some(sols.into_iter().map(SparseVec::from_entries).collect())
    }

    /// Basis of the column space (canonical).
    pub fn image(&self) -> Vec<SparseVec> {
        let (r, _) = self.transpose().rref();
        r.data
    }

    /// Entrywise map, e.g. to floats.
    pub fn to_c64(&self) -> Vec<Vec<num_complex::Complex64>> {
        self.to_dense().iter().map(|r| r.iter().map(|x| x.to_c64()).collect()).collect()
    }

    pub fn trace(&self) -> Scalar {
        let mut s = Scalar::zero();
        for i in 0..self.rows.min(self.cols) {
            if let Some(v) = self.data[i].get_ref(i) {
                s += v;
            }
        }
        s
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Incremental row echelon form with unit pivots.
pub struct Echelon {
    width: usize,
    pivot_of_col: Vec<Option<usize>>,
    rows: Vec<(usize, SparseVec)>,
    acc: Acc,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon { width, pivot_of_col: vec![None; width], rows: Vec::new(), acc: Acc::new(width) }
    }

    pub fn from_rows<'a>(width: usize, rows: impl Iterator<Item = &'a SparseVec>) -> Self {
        let mut e = Echelon::new(width);
        for r in rows {
            e.insert(r);
            if e.rank() == width {
                break;
            }
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` by the current pivots until its leading entry is free.
    /// Returns the leading column of the remainder, or `None` if it vanished.
    fn reduce_leading(&mut self, v: &SparseVec) -> Option<usize> {
        self.acc.clear();
        let mut heap: BinaryHeap<Reverse<usize>> = BinaryHeap::new();
        self.acc.axpy_with(&Scalar::one(), v, |i| heap.push(Reverse(i)));
        while let Some(Reverse(j)) = heap.pop() {
            if self.acc.get(j).is_zero() {
                continue;
            }
            match self.pivot_of_col[j] {
                Some(p) => {
                    let c = -self.acc.get(j).clone();
                    let row = &self.rows[p].1;
                    let acc = &mut self.acc;
                    acc.axpy_with(&c, row, |i| heap.push(Reverse(i)));
                }
                None => return Some(j),
            }
        }
        None
    }

    /// Adds a row; returns true if the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        match self.reduce_leading(v) {
            None => {
                self.acc.clear();
                false
            }
            Some(j) => {
                let inv = self.acc.get(j).inv();
                let r = self.acc.take().scale(&inv);
                self.pivot_of_col[j] = Some(self.rows.len());
                self.rows.push((j, r));
                true
            }
        }
    }

    /// True if `v` lies in the row span.
    pub fn contains(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce_leading(v).is_none();
        self.acc.clear();
        r
    }

    /// Back-substitution to reduced form, rows sorted by pivot column.
    pub fn reduce(&mut self) {
        self.rows.sort_by_key(|r| r.0);
        for (k, (p, _)) in self.rows.iter().enumerate() {
            self.pivot_of_col[*p] = Some(k);
        }
        for k in (0..self.rows.len()).rev() {
            let (p, row) = &self.rows[k];
            let needs = row.iter().any(|(j, _)| j != *p && self.pivot_of_col[j].is_some());
            if !needs {
                continue;
            }
            let row = row.clone();
            self.acc.clear();
            self.acc.axpy(&Scalar::one(), &row);
            for (j, _) in row.iter() {
                if j == *p {
                    continue;
                }
                if let Some(q) = self.pivot_of_col[j] {
                    let c = -self.acc.get(j).clone();
                    if !c.is_zero() {
                        let other = &self.rows[q].1;
                        self.acc.axpy(&c, other);
                    }
                }
            }
            self.rows[k].1 = self.acc.take();
        }
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|r| r.0).collect();
        p.sort_unstable();
        p
    }

    pub fn pivot_rows(&self) -> impl Iterator<Item = (usize, &SparseVec)> {
        self.rows.iter().map(|(p, r)| (*p, r))
    }

    pub fn into_rows(mut self) -> Vec<SparseVec> {
        self.rows.sort_by_key(|r| r.0);
        self.rows.into_iter().map(|r| r.1).collect()
    }

    /// Null space basis; requires `reduce` first.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut per: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.width];
        for (p, r) in &self.rows {
            for (j, v) in r.iter() {
                if j != *p {
                    per[j].push((*p, -v));
                }
            }
        }
        (0..self.width)
            .filter(|&j| self.pivot_of_col[j].is_none())
            .map(|j| {
                let mut e = std::mem::take(&mut per[j]);
                e.push((j, Scalar::one()));
                SparseVec::from_entries(e)
            })
            .collect()
    }
}
