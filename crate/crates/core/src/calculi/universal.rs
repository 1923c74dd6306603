//! The universal calculus `Omega_u(A)` in the model `A (x) Abar^{(x) n}`.
//!
//! Basis element `(i; j_1..j_n)` is `e_i d(e_{b_1})..d(e_{b_n})` where `b_k` is
//! the `j_k`-th basis index other than the unit pivot, at index
//! `i m^n + j_1 m^{n-1} + .. + j_n` with `m = dim A - 1`.

use std::collections::BTreeMap;

use crate::algebra::bimodule::{kron, Bimodule};
use crate::algebra::finite::{require_valid, FiniteAlgebra};
use crate::complex::{Bilinear, CochainComplex, GradedDiffAlgebra};
use crate::error::{NcError, Result};
use crate::hochschild::{check_size, hochschild_coboundary, normalized_subspace, tuple_digits, tuple_index};
use crate::linalg::{Matrix, Scalar, SparseVec, Subspace};

#[derive(Clone, Debug)]
pub struct UniversalCalculus {
    a: FiniteAlgebra,
    max_degree: usize,
    unit: SparseVec,
    bar: Vec<usize>,
    /// `x -> x - (x_p / u_p) 1l` in the `bar` coordinates.
    pi: Matrix,
    /// `right[n][k]`: right multiplication by `e_k` on degree `n`, for `n <= max_degree + 1`.
    right: Vec<Vec<Vec<SparseVec>>>,
    d: Vec<Matrix>,
    gda: GradedDiffAlgebra,
}

fn sign(odd: bool) -> Scalar {
    if odd {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

pub fn omega_u(a: &FiniteAlgebra, max_degree: usize) -> Result<UniversalCalculus> {
    UniversalCalculus::new(a, max_degree)
}

impl UniversalCalculus {
    pub fn new(a: &FiniteAlgebra, max_degree: usize) -> Result<Self> {
        if max_degree == 0 {
            return Err(NcError::input("the universal calculus needs max degree >= 1"));
        }
        require_valid(a)?;
        let da = a.dim();
        let m = da - 1;
        check_size("universal calculus", max_degree, da.saturating_mul(m.saturating_pow(max_degree as u32 + 1)))?;
        let unit = a.unit_required()?.clone();
        let p = a.unit_pivot()?;
        let bar: Vec<usize> = (0..da).filter(|&i| i != p).collect();
        let up = unit.get(p).inv();
        let mut pos = vec![usize::MAX; da];
        for (k, &j) in bar.iter().enumerate() {
            pos[j] = k;
        }
        let mut t = Vec::new();
        for i in 0..da {
            if i != p {
                t.push((pos[i], i, Scalar::one()));
            }
        }
        for (j, c) in unit.iter() {
            if j != p {
                t.push((pos[j], p, -(&up * c)));
            }
        }
        let pi = Matrix::from_triplets(m, da, t);

        let mut calc = UniversalCalculus {
            a: a.clone(),
            max_degree,
            unit,
            bar,
            pi,
            right: Vec::new(),
            d: Vec::new(),
            gda: GradedDiffAlgebra::new(vec![1], vec![], BTreeMap::new(), SparseVec::unit(0))?,
        };
        calc.build_right();
        calc.d = (0..=max_degree).map(|n| calc.build_d(n)).collect();
        calc.gda = calc.build_gda()?;
        Ok(calc)
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.a
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn gda(&self) -> &GradedDiffAlgebra {
        &self.gda
    }

    fn m(&self) -> usize {
        self.bar.len()
    }

    fn mpow(&self, n: usize) -> usize {
        self.m().pow(n as u32)
    }

    /// `dim A (dim A - 1)^n`; valid through `max_degree + 1`.
    pub fn dim(&self, n: usize) -> usize {
        self.a.dim() * self.mpow(n)
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.max_degree).map(|n| self.dim(n)).collect()
    }

    /// Basis indices of `A` spanning the complement of `C 1l`.
    pub fn complement(&self) -> &[usize] {
        &self.bar
    }

    /// The projection `A -> Abar` as a `(dim A - 1) x dim A` matrix.
    pub fn bar_projection(&self) -> &Matrix {
        &self.pi
    }

    pub fn index(&self, i0: usize, js: &[usize]) -> usize {
        i0 * self.mpow(js.len()) + tuple_index(js, self.m())
    }

    /// Appends `d(w)` slots given in `Abar^{(x) k}` coordinates: `v -> v d(w)`.
    fn append(&self, v: &SparseVec, w: &SparseVec, k: usize) -> SparseVec {
        kron(v, w, self.mpow(k))
    }

    fn build_right(&mut self) {
        let da = self.a.dim();
        let m = self.m();
        let r0: Vec<Vec<SparseVec>> = (0..da)
            .map(|k| (0..da).map(|i| self.a.basis_product(i, k).clone()).collect())
            .collect();
        self.right = vec![r0];
        for n in 1..=self.max_degree + 1 {
            let prev = &self.right[n - 1];
            let mut cur = Vec::with_capacity(da);
            for k in 0..da {
                let pk = self.pi.col(k);
                let mut cols = Vec::with_capacity(self.dim(n));
                for pref in 0..self.dim(n - 1) {
                    for j in 0..m {
                        // (w d b_j) e_k = w d(b_j e_k) - (w b_j) d e_k
                        let b = self.bar[j];
                        let first = self.append(&SparseVec::unit(pref), &self.pi.apply(self.a.basis_product(b, k)), 1);
                        let second = self.append(&prev[b][pref], &pk, 1);
                        cols.push(first.sub(&second));
                    }
                }
                cur.push(cols);
            }
            self.right.push(cur);
        }
    }

    /// `d_u` from degree `n` to `n + 1`: `(i0; J) -> 1l d(e_i0) J`.
    fn build_d(&self, n: usize) -> Matrix {
        let (m, block) = (self.m(), self.mpow(n));
        let mut t = Vec::new();
        for i0 in 0..self.a.dim() {
            let p = self.pi.col(i0);
            for jrest in 0..block {
                let col = i0 * block + jrest;
                for (i, u) in self.unit.iter() {
                    for (j, c) in p.iter() {
                        t.push((i * m * block + j * block + jrest, col, u * c));
                    }
                }
            }
        }
        Matrix::from_triplets(self.dim(n + 1), self.dim(n), t)
    }

    /// `d_u` out of degree `n <= max_degree`.
    pub fn d(&self, n: usize) -> &Matrix {
        &self.d[n]
    }

    /// `v a` for `v` in degree `n <= max_degree + 1` and `a` in `A`.
    pub fn right_mul(&self, n: usize, v: &SparseVec, a: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (k, c) in a.iter() {
            for (i, x) in v.iter() {
                out = out.axpy(&(c * x), &self.right[n][k][i]);
            }
        }
        out
    }

    /// `a v` for `a` in `A`.
    pub fn left_mul(&self, n: usize, a: &SparseVec, v: &SparseVec) -> SparseVec {
        let block = self.mpow(n);
        let mut out = SparseVec::new();
        for (idx, c) in v.iter() {
            let (i0, rest) = (idx / block, idx % block);
            let img = self.a.product(a, &SparseVec::unit(i0));
            out = out.add(&self.append(&img, &SparseVec::unit(rest), n).scale(c));
        }
        out
    }

    /// Product of `x` in degree `p` and `y` in degree `q`, `p + q <= max_degree + 1`.
    pub fn mul(&self, p: usize, x: &SparseVec, q: usize, y: &SparseVec) -> SparseVec {
        let block = self.mpow(q);
        let mut out = SparseVec::new();
        for (idx, c) in y.iter() {
            let (k0, rest) = (idx / block, idx % block);
            let xk = self.right_mul(p, x, &SparseVec::unit(k0));
            out = out.axpy(c, &self.append(&xk, &SparseVec::unit(rest), q));
        }
        out
    }

    /// `d(x_1)..d(x_n)` for elements of `A`.
    pub fn d_product(&self, xs: &[SparseVec]) -> SparseVec {
        let mut v = self.unit.clone();
        for x in xs {
            v = self.append(&v, &self.pi.apply(x), 1);
        }
        v
    }

    /// `Omega^n_u` as an `(A, A)`-bimodule, `n <= max_degree + 1`.
    pub fn bimodule(&self, n: usize) -> Bimodule {
        let da = self.a.dim();
        let id = Matrix::identity(self.mpow(n));
        let left = (0..da).map(|x| self.a.left_mult(&SparseVec::unit(x)).kron(&id)).collect();
        let right = (0..da).map(|k| Matrix::from_cols(self.dim(n), &self.right[n][k])).collect();
        Bimodule::new(self.dim(n), left, right).expect("shapes")
    }

    fn star_matrix(&self, n: usize) -> Option<Matrix> {
        let s = self.a.star_matrix()?;
        let da = self.a.dim();
        let m = self.m();
        let sbar: Vec<SparseVec> = self.bar.iter().map(|&b| self.pi.apply(&s.col(b))).collect();
        let sg = sign((n * n.saturating_sub(1) / 2) % 2 == 1);
        let mut cols = Vec::with_capacity(self.dim(n));
        for i0 in 0..da {
            for jt in 0..self.mpow(n) {
                // (e_i0 d b_1 .. d b_n)* = (-1)^{n(n-1)/2} d(b_n*) .. d(b_1*) e_i0*
                let js = tuple_digits(jt, m, n);
                let mut v = self.unit.clone();
                for &j in js.iter().rev() {
                    v = self.append(&v, &sbar[j], 1);
                }
                cols.push(self.right_mul(n, &v, &s.col(i0)).scale(&sg));
            }
        }
        Some(Matrix::from_cols(self.dim(n), &cols))
    }

    fn build_gda(&self) -> Result<GradedDiffAlgebra> {
        let n = self.max_degree;
        let mut products = BTreeMap::new();
        for p in 0..=n {
            for q in 0..=n - p {
                let table = (0..self.dim(p))
                    .flat_map(|i| (0..self.dim(q)).map(move |j| (i, j)))
                    .map(|(i, j)| self.mul(p, &SparseVec::unit(i), q, &SparseVec::unit(j)))
                    .collect();
                products.insert((p, q), Bilinear::from_table(self.dim(p), self.dim(q), self.dim(p + q), table));
            }
        }
        let mut g = GradedDiffAlgebra::new(self.dims(), self.d[..n].to_vec(), products, self.unit.clone())?
            .with_top(self.d[n].clone());
        if self.a.star_matrix().is_some() {
            g = g.with_star((0..=n).map(|k| self.star_matrix(k).unwrap()).collect())?;
        }
        Ok(g)
    }

    /// Complex `Omega_u` through degree `max_degree + 1`.
    pub fn extended_complex(&self) -> CochainComplex {
        let n = self.max_degree;
        let dims = (0..=n + 1).map(|k| self.dim(k)).collect();
        CochainComplex::new(dims, self.d.clone()).expect("shapes")
    }

    /// `i_X` on degree `n`: `i_X(a_0 da_1..da_n) = sum_k (-1)^{k-1} a_0 da_1..X(a_k)..da_n`.
    pub fn contraction(&self, x: &Matrix, n: usize) -> Matrix {
        if n == 0 {
            return Matrix::zeros(0, self.dim(0));
        }
        let m = self.m();
        let mut cols = Vec::with_capacity(self.dim(n));
        for i0 in 0..self.a.dim() {
            for jt in 0..self.mpow(n) {
                let js = tuple_digits(jt, m, n);
                let mut acc = SparseVec::new();
                for k in 0..n {
                    let head = SparseVec::unit(self.index(i0, &js[..k]));
                    let xa = x.col(self.bar[js[k]]);
                    let moved = self.right_mul(k, &head, &xa);
                    let tail = tuple_index(&js[k + 1..], m);
                    let term = self.append(&moved, &SparseVec::unit(tail), n - 1 - k);
                    acc = acc.axpy(&sign(k % 2 == 1), &term);
                }
                cols.push(acc);
            }
        }
        Matrix::from_cols(self.dim(n - 1), &cols)
    }

    /// Embedding `Omega^n_u -> (x)^{n+1} A`, `a_0 da_1..da_n` with `da = 1l (x) a - a (x) 1l`.
    pub fn embedding(&self, n: usize) -> Matrix {
        let da = self.a.dim();
        let mut cols: Vec<SparseVec> = (0..da).map(SparseVec::unit).collect();
        for _ in 1..=n {
            let mut next = Vec::with_capacity(cols.len() * self.m());
            for c in &cols {
                for &b in &self.bar {
                    // t (x) b - (t b) (x) 1l, with t b multiplying the last factor
                    let mut acc = SparseVec::new();
                    for (idx, v) in c.iter() {
                        let (head, last) = (idx / da, idx % da);
                        acc = acc.add(&SparseVec::unit(idx * da + b).scale(v));
                        for (l, w) in self.a.basis_product(last, b).iter() {
                            let shifted = kron(&SparseVec::unit(head * da + l), &self.unit, da);
                            acc = acc.sub(&shifted.scale(&(v * w)));
                        }
                    }
                    next.push(acc);
                }
            }
            cols = next;
        }
        Matrix::from_cols(da.pow(n as u32 + 1), &cols)
    }

    /// Left inverse of the embedding: `x_0 (x) .. (x) x_n -> x_0 (x) pi(x_1) (x) .. (x) pi(x_n)`.
    pub fn ambient_projection(&self, n: usize) -> Matrix {
        let mut p = Matrix::identity(self.a.dim());
        for _ in 0..n {
            p = p.kron(&self.pi);
        }
        p
    }
}

/// `d(x_0..x_n) = sum_{k=0}^{n+1} (-1)^k x_0..x_{k-1} 1l x_k..x_n` on `(x)^{n+1} A`.
pub fn ambient_d(a: &FiniteAlgebra, n: usize) -> Result<Matrix> {
    let u = a.unit_required()?;
    let da = a.dim();
    let src = da.pow(n as u32 + 1);
    let mut t = Vec::new();
    for idx in 0..src {
        let digits = tuple_digits(idx, da, n + 1);
        for k in 0..=n + 1 {
            for (i, c) in u.iter() {
                let mut full = digits.clone();
                full.insert(k, i);
                t.push((tuple_index(&full, da), idx, &sign(k % 2 == 1) * c));
            }
        }
    }
    Ok(Matrix::from_triplets(src * da, src, t))
}

/// `k(x_0 (x) .. (x) x_n) = w(x_0) x_1 (x) .. (x) x_n`; on degree 0 this is `w` itself.
pub fn ambient_homotopy(da: usize, form: &SparseVec, n: usize) -> Matrix {
    let block = da.pow(n as u32);
    let t = (0..block).flat_map(|r| form.iter().map(move |(i, c)| (r, i * block + r, c.clone()))).collect();
    Matrix::from_triplets(block, block * da, t)
}

/// The linear form `x -> x_p / u_p`, which takes the value 1 on the unit.
pub fn unit_form(a: &FiniteAlgebra) -> Result<SparseVec> {
    let p = a.unit_pivot()?;
    Ok(SparseVec::from_entries(vec![(p, a.unit_required()?.get(p).inv())]))
}

impl UniversalCalculus {
    /// The homotopy `k` restricted to `Omega^n_u -> Omega^{n-1}_u`; errors if
    /// `k` leaves the subspace.
    pub fn homotopy(&self, n: usize) -> Result<Matrix> {
        let form = unit_form(&self.a)?;
        let k_amb = ambient_homotopy(self.a.dim(), &form, n);
        let image = k_amb.mul(&self.embedding(n));
        if n == 0 {
            return Ok(image);
        }
        let model = self.ambient_projection(n - 1).mul(&image);
        if self.embedding(n - 1).mul(&model) != image {
            return Err(NcError::property("homotopy", format!("k does not preserve Omega_u in degree {n}")));
        }
        Ok(model)
    }

    /// `kd + dk = id` on `Omega^n_u` for `n` in `1..=upto`, and `kd + w = id` on `A`.
    /// Needs `upto <= max_degree`.
    pub fn verify_homotopy(&self, upto: usize) -> Result<()> {
        if upto > self.max_degree {
            return Err(NcError::input(format!("degree {upto} exceeds the truncation {}", self.max_degree)));
        }
        let ks = (0..=upto + 1).map(|n| self.homotopy(n)).collect::<Result<Vec<_>>>()?;
        let c = self.extended_complex();
        crate::complex::verify_homotopy(&c, &ks, 1..=upto)?;
        let form = Matrix::from_rows(self.a.dim(), vec![unit_form(&self.a)?]);
        let unit_col = Matrix::from_cols(self.a.dim(), &[self.unit.clone()]);
        if ks[1].mul(&self.d[0]).add(&unit_col.mul(&form)) != Matrix::identity(self.a.dim()) {
            return Err(NcError::property("homotopy", "kd + w != id on degree 0"));
        }
        Ok(())
    }
}

/// `kd + dk = id` on `(x)^{n+1} A` for `n` in `0..=upto`, with `d` in degree -1 the unit map.
pub fn verify_ambient_homotopy(a: &FiniteAlgebra, upto: usize) -> Result<()> {
    let da = a.dim();
    check_size("ambient homotopy", upto + 1, da.saturating_pow(upto as u32 + 2))?;
    let form = unit_form(a)?;
    let unit_col = Matrix::from_cols(da, &[a.unit_required()?.clone()]);
    for n in 0..=upto {
        let mut lhs = ambient_homotopy(da, &form, n + 1).mul(&ambient_d(a, n)?);
        lhs = if n == 0 {
            lhs.add(&unit_col.mul(&ambient_homotopy(da, &form, 0)))
        } else {
            lhs.add(&ambient_d(a, n - 1)?.mul(&ambient_homotopy(da, &form, n)))
        };
        if lhs != Matrix::identity(da.pow(n as u32 + 1)) {
            return Err(NcError::property("homotopy", format!("kd + dk != id on the tensor power of degree {n}")));
        }
    }
    Ok(())
}

/// `Omega^1_u(A)` as a bimodule with its derivation `d_u: A -> Omega^1_u`.
#[derive(Clone, Debug)]
pub struct FirstOrderCalculus {
    pub module: Bimodule,
    pub d: Matrix,
}

pub fn omega1_u(a: &FiniteAlgebra) -> Result<FirstOrderCalculus> {
    let u = UniversalCalculus::new(a, 1)?;
    Ok(FirstOrderCalculus { module: u.bimodule(1), d: u.d[0].clone() })
}

/// `d(xy) = d(x) y + x d(y)` on basis pairs, for `d: A -> M` given as a matrix.
pub fn check_leibniz(a: &FiniteAlgebra, m: &Bimodule, d: &Matrix) -> Result<()> {
    let da = a.dim();
    if d.ncols() != da || d.nrows() != m.dim() {
        return Err(NcError::input("derivation has the wrong shape"));
    }
    for i in 0..da {
        for j in 0..da {
            let lhs = d.apply(a.basis_product(i, j));
            let rhs = m.right_actions()[j].apply(&d.col(i)).add(&m.left_actions()[i].apply(&d.col(j)));
            if lhs != rhs {
                return Err(NcError::property("Leibniz rule", format!("d(e_{i} e_{j}) != d(e_{i}) e_{j} + e_{i} d(e_{j})")));
            }
        }
    }
    Ok(())
}

/// `f` commutes with both actions on basis elements.
pub fn is_bimodule_map(f: &Matrix, src: &Bimodule, dst: &Bimodule) -> bool {
    let l = src.left_actions().iter().zip(dst.left_actions()).all(|(s, t)| f.mul(s) == t.mul(f));
    let r = src.right_actions().iter().zip(dst.right_actions()).all(|(s, t)| f.mul(s) == t.mul(f));
    l && r
}

/// The unique bimodule map `i_d: Omega^1_u -> M` with `d = i_d d_u`.
pub fn universal_factor(a: &FiniteAlgebra, target: &Bimodule, d: &Matrix) -> Result<Matrix> {
    check_leibniz(a, target, d)?;
    let u = UniversalCalculus::new(a, 1)?;
    let m = u.m();
    let mut cols = Vec::with_capacity(u.dim(1));
    for i0 in 0..a.dim() {
        for j in 0..m {
            cols.push(target.left_actions()[i0].apply(&d.col(u.bar[j])));
        }
    }
    let id = Matrix::from_cols(target.dim(), &cols);
    if id.mul(&u.d[0]) != *d {
        return Err(NcError::property("factorization", "d != i_d d_u"));
    }
    // x d(y) over basis x, y span Omega^1_u, so i_d is determined there
    let gens: Vec<SparseVec> = (0..a.dim())
        .flat_map(|x| (0..a.dim()).map(move |y| (x, y)))
        .map(|(x, y)| u.left_mul(1, &SparseVec::unit(x), &u.d[0].col(y)))
        .collect();
    if Subspace::span(u.dim(1), &gens).dim() != u.dim(1) {
        return Err(NcError::property("factorization", "x d(y) does not span Omega^1_u"));
    }
    if !is_bimodule_map(&id, &u.bimodule(1), target) {
        return Err(NcError::property("factorization", "i_d is not a bimodule map"));
    }
    Ok(id)
}

/// `Omega^1_u(phi): Omega^1_u(A) -> Omega^1_u(B)` for a unital homomorphism `phi`
/// given as a `dim B x dim A` matrix; checks `d phi = Omega^1_u(phi) d`.
pub fn induced_omega1_u(a: &FiniteAlgebra, b: &FiniteAlgebra, phi: &Matrix) -> Result<Matrix> {
    if phi.nrows() != b.dim() || phi.ncols() != a.dim() {
        return Err(NcError::input("homomorphism has the wrong shape"));
    }
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if phi.apply(a.basis_product(i, j)) != b.product(&phi.col(i), &phi.col(j)) {
                return Err(NcError::property("homomorphism", format!("phi(e_{i} e_{j}) != phi(e_{i}) phi(e_{j})")));
            }
        }
    }
    if phi.apply(a.unit_required()?) != *b.unit_required()? {
        return Err(NcError::property("homomorphism", "phi is not unital"));
    }
    let (ua, ub) = (UniversalCalculus::new(a, 1)?, UniversalCalculus::new(b, 1)?);
    let mut cols = Vec::with_capacity(ua.dim(1));
    for i0 in 0..a.dim() {
        for &j in &ua.bar {
            let dj = ub.d[0].apply(&phi.col(j));
            cols.push(ub.left_mul(1, &phi.col(i0), &dj));
        }
    }
    let f = Matrix::from_cols(ub.dim(1), &cols);
    if ub.d[0].mul(phi) != f.mul(&ua.d[0]) {
        return Err(NcError::property("functoriality", "d phi != Omega^1(phi) d"));
    }
    Ok(f)
}

/// Solves for `m0` with `i_d(w) = m0` on `1l (x) 1l`, i.e. an extension of `i_d`
/// to `A (x) A`; exists exactly when `d` is inner.
pub fn extension_to_tensor(a: &FiniteAlgebra, target: &Bimodule, id: &Matrix) -> Result<Option<SparseVec>> {
    let u = UniversalCalculus::new(a, 1)?;
    let dm = target.dim();
    // (a0; b): a0 m0 b - a0 b m0 = i_d(a0 d b)
    let mut blocks = Vec::new();
    let mut rhs = Vec::new();
    for i0 in 0..a.dim() {
        for (j, &b) in u.bar.iter().enumerate() {
            let l = &target.left_actions()[i0];
            let lhs = l.mul(&target.right_actions()[b]).sub(&target.left_act(a.basis_product(i0, b)));
            blocks.push(lhs);
            rhs.push(id.col(i0 * u.m() + j));
        }
    }
    let refs: Vec<&Matrix> = blocks.iter().collect();
    let sys = Matrix::vstack(&refs);
    let mut b = Vec::new();
    for (k, r) in rhs.iter().enumerate() {
        b.extend(r.iter().map(|(i, c)| (k * dm + i, c.clone())));
    }
    Ok(sys.solve(&SparseVec::from_entries(b)))
}

/// Result of factoring a normalized cocycle through `Omega^n_u`.
#[derive(Clone, Debug)]
pub struct CocycleFactorization {
    pub map: Matrix,
    /// Whether the map extends to `A (x) Omega^{n-1}_u`.
    pub coboundary: bool,
}

/// Value of `c` in `C^n(A, M)` on the basis tuple `xs`.
fn cochain_value(c: &SparseVec, xs: &[usize], da: usize, dm: usize) -> SparseVec {
    let base = tuple_index(xs, da) * dm;
    SparseVec::from_entries(c.iter().filter(|(k, _)| k / dm == base / dm).map(|(k, v)| (k - base, v.clone())).collect())
}

pub fn factor_cocycle(a: &FiniteAlgebra, m: &Bimodule, c: &SparseVec, n: usize) -> Result<CocycleFactorization> {
    if n == 0 {
        return Err(NcError::input("cocycle degree must be positive"));
    }
    let (da, dm) = (a.dim(), m.dim());
    if !normalized_subspace(a, dm, n)?.contains(c) {
        return Err(NcError::input("cochain is not normalized"));
    }
    if !hochschild_coboundary(a, m, n)?.apply(c).is_zero() {
        return Err(NcError::input("cochain is not a cocycle"));
    }
    let u = UniversalCalculus::new(a, n)?;
    let mm = u.m();
    let mut cols = Vec::with_capacity(u.dim(n));
    for i0 in 0..da {
        for jt in 0..u.mpow(n) {
            let xs: Vec<usize> = tuple_digits(jt, mm, n).iter().map(|&j| u.bar[j]).collect();
            cols.push(m.left_actions()[i0].apply(&cochain_value(c, &xs, da, dm)));
        }
    }
    let ic = Matrix::from_cols(dm, &cols);
    for t in 0..da.pow(n as u32) {
        let xs = tuple_digits(t, da, n);
        let dx = u.d_product(&xs.iter().map(|&x| SparseVec::unit(x)).collect::<Vec<_>>());
        if ic.apply(&dx) != cochain_value(c, &xs, da, dm) {
            return Err(NcError::property("factorization", format!("c != i_c(d x_1 .. d x_n) at {xs:?}")));
        }
    }
    if !is_bimodule_map(&ic, &u.bimodule(n), m) {
        return Err(NcError::property("factorization", "i_c is not a bimodule map"));
    }
    let coboundary = extends_to_tensor(&u, m, &ic, n);
    Ok(CocycleFactorization { map: ic, coboundary })
}

/// Whether some right-linear `phi: Omega^{n-1}_u -> M` gives
/// `i_c(a_0 da_1 w) = a_0 phi(a_1 w) - a_0 a_1 phi(w)` with `w = da_2..da_n`.
fn extends_to_tensor(u: &UniversalCalculus, m: &Bimodule, ic: &Matrix, n: usize) -> bool {
    let dm = m.dim();
    let src = u.dim(n - 1);
    let var = |r: usize, s: usize| r * src + s;
    let mut rows: Vec<SparseVec> = Vec::new();
    let mut rhs: Vec<(usize, Scalar)> = Vec::new();
    // phi(w x) = phi(w) x
    for x in 0..u.a.dim() {
        let rm = &m.right_actions()[x];
        for s in 0..src {
            let wx = &u.right[n - 1][x][s];
            for r in 0..dm {
                let mut e: Vec<(usize, Scalar)> = wx.iter().map(|(t, c)| (var(r, t), c.clone())).collect();
                for (q, c) in rm.row(r).iter() {
                    e.push((var(q, s), -c));
                }
                rows.push(SparseVec::from_entries(e));
            }
        }
    }
    // a_0 = 1l suffices since both sides are left linear
    let block = u.mpow(n - 1);
    for (j1, &b) in u.bar.iter().enumerate() {
        for rest in 0..block {
            let lhs_idx = u.unit.iter().map(|(i, c)| (i * u.mpow(n) + j1 * block + rest, c.clone()));
            let mut target = SparseVec::new();
            for (k, c) in lhs_idx {
                target = target.axpy(&c, &ic.col(k));
            }
            let aw = b * block + rest;
            let w: Vec<(usize, Scalar)> = u.unit.iter().map(|(i, c)| (i * block + rest, c.clone())).collect();
            let lb = m.left_act(&SparseVec::unit(b));
            for r in 0..dm {
                let mut e = vec![(var(r, aw), Scalar::one())];
                for (t, c) in lb.row(r).iter() {
                    for (s, wc) in &w {
                        e.push((var(t, *s), -(c * wc)));
                    }
                }
                let k = rows.len();
                rows.push(SparseVec::from_entries(e));
                let v = target.get(r);
                if !v.is_zero() {
                    rhs.push((k, v));
                }
            }
        }
    }
    let sys = Matrix::from_rows(dm * src, rows);
    sys.solve(&SparseVec::from_entries(rhs)).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::finite::{complex_numbers, matrix_algebra, truncated_poly};
    use crate::complex::check_gda;

    #[test]
    fn dims_and_gda_laws() {
        let u = omega_u(&matrix_algebra(2).unwrap(), 3).unwrap();
        assert_eq!(u.dims(), vec![4, 12, 36, 108]);
        let r = check_gda(u.gda());
        assert!(r.ok(), "{:?}", r.failures);
        assert_eq!(r.star, Some(true));
    }

    #[test]
    fn omega1_of_c_is_zero() {
        let f = omega1_u(&complex_numbers()).unwrap();
        assert_eq!(f.module.dim(), 0);
    }

    #[test]
    fn embedding_lands_in_kernel_of_multiplication() {
        let a = truncated_poly(2).unwrap();
        let u = omega_u(&a, 2).unwrap();
        let e1 = u.embedding(1);
        assert!(a.mult_matrix().mul(&e1).is_zero());
        // d_u x = 1 (x) x - x (x) 1
        let dx = e1.apply(&u.d(0).col(1));
        assert_eq!(dx, SparseVec::from_entries(vec![(1, Scalar::one()), (2, -Scalar::one())]));
    }

    #[test]
    fn square_of_dx_is_nonzero() {
        let a = truncated_poly(2).unwrap();
        let u = omega_u(&a, 2).unwrap();
        let dx = u.d(0).col(1);
        assert!(!u.mul(1, &dx, 1, &dx).is_zero());
    }

    #[test]
    fn model_agrees_with_tensor_powers() {
        for a in [matrix_algebra(2).unwrap(), truncated_poly(3).unwrap()] {
            let u = omega_u(&a, 2).unwrap();
            for n in 0..2 {
                let (e0, e1) = (u.embedding(n), u.embedding(n + 1));
                assert_eq!(ambient_d(&a, n).unwrap().mul(&e0), e1.mul(u.d(n)));
                assert_eq!(u.ambient_projection(n).mul(&e0), Matrix::identity(u.dim(n)));
            }
            // products concatenate with multiplication at the junction
            let (e1, e2) = (u.embedding(1), u.embedding(2));
            let da = a.dim();
            for i in 0..u.dim(1) {
                for j in 0..u.dim(1) {
                    let mut amb = SparseVec::new();
                    for (x, c) in e1.col(i).iter() {
                        for (y, d) in e1.col(j).iter() {
                            let mid = a.basis_product(x % da, y / da);
                            for (k, e) in mid.iter() {
                                let idx = ((x / da) * da + k) * da + y % da;
                                amb = amb.axpy(&(c * d), &SparseVec::unit(idx).scale(e));
                            }
                        }
                    }
                    let prod = u.mul(1, &SparseVec::unit(i), 1, &SparseVec::unit(j));
                    assert_eq!(e2.apply(&prod), amb);
                }
            }
        }
    }

    #[test]
    fn star_matches_reversal_formula() {
        let a = matrix_algebra(2).unwrap();
        let u = omega_u(&a, 2).unwrap();
        let da = a.dim();
        let s = a.star_matrix().unwrap();
        for n in 1..=2 {
            let e = u.embedding(n);
            let st = u.gda().star_matrices().unwrap();
            let sg = if (n * (n + 1) / 2) % 2 == 1 { -Scalar::one() } else { Scalar::one() };
            for col in 0..u.dim(n) {
                let mut amb = SparseVec::new();
                for (idx, c) in e.col(col).iter() {
                    let digits = tuple_digits(idx, da, n + 1);
                    let mut v = SparseVec::unit(0);
                    for &x in digits.iter().rev() {
                        v = kron(&v, &s.col(x), da);
                    }
                    amb = amb.axpy(&(c.conj() * sg.clone()), &v);
                }
                assert_eq!(e.apply(&st[n].col(col)), amb, "degree {n}");
            }
        }
    }

    #[test]
    fn homotopy_on_tensor_powers_and_omega_u() {
        for a in [matrix_algebra(2).unwrap(), truncated_poly(2).unwrap()] {
            verify_ambient_homotopy(&a, 4).unwrap();
            omega_u(&a, 4).unwrap().verify_homotopy(4).unwrap();
        }
    }

    #[test]
    fn cohomology_trivial() {
        let u = omega_u(&truncated_poly(2).unwrap(), 3).unwrap();
        assert_eq!(u.gda().as_complex().cohomology().unwrap().dims, vec![1, 0, 0, 0]);
    }

    #[test]
    fn d_u_factors_as_identity() {
        let a = matrix_algebra(2).unwrap();
        let f = omega1_u(&a).unwrap();
        assert_eq!(universal_factor(&a, &f.module, &f.d).unwrap(), Matrix::identity(12));
    }

    #[test]
    fn non_derivation_rejected() {
        let a = truncated_poly(2).unwrap();
        let reg = Bimodule::regular(&a);
        assert!(universal_factor(&a, &reg, &Matrix::identity(2)).is_err());
    }

    fn cup_square(a: &FiniteAlgebra) -> (Bimodule, SparseVec) {
        let u = omega_u(a, 2).unwrap();
        let (da, dm) = (a.dim(), u.dim(2));
        let mut e = Vec::new();
        for t in 0..da * da {
            let xs = tuple_digits(t, da, 2);
            let v = u.d_product(&[SparseVec::unit(xs[0]), SparseVec::unit(xs[1])]);
            e.extend(v.iter().map(|(k, c)| (t * dm + k, c.clone())));
        }
        (u.bimodule(2), SparseVec::from_entries(e))
    }

    #[test]
    fn cup_square_factors_as_identity() {
        for (a, separable) in [(matrix_algebra(2).unwrap(), true), (truncated_poly(2).unwrap(), false)] {
            let (m, c) = cup_square(&a);
            let f = factor_cocycle(&a, &m, &c, 2).unwrap();
            assert_eq!(f.map, Matrix::identity(m.dim()));
            // oracle: c lies in the image of d_H on all 1-cochains
            let img = Subspace::image_of(&hochschild_coboundary(&a, &m, 1).unwrap());
            assert_eq!(img.contains(&c), f.coboundary);
            assert_eq!(f.coboundary, separable);
        }
    }

    #[test]
    fn coboundary_flag_on_coboundaries() {
        let a = truncated_poly(3).unwrap();
        let m = Bimodule::regular(&a);
        let norm = normalized_subspace(&a, m.dim(), 1).unwrap();
        let b = norm.basis().iter().fold(SparseVec::new(), |acc, v| acc.add(v));
        let c = hochschild_coboundary(&a, &m, 1).unwrap().apply(&b);
        assert!(factor_cocycle(&a, &m, &c, 2).unwrap().coboundary);
    }

    #[test]
    fn derivation_cocycle_matches_factor() {
        let a = matrix_algebra(2).unwrap();
        let m = Bimodule::regular(&a);
        let x = crate::algebra::finite::ad(&a, &SparseVec::unit(1));
        let c = crate::algebra::finite::vec_matrix(&x.transpose());
        let f = factor_cocycle(&a, &m, &c, 1).unwrap();
        assert_eq!(f.map, universal_factor(&a, &m, &x).unwrap());
        assert!(f.coboundary);
        assert!(extension_to_tensor(&a, &m, &f.map).unwrap().is_some());
    }

    #[test]
    fn induced_map_on_inclusion() {
        let a = truncated_poly(2).unwrap();
        let b = crate::algebra::finite::tensor_product(&a, &a);
        // x -> x (x) 1
        let phi = Matrix::from_cols(4, &[SparseVec::unit(0), SparseVec::unit(2)]);
        let f = induced_omega1_u(&a, &b, &phi).unwrap();
        assert_eq!(f.rank(), 2);
    }
}
