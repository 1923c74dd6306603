//! Free graded-commutative algebras on finitely many homogeneous generators,
//! truncated at a maximal degree.
//!
//! Odd generators square to zero; even generators are polynomial. Monomials in
//! a fixed degree are ordered lexicographically by (odd index tuple, even
//! index multiset).

use std::collections::HashMap;

use crate::linalg::{Acc, Matrix, SparseVec};

/// Exponent vector, one slot per generator.
pub type Mono = Vec<u16>;

#[derive(Clone, Debug)]
pub struct FreeGradedAlgebra {
    gen_degrees: Vec<usize>,
    max_degree: usize,
    basis: Vec<Vec<Mono>>,
    index: HashMap<Mono, usize>,
}

fn degree_of(degs: &[usize], m: &Mono) -> usize {
    m.iter().zip(degs).map(|(&e, &d)| e as usize * d).sum()
}

impl FreeGradedAlgebra {
    pub fn new(gen_degrees: Vec<usize>, max_degree: usize) -> Self {
        assert!(gen_degrees.iter().all(|&d| d > 0), "generators must have positive degree");
        let r = gen_degrees.len();
        let mut basis: Vec<Vec<Mono>> = vec![Vec::new(); max_degree + 1];
        let mut cur: Mono = vec![0; r];
        fn rec(k: usize, deg: usize, cur: &mut Mono, degs: &[usize], max: usize, out: &mut Vec<Vec<Mono>>) {
            if k == degs.len() {
                out[deg].push(cur.clone());
                return;
            }
            let cap = if degs[k] % 2 == 1 { 1 } else { u16::MAX as usize };
            let mut e = 0usize;
            while e <= cap && deg + e * degs[k] <= max {
                cur[k] = e as u16;
                rec(k + 1, deg + e * degs[k], cur, degs, max, out);
                e += 1;
            }
            cur[k] = 0;
        }
        rec(0, 0, &mut cur, &gen_degrees, max_degree, &mut basis);
        let odd: Vec<bool> = gen_degrees.iter().map(|d| d % 2 == 1).collect();
        let key = |m: &Mono| -> (Vec<usize>, Vec<usize>) {
            let mut o = Vec::new();
            let mut e = Vec::new();
            for (g, &x) in m.iter().enumerate() {
                for _ in 0..x {
                    if odd[g] {
                        o.push(g)
                    } else {
                        e.push(g)
                    }
                }
            }
            (o, e)
        };
        for b in basis.iter_mut() {
            b.sort_by_cached_key(key);
        }
        let mut index = HashMap::new();
        for b in &basis {
            for (i, m) in b.iter().enumerate() {
                index.insert(m.clone(), i);
            }
        }
        FreeGradedAlgebra { gen_degrees, max_degree, basis, index }
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn num_generators(&self) -> usize {
        self.gen_degrees.len()
    }

    pub fn generator_degree(&self, g: usize) -> usize {
        self.gen_degrees[g]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.len()).collect()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.basis.get(n).map_or(0, |b| b.len())
    }

    pub fn basis(&self, n: usize) -> &[Mono] {
        &self.basis[n]
    }

    pub fn degree(&self, m: &Mono) -> usize {
        degree_of(&self.gen_degrees, m)
    }

    pub fn index_of(&self, m: &Mono) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// The generator `g` as a vector in its degree.
    pub fn generator(&self, g: usize) -> SparseVec {
        let mut m = vec![0; self.gen_degrees.len()];
        m[g] = 1;
        SparseVec::unit(self.index[&m])
    }

    /// Product of two monomials as `(sign, monomial)`, or `None` if it vanishes.
    pub fn mono_product(&self, a: &Mono, b: &Mono) -> Option<(i64, Mono)> {
        let mut inversions = 0usize;
        // Count pairs (x in a, y in b) of odd generators with y < x.
        let r = a.len();
        let mut a_odd_suffix = vec![0usize; r + 1];
        for g in (0..r).rev() {
            a_odd_suffix[g] = a_odd_suffix[g + 1] + if self.gen_degrees[g] % 2 == 1 { a[g] as usize } else { 0 };
        }
        let mut out = Vec::with_capacity(r);
        for g in 0..r {
            if self.gen_degrees[g] % 2 == 1 {
                if a[g] > 0 && b[g] > 0 {
                    return None;
                }
                if b[g] > 0 {
                    inversions += a_odd_suffix[g + 1];
                }
            }
            out.push(a[g] + b[g]);
        }
        Some((if inversions % 2 == 0 { 1 } else { -1 }, out))
    }

    /// Product of homogeneous vectors of degrees `p` and `q`; `None` past the truncation.
    pub fn product(&self, p: usize, x: &SparseVec, q: usize, y: &SparseVec) -> Option<SparseVec> {
        if p + q > self.max_degree {
            return None;
        }
        let mut acc = Acc::new(self.dim(p + q));
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                if let Some((s, m)) = self.mono_product(&self.basis[p][i], &self.basis[q][j]) {
                    let c = a * b;
                    let k = self.index[&m];
                    if s > 0 {
                        acc.add(k, &c);
                    } else {
                        acc.add(k, &-c);
                    }
                }
            }
        }
        Some(acc.take())
    }

    /// Splits off the first generator of `m` in canonical order: `m = g * rest` with sign +1.
    fn split_first(&self, m: &Mono) -> Option<(usize, Mono)> {
        let first = (0..m.len())
            .find(|&g| m[g] > 0 && self.gen_degrees[g] % 2 == 1)
            .or_else(|| (0..m.len()).find(|&g| m[g] > 0))?;
        let mut rest = m.clone();
        rest[first] -= 1;
        Some((first, rest))
    }

    /// Matrices of the (anti)derivation of degree `shift` determined by generator images.
    ///
    /// `images[g]` lives in degree `deg(g) + shift`. The extension obeys
    /// `D(xy) = D(x) y + (-1)^{shift |x|} x D(y)`. Entry `n` of the result maps
    /// degree `n` to degree `n + shift`; it is `None` where the target is out of range.
    pub fn derivation(&self, shift: i32, images: &[SparseVec]) -> Vec<Option<Matrix>> {
        assert_eq!(images.len(), self.gen_degrees.len());
        let mut values: Vec<Vec<SparseVec>> = Vec::with_capacity(self.max_degree + 1);
        let mut out = Vec::with_capacity(self.max_degree + 1);
        for n in 0..=self.max_degree {
            let t = n as i64 + shift as i64;
            if t < 0 || t > self.max_degree as i64 {
                values.push(Vec::new());
                out.push(if t < 0 { Some(Matrix::zeros(0, self.dim(n))) } else { None });
                continue;
            }
            let t = t as usize;
            let mut vals = Vec::with_capacity(self.dim(n));
            for m in &self.basis[n] {
                let v = match self.split_first(m) {
                    None => SparseVec::new(),
                    Some((g, rest)) => {
                        let dg = self.gen_degrees[g];
                        let rd = n - dg;
                        let rest_vec = SparseVec::unit(self.index[&rest]);
                        let tg = dg as i64 + shift as i64;
                        let first = if tg < 0 {
                            SparseVec::new()
                        } else {
                            self.product(tg as usize, &images[g], rd, &rest_vec).expect("within range")
                        };
                        let rt = rd as i64 + shift as i64;
                        if rt < 0 {
                            first
                        } else {
                            let drest = &values[rd][self.index[&rest]];
                            let second =
                                self.product(dg, &self.generator(g), rt as usize, drest).expect("within range");
                            if shift.rem_euclid(2) == 1 && dg % 2 == 1 {
                                first.sub(&second)
                            } else {
                                first.add(&second)
                            }
                        }
                    }
                };
                vals.push(v);
            }
            out.push(Some(Matrix::from_cols(self.dim(t), &vals)));
            values.push(vals);
        }
        out
    }
}
