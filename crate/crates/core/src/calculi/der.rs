//! The derivation-based calculi: alternating `A`-valued cochains on `Der(A)`,
//! the `Z(A)`-multilinear ones, and the subalgebra generated by `A`.
//!
//! Cochain coordinates follow the Chevalley-Eilenberg convention
//! `subset_index * dim A + a`.

use std::collections::BTreeMap;

use super::universal::UniversalCalculus;
use crate::algebra::finite::{center, derivations, vec_matrix, FiniteAlgebra};
use crate::algebra::lie::{ce_coboundary, ce_contraction, matrix_lie, sort_sign, LieAlgebraData, Subsets};
use crate::complex::{sub_gda, Bilinear, GradedDiffAlgebra, OperationData};
use crate::error::{NcError, Result};
use crate::linalg::{restrict, Matrix, Scalar, SparseVec, Subspace};

/// Basis matrices of `Der(A)` and the Lie algebra they span.
pub fn derivation_lie(a: &FiniteAlgebra) -> Result<(Vec<Matrix>, LieAlgebraData)> {
    let der = derivations(a).der_matrices(a.dim());
    let lie = matrix_lie(&der)?;
    Ok((der, lie))
}

#[derive(Clone, Debug)]
pub struct DerCalculus {
    a: FiniteAlgebra,
    der: Vec<Matrix>,
    lie: LieAlgebraData,
    full: GradedDiffAlgebra,
    underline: Vec<Subspace>,
    generated: Vec<Subspace>,
    underline_gda: GradedDiffAlgebra,
    gda: GradedDiffAlgebra,
}

pub fn der_calculus(a: &FiniteAlgebra, max_degree: usize) -> Result<DerCalculus> {
    DerCalculus::new(a, max_degree)
}

pub(crate) fn det(mut m: Vec<Vec<Scalar>>) -> Scalar {
    let n = m.len();
    let mut out = Scalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return Scalar::zero() };
        if p != c {
            m.swap(p, c);
            out = -out;
        }
        let inv = m[c][c].inv();
        out = &out * &m[c][c];
        for r in c + 1..n {
            let f = &m[r][c] * &inv;
            if f.is_zero() {
                continue;
            }
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] = &m[r][k] - &t;
            }
        }
    }
    out
}

impl DerCalculus {
    pub fn new(a: &FiniteAlgebra, max_degree: usize) -> Result<Self> {
        crate::algebra::finite::require_valid(a)?;
        let (der, lie) = derivation_lie(a)?;
        let full = full_cochains(a, &der, &lie, max_degree)?;
        let underline = (0..=max_degree).map(|n| multilinear_slice(a, &der, n)).collect::<Result<Vec<_>>>()?;
        let generated = generated_slices(a, &full, max_degree);
        let underline_gda = sub_gda(&full, &underline)?;
        let gda = sub_gda(&full, &generated)?;
        Ok(DerCalculus { a: a.clone(), der, lie, full, underline, generated, underline_gda, gda })
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.a
    }

    pub fn derivations(&self) -> &[Matrix] {
        &self.der
    }

    pub fn lie(&self) -> &LieAlgebraData {
        &self.lie
    }

    pub fn max_degree(&self) -> usize {
        self.full.max_degree()
    }

    /// All alternating cochains `C_wedge(Der A, A)`.
    pub fn full(&self) -> &GradedDiffAlgebra {
        &self.full
    }

    /// Slices of the `Z(A)`-multilinear cochains inside [`Self::full`].
    pub fn underline(&self, n: usize) -> &Subspace {
        &self.underline[n]
    }

    pub fn underline_gda(&self) -> &GradedDiffAlgebra {
        &self.underline_gda
    }

    /// Slices of the subalgebra generated by `A` inside [`Self::full`].
    pub fn generated(&self, n: usize) -> &Subspace {
        &self.generated[n]
    }

    pub fn gda(&self) -> &GradedDiffAlgebra {
        &self.gda
    }

    pub fn dims(&self) -> Vec<usize> {
        self.gda.dims().to_vec()
    }

    /// `a_0 da_1..da_n` evaluated in the full cochains, on the basis of `Omega^n_u`.
    pub fn lambda_full(&self, u: &UniversalCalculus, n: usize) -> Matrix {
        let da = self.a.dim();
        let d0 = self.full.d(0).expect("degree 0 differential");
        let bar = u.complement();
        let m = bar.len();
        let mut cols = Vec::with_capacity(u.dim(n));
        for i0 in 0..da {
            let mut level = vec![SparseVec::unit(i0)];
            for k in 1..=n {
                let t = self.full.product_table(k - 1, 1).expect("product within truncation");
                level = level
                    .iter()
                    .flat_map(|v| bar.iter().map(move |&b| t.apply(v, &d0.col(b))))
                    .collect();
            }
            debug_assert_eq!(level.len(), m.pow(n as u32));
            cols.extend(level);
        }
        Matrix::from_cols(self.full.dim(n), &cols)
    }

    /// The surjection `Omega^n_u -> Omega^n_Der` in the coordinates of [`Self::generated`].
    pub fn lambda(&self, u: &UniversalCalculus, n: usize) -> Result<Matrix> {
        self.generated[n]
            .coords_matrix(&self.lambda_full(u, n).cols_vec())
            .ok_or_else(|| NcError::property("lambda", "image leaves the generated subalgebra"))
    }

    /// `i_{X_k}` on the full cochains.
    pub fn full_contraction(&self, k: usize, n: usize) -> Matrix {
        ce_contraction(self.lie.dim(), self.a.dim(), k, n)
    }

    /// Coordinates of a derivation matrix in [`Self::derivations`].
    pub fn der_coords(&self, x: &Matrix) -> Option<SparseVec> {
        let cols: Vec<SparseVec> = self.der.iter().map(vec_matrix).collect();
        Matrix::from_cols(self.a.dim() * self.a.dim(), &cols).solve(&vec_matrix(x))
    }

    /// `omega(Y_1, .., Y_n)` for a full `n`-cochain and derivations given by coordinates.
    pub fn eval(&self, omega: &SparseVec, ys: &[SparseVec]) -> SparseVec {
        let da = self.a.dim();
        let subsets = Subsets::new(self.lie.dim(), ys.len());
        let mut out = SparseVec::new();
        for (idx, sub) in subsets.list.iter().enumerate() {
            let minor: Vec<Vec<Scalar>> = sub.iter().map(|&r| ys.iter().map(|y| y.get(r)).collect()).collect();
            let c = det(minor);
            if c.is_zero() {
                continue;
            }
            let part = SparseVec::from_entries(
                omega.iter().filter(|(k, _)| k / da == idx).map(|(k, v)| (k % da, v.clone())).collect(),
            );
            out = out.axpy(&c, &part);
        }
        out
    }

    /// The canonical operation of `Der(A)` on `Omega_Der`.
    pub fn operation(&self) -> Result<OperationData> {
        let i = (0..self.lie.dim())
            .map(|k| {
                (0..=self.max_degree())
                    .map(|n| {
                        if n == 0 {
                            return Ok(Matrix::zeros(0, self.gda.dim(0)));
                        }
                        restrict(&self.full_contraction(k, n), &self.generated[n], &self.generated[n - 1])
                            .ok_or_else(|| NcError::property("operation", format!("contraction leaves degree {}", n - 1)))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        OperationData::new(self.lie.clone(), i)
    }
}

fn full_cochains(a: &FiniteAlgebra, der: &[Matrix], lie: &LieAlgebraData, n: usize) -> Result<GradedDiffAlgebra> {
    let da = a.dim();
    let gd = lie.dim();
    let subsets: Vec<Subsets> = (0..=n).map(|k| Subsets::new(gd, k)).collect();
    let dims: Vec<usize> = subsets.iter().map(|s| s.len() * da).collect();
    let d: Vec<Matrix> = (0..n).map(|k| ce_coboundary(lie, der, da, k)).collect();
    let mut products = BTreeMap::new();
    for p in 0..=n {
        for q in 0..=n - p {
            let (sp, sq, sr) = (&subsets[p], &subsets[q], &subsets[p + q]);
            let table = Bilinear::from_fn(dims[p], dims[q], dims[p + q], |x, y| {
                let (i, ea) = (x / da, x % da);
                let (j, eb) = (y / da, y % da);
                let mut joined = sp.list[i].clone();
                joined.extend_from_slice(&sq.list[j]);
                match sort_sign(&joined) {
                    Some((s, sorted)) => {
                        let base = sr.index[&sorted] * da;
                        a.basis_product(ea, eb).remap(|t| Some(base + t)).scale(&Scalar::int(s))
                    }
                    None => SparseVec::new(),
                }
            });
            products.insert((p, q), table);
        }
    }
    let unit = a.unit_required()?.clone();
    let mut g = GradedDiffAlgebra::new(dims, d, products, unit)?;
    if let Some(s) = a.star_matrix() {
        g = g.with_star(star_matrices(a, der, s, &subsets)?)?;
    }
    Ok(if n >= gd { g.complete() } else { g.with_top(ce_coboundary(lie, der, da, n)) })
}

/// `omega*(X_K) = omega(X_K*)*` with `X*(x) = X(x*)*`.
fn star_matrices(a: &FiniteAlgebra, der: &[Matrix], s: &Matrix, subsets: &[Subsets]) -> Result<Vec<Matrix>> {
    let da = a.dim();
    let space = Subspace::span(da * da, &der.iter().map(vec_matrix).collect::<Vec<_>>());
    let t: Vec<SparseVec> = der
        .iter()
        .map(|x| {
            let xs = s.mul(&x.conj()).mul(&s.conj());
            space.coords(&vec_matrix(&xs)).ok_or_else(|| NcError::property("involution", "X* is not a derivation"))
        })
        .collect::<Result<_>>()?;
    let tc = Matrix::from_cols(der.len(), &t).conj();
    Ok(subsets
        .iter()
        .map(|sub| {
            let dim = sub.len() * da;
            let mut trip = Vec::new();
            for (ii, i) in sub.list.iter().enumerate() {
                for (kk, k) in sub.list.iter().enumerate() {
                    let minor: Vec<Vec<Scalar>> = i.iter().map(|&r| k.iter().map(|&c| tc.get(r, c)).collect()).collect();
                    let c = det(minor);
                    if c.is_zero() {
                        continue;
                    }
                    for ea in 0..da {
                        for (b, v) in s.col(ea).iter() {
                            trip.push((kk * da + b, ii * da + ea, &c * v));
                        }
                    }
                }
            }
            Matrix::from_triplets(dim, dim, trip)
        })
        .collect())
}

/// Cochains with `omega(z X, ..) = z omega(X, ..)` for `z` in `Z(A)`.
fn multilinear_slice(a: &FiniteAlgebra, der: &[Matrix], n: usize) -> Result<Subspace> {
    let da = a.dim();
    let gd = der.len();
    let src = Subsets::new(gd, n);
    let ambient = src.len() * da;
    if n == 0 || gd == 0 {
        return Ok(Subspace::full(ambient));
    }
    let space = Subspace::span(da * da, &der.iter().map(vec_matrix).collect::<Vec<_>>());
    let rest = Subsets::new(gd, n - 1);
    let mut rows = Vec::new();
    for z in center(a).basis() {
        let lz = a.left_mult(z);
        let c = der
            .iter()
            .map(|x| space.coords(&vec_matrix(&lz.mul(x))).ok_or_else(|| NcError::property("Der", "not a Z(A)-module")))
            .collect::<Result<Vec<_>>>()?;
        for (k1, ck) in c.iter().enumerate() {
            for kp in &rest.list {
                let slot = |l: usize| -> Option<(Scalar, usize)> {
                    let mut t = vec![l];
                    t.extend_from_slice(kp);
                    sort_sign(&t).map(|(s, sorted)| (Scalar::int(s), src.index[&sorted]))
                };
                let rhs = slot(k1);
                for r in 0..da {
                    let mut e = Vec::new();
                    for (l, cl) in ck.iter() {
                        if let Some((s, idx)) = slot(l) {
                            e.push((idx * da + r, cl * &s));
                        }
                    }
                    if let Some((s, idx)) = &rhs {
                        for (b, v) in lz.row(r).iter() {
                            e.push((idx * da + b, -(v * s)));
                        }
                    }
                    let row = SparseVec::from_entries(e);
                    if !row.is_zero() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    Ok(Subspace::kernel_of(&Matrix::from_rows(ambient, rows)))
}

/// `Omega^n_Der = span{Omega^{n-1}_Der dA}`, starting from `A`.
fn generated_slices(a: &FiniteAlgebra, full: &GradedDiffAlgebra, n: usize) -> Vec<Subspace> {
    let da = a.dim();
    let mut out = vec![Subspace::full(da)];
    let Some(d0) = full.d(0) else { return out };
    let da_img = d0.cols_vec();
    for k in 1..=n {
        let t = full.product_table(k - 1, 1).expect("product within truncation");
        let vs: Vec<SparseVec> =
            out[k - 1].basis().iter().flat_map(|v| da_img.iter().map(move |w| t.apply(v, w))).collect();
        out.push(Subspace::span(full.dim(k), &vs));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::finite::{complex_numbers, matrix_algebra, truncated_poly};
    use crate::complex::{check_gda, verify_operation};

    #[test]
    fn m2_counts() {
        let a = matrix_algebra(2).unwrap();
        let c = der_calculus(&a, 3).unwrap();
        assert_eq!(c.lie().dim(), 3);
        assert_eq!(c.underline(1).dim(), 12);
        assert_eq!(c.dims(), vec![4, 12, 12, 4]);
        let r = check_gda(c.gda());
        assert!(r.ok(), "{r:?}");
        let u = UniversalCalculus::new(&a, 2).unwrap();
        let l = c.lambda(&u, 2).unwrap();
        assert_eq!((l.ncols(), l.rank()), (36, 12));
    }

    #[test]
    fn c_has_nothing_above_degree_zero() {
        let c = der_calculus(&complex_numbers(), 2).unwrap();
        assert_eq!(c.dims(), vec![1, 0, 0]);
    }

    #[test]
    fn full_cochains_form_a_gda() {
        let a = truncated_poly(3).unwrap();
        let c = der_calculus(&a, 2).unwrap();
        let r = check_gda(c.full());
        assert!(r.ok(), "{r:?}");
        assert!(check_gda(c.underline_gda()).ok());
    }

    #[test]
    fn operation_holds() {
        let c = der_calculus(&matrix_algebra(2).unwrap(), 3).unwrap();
        let r = verify_operation(c.gda(), &c.operation().unwrap());
        assert!(r.ok(), "{r:?}");
    }

    #[test]
    fn small_determinants() {
        let m = vec![vec![Scalar::int(2), Scalar::int(1)], vec![Scalar::int(1), Scalar::int(1)]];
        assert_eq!(det(m), Scalar::one());
        assert_eq!(det(vec![]), Scalar::one());
    }
}
