//! Graded differential algebras truncated at a maximal degree.

use std::collections::BTreeMap;

use serde::Serialize;

use super::cochain::CochainComplex;
use crate::error::{NcError, Result};
use crate::linalg::{restrict, Acc, Matrix, Quotient, Scalar, SparseVec, Subspace};

/// A bilinear map on basis pairs: `table[i * right + j] = b(e_i, f_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bilinear {
    pub left: usize,
    pub right: usize,
    pub out: usize,
    table: Vec<SparseVec>,
}

impl Bilinear {
    pub fn from_fn(left: usize, right: usize, out: usize, f: impl Fn(usize, usize) -> SparseVec) -> Self {
        let table = (0..left * right).map(|k| f(k / right.max(1), k % right.max(1))).collect();
        Bilinear { left, right, out, table }
    }

    pub fn from_table(left: usize, right: usize, out: usize, table: Vec<SparseVec>) -> Self {
        assert_eq!(table.len(), left * right);
        Bilinear { left, right, out, table }
    }

    pub fn basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.right + j]
    }

    pub fn apply(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc = Acc::new(self.out);
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let v = &self.table[i * self.right + j];
                if !v.is_zero() {
                    acc.axpy(&(a * b), v);
                }
            }
        }
        acc.take()
    }
}

#[derive(Clone, Debug)]
pub struct GradedDiffAlgebra {
    dims: Vec<usize>,
    d: Vec<Matrix>,
    top_d: Option<Matrix>,
    complete: bool,
    products: BTreeMap<(usize, usize), Bilinear>,
    unit: SparseVec,
    /// Conjugate-linear involution per degree: `x* = S_n conj(x)`.
    star: Option<Vec<Matrix>>,
}

impl GradedDiffAlgebra {
    pub fn new(
        dims: Vec<usize>,
        d: Vec<Matrix>,
        products: BTreeMap<(usize, usize), Bilinear>,
        unit: SparseVec,
    ) -> Result<Self> {
        CochainComplex::new(dims.clone(), d.clone())?;
        for (&(p, q), b) in &products {
            if p + q >= dims.len() || b.left != dims[p] || b.right != dims[q] || b.out != dims[p + q] {
                return Err(NcError::input(format!("product table ({p}, {q}) has the wrong shape")));
            }
        }
        Ok(GradedDiffAlgebra { dims, d, top_d: None, complete: false, products, unit, star: None })
    }

    pub fn with_star(mut self, star: Vec<Matrix>) -> Result<Self> {
        if star.len() != self.dims.len() {
            return Err(NcError::input("need one involution matrix per degree"));
        }
        self.star = Some(star);
        Ok(self)
    }

    pub fn with_top(mut self, top: Matrix) -> Self {
        self.top_d = Some(top);
        self
    }

    /// Marks all degrees above the top as zero; `d` out of the top becomes the zero map.
    pub fn complete(mut self) -> Self {
        self.complete = true;
        self.top_d = Some(Matrix::zeros(0, *self.dims.last().unwrap()));
        self
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }

    pub fn max_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn d(&self, n: usize) -> Option<&Matrix> {
        if n < self.d.len() {
            Some(&self.d[n])
        } else {
            self.top_d.as_ref()
        }
    }

    pub fn differentials(&self) -> &[Matrix] {
        &self.d
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn star_matrices(&self) -> Option<&[Matrix]> {
        self.star.as_deref()
    }

    pub fn products(&self) -> &BTreeMap<(usize, usize), Bilinear> {
        &self.products
    }

    pub fn product_table(&self, p: usize, q: usize) -> Option<&Bilinear> {
        self.products.get(&(p, q))
    }

    pub fn product(&self, p: usize, x: &SparseVec, q: usize, y: &SparseVec) -> Option<SparseVec> {
        self.products.get(&(p, q)).map(|b| b.apply(x, y))
    }

    pub fn star(&self, n: usize, x: &SparseVec) -> Option<SparseVec> {
        self.star.as_ref().map(|s| s[n].apply(&x.conj()))
    }

    pub fn as_complex(&self) -> CochainComplex {
        let mut c = CochainComplex::new(self.dims.clone(), self.d.clone()).expect("validated");
        if let Some(t) = self.top_d.as_ref().filter(|_| !self.complete) {
            c = c.with_top(t.clone()).expect("validated");
        }
        if self.complete {
            c = c.complete();
        }
        c
    }

    /// The complex through degree `upto`, keeping `d_upto` as the top map.
    pub fn truncated_complex(&self, upto: usize) -> CochainComplex {
        let mut c = CochainComplex::new(self.dims[..=upto].to_vec(), self.d[..upto].to_vec()).expect("validated");
        if let Some(t) = self.d(upto) {
            c = c.with_top(t.clone()).expect("validated");
        } else if self.complete {
            c = c.complete();
        }
        c
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq, Default)]
pub struct GdaReport {
    pub associative: bool,
    pub leibniz: bool,
    pub d_squared_zero: bool,
    pub unit: bool,
    pub star: Option<bool>,
    pub failures: Vec<String>,
    /// Checks that could not run because they leave the truncation.
    pub skipped: Vec<String>,
}

impl GdaReport {
    pub fn ok(&self) -> bool {
        self.associative && self.leibniz && self.d_squared_zero && self.unit && self.star != Some(false)
    }
}

fn sign(odd: bool) -> Scalar {
    if odd {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

pub fn check_gda(g: &GradedDiffAlgebra) -> GdaReport {
    let n = g.max_degree();
    let mut r = GdaReport { associative: true, leibniz: true, d_squared_zero: true, unit: true, ..Default::default() };
    let e = |k: usize| SparseVec::unit(k);

    for p in 0..=n {
        for q in 0..=n - p {
            for s in 0..=n - p - q {
                let (Some(pq), Some(qs), Some(a), Some(b)) = (
                    g.product_table(p, q),
                    g.product_table(q, s),
                    g.product_table(p + q, s),
                    g.product_table(p, q + s),
                ) else {
                    r.skipped.push(format!("associativity ({p}, {q}, {s})"));
                    continue;
                };
                'triples: for i in 0..g.dims[p] {
                    for j in 0..g.dims[q] {
                        let xy = pq.basis(i, j);
                        for k in 0..g.dims[s] {
                            let lhs = a.apply(xy, &e(k));
                            let rhs = b.apply(&e(i), qs.basis(j, k));
                            if lhs != rhs {
                                r.associative = false;
                                r.failures.push(format!("associativity fails in degrees ({p}, {q}, {s})"));
                                break 'triples;
                            }
                        }
                    }
                }
            }
        }
    }

    for p in 0..=n {
        for q in 0..=n - p {
            if p + q >= n {
                if !g.complete {
                    r.skipped.push(format!("Leibniz ({p}, {q})"));
                }
                continue;
            }
            let (Some(pq), Some(dpq), Some(p1q), Some(pq1)) =
                (g.product_table(p, q), g.d(p + q), g.product_table(p + 1, q), g.product_table(p, q + 1))
            else {
                r.skipped.push(format!("Leibniz ({p}, {q})"));
                continue;
            };
            let (dp, dq) = (&g.d[p], &g.d[q]);
            'pairs: for i in 0..g.dims[p] {
                let dx = dp.col(i);
                for j in 0..g.dims[q] {
                    let lhs = dpq.apply(pq.basis(i, j));
                    let dy = dq.col(j);
                    let rhs = p1q.apply(&dx, &e(j)).add(&pq1.apply(&e(i), &dy).scale(&sign(p % 2 == 1)));
                    if lhs != rhs {
                        r.leibniz = false;
                        r.failures.push(format!("Leibniz rule fails in degrees ({p}, {q})"));
                        break 'pairs;
                    }
                }
            }
        }
    }

    let c = g.as_complex();
    if let Err(err) = c.check_d_squared() {
        r.d_squared_zero = false;
        r.failures.push(err.to_string());
    }

    for k in 0..=n {
        let left = g.product_table(0, k);
        let right = g.product_table(k, 0);
        if left.is_none() || right.is_none() {
            r.skipped.push(format!("unit in degree {k}"));
            continue;
        }
        for i in 0..g.dims[k] {
            let x = e(i);
            if left.unwrap().apply(&g.unit, &x) != x || right.unwrap().apply(&x, &g.unit) != x {
                r.unit = false;
                r.failures.push(format!("unit fails in degree {k}"));
                break;
            }
        }
    }

    if let Some(st) = &g.star {
        let mut ok = true;
        for k in 0..=n {
            if st[k].mul(&st[k].conj()) != Matrix::identity(g.dims[k]) {
                ok = false;
                r.failures.push(format!("involution not involutive in degree {k}"));
            }
        }
        for p in 0..=n {
            for q in 0..=n - p {
                let (Some(pq), Some(qp)) = (g.product_table(p, q), g.product_table(q, p)) else {
                    continue;
                };
                let sg = sign((p * q) % 2 == 1);
                'st: for i in 0..g.dims[p] {
                    let xs = st[p].col(i);
                    for j in 0..g.dims[q] {
                        let lhs = st[p + q].apply(&pq.basis(i, j).conj());
                        let rhs = qp.apply(&st[q].col(j), &xs).scale(&sg);
                        if lhs != rhs {
                            ok = false;
                            r.failures.push(format!("(xy)* != (-1)^pq y* x* in degrees ({p}, {q})"));
                            break 'st;
                        }
                    }
                }
            }
        }
        for k in 0..n {
            // d(x*) = (dx)* on basis: d S_k = S_{k+1} conj(d)
            if g.d[k].mul(&st[k]) != st[k + 1].mul(&g.d[k].conj()) {
                ok = false;
                r.failures.push(format!("d does not commute with the involution in degree {k}"));
            }
        }
        r.star = Some(ok);
    }
    r
}

/// Skew tensor product `(x (x) x')(y (x) y') = (-1)^{|x'||y|} xy (x) x'y'`.
///
/// Degrees run to `N + N'` when both factors are complete, else to `min(N, N')`.
pub fn skew_tensor(a: &GradedDiffAlgebra, b: &GradedDiffAlgebra) -> Result<GradedDiffAlgebra> {
    let c = super::cochain::tensor_complex(&a.as_complex(), &b.as_complex())?;
    let top = c.max_degree();
    let (na, nb) = (a.max_degree(), b.max_degree());
    let range = |n: usize| n.saturating_sub(nb)..=n.min(na);
    let offset = |n: usize, p: usize| -> usize { (n.saturating_sub(nb)..p).map(|r| a.dims[r] * b.dims[n - r]).sum() };
    let mut products = BTreeMap::new();
    for n1 in 0..=top {
        for n2 in 0..=top - n1 {
            let n = n1 + n2;
            let mut table = vec![SparseVec::new(); c.dims()[n1] * c.dims()[n2]];
            let mut ok = true;
            for p1 in range(n1) {
                let q1 = n1 - p1;
                for p2 in range(n2) {
                    let q2 = n2 - p2;
                    if p1 + p2 > na || q1 + q2 > nb {
                        continue;
                    }
                    let (Some(pa), Some(pb)) = (a.product_table(p1, p2), b.product_table(q1, q2)) else {
                        ok = false;
                        continue;
                    };
                    let sg = sign((q1 * p2) % 2 == 1);
                    let (o1, o2, o) = (offset(n1, p1), offset(n2, p2), offset(n, p1 + p2));
                    let (db1, db2, dbo) = (b.dims[q1], b.dims[q2], b.dims[q1 + q2]);
                    for i1 in 0..a.dims[p1] {
                        for j1 in 0..db1 {
                            for i2 in 0..a.dims[p2] {
                                let xy = pa.basis(i1, i2);
                                if xy.is_zero() {
                                    continue;
                                }
                                for j2 in 0..db2 {
                                    let xy2 = pb.basis(j1, j2);
                                    if xy2.is_zero() {
                                        continue;
                                    }
                                    let mut ent = Vec::new();
                                    for (u, s) in xy.iter() {
                                        for (v, t) in xy2.iter() {
                                            ent.push((o + u * dbo + v, &(s * t) * &sg));
                                        }
                                    }
                                    let k = (o1 + i1 * db1 + j1) * c.dims()[n2] + o2 + i2 * db2 + j2;
                                    table[k] = SparseVec::from_entries(ent);
                                }
                            }
                        }
                    }
                }
            }
            if ok {
                products.insert((n1, n2), Bilinear::from_table(c.dims()[n1], c.dims()[n2], c.dims()[n], table));
            }
        }
    }
    let unit = crate::algebra::bimodule::kron(&a.unit, &b.unit, b.dims[0]);
    let g = GradedDiffAlgebra::new(c.dims().to_vec(), c.differentials().to_vec(), products, unit)?;
    Ok(if c.is_complete() { g.complete() } else { g })
}

/// Compares `H(A (x) A')` with the Kunneth sum in degrees `0..=upto` for the
/// skew tensor product. Errors on mismatch or when `upto` leaves the exact range.
pub fn kunneth_gda(a: &GradedDiffAlgebra, b: &GradedDiffAlgebra, upto: usize) -> Result<Vec<usize>> {
    let t = skew_tensor(a, b)?;
    let r = check_gda(&t);
    if !r.ok() {
        return Err(NcError::property("skew tensor product", r.failures.join("; ")));
    }
    let (ha, hb, ht) = (a.as_complex().cohomology()?, b.as_complex().cohomology()?, t.as_complex().cohomology()?);
    if upto >= ht.exact().len() {
        return Err(NcError::input(format!("degree {upto} is outside the exact range of the tensor product")));
    }
    for n in 0..=upto {
        let want: usize = (0..=n)
            .filter(|&p| p < ha.exact().len() && n - p < hb.exact().len())
            .map(|p| ha.dims[p] * hb.dims[n - p])
            .sum();
        if ht.dims[n] != want {
            return Err(NcError::property("Kunneth", format!("degree {n}: {} != {want}", ht.dims[n])));
        }
    }
    Ok(ht.dims[..=upto].to_vec())
}

/// The graded subalgebra on per-degree subspaces, in their coordinates.
/// Errors if a subspace family is not stable under `d`, products or `*`.
pub fn sub_gda(g: &GradedDiffAlgebra, subs: &[Subspace]) -> Result<GradedDiffAlgebra> {
    let n = g.max_degree();
    if subs.len() != n + 1 {
        return Err(NcError::input("need one subspace per degree"));
    }
    let unstable = |what: &str, deg: usize| NcError::property("subalgebra", format!("not stable under {what} in degree {deg}"));
    let mut d = Vec::with_capacity(n);
    for k in 0..n {
        d.push(restrict(&g.d[k], &subs[k], &subs[k + 1]).ok_or_else(|| unstable("d", k))?);
    }
    let mut products = BTreeMap::new();
    for (&(p, q), t) in &g.products {
        let table = subs[p]
            .basis()
            .iter()
            .flat_map(|x| subs[q].basis().iter().map(move |y| (x, y)))
            .map(|(x, y)| subs[p + q].coords(&t.apply(x, y)).ok_or_else(|| unstable("products", p + q)))
            .collect::<Result<Vec<_>>>()?;
        products.insert((p, q), Bilinear::from_table(subs[p].dim(), subs[q].dim(), subs[p + q].dim(), table));
    }
    let unit = subs[0].coords(&g.unit).ok_or_else(|| unstable("the unit", 0))?;
    let dims = subs.iter().map(|s| s.dim()).collect();
    let mut out = GradedDiffAlgebra::new(dims, d, products, unit)?;
    if let Some(st) = &g.star {
        let s = (0..=n)
            .map(|k| {
                let imgs = st[k].apply_all(&subs[k].basis().iter().map(|v| v.conj()).collect::<Vec<_>>());
                subs[k].coords_matrix(&imgs).ok_or_else(|| unstable("the involution", k))
            })
            .collect::<Result<Vec<_>>>()?;
        out = out.with_star(s)?;
    }
    if g.complete {
        out = out.complete();
    }
    Ok(out)
}

/// `g / I` for a graded ideal given by per-degree slices, with the quotient
/// coordinates per degree. A slice for degree `N + 1` lets the top map descend.
pub fn quotient_gda(g: &GradedDiffAlgebra, killed: &[Subspace]) -> Result<(GradedDiffAlgebra, Vec<Quotient>)> {
    let n = g.max_degree();
    if killed.len() != n + 1 && killed.len() != n + 2 {
        return Err(NcError::input("need one ideal slice per degree"));
    }
    let not_ideal = |what: &str, deg: usize| NcError::property("ideal", format!("not stable under {what} in degree {deg}"));
    let qs: Vec<Quotient> = killed.iter().map(|k| k.quotient()).collect();
    let mut d = Vec::with_capacity(n + 1);
    for k in 0..killed.len() - 1 {
        let Some(dk) = g.d(k) else { break };
        if k == n && dk.nrows() != killed[k + 1].ambient() {
            break;
        }
        if killed[k].basis().iter().any(|v| !killed[k + 1].contains(&dk.apply(v))) {
            return Err(not_ideal("d", k));
        }
        d.push(qs[k + 1].project.mul(dk).mul(&qs[k].section));
    }
    let top = if d.len() > n { d.pop() } else { None };
    let mut products = BTreeMap::new();
    for (&(p, q), t) in &g.products {
        let all_p = (0..g.dims[p]).map(SparseVec::unit);
        for x in killed[p].basis() {
            for j in 0..g.dims[q] {
                if !killed[p + q].contains(&t.apply(x, &SparseVec::unit(j))) {
                    return Err(not_ideal("right products", p + q));
                }
            }
        }
        for y in killed[q].basis() {
            for i in all_p.clone() {
                if !killed[p + q].contains(&t.apply(&i, y)) {
                    return Err(not_ideal("left products", p + q));
                }
            }
        }
        let (sp, sq) = (&qs[p].section, &qs[q].section);
        let table = (0..qs[p].dim)
            .flat_map(|i| (0..qs[q].dim).map(move |j| (i, j)))
            .map(|(i, j)| qs[p + q].project.apply(&t.apply(&sp.col(i), &sq.col(j))))
            .collect();
        products.insert((p, q), Bilinear::from_table(qs[p].dim, qs[q].dim, qs[p + q].dim, table));
    }
    let dims = qs[..=n].iter().map(|q| q.dim).collect();
    let unit = qs[0].project.apply(&g.unit);
    let mut out = GradedDiffAlgebra::new(dims, d, products, unit)?;
    if let Some(t) = top {
        out = out.with_top(t);
    }
    if let Some(st) = &g.star {
        let mut s = Vec::with_capacity(n + 1);
        for k in 0..=n {
            if killed[k].basis().iter().any(|v| !killed[k].contains(&st[k].apply(&v.conj()))) {
                return Err(not_ideal("the involution", k));
            }
            s.push(qs[k].project.mul(&st[k]).mul(&qs[k].section));
        }
        out = out.with_star(s)?;
    }
    if g.complete {
        out = out.complete();
    }
    Ok((out, qs))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exterior algebra on one odd generator with d = 0.
    fn circle() -> GradedDiffAlgebra {
        let mut p = BTreeMap::new();
        p.insert((0, 0), Bilinear::from_fn(1, 1, 1, |_, _| SparseVec::unit(0)));
        p.insert((0, 1), Bilinear::from_fn(1, 1, 1, |_, _| SparseVec::unit(0)));
        p.insert((1, 0), Bilinear::from_fn(1, 1, 1, |_, _| SparseVec::unit(0)));
        GradedDiffAlgebra::new(vec![1, 1], vec![Matrix::zeros(1, 1)], p, SparseVec::unit(0)).unwrap().complete()
    }

    #[test]
    fn circle_is_a_gda() {
        assert!(check_gda(&circle()).ok());
    }

    #[test]
    fn torus_from_skew_tensor() {
        let t = skew_tensor(&circle(), &circle()).unwrap();
        assert_eq!(t.dims(), &[1, 2, 1]);
        let r = check_gda(&t);
        assert!(r.ok(), "{:?}", r.failures);
        // the two degree-one generators anticommute
        let p = t.product_table(1, 1).unwrap();
        assert_eq!(p.basis(0, 1), &p.basis(1, 0).neg());
        assert_eq!(t.as_complex().cohomology().unwrap().dims, vec![1, 2, 1]);
    }
}
