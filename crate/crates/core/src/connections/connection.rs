//! Left-module connections `M -> Omega^1 (x)_A M` over a graded differential
//! algebra whose degree 0 is `A`, their curvature, duals and bimodule structure.
//! Right-module connections are handled as left connections over the opposite
//! algebra, with `x .op y = (-1)^{pq} y x`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::bimodule::{tensor_over, BalancedTensor, Bimodule};
use crate::algebra::finite::FiniteAlgebra;
use crate::calculi::intertwiners;
use crate::complex::{Bilinear, GradedDiffAlgebra};
use crate::error::{NcError, Result};
use crate::linalg::{Matrix, Scalar, SparseVec};

/// Degree `n` of `g` as an `(A, A)`-bimodule, `A` being degree 0.
pub fn degree_bimodule(g: &GradedDiffAlgebra, n: usize) -> Result<Bimodule> {
    let (l, r) = (g.product_table(0, n), g.product_table(n, 0));
    let (Some(l), Some(r)) = (l, r) else {
        return Err(NcError::input(format!("degree {n} products are not available")));
    };
    let (da, dn) = (g.dim(0), g.dim(n));
    let left = (0..da).map(|x| Matrix::from_cols(dn, &(0..dn).map(|i| l.basis(x, i).clone()).collect::<Vec<_>>())).collect();
    let right = (0..da).map(|x| Matrix::from_cols(dn, &(0..dn).map(|i| r.basis(i, x).clone()).collect::<Vec<_>>())).collect();
    Bimodule::new(dn, left, right)
}

/// `A^op` with `e_i .op e_j = e_j e_i`; unit and involution carry over.
pub fn opposite_algebra(a: &FiniteAlgebra) -> FiniteAlgebra {
    let mut op = FiniteAlgebra::from_fn(a.dim(), |i, j| a.basis_product(j, i).clone()).with_labels(a.labels().to_vec());
    if let Some(u) = a.unit() {
        op = op.with_unit(u.clone());
    }
    if let Some(s) = a.star_matrix() {
        op = op.with_star(s.clone());
    }
    op
}

/// The opposite graded algebra `x .op y = (-1)^{pq} y x`, same differential and involution.
pub fn opposite_gda(g: &GradedDiffAlgebra) -> Result<GradedDiffAlgebra> {
    let mut products = BTreeMap::new();
    for &(p, q) in g.products().keys() {
        let Some(back) = g.product_table(q, p) else { continue };
        let sign = if (p * q) % 2 == 1 { -Scalar::one() } else { Scalar::one() };
        let t = Bilinear::from_fn(g.dim(p), g.dim(q), g.dim(p + q), |i, j| back.basis(j, i).scale(&sign));
        products.insert((p, q), t);
    }
    let mut op = GradedDiffAlgebra::new(g.dims().to_vec(), g.differentials().to_vec(), products, g.unit().clone())?;
    if let Some(s) = g.star_matrices() {
        op = op.with_star(s.to_vec())?;
    }
    if g.is_complete() {
        op = op.complete();
    } else if let Some(top) = g.d(g.max_degree()) {
        op = op.with_top(top.clone());
    }
    Ok(op)
}

/// `M` over `A^op`: the right `A`-action becomes the left one and vice versa.
pub fn opposite_module(m: &Bimodule) -> Bimodule {
    Bimodule::new(m.dim(), m.right_actions().to_vec(), m.left_actions().to_vec()).expect("same shapes")
}

/// A left `A`-module with the balanced tensors `Omega^n (x)_A M`, `n = 1, 2`.
#[derive(Clone, Debug)]
pub struct LeftSetting {
    pub gda: GradedDiffAlgebra,
    pub module: Bimodule,
    pub omega1: Bimodule,
    pub omega2: Bimodule,
    pub t1: BalancedTensor,
    pub t2: BalancedTensor,
}

impl LeftSetting {
    pub fn new(gda: &GradedDiffAlgebra, module: &Bimodule) -> Result<Self> {
        if gda.max_degree() < 2 {
            return Err(NcError::input("need the calculus through degree 2"));
        }
        if module.left_actions().len() != gda.dim(0) {
            return Err(NcError::input("module is not a left module over degree 0"));
        }
        let omega1 = degree_bimodule(gda, 1)?;
        let omega2 = degree_bimodule(gda, 2)?;
        let t1 = tensor_over(&omega1, module)?;
        let t2 = tensor_over(&omega2, module)?;
        Ok(LeftSetting { gda: gda.clone(), module: module.clone(), omega1, omega2, t1, t2 })
    }

    pub fn algebra_dim(&self) -> usize {
        self.gda.dim(0)
    }

    /// `d(a) (x) m` for basis `a`, `m`.
    pub fn da_tensor(&self, a: usize, m: &SparseVec) -> SparseVec {
        self.t1.class_of(&self.gda.d(0).expect("d on degree 0").col(a), m)
    }

    /// `m -> class(d m_a (x) e_i)` on the free module `A^k` with basis index `i * dim A + a`.
    pub fn free_trivial(&self, k: usize) -> Result<Matrix> {
        let da = self.algebra_dim();
        if self.module.dim() != k * da {
            return Err(NcError::input("module is not A^k"));
        }
        let cols: Vec<SparseVec> = (0..k * da)
            .map(|idx| {
                let (i, a) = (idx / da, idx % da);
                // e_a f_i = (e_a 1) f_i with f_i = 1 in slot i
                let d = self.gda.d(0).unwrap().col(a);
                let unit = self.gda.unit().remap(|t| Some(i * da + t));
                self.t1.class_of(&d, &unit)
            })
            .collect();
        Ok(Matrix::from_cols(self.t1.dim(), &cols))
    }

    /// `omega_w . v` for `v` in `Omega^1 (x) M`, landing in `Omega^2 (x) M`.
    fn left_mult_t1(&self, w: usize, v: &SparseVec) -> SparseVec {
        let p11 = self.gda.product_table(1, 1).expect("degree 2 products");
        let dm = self.module.dim();
        let amb = self.t1.section().apply(v);
        let mut out = SparseVec::new();
        for (idx, c) in amb.iter() {
            let (w2, k) = (idx / dm, idx % dm);
            out = out.axpy(c, &self.t2.class_of(p11.basis(w, w2), &SparseVec::unit(k)));
        }
        out
    }

    /// `nabla(a m) - a nabla(m) - d(a) (x) m` on all basis pairs.
    pub fn leibniz_residual(&self, nabla: &Matrix) -> Vec<(usize, usize, SparseVec)> {
        let mut out = Vec::new();
        for a in 0..self.algebra_dim() {
            let la = &self.module.left_actions()[a];
            let lt = &self.t1.module.left_actions()[a];
            for m in 0..self.module.dim() {
                let e = SparseVec::unit(m);
                let r = nabla.apply(&la.apply(&e)).sub(&lt.apply(&nabla.col(m))).sub(&self.da_tensor(a, &e));
                if !r.is_zero() {
                    out.push((a, m, r));
                }
            }
        }
        out
    }

    /// `nabla^2`, with `nabla(omega (x) m) = d omega (x) m - omega nabla(m)` on 1-forms.
    pub fn curvature(&self, nabla: &Matrix) -> Matrix {
        let dm = self.module.dim();
        let d1 = self.gda.d(1).expect("d on degree 1");
        let cols: Vec<SparseVec> = (0..dm)
            .map(|m| {
                let amb = self.t1.section().apply(&nabla.col(m));
                let mut out = SparseVec::new();
                for (idx, c) in amb.iter() {
                    let (w, k) = (idx / dm, idx % dm);
                    let term = self.t2.class_of(&d1.col(w), &SparseVec::unit(k)).sub(&self.left_mult_t1(w, &nabla.col(k)));
                    out = out.axpy(c, &term);
                }
                out
            })
            .collect();
        Matrix::from_cols(self.t2.dim(), &cols)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureReport {
    pub leibniz_ok: bool,
    pub leibniz_failures: usize,
    #[serde(skip)]
    pub curvature: Matrix,
    pub flat: bool,
    pub is_module_map: bool,
}

pub fn connection_curvature(gda: &GradedDiffAlgebra, module: &Bimodule, nabla: &Matrix) -> Result<CurvatureReport> {
    let s = LeftSetting::new(gda, module)?;
    curvature_report(&s, nabla)
}

pub fn curvature_report(s: &LeftSetting, nabla: &Matrix) -> Result<CurvatureReport> {
    if nabla.nrows() != s.t1.dim() || nabla.ncols() != s.module.dim() {
        return Err(NcError::input("connection matrix has the wrong shape"));
    }
    let failures = s.leibniz_residual(nabla).len();
    let curvature = s.curvature(nabla);
    let is_module_map = (0..s.algebra_dim())
        .all(|a| curvature.mul(&s.module.left_actions()[a]) == s.t2.module.left_actions()[a].mul(&curvature));
    Ok(CurvatureReport { leibniz_ok: failures == 0, leibniz_failures: failures, flat: curvature.is_zero(), curvature, is_module_map })
}

/// A right `A`-module connection `M -> M (x)_A Omega^1`.
#[derive(Clone, Debug)]
pub struct RightConnection {
    pub gda: GradedDiffAlgebra,
    pub module: Bimodule,
    pub omega1: Bimodule,
    pub tensor: BalancedTensor,
    pub nabla: Matrix,
}

impl RightConnection {
    pub fn new(gda: &GradedDiffAlgebra, module: &Bimodule, nabla: Matrix) -> Result<Self> {
        if module.right_actions().len() != gda.dim(0) {
            return Err(NcError::input("module is not a right module over degree 0"));
        }
        let omega1 = degree_bimodule(gda, 1)?;
        let tensor = tensor_over(module, &omega1)?;
        if nabla.nrows() != tensor.dim() || nabla.ncols() != module.dim() {
            return Err(NcError::input("connection matrix has the wrong shape"));
        }
        Ok(RightConnection { gda: gda.clone(), module: module.clone(), omega1, tensor, nabla })
    }

    /// `nabla(m a) - nabla(m) a - m (x) d(a)` on all basis pairs.
    pub fn leibniz_ok(&self) -> bool {
        let d0 = self.gda.d(0).expect("d on degree 0");
        (0..self.gda.dim(0)).all(|a| {
            let ra = &self.module.right_actions()[a];
            let rt = &self.tensor.module.right_actions()[a];
            (0..self.module.dim()).all(|m| {
                let e = SparseVec::unit(m);
                self.nabla.apply(&ra.apply(&e)) == rt.apply(&self.nabla.col(m)).add(&self.tensor.class_of(&e, &d0.col(a)))
            })
        })
    }

    /// The same connection as a left `A^op`-connection over the opposite calculus.
    pub fn to_left_opposite(&self) -> Result<(LeftSetting, Matrix)> {
        let op = opposite_gda(&self.gda)?;
        let module = opposite_module(&self.module);
        let s = LeftSetting::new(&op, &module)?;
        let (dm, dw) = (self.module.dim(), self.omega1.dim());
        let cols: Vec<SparseVec> = (0..dm)
            .map(|m| {
                let amb = self.tensor.section().apply(&self.nabla.col(m));
                let swapped = SparseVec::from_entries(amb.iter().map(|(idx, c)| ((idx % dw) * dm + idx / dw, c.clone())).collect());
                s.t1.project().apply(&swapped)
            })
            .collect();
        let nabla = Matrix::from_cols(s.t1.dim(), &cols);
        Ok((s, nabla))
    }
}

/// `sigma: M (x)_A Omega^1 -> Omega^1 (x)_A M` with `nabla(m a) = nabla(m) a + sigma(m (x) da)`,
/// for a left connection on an `(A, A)`-bimodule. `None` if no such bimodule map exists.
pub fn bimodule_sigma(s: &LeftSetting, nabla: &Matrix) -> Result<Option<Matrix>> {
    let m = &s.module;
    let da = s.algebra_dim();
    if m.right_actions().len() != da {
        return Err(NcError::input("module has no right action of degree 0"));
    }
    let tr = tensor_over(m, &s.omega1)?;
    let d0 = s.gda.d(0).expect("d on degree 0");
    let r1 = |c: usize| &s.omega1.right_actions()[c];
    let mut classes = Vec::new();
    let mut values = Vec::new();
    for k in 0..m.dim() {
        let e = SparseVec::unit(k);
        for b in 0..da {
            let base = nabla.apply(&m.right_actions()[b].apply(&e)).sub(&s.t1.module.right_actions()[b].apply(&nabla.col(k)));
            for c in 0..da {
                classes.push(tr.class_of(&e, &r1(c).apply(&d0.col(b))));
                values.push(s.t1.module.right_actions()[c].apply(&base));
            }
        }
    }
    let cmat = Matrix::from_cols(tr.dim(), &classes);
    if cmat.rank() != tr.dim() {
        return Err(NcError::property("sigma", "M (x) dA A does not span M (x) Omega^1"));
    }
    let vmat = Matrix::from_cols(s.t1.dim(), &values);
    let ct = cmat.transpose();
    let Some(rows) = ct.solve_many(&vmat.rows_iter().cloned().collect::<Vec<_>>()) else {
        return Ok(None);
    };
    let sigma = Matrix::from_rows(tr.dim(), rows);
    let left_ok = (0..da).all(|a| sigma.mul(&tr.module.left_actions()[a]) == s.t1.module.left_actions()[a].mul(&sigma));
    let right_ok = (0..da).all(|a| sigma.mul(&tr.module.right_actions()[a]) == s.t1.module.right_actions()[a].mul(&sigma));
    Ok((left_ok && right_ok && sigma.mul(&cmat) == vmat).then_some(sigma))
}

/// The dual connection on `M* = Hom_A(M, A)`, returned as a left connection over the
/// opposite calculus: `<m, nabla* phi> = d <m, phi> - <nabla m, phi>`.
#[derive(Clone, Debug)]
pub struct DualConnection {
    pub setting: LeftSetting,
    pub nabla: Matrix,
    /// `phi_j` as `dim A x dim M` matrices.
    pub basis: Vec<Matrix>,
    pub leibniz_ok: bool,
}

pub fn dual_connection(s: &LeftSetting, nabla: &Matrix) -> Result<DualConnection> {
    let da = s.algebra_dim();
    let dm = s.module.dim();
    // left A-action on A as the regular representation from the product table (0, 0)
    let p00 = s.gda.product_table(0, 0).expect("degree 0 products");
    let la: Vec<Matrix> =
        (0..da).map(|x| Matrix::from_cols(da, &(0..da).map(|y| p00.basis(x, y).clone()).collect::<Vec<_>>())).collect();
    let ra: Vec<Matrix> =
        (0..da).map(|x| Matrix::from_cols(da, &(0..da).map(|y| p00.basis(y, x).clone()).collect::<Vec<_>>())).collect();
    let pairs: Vec<(&Matrix, &Matrix)> = s.module.left_actions().iter().zip(&la).collect();
    let homs = intertwiners(dm, da, &pairs);
    let basis = homs.maps.clone();
    let k = basis.len();
    let coords = |f: &Matrix| homs.coords(f).ok_or_else(|| NcError::property("dual", "not a module map"));
    // (phi a)(m) = phi(m) a; (b phi)(m) = phi(m b) when M has a right action
    let right: Vec<Matrix> = ra
        .iter()
        .map(|r| Ok(Matrix::from_cols(k, &basis.iter().map(|f| coords(&r.mul(f))).collect::<Result<Vec<_>>>()?)))
        .collect::<Result<_>>()?;
    let left: Vec<Matrix> = s
        .module
        .right_actions()
        .iter()
        .map(|r| Ok(Matrix::from_cols(k, &basis.iter().map(|f| coords(&f.mul(r))).collect::<Result<Vec<_>>>()?)))
        .collect::<Result<_>>()?;
    let dual_op = Bimodule::new(k, right, left)?;
    let op = opposite_gda(&s.gda)?;
    let setting = LeftSetting::new(&op, &dual_op)?;

    let p01 = s.gda.product_table(0, 1).expect("degree 1 products");
    let p10 = s.gda.product_table(1, 0).expect("degree 1 products");
    let d0 = s.gda.d(0).expect("d on degree 0");
    let dw = s.omega1.dim();
    // <m, omega (x)op phi> = phi(m) omega, stacked over m
    let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); dm * dw];
    let sec = setting.t1.section();
    for col in 0..setting.t1.dim() {
        let amb = sec.col(col);
        for m in 0..dm {
            let mut acc = SparseVec::new();
            for (idx, c) in amb.iter() {
                let (w, j) = (idx / k, idx % k);
                acc = acc.axpy(c, &p01.apply(&basis[j].col(m), &SparseVec::unit(w)));
            }
            for (r, v) in acc.iter() {
                rows[m * dw + r].push((col, v.clone()));
            }
        }
    }
    let pairing = Matrix::from_rows(setting.t1.dim(), rows.into_iter().map(SparseVec::from_entries).collect());
    let rhs: Vec<SparseVec> = basis
        .iter()
        .map(|phi| {
            let mut e = Vec::new();
            for m in 0..dm {
                let mut v = d0.apply(&phi.col(m));
                for (idx, c) in s.t1.section().apply(&nabla.col(m)).iter() {
                    let (w, kk) = (idx / dm, idx % dm);
                    v = v.axpy(&-c, &p10.apply(&SparseVec::unit(w), &phi.col(kk)));
                }
                e.extend(v.iter().map(|(r, c)| (m * dw + r, c.clone())));
            }
            SparseVec::from_entries(e)
        })
        .collect();
    let sols = pairing
        .solve_many(&rhs)
        .ok_or_else(|| NcError::property("dual", "no dual connection: the pairing equations are inconsistent"))?;
    let nabla_star = Matrix::from_cols(setting.t1.dim(), &sols);
    let leibniz_ok = setting.leibniz_residual(&nabla_star).is_empty();
    Ok(DualConnection { setting, nabla: nabla_star, basis, leibniz_ok })
}

/// `h(m, n)` as a table `h[m * dim M + n]` in `A`, extended sesquilinearly (antilinear in `m`).
#[derive(Clone, Debug)]
pub struct Hermitian {
    pub dim: usize,
    pub table: Vec<SparseVec>,
}

impl Hermitian {
    pub fn eval(&self, m: &SparseVec, n: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, a) in m.iter() {
            for (j, b) in n.iter() {
                out = out.axpy(&(&a.conj() * b), &self.table[i * self.dim + j]);
            }
        }
        out
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct HermitianReport {
    pub sesquilinear: bool,
    pub hermitian_symmetric: bool,
    /// `h(m, m)` positive semidefinite and nonzero on basis vectors, when `A = M_n`.
    pub positive: Option<bool>,
    pub compatible: bool,
}

/// Exact positive-semidefiniteness of a hermitian matrix by symmetric elimination.
pub fn is_psd(h: &Matrix) -> bool {
    let n = h.nrows();
    let mut m = h.to_dense();
    let mut alive: Vec<usize> = (0..n).collect();
    while let Some(pos) = alive.iter().position(|&i| !m[i][i].is_zero()) {
        let p = alive.remove(pos);
        let piv = m[p][p].clone();
        if !piv.is_real() || piv.re.signum() < 0 {
            return false;
        }
        let inv = piv.inv();
        for &r in &alive {
            let f = &m[r][p] * &inv;
            if f.is_zero() {
                continue;
            }
            for &c in &alive {
                let t = &f * &m[p][c];
                m[r][c] = &m[r][c] - &t;
            }
        }
    }
    alive.iter().all(|&r| alive.iter().all(|&c| m[r][c].is_zero()))
}

/// Checks `h(ma, nb) = a* h(m, n) b`, `h(n, m) = h(m, n)*`, positivity and
/// `d h(m, n) = h(nabla m, n) + h(m, nabla n)` for a right connection.
pub fn hermitian_checks(
    a: &FiniteAlgebra,
    conn: &RightConnection,
    h: &Hermitian,
    matrix_size: Option<usize>,
) -> Result<HermitianReport> {
    if a.star_matrix().is_none() {
        return Err(NcError::input("hermitian structures need a *-algebra"));
    }
    let g = &conn.gda;
    if g.star_matrices().is_none() {
        return Err(NcError::input("calculus has no involution"));
    }
    let dm = conn.module.dim();
    let da = a.dim();
    let star = |x: &SparseVec| a.star(x).expect("star algebra");
    let mut r = HermitianReport { sesquilinear: true, hermitian_symmetric: true, compatible: true, positive: None };
    for m in 0..dm {
        for n in 0..dm {
            let (em, en) = (SparseVec::unit(m), SparseVec::unit(n));
            let hmn = h.eval(&em, &en);
            r.hermitian_symmetric &= h.eval(&en, &em) == star(&hmn);
            for x in 0..da {
                for y in 0..da {
                    let (ex, ey) = (SparseVec::unit(x), SparseVec::unit(y));
                    let lhs = h.eval(&conn.module.right_act(&ex).apply(&em), &conn.module.right_act(&ey).apply(&en));
                    r.sesquilinear &= lhs == a.product(&a.product(&star(&ex), &hmn), &ey);
                }
            }
        }
    }
    if let Some(k) = matrix_size {
        let to_m = |v: &SparseVec| crate::algebra::finite::unvec(v, k);
        r.positive = Some((0..dm).all(|m| {
            let e = SparseVec::unit(m);
            let hm = to_m(&h.eval(&e, &e));
            !hm.is_zero() && hm.conj_transpose() == hm && is_psd(&hm)
        }));
    }
    let d0 = g.d(0).expect("d on degree 0");
    let p01 = g.product_table(0, 1).expect("degree 1 products");
    let p10 = g.product_table(1, 0).expect("degree 1 products");
    let dw = conn.omega1.dim();
    let lifted: Vec<SparseVec> = (0..dm).map(|m| conn.tensor.section().apply(&conn.nabla.col(m))).collect();
    for m in 0..dm {
        for n in 0..dm {
            let (em, en) = (SparseVec::unit(m), SparseVec::unit(n));
            let mut rhs = SparseVec::new();
            for (idx, c) in lifted[m].iter() {
                let (k, w) = (idx / dw, idx % dw);
                let ws = g.star(1, &SparseVec::unit(w)).expect("involution");
                rhs = rhs.axpy(&c.conj(), &p10.apply(&ws, &h.eval(&SparseVec::unit(k), &en)));
            }
            for (idx, c) in lifted[n].iter() {
                let (k, w) = (idx / dw, idx % dw);
                rhs = rhs.axpy(c, &p01.apply(&h.eval(&em, &SparseVec::unit(k)), &SparseVec::unit(w)));
            }
            r.compatible &= d0.apply(&h.eval(&em, &en)) == rhs;
        }
    }
    Ok(r)
}

/// `(A, A)`-bimodule connection data `nabla_X` per derivation basis element.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct DerivationConnectionReport {
    pub z_linear: bool,
    pub leibniz: bool,
    pub curvature_bimodule_linear: bool,
    pub flat: bool,
    pub real: Option<bool>,
}

/// Checks `nabla_{zX} = z nabla_X` and `nabla_X(amb) = a nabla_X(m) b + X(a) m b + a m X(b)`,
/// and the curvature `[nabla_X, nabla_Y] - nabla_[X,Y]`. `star` is `m* = S conj(m)` on `M`.
pub fn derivation_connection_check(
    a: &FiniteAlgebra,
    module: &Bimodule,
    family: &[Matrix],
    star: Option<&Matrix>,
) -> Result<DerivationConnectionReport> {
    if !crate::calculi::is_central(a, module) {
        return Err(NcError::input("module is not central"));
    }
    let (der, lie) = crate::calculi::derivation_lie(a)?;
    if family.len() != der.len() || family.iter().any(|f| f.nrows() != module.dim() || f.ncols() != module.dim()) {
        return Err(NcError::input(format!("need {} operators on M", der.len())));
    }
    let da = a.dim();
    let dm = module.dim();
    let der_mat = Matrix::from_cols(da * da, &der.iter().map(crate::algebra::finite::vec_matrix).collect::<Vec<_>>());
    let combine = |c: &SparseVec| c.iter().fold(Matrix::zeros(dm, dm), |acc, (j, v)| acc.axpy(v, &family[j]));
    let mut r = DerivationConnectionReport { z_linear: true, leibniz: true, curvature_bimodule_linear: true, flat: true, real: None };
    for z in crate::algebra::finite::center(a).basis() {
        let lz = a.left_mult(z);
        for (j, x) in der.iter().enumerate() {
            let zx = lz.mul(x);
            match der_mat.solve(&crate::algebra::finite::vec_matrix(&zx)) {
                Some(c) => r.z_linear &= combine(&c) == module.left_act(z).mul(&family[j]),
                None => r.z_linear = false,
            }
        }
    }
    for (j, x) in der.iter().enumerate() {
        for p in 0..da {
            let lp = &module.left_actions()[p];
            let xp = x.col(p);
            for q in 0..da {
                let rq = &module.right_actions()[q];
                let lhs = family[j].mul(lp).mul(rq);
                let rhs = lp
                    .mul(rq)
                    .mul(&family[j])
                    .add(&module.left_act(&xp).mul(rq))
                    .add(&lp.mul(&module.right_act(&x.col(q))));
                r.leibniz &= lhs == rhs;
            }
        }
    }
    for k in 0..der.len() {
        for l in 0..der.len() {
            let curv = family[k].commutator(&family[l]).sub(&combine(&lie.basis_bracket(k, l)));
            r.flat &= curv.is_zero();
            r.curvature_bimodule_linear &= module.left_actions().iter().all(|x| curv.mul(x) == x.mul(&curv))
                && module.right_actions().iter().all(|x| curv.mul(x) == x.mul(&curv));
        }
    }
    if let (Some(s), Some(sa)) = (star, a.star_matrix()) {
        // X* = S_A conj(X) conj(S_A); hermitian parts X + X* and i(X - X*) are real derivations
        let mut ok = true;
        for x in &der {
            let xs = sa.mul(&x.conj()).mul(&sa.conj());
            for y in [x.add(&xs), x.sub(&xs).scale(&Scalar::i())] {
                let c = der_mat.solve(&crate::algebra::finite::vec_matrix(&y)).ok_or_else(|| NcError::property("Der", "not closed under *"))?;
                let ny = combine(&c);
                ok &= ny.mul(s) == s.mul(&ny.conj());
            }
        }
        r.real = Some(ok);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::finite::matrix_algebra;
    use crate::calculi::{derivation_lie, DerCalculus};

    #[test]
    fn free_module_is_flat() {
        let a = matrix_algebra(2).unwrap();
        let calc = DerCalculus::new(&a, 2).unwrap();
        let s = LeftSetting::new(calc.full(), &Bimodule::regular(&a)).unwrap();
        let nabla = s.free_trivial(1).unwrap();
        let r = curvature_report(&s, &nabla).unwrap();
        assert!(r.leibniz_ok && r.flat && r.is_module_map);
        assert!(bimodule_sigma(&s, &nabla).unwrap().is_some());
    }

    #[test]
    fn broken_leibniz_is_reported() {
        let a = matrix_algebra(2).unwrap();
        let calc = DerCalculus::new(&a, 2).unwrap();
        let s = LeftSetting::new(calc.full(), &Bimodule::regular(&a)).unwrap();
        let r = curvature_report(&s, &s.free_trivial(1).unwrap().scale(&Scalar::int(2))).unwrap();
        assert!(!r.leibniz_ok && r.leibniz_failures > 0);
    }

    #[test]
    fn derivations_act_on_the_algebra() {
        let a = matrix_algebra(2).unwrap();
        let (der, _) = derivation_lie(&a).unwrap();
        let star = a.star_matrix().cloned();
        let r = derivation_connection_check(&a, &Bimodule::regular(&a), &der, star.as_ref()).unwrap();
        assert_eq!(
            r,
            DerivationConnectionReport { z_linear: true, leibniz: true, curvature_bimodule_linear: true, flat: true, real: Some(true) }
        );
        // adding a bimodule map keeps Leibniz, adding left multiplication breaks it
        let shifted: Vec<Matrix> = der.iter().map(|x| x.add(&Matrix::identity(4))).collect();
        assert!(derivation_connection_check(&a, &Bimodule::regular(&a), &shifted, None).unwrap().leibniz);
        let shifted: Vec<Matrix> = der.iter().map(|x| x.add(&a.left_mult(&SparseVec::unit(1)))).collect();
        assert!(!derivation_connection_check(&a, &Bimodule::regular(&a), &shifted, None).unwrap().leibniz);
    }

    #[test]
    fn opposite_algebra_reverses_products() {
        let a = matrix_algebra(2).unwrap();
        let op = opposite_algebra(&a);
        let (x, y) = (SparseVec::unit(1), SparseVec::unit(2));
        assert_eq!(op.product(&x, &y), a.product(&y, &x));
    }
}
