//! First-order operators between `(A, B)`-bimodules and their universal symbols
//! `sigma_L(D)` on `Omega^1_u(A) (x)_A M` and `sigma_R(D)` on `M (x)_B Omega^1_u(B)`.

use rand::Rng;
use serde::Serialize;

use crate::algebra::bimodule::{tensor_over, Bimodule};
use crate::algebra::finite::{invert, matrix_algebra, truncated_poly, FiniteAlgebra};
use crate::calculi::omega1_u;
use crate::error::{NcError, Result};
use crate::linalg::{Matrix, Scalar, SparseVec, Subspace};

#[derive(Clone, Debug, Serialize)]
pub struct FirstOrderReport {
    pub is_first_order: bool,
    /// Basis pairs `(a, b)` with `[[D, l_a], r_b] != 0`.
    pub failing_pairs: usize,
    #[serde(skip)]
    pub sigma_l: Option<Matrix>,
    #[serde(skip)]
    pub sigma_r: Option<Matrix>,
    pub sigma_bimodule_maps: bool,
    pub residual_zero: bool,
}

fn check_shapes(a: &FiniteAlgebra, b: &FiniteAlgebra, m: &Bimodule, n: &Bimodule, d: &Matrix) -> Result<()> {
    for (x, name) in [(m, "M"), (n, "N")] {
        if x.left_actions().len() != a.dim() || x.right_actions().len() != b.dim() {
            return Err(NcError::input(format!("{name} is not an (A, B)-bimodule")));
        }
    }
    if d.nrows() != n.dim() || d.ncols() != m.dim() {
        return Err(NcError::input("D has the wrong shape"));
    }
    Ok(())
}

/// `[[D, l_a], r_b] = D l_a r_b - l_a D r_b - r_b D l_a + r_b l_a D`.
fn double_commutator(m: &Bimodule, n: &Bimodule, d: &Matrix, a: usize, b: usize) -> Matrix {
    let (lm, rm) = (&m.left_actions()[a], &m.right_actions()[b]);
    let (ln, rn) = (&n.left_actions()[a], &n.right_actions()[b]);
    d.mul(lm).mul(rm).sub(&ln.mul(d).mul(rm)).sub(&rn.mul(d).mul(lm)).add(&rn.mul(ln).mul(d))
}

/// First-order operators `M -> N`, as row-major vectorized matrices.
pub fn first_order_space(m: &Bimodule, n: &Bimodule) -> Subspace {
    let (dm, dn) = (m.dim(), n.dim());
    let id_m = Matrix::identity(dm);
    let id_n = Matrix::identity(dn);
    // vec(P D Q) = (P (x) Q^T) vec(D) for row-major vec
    let mut blocks = Vec::new();
    for (lm, ln) in m.left_actions().iter().zip(n.left_actions()) {
        for (rm, rn) in m.right_actions().iter().zip(n.right_actions()) {
            let t = id_n
                .kron(&lm.mul(rm).transpose())
                .sub(&ln.kron(&rm.transpose()))
                .sub(&rn.kron(&lm.transpose()))
                .add(&rn.mul(ln).kron(&id_m));
            blocks.push(t);
        }
    }
    let refs: Vec<&Matrix> = blocks.iter().collect();
    if refs.is_empty() {
        return Subspace::full(dm * dn);
    }
    Subspace::kernel_of(&Matrix::vstack(&refs))
}

/// The map on the span of `classes` sending each class to the matching value; `None` if inconsistent.
fn solve_on_spanning(classes: &[SparseVec], values: &[SparseVec], src: usize, dst: usize) -> Option<Matrix> {
    let c = Matrix::from_cols(src, classes);
    let v = Matrix::from_cols(dst, values);
    let rows = c.transpose().solve_many(&v.rows_iter().cloned().collect::<Vec<_>>())?;
    let sigma = Matrix::from_rows(src, rows);
    (sigma.mul(&c) == v).then_some(sigma)
}

pub fn first_order_symbols(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    m: &Bimodule,
    n: &Bimodule,
    d: &Matrix,
) -> Result<FirstOrderReport> {
    check_shapes(a, b, m, n, d)?;
    let failing_pairs = (0..a.dim())
        .flat_map(|x| (0..b.dim()).map(move |y| (x, y)))
        .filter(|&(x, y)| !double_commutator(m, n, d, x, y).is_zero())
        .count();
    let mut report = FirstOrderReport {
        is_first_order: failing_pairs == 0,
        failing_pairs,
        sigma_l: None,
        sigma_r: None,
        sigma_bimodule_maps: false,
        residual_zero: false,
    };
    if !report.is_first_order {
        return Ok(report);
    }
    let (ua, ub) = (omega1_u(a)?, omega1_u(b)?);
    let tl = tensor_over(&ua.module, m)?;
    let tr = tensor_over(m, &ub.module)?;

    // sigma_L(x d(y) (x) e) = x (D(y e) - y D(e))
    let (mut cl, mut vl) = (Vec::new(), Vec::new());
    for y in 0..a.dim() {
        let dy = ua.d.col(y);
        let base = d.mul(&m.left_actions()[y]).sub(&n.left_actions()[y].mul(d));
        for x in 0..a.dim() {
            let w = ua.module.left_actions()[x].apply(&dy);
            let lx = n.left_actions()[x].mul(&base);
            for e in 0..m.dim() {
                cl.push(tl.class_of(&w, &SparseVec::unit(e)));
                vl.push(lx.col(e));
            }
        }
    }
    // sigma_R(e (x) d(y) x) = (D(e y) - D(e) y) x
    let (mut cr, mut vr) = (Vec::new(), Vec::new());
    for y in 0..b.dim() {
        let dy = ub.d.col(y);
        let base = d.mul(&m.right_actions()[y]).sub(&n.right_actions()[y].mul(d));
        for x in 0..b.dim() {
            let w = ub.module.right_actions()[x].apply(&dy);
            let rx = n.right_actions()[x].mul(&base);
            for e in 0..m.dim() {
                cr.push(tr.class_of(&SparseVec::unit(e), &w));
                vr.push(rx.col(e));
            }
        }
    }
    let spans = Matrix::from_cols(tl.dim(), &cl).rank() == tl.dim() && Matrix::from_cols(tr.dim(), &cr).rank() == tr.dim();
    let sl = solve_on_spanning(&cl, &vl, tl.dim(), n.dim());
    let sr = solve_on_spanning(&cr, &vr, tr.dim(), n.dim());
    let (Some(sl), Some(sr)) = (sl, sr) else {
        return Ok(report);
    };
    let is_map = |s: &Matrix, t: &Bimodule| {
        t.left_actions().iter().zip(n.left_actions()).all(|(x, y)| s.mul(x) == y.mul(s))
            && t.right_actions().iter().zip(n.right_actions()).all(|(x, y)| s.mul(x) == y.mul(s))
    };
    report.sigma_bimodule_maps = spans && is_map(&sl, &tl.module) && is_map(&sr, &tr.module);

    // D(x e y) = x D(e) y + sigma_L(d_u x (x) e) y + x sigma_R(e (x) d_u y)
    let mut ok = true;
    for x in 0..a.dim() {
        let (lmx, lnx) = (&m.left_actions()[x], &n.left_actions()[x]);
        for y in 0..b.dim() {
            let (rmy, rny) = (&m.right_actions()[y], &n.right_actions()[y]);
            let lhs = d.mul(lmx).mul(rmy);
            for e in 0..m.dim() {
                let ee = SparseVec::unit(e);
                let mut rhs = lnx.mul(&rny.mul(d)).col(e);
                rhs = rhs.add(&rny.apply(&sl.apply(&tl.class_of(&ua.d.col(x), &ee))));
                rhs = rhs.add(&lnx.apply(&sr.apply(&tr.class_of(&ee, &ub.d.col(y)))));
                ok &= lhs.col(e) == rhs;
            }
        }
    }
    report.residual_zero = ok;
    report.sigma_l = Some(sl);
    report.sigma_r = Some(sr);
    Ok(report)
}

/// The two test algebras for random bimodules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmallAlgebra {
    M2,
    DualNumbers,
}

impl SmallAlgebra {
    pub fn algebra(self) -> FiniteAlgebra {
        match self {
            SmallAlgebra::M2 => matrix_algebra(2).expect("M_2"),
            SmallAlgebra::DualNumbers => truncated_poly(2).expect("C[x]/(x^2)"),
        }
    }

    /// Dimensions admitting a representation.
    pub fn allows(self, dim: usize) -> bool {
        dim > 0 && (self == SmallAlgebra::DualNumbers || dim % 2 == 0)
    }

    /// A representation `rho(e_i)` of dimension `dim`, conjugated by a random invertible matrix.
    pub fn random_rep(self, rng: &mut impl Rng, dim: usize) -> Vec<Matrix> {
        assert!(self.allows(dim));
        let p = random_invertible(rng, dim);
        let pinv = invert(&p).expect("invertible");
        let conj = |m: Matrix| p.mul(&m).mul(&pinv);
        match self {
            SmallAlgebra::M2 => (0..4)
                .map(|x| {
                    let (r, c) = (x / 2, x % 2);
                    let blocks = dim / 2;
                    conj(Matrix::from_triplets(dim, dim, (0..blocks).map(|k| (2 * k + r, 2 * k + c, Scalar::one())).collect()))
                })
                .collect(),
            SmallAlgebra::DualNumbers => {
                let jordan = rng.gen_range(0..=dim / 2);
                let x = Matrix::from_triplets(dim, dim, (0..jordan).map(|k| (2 * k, 2 * k + 1, Scalar::one())).collect());
                vec![Matrix::identity(dim), conj(x)]
            }
        }
    }
}

pub fn random_invertible(rng: &mut impl Rng, dim: usize) -> Matrix {
    loop {
        let e: Vec<Scalar> = (0..dim * dim).map(|_| Scalar::gaussian(rng.gen_range(-2..=2), rng.gen_range(-1..=1))).collect();
        let m = Matrix::from_fn(dim, dim, |r, c| e[r * dim + c].clone());
        if m.rank() == dim {
            return m;
        }
    }
}

/// `C^p (x) C^q` with `A` acting by `rho_A (x) 1` and `B` by `1 (x) rho_B^T`.
pub fn rep_bimodule(left: &[Matrix], right: &[Matrix]) -> Result<Bimodule> {
    let p = left.first().map(Matrix::nrows).unwrap_or(0);
    let q = right.first().map(Matrix::nrows).unwrap_or(0);
    let (ip, iq) = (Matrix::identity(p), Matrix::identity(q));
    Bimodule::new(p * q, left.iter().map(|l| l.kron(&iq)).collect(), right.iter().map(|r| ip.kron(&r.transpose())).collect())
}

/// Random `(A, B)`-bimodule of dimension `2..=4`.
pub fn random_bimodule(rng: &mut impl Rng, a: SmallAlgebra, b: SmallAlgebra) -> Result<Bimodule> {
    let shapes: Vec<(usize, usize)> =
        (1..=4).flat_map(|p| (1..=4).map(move |q| (p, q))).filter(|&(p, q)| (2..=4).contains(&(p * q)) && a.allows(p) && b.allows(q)).collect();
    let (p, q) = shapes[rng.gen_range(0..shapes.len())];
    rep_bimodule(&a.random_rep(rng, p), &b.random_rep(rng, q))
}

/// Random element of the first-order space, or `None` if it is zero.
pub fn random_first_order(rng: &mut impl Rng, m: &Bimodule, n: &Bimodule) -> Option<Matrix> {
    let space = first_order_space(m, n);
    if space.dim() == 0 {
        return None;
    }
    let c = SparseVec::from_entries((0..space.dim()).map(|i| (i, Scalar::int(rng.gen_range(-2..=2)))).collect());
    let v = space.from_coords(&c);
    (!v.is_zero()).then(|| Matrix::from_triplets(n.dim(), m.dim(), v.iter().map(|(t, x)| (t / m.dim(), t % m.dim(), x.clone())).collect()))
}

/// Random map `M -> N` outside the first-order space, or `None` if every map is first order.
pub fn random_non_first_order(rng: &mut impl Rng, m: &Bimodule, n: &Bimodule) -> Option<Matrix> {
    let space = first_order_space(m, n);
    if space.dim() == m.dim() * n.dim() {
        return None;
    }
    loop {
        let e: Vec<Scalar> =
            (0..n.dim() * m.dim()).map(|_| Scalar::gaussian(rng.gen_range(-2..=2), rng.gen_range(-2..=2))).collect();
        let d = Matrix::from_fn(n.dim(), m.dim(), |r, c| e[r * m.dim() + c].clone());
        if !space.contains(&crate::algebra::finite::vec_matrix(&d)) {
            return Some(d);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn module_maps_are_first_order() {
        let a = matrix_algebra(2).unwrap();
        let m = crate::algebra::bimodule::Bimodule::regular(&a);
        // right multiplication by e_12 commutes with the left action only
        let d = a.right_mult(&SparseVec::unit(1));
        let r = first_order_symbols(&a, &a, &m, &m, &d).unwrap();
        assert!(r.is_first_order && r.residual_zero && r.sigma_bimodule_maps, "{r:?}");
        assert!(r.sigma_l.unwrap().is_zero());
    }

    #[test]
    fn two_sided_multiplication_fails() {
        let a = matrix_algebra(2).unwrap();
        let m = crate::algebra::bimodule::Bimodule::regular(&a);
        let (x, y) = (SparseVec::unit(1), SparseVec::unit(2));
        // m -> x x' m is left multiplication by x x', hence first order
        let quad = a.left_mult(&x).mul(&a.left_mult(&y));
        assert!(first_order_symbols(&a, &a, &m, &m, &quad).unwrap().is_first_order);
        // m -> x m y has [[D, l_a], r_b] m = [x, a] m [b, y]
        let d = a.left_mult(&x).mul(&a.right_mult(&y));
        let r = first_order_symbols(&a, &a, &m, &m, &d).unwrap();
        assert!(!r.is_first_order && r.failing_pairs > 0 && r.sigma_l.is_none());
    }

    #[test]
    fn random_operators() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let kinds = [SmallAlgebra::M2, SmallAlgebra::DualNumbers];
        let mut checked = 0;
        while checked < 6 {
            let (ka, kb) = (kinds[rng.gen_range(0..2)], kinds[rng.gen_range(0..2)]);
            let (m, n) = (random_bimodule(&mut rng, ka, kb).unwrap(), random_bimodule(&mut rng, ka, kb).unwrap());
            let (a, b) = (ka.algebra(), kb.algebra());
            let (Some(d), Some(bad)) = (random_first_order(&mut rng, &m, &n), random_non_first_order(&mut rng, &m, &n)) else {
                continue;
            };
            let r = first_order_symbols(&a, &b, &m, &n, &d).unwrap();
            assert!(r.is_first_order && r.residual_zero && r.sigma_bimodule_maps);
            assert!(!first_order_symbols(&a, &b, &m, &n, &bad).unwrap().is_first_order);
            checked += 1;
        }
    }
}
