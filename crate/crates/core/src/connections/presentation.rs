//! `Omega_Der(M_n)` presented by a hermitian traceless basis `E_k` and the
//! dual forms `theta^k` with `theta^k(ad(i E_l)) = delta^k_l 1`.

use crate::algebra::finite::{ad, invert, matrix_algebra, unvec, vec_matrix, FiniteAlgebra};
use crate::calculi::DerCalculus;
use crate::error::{NcError, Result};
use crate::linalg::{Matrix, Scalar, SparseVec};

/// Pauli matrices `sigma_1, sigma_2, sigma_3`.
pub fn pauli_basis() -> Vec<Matrix> {
    let (z, o, i) = (Scalar::zero(), Scalar::one(), Scalar::i());
    vec![
        Matrix::from_dense(vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]]),
        Matrix::from_dense(vec![vec![z.clone(), -i.clone()], vec![i, z.clone()]]),
        Matrix::from_dense(vec![vec![o, z.clone()], vec![z, Scalar::int(-1)]]),
    ]
}

/// `ad(i x)` acting on `M_n` in the basis `e_ab`.
pub fn ad_i(a: &FiniteAlgebra, x: &Matrix) -> Matrix {
    ad(a, &vec_matrix(&x.scale(&Scalar::i())))
}

/// Levi-Civita symbol on `0..3`.
pub fn epsilon(k: usize, l: usize, m: usize) -> i64 {
    match (k, l, m) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

#[derive(Clone, Debug)]
pub struct MnPresentation {
    pub n: usize,
    pub basis: Vec<Matrix>,
    /// `g[k][l]`.
    pub g: Vec<Vec<Scalar>>,
    /// `s[k][l][m] = S^m_kl`.
    pub s: Vec<Vec<Vec<Scalar>>>,
    /// `c[k][l][m] = C^m_kl`.
    pub c: Vec<Vec<Vec<Scalar>>>,
    pub calculus: DerCalculus,
    /// `ad(i E_k)` in the coordinates of the derivation basis.
    pub partials: Vec<SparseVec>,
    /// `theta^k` as full 1-cochains.
    pub theta: Vec<SparseVec>,
    /// `theta = E_k theta^k`.
    pub theta_form: SparseVec,
}

fn check(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(NcError::property("presentation", what.to_string()))
    }
}

pub fn mn_presentation(n: usize, basis: &[Matrix]) -> Result<MnPresentation> {
    if n < 2 {
        return Err(NcError::input("need n >= 2"));
    }
    let dim = n * n - 1;
    if basis.len() != dim {
        return Err(NcError::input(format!("expected {dim} basis matrices")));
    }
    let nn = Scalar::int(n as i64);
    let inv_n = nn.inv();
    for (k, e) in basis.iter().enumerate() {
        if e.nrows() != n || e.ncols() != n {
            return Err(NcError::input(format!("E_{k} is not {n}x{n}")));
        }
        if e.conj_transpose() != *e || !e.trace().is_zero() {
            return Err(NcError::input(format!("E_{k} is not hermitian and traceless")));
        }
        for (l, f) in basis.iter().enumerate() {
            let want = if k == l { nn.clone() } else { Scalar::zero() };
            if e.mul(f).trace() != want {
                return Err(NcError::input(format!("tr(E_{k} E_{l}) is not n delta")));
            }
        }
    }
    let half = Scalar::frac(1, 2);
    let mut g = vec![vec![Scalar::zero(); dim]; dim];
    let mut s = vec![vec![vec![Scalar::zero(); dim]; dim]; dim];
    let mut c = vec![vec![vec![Scalar::zero(); dim]; dim]; dim];
    for k in 0..dim {
        for l in 0..dim {
            let p = basis[k].mul(&basis[l]);
            g[k][l] = &p.trace() * &inv_n;
            let mut rebuilt = Matrix::scalar_identity(n, &g[k][l]);
            for m in 0..dim {
                let t = &basis[m].mul(&p).trace() * &inv_n;
                s[k][l][m] = &(&t + &t.conj()) * &half;
                c[k][l][m] = &Scalar::i() * &(&t - &t.conj());
                rebuilt = rebuilt.axpy(&t, &basis[m]);
            }
            check(rebuilt == p, "E_k E_l is not g 1 + (S - i/2 C) E_m")?;
        }
    }

    let a = matrix_algebra(n)?;
    let calculus = DerCalculus::new(&a, 2)?;
    let partials: Vec<SparseVec> = basis
        .iter()
        .map(|e| calculus.der_coords(&ad_i(&a, e)).ok_or_else(|| NcError::property("presentation", "ad(iE) not in Der")))
        .collect::<Result<_>>()?;
    let p = Matrix::from_cols(dim, &partials);
    let pinv = invert(&p).ok_or_else(|| NcError::property("presentation", "ad(iE_k) is not a basis of Der"))?;
    let da = a.dim();
    let unit = a.unit_required()?.clone();
    let theta: Vec<SparseVec> = (0..dim)
        .map(|k| {
            let mut e = Vec::new();
            for (j, v) in pinv.row(k).iter() {
                for (b, u) in unit.iter() {
                    e.push((j * da + b, v * u));
                }
            }
            SparseVec::from_entries(e)
        })
        .collect();
    let full = calculus.full().clone();
    let p01 = full.product_table(0, 1).expect("degree 2 truncation");
    let p10 = full.product_table(1, 0).expect("degree 2 truncation");
    let p11 = full.product_table(1, 1).expect("degree 2 truncation");
    let ev: Vec<SparseVec> = basis.iter().map(vec_matrix).collect();
    let theta_form = (0..dim).fold(SparseVec::new(), |acc, k| acc.add(&p01.apply(&ev[k], &theta[k])));
    let pres = MnPresentation { n, basis: basis.to_vec(), g, s, c, calculus, partials, theta, theta_form };

    let (d0, d1) = (full.d(0).unwrap(), full.d(1).unwrap());
    for k in 0..dim {
        for l in 0..dim {
            let want = if k == l { unit.clone() } else { SparseVec::new() };
            check(pres.calculus.eval(&pres.theta[k], &[pres.partials[l].clone()]) == want, "theta^k(d_l) != delta")?;
            check(
                p11.apply(&pres.theta[k], &pres.theta[l]) == p11.apply(&pres.theta[l], &pres.theta[k]).neg(),
                "theta^k theta^l is not antisymmetric",
            )?;
            check(p01.apply(&ev[k], &pres.theta[l]) == p10.apply(&pres.theta[l], &ev[k]), "E_k theta^l != theta^l E_k")?;
        }
        let mut de = SparseVec::new();
        let mut dt = SparseVec::new();
        for l in 0..dim {
            for m in 0..dim {
                de = de.axpy(&-&pres.c[k][l][m], &p01.apply(&ev[m], &pres.theta[l]));
                let coef = -(&pres.c[l][m][k] * &half);
                dt = dt.axpy(&coef, &p11.apply(&pres.theta[l], &pres.theta[m]));
            }
        }
        check(d0.apply(&ev[k]) == de, "dE_k != -C E_m theta^l")?;
        check(d1.apply(&pres.theta[k]) == dt, "dtheta^k != -1/2 C theta theta")?;
    }
    for x in 0..pres.calculus.lie().dim() {
        let lie = pres.calculus.full_contraction(x, 2).mul(d1).add(&d0.mul(&pres.calculus.full_contraction(x, 1)));
        check(lie.apply(&pres.theta_form).is_zero(), "theta is not invariant")?;
    }
    let th = &pres.theta_form;
    for m in 0..da {
        let e = SparseVec::unit(m);
        let comm = p10.apply(th, &e).sub(&p01.apply(&e, th)).scale(&Scalar::i());
        check(d0.apply(&e) == comm, "dM != i[theta, M]")?;
    }
    let mi = th.scale(&-Scalar::i());
    check(d1.apply(&mi).add(&p11.apply(&mi, &mi)).is_zero(), "d(-i theta) + (-i theta)^2 != 0")?;
    Ok(pres)
}

impl MnPresentation {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        self.calculus.algebra()
    }

    /// `theta(ad(i x))` as an `n x n` matrix.
    pub fn theta_of(&self, x: &Matrix) -> Result<Matrix> {
        let y = self
            .calculus
            .der_coords(&ad_i(self.algebra(), x))
            .ok_or_else(|| NcError::input("ad(ix) is not a derivation"))?;
        Ok(unvec(&self.calculus.eval(&self.theta_form, &[y]), self.n))
    }

    /// `C^m_kl = lambda eps_klm`, if the structure constants have that form.
    pub fn su2_scale(&self) -> Option<Scalar> {
        if self.n != 2 {
            return None;
        }
        let lambda = self.c[0][1][2].clone();
        let ok = (0..3).all(|k| {
            (0..3).all(|l| (0..3).all(|m| self.c[k][l][m] == lambda.scale(&epsilon(k, l, m).into())))
        });
        (ok && !lambda.is_zero()).then_some(lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_constants() {
        let p = mn_presentation(2, &pauli_basis()).unwrap();
        for k in 0..3 {
            for l in 0..3 {
                assert_eq!(p.g[k][l], Scalar::int((k == l) as i64));
                for m in 0..3 {
                    assert!(p.s[k][l][m].is_zero());
                    assert_eq!(p.c[k][l][m], Scalar::int(-2 * epsilon(k, l, m)));
                }
            }
        }
        assert_eq!(p.su2_scale(), Some(Scalar::int(-2)));
    }

    #[test]
    fn theta_potential() {
        let p = mn_presentation(2, &pauli_basis()).unwrap();
        let x = Matrix::from_dense(vec![
            vec![Scalar::gaussian(3, 1), Scalar::gaussian(-2, 5)],
            vec![Scalar::frac(1, 3), Scalar::gaussian(0, -4)],
        ]);
        let shift = Matrix::scalar_identity(2, &(&x.trace() * &Scalar::frac(1, 2)));
        assert_eq!(p.theta_of(&x).unwrap(), x.sub(&shift));
    }

    #[test]
    fn rejects_unnormalized_basis() {
        let mut b = pauli_basis();
        b[0] = b[0].scale(&Scalar::int(2));
        assert!(mn_presentation(2, &b).unwrap_err().is_input());
    }
}
