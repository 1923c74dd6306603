//! The symplectic form `omega(ad(ix), ad(iy)) = i[x, y]` on `Der(M_n)` and its Poisson bracket.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::presentation::ad_i;
use crate::algebra::finite::{center, matrix_algebra, unvec, vec_matrix, FiniteAlgebra};
use crate::calculi::DerCalculus;
use crate::error::{NcError, Result};
use crate::linalg::{Matrix, Scalar, SparseVec};

#[derive(Clone, Debug)]
pub struct Symplectic {
    n: usize,
    calc: DerCalculus,
    /// Traceless `x_j` with `ad(i x_j)` the `j`-th derivation basis element.
    potentials: Vec<Matrix>,
    omega: SparseVec,
    theta: SparseVec,
    /// `omega(X_k, X_l)` stacked as rows `k * dim A + r`, columns `l`.
    pairing: Matrix,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct SymplecticReport {
    pub n: usize,
    pub der_dim: usize,
    pub well_defined: bool,
    pub closed: bool,
    pub z_multilinear: bool,
    pub nondegenerate: bool,
    pub ham_is_ad: bool,
    pub poisson_is_commutator: bool,
    pub jacobi: bool,
    pub ham_lie_hom: bool,
    pub exact: bool,
    pub real: bool,
    pub failures: Vec<String>,
}

impl SymplecticReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn commutator_i(x: &Matrix, y: &Matrix) -> Matrix {
    x.commutator(y).scale(&Scalar::i())
}

impl Symplectic {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(NcError::input("Der(M_n) vanishes for n < 2"));
        }
        let a = matrix_algebra(n)?;
        let calc = DerCalculus::new(&a, 2)?;
        let da = a.dim();
        let ads: Vec<SparseVec> = (0..da).map(|e| vec_matrix(&ad_i(&a, &unvec(&SparseVec::unit(e), n)))).collect();
        let ads = Matrix::from_cols(da * da, &ads);
        let shift = Scalar::frac(1, n as i64);
        let potentials: Vec<Matrix> = calc
            .derivations()
            .iter()
            .map(|x| {
                let v = ads.solve(&vec_matrix(x)).ok_or_else(|| NcError::property("symplectic", "derivation is not inner"))?;
                let m = unvec(&v, n);
                Ok(m.sub(&Matrix::scalar_identity(n, &(&m.trace() * &shift))))
            })
            .collect::<Result<_>>()?;
        let gd = potentials.len();
        let subsets = crate::algebra::lie::Subsets::new(gd, 2);
        let mut omega = Vec::new();
        for (idx, s) in subsets.list.iter().enumerate() {
            for (r, v) in vec_matrix(&commutator_i(&potentials[s[0]], &potentials[s[1]])).iter() {
                omega.push((idx * da + r, v.clone()));
            }
        }
        let omega = SparseVec::from_entries(omega);
        let theta = SparseVec::from_entries(
            potentials.iter().enumerate().flat_map(|(j, x)| vec_matrix(x).into_entries().into_iter().map(move |(r, v)| (j * da + r, v))).collect(),
        );
        let mut trip = Vec::new();
        for k in 0..gd {
            for l in 0..gd {
                let v = calc.eval(&omega, &[SparseVec::unit(k), SparseVec::unit(l)]);
                trip.extend(v.iter().map(|(r, c)| (k * da + r, l, c.clone())));
            }
        }
        let pairing = Matrix::from_triplets(gd * da, gd, trip);
        Ok(Symplectic { n, calc, potentials, omega, theta, pairing })
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        self.calc.algebra()
    }

    pub fn calculus(&self) -> &DerCalculus {
        &self.calc
    }

    /// `omega` as a full 2-cochain.
    pub fn omega(&self) -> &SparseVec {
        &self.omega
    }

    /// Coordinates of `Ham(x)`, the solution of `omega(X, Ham(x)) = X(x)` for all `X`.
    pub fn ham_coords(&self, x: &Matrix) -> Result<SparseVec> {
        let v = vec_matrix(x);
        let da = self.algebra().dim();
        let mut rhs = Vec::new();
        for (k, d) in self.calc.derivations().iter().enumerate() {
            rhs.extend(d.apply(&v).into_entries().into_iter().map(|(r, c)| (k * da + r, c)));
        }
        self.pairing
            .solve(&SparseVec::from_entries(rhs))
            .ok_or_else(|| NcError::property("nondegenerate", "omega(X, H) = X(x) has no solution"))
    }

    /// `Ham(x)` as an operator on `M_n`.
    pub fn ham(&self, x: &Matrix) -> Result<Matrix> {
        let h = self.ham_coords(x)?;
        let da = self.algebra().dim();
        Ok(h.iter().fold(Matrix::zeros(da, da), |acc, (j, c)| acc.axpy(c, &self.calc.derivations()[j])))
    }

    /// `{x, y} = omega(Ham(x), Ham(y))`.
    pub fn poisson(&self, x: &Matrix, y: &Matrix) -> Result<Matrix> {
        let (hx, hy) = (self.ham_coords(x)?, self.ham_coords(y)?);
        Ok(unvec(&self.calc.eval(&self.omega, &[hx, hy]), self.n))
    }

    pub fn report(&self) -> Result<SymplecticReport> {
        let n = self.n;
        let a = self.algebra();
        let full = self.calc.full();
        let mut r = SymplecticReport { n, der_dim: self.potentials.len(), ..Default::default() };
        let z = center(a);
        let ker = crate::linalg::Subspace::kernel_of(&Matrix::from_cols(
            a.dim() * a.dim(),
            &(0..a.dim()).map(|e| vec_matrix(&ad_i(a, &unvec(&SparseVec::unit(e), n)))).collect::<Vec<_>>(),
        ));
        let wd = ker == z
            && z.basis().iter().all(|c| self.potentials.iter().all(|x| commutator_i(&unvec(c, n), x).is_zero()));
        let basis: Vec<Matrix> = (0..a.dim()).map(|e| unvec(&SparseVec::unit(e), n)).collect();

        let d2 = full.d(2).ok_or_else(|| NcError::property("symplectic", "missing d on degree 2"))?;
        let domega = d2.apply(&self.omega);
        let closed = domega.is_zero();
        let zml = self.calc.underline(2).contains(&self.omega);

        let hams: Vec<Option<SparseVec>> = basis.iter().map(|x| self.ham_coords(x).ok()).collect();
        let nondeg = hams.iter().all(Option::is_some) && self.pairing.rank() == self.potentials.len();
        let mut ham_is_ad = true;
        let mut poisson = true;
        let mut jacobi = true;
        let mut lie_hom = true;
        if nondeg {
            let hams: Vec<SparseVec> = hams.into_iter().map(Option::unwrap).collect();
            let hmat: Vec<Matrix> = basis.iter().map(|x| self.ham(x)).collect::<Result<_>>()?;
            let br = |i: usize, j: usize| unvec(&self.calc.eval(&self.omega, &[hams[i].clone(), hams[j].clone()]), n);
            for (i, x) in basis.iter().enumerate() {
                ham_is_ad &= hmat[i] == ad_i(a, x);
                for (j, y) in basis.iter().enumerate() {
                    let b = br(i, j);
                    poisson &= b == commutator_i(x, y);
                    lie_hom &= hmat[i].commutator(&hmat[j]) == self.ham(&b)?;
                }
            }
            for i in 0..basis.len() {
                for j in i + 1..basis.len() {
                    for k in j + 1..basis.len() {
                        let lhs = unvec(&self.calc.eval(&domega, &[hams[i].clone(), hams[j].clone(), hams[k].clone()]), n);
                        let cyc = [(i, j, k), (j, k, i), (k, i, j)]
                            .iter()
                            .try_fold(Matrix::zeros(n, n), |acc, &(p, q, s)| {
                                Ok::<_, NcError>(acc.add(&self.poisson(&basis[p], &br(q, s))?))
                            })?;
                        jacobi &= lhs == cyc.neg() && lhs.is_zero();
                    }
                }
            }
        }
        let exact = full.d(1).map(|d1| d1.apply(&self.theta) == self.omega).unwrap_or(false);
        let real = full.star(2, &self.omega).map(|s| s == self.omega).unwrap_or(false);

        let checks = [
            (wd, "omega depends on the choice of potentials modulo the center"),
            (closed, "d omega != 0"),
            (zml, "omega is not Z(A)-multilinear"),
            (nondeg, "Ham(x) not uniquely solvable"),
            (ham_is_ad, "Ham(x) != ad(ix)"),
            (poisson, "{x, y} != i[x, y]"),
            (jacobi, "Jacobi identity fails"),
            (lie_hom, "[Ham x, Ham y] != Ham {x, y}"),
            (exact, "omega != d theta"),
            (real, "omega* != omega"),
        ];
        r.failures = checks.iter().filter(|(ok, _)| !ok).map(|(_, what)| what.to_string()).collect();
        (r.well_defined, r.closed, r.z_multilinear, r.nondegenerate, r.ham_is_ad) = (wd, closed, zml, nondeg, ham_is_ad);
        (r.poisson_is_commutator, r.jacobi, r.ham_lie_hom, r.exact, r.real) = (poisson, jacobi, lie_hom, exact, real);
        Ok(r)
    }

    /// `[a, b]{c, d} = {a, b}[c, d]` on random quadruples with small Gaussian-integer entries.
    pub fn poisson_identity_check(&self, samples: usize, seed: u64) -> Result<bool> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.n;
        for _ in 0..samples {
            let [a, b, c, d] = [(); 4].map(|_| random_matrix(&mut rng, n));
            let lhs = a.commutator(&b).mul(&self.poisson(&c, &d)?);
            let rhs = self.poisson(&a, &b)?.mul(&c.commutator(&d));
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `n x n` matrix with Gaussian-integer entries in `[-3, 3] + i[-3, 3]`.
pub fn random_matrix(rng: &mut impl Rng, n: usize) -> Matrix {
    let entries: Vec<Vec<Scalar>> =
        (0..n).map(|_| (0..n).map(|_| Scalar::gaussian(rng.gen_range(-3..=3), rng.gen_range(-3..=3))).collect()).collect();
    Matrix::from_dense(entries)
}

pub fn symplectic_mn(n: usize) -> Result<SymplecticReport> {
    Symplectic::new(n)?.report()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m2_structure() {
        let s = Symplectic::new(2).unwrap();
        let r = s.report().unwrap();
        assert!(r.ok(), "{:?}", r.failures);
        assert_eq!(r.der_dim, 3);
        assert!(s.poisson_identity_check(10, 7).unwrap());
    }

    #[test]
    fn m3_structure() {
        let s = Symplectic::new(3).unwrap();
        let r = s.report().unwrap();
        assert!(r.ok(), "{:?}", r.failures);
        assert_eq!(r.der_dim, 8);
    }

    #[test]
    fn rejects_n1() {
        assert!(symplectic_mn(1).unwrap_err().is_input());
    }
}
