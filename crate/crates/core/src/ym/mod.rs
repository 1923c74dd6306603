//! Floating-point matrix Yang-Mills potential `V = 1/4 sum_{k,l} tr(F_kl^* F_kl)` on
//! antihermitian `A_k` in `M_K`, with `F_kl = [A_k, A_l] - C^m_kl A_m`.

pub mod flow;
pub mod mass;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::connections::{mn_presentation, pauli_basis};
use crate::error::{NcError, Result};
use crate::linalg::Matrix;

pub use flow::{classify_vacuum, flow, flow_many, FlowConfig, FlowReport, VacuumLabel, YmCensus};
pub use mass::{mass_spectrum, MassSpectrum};

pub type CMatrix = DMatrix<Complex64>;

/// Structure constants `C^m_kl` of the derivation basis and the su(2) scale `lambda`.
#[derive(Clone, Debug, Serialize)]
pub struct YmModel {
    pub n: usize,
    pub dim: usize,
    /// `c[(k * dim + l) * dim + m] = C^m_kl`.
    pub c: Vec<f64>,
    pub lambda: f64,
}

impl YmModel {
    /// `n = 2` with the Pauli basis, constants taken from the exact presentation.
    pub fn pauli() -> Result<Self> {
        let pres = mn_presentation(2, &pauli_basis())?;
        let lambda = pres.su2_scale().ok_or_else(|| NcError::property("presentation", "not su(2) constants"))?;
        let dim = pres.dim();
        let mut c = Vec::with_capacity(dim * dim * dim);
        for k in 0..dim {
            for l in 0..dim {
                for m in 0..dim {
                    c.push(pres.c[k][l][m].to_c64().re);
                }
            }
        }
        Ok(YmModel { n: 2, dim, c, lambda: lambda.to_c64().re })
    }

    pub fn c(&self, k: usize, l: usize, m: usize) -> f64 {
        self.c[(k * self.dim + l) * self.dim + m]
    }
}

/// Antihermitian `A_k`, one per derivation basis element.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatConnection {
    pub k: usize,
    pub n: usize,
    pub a: Vec<CMatrix>,
    pub seed: u64,
}

/// `(X - X^*) / 2`.
pub fn antihermitian_part(x: &CMatrix) -> CMatrix {
    (x - x.adjoint()) * Complex64::new(0.5, 0.0)
}

impl FloatConnection {
    pub fn new(n: usize, a: Vec<CMatrix>) -> Result<Self> {
        let k = a.first().map(|m| m.nrows()).ok_or_else(|| NcError::input("need the matrices A_k"))?;
        if a.iter().any(|m| m.nrows() != k || m.ncols() != k) {
            return Err(NcError::input("A_k must be square of equal size"));
        }
        Ok(FloatConnection { k, n, a: a.iter().map(antihermitian_part).collect(), seed: 0 })
    }

    pub fn zero(k: usize, dim: usize) -> Self {
        FloatConnection { k, n: 2, a: vec![CMatrix::zeros(k, k); dim], seed: 0 }
    }

    /// Entries with real and imaginary parts uniform in `[-scale, scale]`, then projected.
    pub fn random(rng: &mut impl Rng, k: usize, dim: usize, scale: f64) -> Self {
        let a = (0..dim)
            .map(|_| {
                let x = CMatrix::from_fn(k, k, |_, _| Complex64::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale)));
                antihermitian_part(&x)
            })
            .collect();
        FloatConnection { k, n: 2, a, seed: 0 }
    }

    pub fn from_exact(a: &[Matrix]) -> Result<Self> {
        let cm = a
            .iter()
            .map(|m| CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m.get(r, c).to_c64()))
            .collect();
        FloatConnection::new(2, cm)
    }

    /// `max_k |A_k + A_k^*|`.
    pub fn antihermitian_defect(&self) -> f64 {
        self.a.iter().map(|m| (m + m.adjoint()).norm()).fold(0.0, f64::max)
    }

    /// `U A_k U^*`.
    pub fn conjugate(&self, u: &CMatrix) -> Self {
        let a = self.a.iter().map(|m| u * m * u.adjoint()).collect();
        FloatConnection { a, ..self.clone() }
    }

    pub fn axpy(&self, t: f64, dir: &[CMatrix]) -> Self {
        let a = self.a.iter().zip(dir).map(|(m, d)| antihermitian_part(&(m + d * Complex64::new(t, 0.0)))).collect();
        FloatConnection { a, ..self.clone() }
    }
}

/// `F_kl` for all ordered pairs, indexed `k * dim + l`.
pub fn field_strength(model: &YmModel, c: &FloatConnection) -> Vec<CMatrix> {
    let d = model.dim;
    let mut out = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in 0..d {
            let mut f = &c.a[k] * &c.a[l] - &c.a[l] * &c.a[k];
            for m in 0..d {
                let s = model.c(k, l, m);
                if s != 0.0 {
                    f -= &c.a[m] * Complex64::new(s, 0.0);
                }
            }
            out.push(f);
        }
    }
    out
}

pub fn potential(model: &YmModel, c: &FloatConnection) -> f64 {
    0.25 * field_strength(model, c).iter().map(|f| f.norm_squared()).sum::<f64>()
}

/// `max_{k,l} |F_kl|`.
pub fn flat_residual(model: &YmModel, c: &FloatConnection) -> f64 {
    field_strength(model, c).iter().map(|f| f.norm()).fold(0.0, f64::max)
}

/// Gradient for `<X, Y> = Re tr(X^* Y)`, projected to antihermitian matrices:
/// `G_p = sum_l [F_pl, A_l^*] - 1/2 sum_{k,l} C^p_kl F_kl`.
pub fn gradient(model: &YmModel, c: &FloatConnection) -> Vec<CMatrix> {
    let f = field_strength(model, c);
    gradient_from(model, c, &f)
}

fn gradient_from(model: &YmModel, c: &FloatConnection, f: &[CMatrix]) -> Vec<CMatrix> {
    let d = model.dim;
    (0..d)
        .map(|p| {
            let mut g = CMatrix::zeros(c.k, c.k);
            for l in 0..d {
                let fl = &f[p * d + l];
                let al = c.a[l].adjoint();
                g += fl * &al - &al * fl;
            }
            for k in 0..d {
                for l in 0..d {
                    let s = model.c(k, l, p);
                    if s != 0.0 {
                        g -= &f[k * d + l] * Complex64::new(0.5 * s, 0.0);
                    }
                }
            }
            antihermitian_part(&g)
        })
        .collect()
}

pub fn grad_norm(g: &[CMatrix]) -> f64 {
    g.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
}

/// Orthonormal basis of antihermitian `K x K` matrices for `Re tr(X^* Y)`.
pub fn u_basis(k: usize) -> Vec<CMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(k * k);
    for i in 0..k {
        let mut m = CMatrix::zeros(k, k);
        m[(i, i)] = Complex64::new(0.0, 1.0);
        out.push(m);
        for j in i + 1..k {
            let mut a = CMatrix::zeros(k, k);
            a[(i, j)] = Complex64::new(s, 0.0);
            a[(j, i)] = Complex64::new(-s, 0.0);
            out.push(a);
            let mut b = CMatrix::zeros(k, k);
            b[(i, j)] = Complex64::new(0.0, s);
            b[(j, i)] = Complex64::new(0.0, s);
            out.push(b);
        }
    }
    out
}

/// Coordinates of `(X_1, .., X_dim)` in the product basis of `u_basis`.
pub fn coords(x: &[CMatrix], basis: &[CMatrix]) -> Vec<f64> {
    x.iter().flat_map(|m| basis.iter().map(move |b| (b.adjoint() * m).trace().re)).collect()
}

/// `|g_fd - g| / |g|` with central differences of step `h` along every coordinate.
pub fn gradient_fd_error(model: &YmModel, c: &FloatConnection, h: f64) -> f64 {
    let basis = u_basis(c.k);
    let g = coords(&gradient(model, c), &basis);
    let mut err = 0.0;
    for p in 0..model.dim {
        for (i, b) in basis.iter().enumerate() {
            let mut dir = vec![CMatrix::zeros(c.k, c.k); model.dim];
            dir[p] = b.clone();
            let fd = (potential(model, &c.axpy(h, &dir)) - potential(model, &c.axpy(-h, &dir))) / (2.0 * h);
            err += (fd - g[p * basis.len() + i]).powi(2);
        }
    }
    err.sqrt() / grad_norm_coords(&g).max(f64::MIN_POSITIVE)
}

fn grad_norm_coords(g: &[f64]) -> f64 {
    g.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connections::flat_representative;
    use crate::linalg::Scalar;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_force(model: &YmModel, c: &FloatConnection) -> f64 {
        let k = c.k;
        let mut total = 0.0;
        for p in 0..model.dim {
            for q in 0..model.dim {
                for r in 0..k {
                    for s in 0..k {
                        let mut f = Complex64::new(0.0, 0.0);
                        for t in 0..k {
                            f += c.a[p][(r, t)] * c.a[q][(t, s)] - c.a[q][(r, t)] * c.a[p][(t, s)];
                        }
                        for m in 0..model.dim {
                            f -= c.a[m][(r, s)] * model.c(p, q, m);
                        }
                        total += f.norm_sqr();
                    }
                }
            }
        }
        total / 4.0
    }

    #[test]
    fn vacua_have_zero_potential() {
        let model = YmModel::pauli().unwrap();
        assert_eq!(potential(&model, &FloatConnection::zero(3, 3)), 0.0);
        let lambda = Scalar::int(model.lambda as i64);
        for p in [vec![2], vec![2, 1], vec![3], vec![4], vec![2, 2]] {
            let c = FloatConnection::from_exact(&flat_representative(&p, &lambda)).unwrap();
            assert!(potential(&model, &c) < 1e-24, "{p:?}");
            assert!(grad_norm(&gradient(&model, &c)) < 1e-10);
        }
    }

    #[test]
    fn random_points() {
        let model = YmModel::pauli().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let c = FloatConnection::random(&mut rng, 3, 3, 1.0);
            let v = potential(&model, &c);
            assert!(v > 0.0 && (v - brute_force(&model, &c)).abs() < 1e-10 * v.max(1.0));
            assert!(gradient_fd_error(&model, &c, 1e-5) < 1e-6);
            assert!(gradient(&model, &c).iter().all(|g| (g + g.adjoint()).norm() < 1e-12));
        }
    }

    #[test]
    fn gauge_invariant() {
        let model = YmModel::pauli().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = FloatConnection::random(&mut rng, 3, 3, 1.0);
        let h = FloatConnection::random(&mut rng, 3, 1, 1.0).a[0].clone();
        let u = h.exp();
        let v = potential(&model, &c);
        assert!((potential(&model, &c.conjugate(&u)) - v).abs() < 1e-10 * v.max(1.0));
    }

    #[test]
    fn basis_is_orthonormal() {
        let b = u_basis(3);
        assert_eq!(b.len(), 9);
        for (i, x) in b.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let ip = (x.adjoint() * y).trace().re;
                assert!((ip - (i == j) as i32 as f64).abs() < 1e-15);
            }
        }
    }
}
