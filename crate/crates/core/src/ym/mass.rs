//! Hessian of the potential on the antihermitian subspace at a vacuum.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{antihermitian_part, coords, field_strength, flat_residual, u_basis, CMatrix, FloatConnection, YmModel};
use crate::error::{NcError, Result};

const ZERO_MODE: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct MassSpectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub zero_modes: usize,
    /// Dimension of the tangent space `{[T, A_k]}` of the gauge orbit.
    pub gauge_orbit_dim: usize,
    /// `max |H - H^T|` before symmetrization.
    pub asymmetry: f64,
}

/// Derivative of the gradient along `y`.
fn hessian_apply(model: &YmModel, c: &FloatConnection, f: &[CMatrix], y: &[CMatrix]) -> Vec<CMatrix> {
    let d = model.dim;
    let comm = |x: &CMatrix, z: &CMatrix| x * z - z * x;
    let mut df = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in 0..d {
            let mut t = comm(&y[k], &c.a[l]) + comm(&c.a[k], &y[l]);
            for m in 0..d {
                t -= &y[m] * Complex64::new(model.c(k, l, m), 0.0);
            }
            df.push(t);
        }
    }
    (0..d)
        .map(|p| {
            let mut g = CMatrix::zeros(c.k, c.k);
            for l in 0..d {
                g += comm(&df[p * d + l], &c.a[l].adjoint()) + comm(&f[p * d + l], &y[l].adjoint());
            }
            for k in 0..d {
                for l in 0..d {
                    g -= &df[k * d + l] * Complex64::new(0.5 * model.c(k, l, p), 0.0);
                }
            }
            antihermitian_part(&g)
        })
        .collect()
}

fn real_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    m.clone().svd(false, false).singular_values.iter().filter(|s| **s > tol).count()
}

pub fn mass_spectrum(model: &YmModel, c: &FloatConnection, tol_flat: f64) -> Result<MassSpectrum> {
    let residual = flat_residual(model, c);
    if residual >= tol_flat {
        return Err(NcError::input(format!("not a vacuum: flat residual {residual:e}")));
    }
    let basis = u_basis(c.k);
    let nb = basis.len();
    let size = model.dim * nb;
    let f = field_strength(model, c);
    let unit = |idx: usize| {
        let mut y = vec![CMatrix::zeros(c.k, c.k); model.dim];
        y[idx / nb] = basis[idx % nb].clone();
        y
    };
    let mut h = DMatrix::<f64>::zeros(size, size);
    for j in 0..size {
        let col = coords(&hessian_apply(model, c, &f, &unit(j)), &basis);
        for (i, v) in col.into_iter().enumerate() {
            h[(i, j)] = v;
        }
    }
    let asymmetry = (&h - h.transpose()).abs().max();
    let sym = (&h + h.transpose()) * 0.5;
    let mut eigenvalues: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    let zero_modes = eigenvalues.iter().filter(|e| e.abs() < ZERO_MODE).count();
    let mut tangent = DMatrix::<f64>::zeros(size, nb);
    for (j, t) in basis.iter().enumerate() {
        let v: Vec<CMatrix> = c.a.iter().map(|a| t * a - a * t).collect();
        for (i, x) in coords(&v, &basis).into_iter().enumerate() {
            tangent[(i, j)] = x;
        }
    }
    Ok(MassSpectrum { eigenvalues, zero_modes, gauge_orbit_dim: real_rank(&tangent, 1e-8), asymmetry })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connections::flat_representative;
    use crate::linalg::Scalar;
    use crate::ym::potential;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn exact(model: &YmModel, p: &[usize]) -> FloatConnection {
        FloatConnection::from_exact(&flat_representative(p, &Scalar::int(model.lambda as i64))).unwrap()
    }

    #[test]
    fn trivial_vacuum_k1() {
        let model = YmModel::pauli().unwrap();
        let m = mass_spectrum(&model, &FloatConnection::zero(1, 3), 1e-6).unwrap();
        assert_eq!(m.eigenvalues.len(), 3);
        assert!(m.eigenvalues.iter().all(|e| (e - m.eigenvalues[0]).abs() < 1e-12 && *e > 0.0));
        assert_eq!((m.zero_modes, m.gauge_orbit_dim), (0, 0));
    }

    #[test]
    fn vacua_are_minima_with_gauge_zero_modes() {
        let model = YmModel::pauli().unwrap();
        let triv = mass_spectrum(&model, &FloatConnection::zero(2, 3), 1e-6).unwrap();
        let irr = mass_spectrum(&model, &exact(&model, &[2]), 1e-6).unwrap();
        assert!(triv.eigenvalues.iter().chain(&irr.eigenvalues).all(|e| *e >= -1e-8));
        assert!(irr.zero_modes >= irr.gauge_orbit_dim && irr.gauge_orbit_dim == 3);
        assert_eq!(triv.gauge_orbit_dim, 0);
        let differ = triv.eigenvalues.iter().zip(&irr.eigenvalues).any(|(a, b)| (a - b).abs() > 1e-6);
        assert!(differ);
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let model = YmModel::pauli().unwrap();
        let c = exact(&model, &[2, 1]);
        let m = mass_spectrum(&model, &c, 1e-6).unwrap();
        assert!(m.asymmetry < 1e-12);
        // second difference of V along a unit direction against the quadratic form
        let basis = u_basis(3);
        let f = field_strength(&model, &c);
        let mut y = vec![CMatrix::zeros(3, 3); 3];
        y[1] = basis[4].clone();
        let hy = coords(&hessian_apply(&model, &c, &f, &y), &basis);
        let q = hy[basis.len() + 4];
        let h = 1e-4;
        let fd = (potential(&model, &c.axpy(h, &y)) - 2.0 * potential(&model, &c) + potential(&model, &c.axpy(-h, &y))) / (h * h);
        assert!((fd - q).abs() < 1e-5 * q.abs().max(1.0), "{fd} {q}");
    }

    #[test]
    fn spectrum_is_gauge_invariant() {
        let model = YmModel::pauli().unwrap();
        let c = exact(&model, &[2, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = FloatConnection::random(&mut rng, 3, 1, 1.0).a[0].exp();
        let (a, b) = (mass_spectrum(&model, &c, 1e-6).unwrap(), mass_spectrum(&model, &c.conjugate(&u), 1e-6).unwrap());
        assert!(a.eigenvalues.iter().zip(&b.eigenvalues).all(|(x, y)| (x - y).abs() < 1e-8));
    }

    #[test]
    fn rejects_non_vacuum() {
        let model = YmModel::pauli().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(mass_spectrum(&model, &FloatConnection::random(&mut rng, 2, 3, 1.0), 1e-6).unwrap_err().is_input());
    }
}
