//! Connections `nabla^0 + A_k theta^k` on the right `M_n`-module `M_{K x n}`,
//! with `nabla^0 Phi = -i Phi theta`.

use super::connection::{degree_bimodule, Hermitian, LeftSetting, RightConnection};
use super::presentation::MnPresentation;
use crate::algebra::bimodule::{tensor_over, BalancedTensor, Bimodule};
use crate::algebra::finite::vec_matrix;
use crate::error::{NcError, Result};
use crate::linalg::{Matrix, Scalar, SparseVec};

/// `M_{K x n}` as an `(M_K, M_n)`-bimodule, basis `E_ij` at `i n + j`.
pub fn matrix_module(k: usize, n: usize) -> Bimodule {
    let dim = k * n;
    let left = (0..k * k)
        .map(|x| {
            let (c, d) = (x / k, x % k);
            Matrix::from_triplets(dim, dim, (0..n).map(|j| (c * n + j, d * n + j, Scalar::one())).collect())
        })
        .collect();
    let right = (0..n * n)
        .map(|x| {
            let (a, b) = (x / n, x % n);
            Matrix::from_triplets(dim, dim, (0..k).map(|i| (i * n + b, i * n + a, Scalar::one())).collect())
        })
        .collect();
    Bimodule::new(dim, left, right).expect("consistent shapes")
}

/// `K x n` matrix from module coordinates.
pub fn unvec_rect(v: &SparseVec, k: usize, n: usize) -> Matrix {
    Matrix::from_triplets(k, n, v.iter().map(|(t, x)| (t / n, t % n, x.clone())).collect())
}

/// `h(Phi, Psi) = Phi* Psi` in `M_n`.
pub fn matrix_hermitian(k: usize, n: usize) -> Hermitian {
    let dim = k * n;
    let mut table = Vec::with_capacity(dim * dim);
    for p in 0..dim {
        for q in 0..dim {
            let (i, j, i2, j2) = (p / n, p % n, q / n, q % n);
            table.push(if i == i2 { SparseVec::unit(j * n + j2) } else { SparseVec::new() });
        }
    }
    Hermitian { dim, table }
}

/// `nabla Phi = sum_k (A_k Phi - i Phi E_k) (x) theta^k` over the full cochains of `Der(M_n)`.
pub fn gauge_connection(pres: &MnPresentation, a: &[Matrix]) -> Result<RightConnection> {
    let n = pres.n;
    let k = a.first().map(Matrix::nrows).ok_or_else(|| NcError::input("need the matrices A_k"))?;
    if a.len() != pres.dim() || a.iter().any(|m| m.nrows() != k || m.ncols() != k) {
        return Err(NcError::input(format!("need {} matrices of size {k}x{k}", pres.dim())));
    }
    let module = matrix_module(k, n);
    let mi = -Scalar::i();
    let build = |tensor: &BalancedTensor| {
        let cols: Vec<SparseVec> = (0..k * n)
            .map(|p| {
                let phi = unvec_rect(&SparseVec::unit(p), k, n);
                (0..pres.dim()).fold(SparseVec::new(), |acc, l| {
                    let comp = a[l].mul(&phi).add(&phi.mul(&pres.basis[l]).scale(&mi));
                    acc.add(&tensor.class_of(&vec_matrix(&comp), &pres.theta[l]))
                })
            })
            .collect();
        Matrix::from_cols(tensor.dim(), &cols)
    };
    let omega1 = degree_bimodule(pres.calculus.full(), 1)?;
    let tensor = tensor_over(&module, &omega1)?;
    RightConnection::new(pres.calculus.full(), &module, build(&tensor))
}

/// `sum_{k < l} theta^k theta^l (x) F_kl Phi` with `F_kl = [A_k, A_l] - C^m_kl A_m`, in the
/// coordinates of `Omega^2 (x) M` over the opposite calculus.
pub fn curvature_formula(pres: &MnPresentation, a: &[Matrix], s: &LeftSetting) -> Matrix {
    let (k, n) = (a[0].nrows(), pres.n);
    let p11 = pres.calculus.full().product_table(1, 1).expect("degree 2 products");
    let residuals = super::flat::flatness_residuals(pres, a);
    let cols: Vec<SparseVec> = (0..k * n)
        .map(|p| {
            let phi = unvec_rect(&SparseVec::unit(p), k, n);
            let mut out = SparseVec::new();
            let mut idx = 0;
            for i in 0..pres.dim() {
                for j in i + 1..pres.dim() {
                    let tt = p11.apply(&pres.theta[i], &pres.theta[j]);
                    out = out.add(&s.t2.class_of(&tt, &vec_matrix(&residuals[idx].mul(&phi))));
                    idx += 1;
                }
            }
            out
        })
        .collect();
    Matrix::from_cols(s.t2.dim(), &cols)
}

#[cfg(test)]
mod tests {
    use super::super::connection::{bimodule_sigma, curvature_report, dual_connection, hermitian_checks};
    use super::super::flat::{flat_representative, is_flat};
    use super::super::presentation::{mn_presentation, pauli_basis};
    use super::*;

    fn pauli() -> MnPresentation {
        mn_presentation(2, &pauli_basis()).unwrap()
    }

    fn zeros(k: usize) -> Vec<Matrix> {
        vec![Matrix::zeros(k, k); 3]
    }

    /// `X - X*` for a fixed Gaussian-integer `X`, shifted per generator.
    fn antihermitian(k: usize, shift: i64) -> Vec<Matrix> {
        (0..3)
            .map(|l| {
                let x = Matrix::from_fn(k, k, |r, c| Scalar::gaussian((r as i64 + 2 * c as i64 + l + shift) % 3 - 1, (r as i64 * l + c as i64) % 2));
                x.sub(&x.conj_transpose())
            })
            .collect()
    }

    #[test]
    fn trivial_connection_is_flat() {
        let pres = pauli();
        let conn = gauge_connection(&pres, &zeros(2)).unwrap();
        assert!(conn.leibniz_ok());
        let (s, nabla) = conn.to_left_opposite().unwrap();
        let r = curvature_report(&s, &nabla).unwrap();
        assert!(r.leibniz_ok && r.flat && r.is_module_map);
    }

    #[test]
    fn curvature_matches_formula() {
        let pres = pauli();
        let lambda = pres.su2_scale().unwrap();
        for a in [antihermitian(2, 0), antihermitian(2, 1), flat_representative(&[2], &lambda)] {
            let conn = gauge_connection(&pres, &a).unwrap();
            let (s, nabla) = conn.to_left_opposite().unwrap();
            let r = curvature_report(&s, &nabla).unwrap();
            assert!(r.leibniz_ok && r.is_module_map);
            assert_eq!(r.curvature, curvature_formula(&pres, &a, &s));
            assert_eq!(r.flat, is_flat(&pres, &a));
        }
        assert!(is_flat(&pres, &flat_representative(&[2], &lambda)));
    }

    #[test]
    fn hermitian_iff_antihermitian() {
        let pres = pauli();
        let h = matrix_hermitian(2, 2);
        let check = |a: &[Matrix]| hermitian_checks(pres.algebra(), &gauge_connection(&pres, a).unwrap(), &h, Some(2)).unwrap();
        let r = check(&zeros(2));
        assert!(r.sesquilinear && r.hermitian_symmetric && r.positive == Some(true) && r.compatible, "{r:?}");
        assert!(check(&antihermitian(2, 2)).compatible);
        let herm: Vec<Matrix> = antihermitian(2, 2).iter().map(|x| x.scale(&Scalar::i())).collect();
        assert!(!check(&herm).compatible);
    }

    #[test]
    fn dual_and_double_dual() {
        let pres = pauli();
        let conn = gauge_connection(&pres, &antihermitian(1, 0)).unwrap();
        let (s, nabla) = conn.to_left_opposite().unwrap();
        let dual = dual_connection(&s, &nabla).unwrap();
        assert!(dual.leibniz_ok);
        let double = dual_connection(&dual.setting, &dual.nabla).unwrap();
        assert!(double.leibniz_ok);
        assert_eq!(double.setting.module.dim(), s.module.dim());
    }

    #[test]
    fn trivial_connection_commutes_with_left_action() {
        let pres = pauli();
        let (s, nabla) = gauge_connection(&pres, &zeros(2)).unwrap().to_left_opposite().unwrap();
        let sigma = bimodule_sigma(&s, &nabla).unwrap().expect("sigma exists");
        assert!(sigma.is_zero());
    }
}
