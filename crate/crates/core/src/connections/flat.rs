//! Flat hermitian connections `nabla^0 + A_k theta^k` on `M_{K x 2}`: exact
//! representatives of the `su(2)` representation classes and Casimir labels.

use std::collections::BTreeMap;

use serde::Serialize;

use super::presentation::{mn_presentation, pauli_basis, MnPresentation};
use crate::algebra::finite::{block_diag, invert};
use crate::error::{NcError, Result};
use crate::linalg::{Matrix, Rational, Scalar, SparseVec};

/// Partitions of `k` with parts in non-increasing order, largest first.
pub fn partitions(k: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

fn prime_exponents(mut x: u64, acc: &mut BTreeMap<u64, u32>) {
    let mut p = 2;
    while p * p <= x {
        while x % p == 0 {
            *acc.entry(p).or_default() += 1;
            x /= p;
        }
        p += 1;
    }
    if x > 1 {
        *acc.entry(x).or_default() += 1;
    }
}

/// `s1^2 + s2^2 + s3^2 + s4^2 = n`.
fn four_squares(n: u64) -> [u64; 4] {
    let isqrt = |x: u64| (x as f64).sqrt() as u64 + 1;
    for a in 0..=isqrt(n) {
        for b in 0..=a {
            for c in 0..=b {
                let used = a * a + b * b + c * c;
                if used > n {
                    break;
                }
                let r = n - used;
                let d = (0..=isqrt(r)).find(|d| d * d == r);
                if let Some(d) = d {
                    return [a, b, c, d];
                }
            }
        }
    }
    unreachable!("every natural number is a sum of four squares")
}

/// Hermitian `J_x, J_y, J_z` of the `d`-dimensional irreducible representation,
/// `[J_x, J_y] = i J_z` cyclically, with entries in `Q(i)`.
pub fn su2_irrep(d: usize) -> Vec<Matrix> {
    assert!(d >= 1);
    let di = d as i64;
    let jz = Matrix::from_fn(d, d, |r, c| if r == c { Scalar::frac(di - 1 - 2 * r as i64, 2) } else { Scalar::zero() });
    let jm = Matrix::from_fn(d, d, |r, c| if r == c + 1 { Scalar::one() } else { Scalar::zero() });
    let jp = Matrix::from_fn(d, d, |r, c| if c == r + 1 { Scalar::int(c as i64 * (di - c as i64)) } else { Scalar::zero() });

    // <v_k, v_k> = prod_{i <= k} i (d - i); rescale to the squarefree part.
    let mut sf = Vec::with_capacity(d);
    let mut root = Vec::with_capacity(d);
    let mut exps = BTreeMap::new();
    for k in 0..d {
        if k > 0 {
            prime_exponents(k as u64, &mut exps);
            prime_exponents((d - k) as u64, &mut exps);
        }
        let (mut s, mut r) = (1u64, 1u64);
        for (&p, &e) in &exps {
            s *= if e % 2 == 1 { p } else { 1 };
            r *= p.pow(e / 2);
        }
        sf.push(s);
        root.push(r);
    }
    let target = if d % 2 == 1 { sf[d / 2] } else { 1 };
    let mut t = Matrix::zeros(d, d);
    let unit_col = |k: usize| Scalar::real(Rational::new(1, root[k] as i64));
    if d % 2 == 1 {
        t.set(d / 2, d / 2, unit_col(d / 2));
    }
    for p in 0..d / 2 {
        let q = d - 1 - p;
        debug_assert_eq!(sf[p], sf[q]);
        let s = four_squares(target * sf[p]);
        let den = sf[p] as i64;
        let x = Scalar::new(Rational::new(s[0] as i64, den), Rational::new(s[1] as i64, den));
        let y = Scalar::new(Rational::new(s[2] as i64, den), Rational::new(s[3] as i64, den));
        let (up, uq) = (unit_col(p), unit_col(q));
        t.set(p, p, &x * &up);
        t.set(q, p, &y * &uq);
        t.set(p, q, -(&y.conj() * &up));
        t.set(q, q, &x.conj() * &uq);
    }
    let tinv = invert(&t).expect("unitarizing change of basis is invertible");
    let conj = |m: &Matrix| tinv.mul(m).mul(&t);
    let half = Scalar::frac(1, 2);
    let jx = jp.add(&jm).scale(&half);
    let jy = jp.sub(&jm).scale(&(&half * &-Scalar::i()));
    vec![conj(&jx), conj(&jy), conj(&jz)]
}

/// `A_k = -i lambda J_k` for `C^m_kl = lambda eps_klm`, block-diagonal over the partition.
pub fn flat_representative(partition: &[usize], lambda: &Scalar) -> Vec<Matrix> {
    let f = &-Scalar::i() * lambda;
    let mut out: Vec<Option<Matrix>> = vec![None, None, None];
    for &d in partition {
        for (slot, j) in out.iter_mut().zip(su2_irrep(d)) {
            let a = j.scale(&f);
            *slot = Some(match slot.take() {
                None => a,
                Some(prev) => block_diag(&prev, &a),
            });
        }
    }
    out.into_iter().map(|m| m.unwrap_or_else(|| Matrix::zeros(0, 0))).collect()
}

/// `[A_k, A_l] - C^m_kl A_m` for all `k < l`.
pub fn flatness_residuals(pres: &MnPresentation, a: &[Matrix]) -> Vec<Matrix> {
    let dim = pres.dim();
    let mut out = Vec::new();
    for k in 0..dim {
        for l in k + 1..dim {
            let r = (0..dim).fold(a[k].commutator(&a[l]), |acc, m| acc.axpy(&-&pres.c[k][l][m], &a[m]));
            out.push(r);
        }
    }
    out
}

pub fn is_flat(pres: &MnPresentation, a: &[Matrix]) -> bool {
    flatness_residuals(pres, a).iter().all(Matrix::is_zero)
}

pub fn is_antihermitian(a: &[Matrix]) -> bool {
    a.iter().all(|m| m.conj_transpose() == m.neg())
}

/// Block dimensions from the spectrum of `sum J_k^2` with `J_k = i A_k / lambda`;
/// `None` if the eigenspaces do not account for all of `C^K`.
pub fn casimir_label(a: &[Matrix], lambda: &Scalar) -> Option<Vec<usize>> {
    let k = a.first()?.nrows();
    let f = &Scalar::i() * &lambda.inv();
    let q = a.iter().fold(Matrix::zeros(k, k), |acc, m| {
        let j = m.scale(&f);
        acc.add(&j.mul(&j))
    });
    let mut label = Vec::new();
    let mut covered = 0;
    for d in (1..=k).rev() {
        let ev = Scalar::frac((d * d - 1) as i64, 4);
        let nullity = q.sub(&Matrix::scalar_identity(k, &ev)).kernel_dim();
        if nullity % d != 0 {
            return None;
        }
        label.extend(std::iter::repeat_n(d, nullity / d));
        covered += nullity;
    }
    (covered == k).then_some(label)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FlatClass {
    pub partition: Vec<usize>,
    #[serde(skip)]
    pub generators: Vec<Matrix>,
    pub flat: bool,
    pub antihermitian: bool,
    pub label: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FlatReport {
    pub n: usize,
    pub k: usize,
    pub classes: Vec<FlatClass>,
    pub labels_distinct: bool,
}

impl FlatReport {
    pub fn ok(&self) -> bool {
        self.labels_distinct && self.classes.iter().all(|c| c.flat && c.antihermitian && c.label.as_ref() == Some(&c.partition))
    }
}

/// Enumerates one representative per partition of `k`, or labels the given `A_k`.
pub fn flat_classify(n: usize, k: usize, given: Option<&[Matrix]>, require_hermitian: bool) -> Result<FlatReport> {
    if n != 2 {
        return Err(NcError::input("flat classification is implemented for n = 2"));
    }
    if k == 0 {
        return Err(NcError::input("K must be positive"));
    }
    let pres = mn_presentation(2, &pauli_basis())?;
    let lambda = pres.su2_scale().ok_or_else(|| NcError::property("presentation", "C is not proportional to eps"))?;
    let classes = match given {
        Some(a) => {
            if a.len() != pres.dim() || a.iter().any(|m| m.nrows() != k || m.ncols() != k) {
                return Err(NcError::input(format!("need {} matrices of size {k}x{k}", pres.dim())));
            }
            let antihermitian = is_antihermitian(a);
            if require_hermitian && !antihermitian {
                return Err(NcError::input("A_k are not antihermitian"));
            }
            let flat = is_flat(&pres, a);
            let label = if flat { casimir_label(a, &lambda) } else { None };
            vec![FlatClass {
                partition: label.clone().unwrap_or_default(),
                generators: a.to_vec(),
                flat,
                antihermitian,
                label,
            }]
        }
        None => partitions(k)
            .into_iter()
            .map(|p| {
                let a = flat_representative(&p, &lambda);
                FlatClass {
                    flat: is_flat(&pres, &a),
                    antihermitian: is_antihermitian(&a),
                    label: casimir_label(&a, &lambda),
                    generators: a,
                    partition: p,
                }
            })
            .collect(),
    };
    let mut labels: Vec<_> = classes.iter().map(|c| c.label.clone()).collect();
    labels.sort();
    labels.dedup();
    let labels_distinct = labels.len() == classes.len() && labels.iter().all(Option::is_some);
    Ok(FlatReport { n, k, classes, labels_distinct })
}

/// `U = [[x, -conj(y)], [y, conj(x)]] / r` embedded as a `2 x 2` block, unitary when `|x|^2 + |y|^2 = r^2`.
pub fn rotation(k: usize, at: usize, x: &Scalar, y: &Scalar) -> Matrix {
    let mut u = Matrix::identity(k);
    u.set(at, at, x.clone());
    u.set(at + 1, at, y.clone());
    u.set(at, at + 1, -y.conj());
    u.set(at + 1, at + 1, x.conj());
    u
}

/// `U A_k U^{-1}` for unitary `U`.
pub fn gauge_transform(a: &[Matrix], u: &Matrix) -> Vec<Matrix> {
    let ui = u.conj_transpose();
    a.iter().map(|m| u.mul(m).mul(&ui)).collect()
}

/// Non-zero entries, as `(row, col, value)` triples.
pub fn entries(m: &Matrix) -> Vec<(usize, usize, Scalar)> {
    m.rows_iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, c, v.clone()))).collect()
}

/// A matrix from `(row, col, value)` triples.
pub fn from_entries(k: usize, e: &[(usize, usize, Scalar)]) -> Matrix {
    let mut rows = vec![Vec::new(); k];
    for (r, c, v) in e {
        rows[*r].push((*c, v.clone()));
    }
    Matrix::from_rows(k, rows.into_iter().map(SparseVec::from_entries).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=7).map(|k| partitions(k).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15]);
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn irreps_are_unitary() {
        for d in 1..=7 {
            let j = su2_irrep(d);
            for m in &j {
                assert_eq!(m.conj_transpose(), *m, "d = {d}");
            }
            let i = Scalar::i();
            assert_eq!(j[0].commutator(&j[1]), j[2].scale(&i));
            assert_eq!(j[1].commutator(&j[2]), j[0].scale(&i));
            assert_eq!(j[2].commutator(&j[0]), j[1].scale(&i));
        }
    }

    #[test]
    fn enumerates_partitions() {
        for (k, count) in [(1, 1), (2, 2), (3, 3), (4, 5)] {
            let r = flat_classify(2, k, None, true).unwrap();
            assert_eq!(r.classes.len(), count);
            assert!(r.ok(), "{r:?}");
        }
    }

    #[test]
    fn labels_are_gauge_invariant() {
        let r = flat_classify(2, 3, None, true).unwrap();
        let lambda = Scalar::int(-2);
        let u = rotation(3, 1, &Scalar::frac(3, 5), &Scalar::new(Rational::zero(), Rational::new(4, 5)));
        assert_eq!(u.mul(&u.conj_transpose()), Matrix::identity(3));
        for c in &r.classes {
            let g = gauge_transform(&c.generators, &u);
            assert_eq!(casimir_label(&g, &lambda), c.label);
            let again = flat_classify(2, 3, Some(&g), true).unwrap();
            assert_eq!(again.classes[0].label.as_ref(), Some(&c.partition));
        }
    }

    #[test]
    fn non_representations_are_not_flat() {
        let pres = mn_presentation(2, &pauli_basis()).unwrap();
        let mut a = flat_representative(&[2], &Scalar::int(-2));
        assert!(is_flat(&pres, &a));
        a[0] = a[0].scale(&Scalar::int(2));
        assert!(!is_flat(&pres, &a));
        assert!(flat_classify(2, 2, Some(&a), true).unwrap().classes[0].label.is_none());
    }

    #[test]
    fn rejects_non_antihermitian() {
        let a = vec![Matrix::identity(2); 3];
        assert!(flat_classify(2, 2, Some(&a), true).unwrap_err().is_input());
    }
}
