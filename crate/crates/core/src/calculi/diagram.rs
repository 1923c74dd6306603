//! Canonical operations of `Der(A)` and the surjections between the calculi.

use serde::Serialize;

use super::der::{derivation_lie, DerCalculus};
use super::quotient::{QuotientCalculus, QuotientKind};
use super::universal::UniversalCalculus;
use crate::algebra::finite::FiniteAlgebra;
use crate::complex::{GradedDiffAlgebra, OperationData};
use crate::error::Result;
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug)]
pub enum Calculus<'a> {
    Universal(&'a UniversalCalculus),
    Quotient(&'a QuotientCalculus),
    Der(&'a DerCalculus),
}

impl Calculus<'_> {
    pub fn gda(&self) -> &GradedDiffAlgebra {
        match self {
            Calculus::Universal(u) => u.gda(),
            Calculus::Quotient(q) => q.gda(),
            Calculus::Der(d) => d.gda(),
        }
    }
}

fn universal_contractions(u: &UniversalCalculus, der: &[Matrix]) -> Vec<Vec<Matrix>> {
    der.iter().map(|x| (0..=u.max_degree() + 1).map(|n| u.contraction(x, n)).collect()).collect()
}

/// `i_X` for the basis of `Der(A)`; on quotients it is checked to preserve the ideal.
pub fn canonical_operation(calc: Calculus<'_>) -> Result<OperationData> {
    match calc {
        Calculus::Universal(u) => {
            let (der, lie) = derivation_lie(u.algebra())?;
            OperationData::new(lie, universal_contractions(u, &der))
        }
        Calculus::Quotient(q) => {
            let (der, lie) = derivation_lie(q.algebra())?;
            let i = universal_contractions(q.base(), &der)
                .into_iter()
                .map(|per| {
                    per.iter()
                        .enumerate()
                        .map(|(n, m)| if n == 0 { Ok(Matrix::zeros(0, q.gda().dim(0))) } else { q.descend(m, n) })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            OperationData::new(lie, i)
        }
        Calculus::Der(d) => d.operation(),
    }
}

/// A degree-preserving map between two calculi, with its operations.
struct Morphism<'a> {
    name: &'static str,
    src: &'a GradedDiffAlgebra,
    dst: &'a GradedDiffAlgebra,
    src_op: &'a OperationData,
    dst_op: &'a OperationData,
    maps: Vec<Matrix>,
}

impl Morphism<'_> {
    fn check(&self, report: &mut DiagramReport) {
        let n = self.maps.len() - 1;
        for (k, f) in self.maps.iter().enumerate() {
            if f.rank() != self.dst.dim(k) {
                report.surjective = false;
                report.failures.push(format!("{}: not onto in degree {k}", self.name));
            }
            if k < n {
                let (ds, dt) = (self.src.d(k).unwrap(), self.dst.d(k).unwrap());
                if self.maps[k + 1].mul(ds) != dt.mul(f) {
                    report.intertwines_d = false;
                    report.failures.push(format!("{}: d not intertwined in degree {k}", self.name));
                }
            }
            if let (Some(ss), Some(st)) = (self.src.star_matrices(), self.dst.star_matrices()) {
                if f.mul(&ss[k]) != st[k].mul(&f.conj()) {
                    report.intertwines_star = false;
                    report.failures.push(format!("{}: involution not intertwined in degree {k}", self.name));
                }
            }
            if k > 0 {
                for x in 0..self.src_op.lie.dim() {
                    if self.maps[k - 1].mul(self.src_op.contraction(x, k)) != self.dst_op.contraction(x, k).mul(f) {
                        report.intertwines_operation = false;
                        report.failures.push(format!("{}: i_X{x} not intertwined in degree {k}", self.name));
                    }
                }
            }
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct DiagramReport {
    pub dims_u: Vec<usize>,
    pub dims_z: Vec<usize>,
    pub dims_diag: Vec<usize>,
    pub dims_der: Vec<usize>,
    pub well_defined: bool,
    pub surjective: bool,
    pub commutes: bool,
    pub intertwines_d: bool,
    pub intertwines_star: bool,
    pub intertwines_operation: bool,
    pub failures: Vec<String>,
}

impl DiagramReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `Omega_u -> Omega_Z -> Omega_Diag -> Omega_Der` together with the composites, degrees `0..=upto`.
pub fn diagram_check(a: &FiniteAlgebra, upto: usize) -> Result<DiagramReport> {
    let upto = upto.max(1);
    let u = UniversalCalculus::new(a, upto)?;
    let z = QuotientCalculus::new(u.clone(), QuotientKind::Central)?;
    let dg = QuotientCalculus::new(u.clone(), QuotientKind::Diagonal)?;
    let der = DerCalculus::new(a, upto)?;
    let op_u = canonical_operation(Calculus::Universal(&u))?;
    let op_z = canonical_operation(Calculus::Quotient(&z))?;
    let op_dg = canonical_operation(Calculus::Quotient(&dg))?;
    let op_der = canonical_operation(Calculus::Der(&der))?;

    let mut report = DiagramReport {
        dims_u: u.dims(),
        dims_z: z.dims(),
        dims_diag: dg.dims(),
        dims_der: der.dims(),
        well_defined: true,
        surjective: true,
        commutes: true,
        intertwines_d: true,
        intertwines_star: true,
        intertwines_operation: true,
        failures: Vec::new(),
    };

    let degrees = 0..=upto;
    let lam: Vec<Matrix> = degrees.clone().map(|n| der.lambda(&u, n)).collect::<Result<_>>()?;
    let qz: Vec<Matrix> = degrees.clone().map(|n| z.quotient(n).project.clone()).collect();
    let qd: Vec<Matrix> = degrees.clone().map(|n| dg.quotient(n).project.clone()).collect();
    let mut induced = |name: &str, through: &[Matrix], src: &QuotientCalculus| -> Vec<Matrix> {
        degrees
            .clone()
            .map(|n| {
                if src.killed(n).basis().iter().any(|v| !through[n].apply(v).is_zero()) {
                    report.well_defined = false;
                    report.failures.push(format!("{name}: does not vanish on the ideal in degree {n}"));
                }
                through[n].mul(&src.quotient(n).section)
            })
            .collect()
    };
    let z_to_d = induced("Z -> Diag", &qd, &z);
    let z_to_der = induced("Z -> Der", &lam, &z);
    let d_to_der = induced("Diag -> Der", &lam, &dg);

    for n in degrees {
        let checks = [
            (z_to_d[n].mul(&qz[n]) == qd[n], "Z -> Diag after Q_Z"),
            (d_to_der[n].mul(&qd[n]) == lam[n], "Diag -> Der after Q_Diag"),
            (d_to_der[n].mul(&z_to_d[n]) == z_to_der[n], "Z -> Diag -> Der"),
            (z_to_der[n].mul(&qz[n]) == lam[n], "Z -> Der after Q_Z"),
        ];
        for (ok, what) in checks {
            if !ok {
                report.commutes = false;
                report.failures.push(format!("{what}: square fails in degree {n}"));
            }
        }
    }

    let morphisms = [
        Morphism { name: "Q_Z", src: u.gda(), dst: z.gda(), src_op: &op_u, dst_op: &op_z, maps: qz },
        Morphism { name: "Q_Diag", src: u.gda(), dst: dg.gda(), src_op: &op_u, dst_op: &op_dg, maps: qd },
        Morphism { name: "lambda", src: u.gda(), dst: der.gda(), src_op: &op_u, dst_op: &op_der, maps: lam },
        Morphism { name: "Z -> Diag", src: z.gda(), dst: dg.gda(), src_op: &op_z, dst_op: &op_dg, maps: z_to_d },
        Morphism { name: "Z -> Der", src: z.gda(), dst: der.gda(), src_op: &op_z, dst_op: &op_der, maps: z_to_der },
        Morphism { name: "Diag -> Der", src: dg.gda(), dst: der.gda(), src_op: &op_dg, dst_op: &op_der, maps: d_to_der },
    ];
    for m in &morphisms {
        m.check(&mut report);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::finite::{complex_numbers, diagonal_algebra, matrix_algebra, truncated_poly};
    use crate::complex::verify_operation;

    #[test]
    fn operations_verify() {
        let a = truncated_poly(3).unwrap();
        let u = UniversalCalculus::new(&a, 2).unwrap();
        let op = canonical_operation(Calculus::Universal(&u)).unwrap();
        let r = verify_operation(u.gda(), &op);
        assert!(r.ok(), "{r:?}");
        let z = QuotientCalculus::new(u, QuotientKind::Central).unwrap();
        let op = canonical_operation(Calculus::Quotient(&z)).unwrap();
        assert!(verify_operation(z.gda(), &op).ok());
    }

    #[test]
    fn lie_derivative_extends_x() {
        let a = matrix_algebra(2).unwrap();
        let u = UniversalCalculus::new(&a, 1).unwrap();
        let (der, _) = derivation_lie(&a).unwrap();
        let op = canonical_operation(Calculus::Universal(&u)).unwrap();
        for (k, x) in der.iter().enumerate() {
            assert_eq!(&op.lie_derivative(u.gda(), k, 0).unwrap(), x);
            // i_X d_u = X on degree 0
            assert_eq!(&op.contraction(k, 1).mul(u.d(0)), x);
        }
    }

    #[test]
    fn diagrams_commute() {
        for a in [
            complex_numbers(),
            matrix_algebra(2).unwrap(),
            truncated_poly(2).unwrap(),
            truncated_poly(3).unwrap(),
            diagonal_algebra(2).unwrap(),
        ] {
            let r = diagram_check(&a, 2).unwrap();
            assert!(r.ok(), "{:?}", r.failures);
        }
        let m2 = diagram_check(&matrix_algebra(2).unwrap(), 2).unwrap();
        assert_eq!(m2.dims_z, m2.dims_u);
        assert_eq!(m2.dims_diag, m2.dims_u);
        assert_eq!(m2.dims_der, vec![4, 12, 12]);
        let p = diagram_check(&truncated_poly(2).unwrap(), 1).unwrap();
        assert_eq!((p.dims_u[1], p.dims_z[1]), (2, 1));
    }
}
