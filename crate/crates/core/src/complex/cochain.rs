//! Cochain complexes of finite-dimensional spaces and their cohomology.

use serde::Serialize;

use crate::error::{NcError, Result};
use crate::linalg::{restrict, Matrix, Subspace};

/// `C^0 -> C^1 -> ... -> C^N`, optionally with the top map `d_N` into an
/// ambient space so that `H^N` is exact rather than a lower bound.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    dims: Vec<usize>,
    d: Vec<Matrix>,
    top: Option<Matrix>,
    /// Set when all degrees above `N` vanish, so `d_N = 0`.
    complete: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CohomologyReport {
    pub dims: Vec<usize>,
    /// True when the top entry is only a lower bound.
    pub truncated: bool,
}

impl CohomologyReport {
    /// Entries that are known exactly.
    pub fn exact(&self) -> &[usize] {
        if self.truncated {
            &self.dims[..self.dims.len() - 1]
        } else {
            &self.dims
        }
    }
}

impl CochainComplex {
    pub fn new(dims: Vec<usize>, d: Vec<Matrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(NcError::input("complex needs at least one degree"));
        }
        if d.len() + 1 != dims.len() {
            return Err(NcError::input("need one differential per consecutive pair of degrees"));
        }
        for (n, m) in d.iter().enumerate() {
            if m.ncols() != dims[n] || m.nrows() != dims[n + 1] {
                return Err(NcError::input(format!(
                    "d_{n} has shape {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    dims[n + 1],
                    dims[n]
                )));
            }
        }
        Ok(CochainComplex { dims, d, top: None, complete: false })
    }

    pub fn with_top(mut self, top: Matrix) -> Result<Self> {
        if top.ncols() != *self.dims.last().unwrap() {
            return Err(NcError::input("top map has the wrong source dimension"));
        }
        self.top = Some(top);
        Ok(self)
    }

    pub fn complete(mut self) -> Self {
        self.complete = true;
        self
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn max_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn d(&self, n: usize) -> &Matrix {
        &self.d[n]
    }

    pub fn differentials(&self) -> &[Matrix] {
        &self.d
    }

    pub fn top(&self) -> Option<&Matrix> {
        self.top.as_ref()
    }

    /// `d` out of degree `n`, including the top map when present.
    pub fn d_out(&self, n: usize) -> Option<&Matrix> {
        if n + 1 < self.dims.len() {
            Some(&self.d[n])
        } else {
            self.top.as_ref()
        }
    }

    /// Errors with the first degree where `d^2 != 0`.
    pub fn check_d_squared(&self) -> Result<()> {
        let n = self.d.len();
        for k in 1..n {
            if !self.d[k].mul(&self.d[k - 1]).is_zero() {
                return Err(NcError::property("d^2 = 0", format!("fails at degree {}", k - 1)));
            }
        }
        if let (Some(t), Some(last)) = (&self.top, self.d.last()) {
            if !t.mul(last).is_zero() {
                return Err(NcError::property("d^2 = 0", format!("fails at degree {}", n - 1)));
            }
        }
        Ok(())
    }

    fn rank_out(&self, n: usize) -> Option<usize> {
        match self.d_out(n) {
            Some(m) => Some(m.rank()),
            None if self.complete => Some(0),
            None => None,
        }
    }

    pub fn cohomology(&self) -> Result<CohomologyReport> {
        self.check_d_squared()?;
        let top = self.max_degree();
        let ranks: Vec<usize> = self.d.iter().map(|m| m.rank()).collect();
        let mut dims = Vec::with_capacity(top + 1);
        let mut truncated = false;
        for n in 0..=top {
            let r_out = if n < top {
                ranks[n]
            } else {
                match self.rank_out(n) {
                    Some(r) => r,
                    None => {
                        truncated = true;
                        0
                    }
                }
            };
            let r_in = if n == 0 { 0 } else { ranks[n - 1] };
            dims.push(self.dims[n] - r_out - r_in);
        }
        Ok(CohomologyReport { dims, truncated })
    }

    pub fn cocycles(&self, n: usize) -> Option<Subspace> {
        match self.d_out(n) {
            Some(m) => Some(Subspace::kernel_of(m)),
            None if self.complete => Some(Subspace::full(self.dims[n])),
            None => None,
        }
    }

    pub fn coboundaries(&self, n: usize) -> Subspace {
        if n == 0 {
            Subspace::zero(self.dims[0])
        } else {
            Subspace::image_of(&self.d[n - 1])
        }
    }

    /// Subcomplex on subspaces `subs[n]`; errors if `d` does not preserve them.
    /// The top degree keeps its map into the old ambient space.
    pub fn restrict(&self, subs: &[Subspace]) -> Result<CochainComplex> {
        if subs.len() != self.dims.len() {
            return Err(NcError::input("need one subspace per degree"));
        }
        let mut d = Vec::with_capacity(self.d.len());
        for n in 0..self.d.len() {
            let m = restrict(&self.d[n], &subs[n], &subs[n + 1])
                .ok_or_else(|| NcError::property("subcomplex", format!("d does not preserve degree {}", n + 1)))?;
            d.push(m);
        }
        let dims = subs.iter().map(|s| s.dim()).collect();
        let mut c = CochainComplex::new(dims, d)?;
        if let Some(t) = self.d_out(self.max_degree()) {
            let last = subs.last().unwrap();
            c = c.with_top(t.mul(&last.basis_matrix()))?;
        }
        c.complete = self.complete;
        Ok(c)
    }
}

/// Checks `d_{n-1} h_n + h_{n+1} d_n = id` for `n` in `degrees`.
/// `h[n]` maps degree `n` to degree `n - 1`.
pub fn verify_homotopy(c: &CochainComplex, h: &[Matrix], degrees: std::ops::RangeInclusive<usize>) -> Result<()> {
    for n in degrees {
        if n + 1 >= c.dims.len() || n + 1 >= h.len() {
            return Err(NcError::input(format!("homotopy check at degree {n} needs degree {}", n + 1)));
        }
        let mut lhs = h[n + 1].mul(&c.d[n]);
        if n > 0 {
            lhs = lhs.add(&c.d[n - 1].mul(&h[n]));
        }
        if lhs != Matrix::identity(c.dims[n]) {
            return Err(NcError::property("homotopy", format!("dh + hd != id at degree {n}")));
        }
    }
    Ok(())
}

/// Total complex of `C (x) C'` with `d(x (x) y) = dx (x) y + (-1)^p x (x) dy`.
///
/// Built through degree `N + N'` when both factors are complete, otherwise
/// through `min(N, N')` with the top degree truncated. Degree `n` is a direct
/// sum of blocks `p + q = n`, each `x_i (x) y_j` at `i dim(C'^q) + j`.
pub fn tensor_complex(a: &CochainComplex, b: &CochainComplex) -> Result<CochainComplex> {
    let (na, nb) = (a.max_degree(), b.max_degree());
    let full = a.is_complete() && b.is_complete();
    let top = if full { na + nb } else { na.min(nb) };
    let range = |n: usize| n.saturating_sub(nb)..=n.min(na);
    let mut dims = Vec::with_capacity(top + 1);
    let mut offsets: Vec<Vec<usize>> = Vec::new();
    for n in 0..=top {
        let mut off = vec![usize::MAX; n + 1];
        let mut s = 0;
        for p in range(n) {
            off[p] = s;
            s += a.dims[p] * b.dims[n - p];
        }
        offsets.push(off);
        dims.push(s);
    }
    let mut d = Vec::with_capacity(top);
    for n in 0..top {
        let mut t = Vec::new();
        for p in range(n) {
            let q = n - p;
            let (da, db) = (a.dims[p], b.dims[q]);
            if p < na {
                let off_t = offsets[n + 1][p + 1];
                for (r, row) in a.d[p].rows_iter().enumerate() {
                    for (i, v) in row.iter() {
                        for j in 0..db {
                            t.push((off_t + r * db + j, offsets[n][p] + i * db + j, v.clone()));
                        }
                    }
                }
            }
            if q < nb {
                let off_t = offsets[n + 1][p];
                let db1 = b.dims[q + 1];
                for i in 0..da {
                    for (r, row) in b.d[q].rows_iter().enumerate() {
                        for (j, v) in row.iter() {
                            let v = if p % 2 == 0 { v.clone() } else { -v };
                            t.push((off_t + i * db1 + r, offsets[n][p] + i * db + j, v));
                        }
                    }
                }
            }
        }
        d.push(Matrix::from_triplets(dims[n + 1], dims[n], t));
    }
    let c = CochainComplex::new(dims, d)?;
    Ok(if full { c.complete() } else { c })
}

/// Compares `H(C (x) C')` with the Kunneth sum in degrees where every input is exact.
pub fn kunneth_check(a: &CochainComplex, b: &CochainComplex) -> Result<(Vec<usize>, Vec<usize>)> {
    let ha = a.cohomology()?;
    let hb = b.cohomology()?;
    let t = tensor_complex(a, b)?;
    let ht = t.cohomology()?;
    let exact = if a.is_complete() && b.is_complete() {
        ht.dims.len()
    } else {
        ha.exact().len().min(hb.exact().len()).min(ht.exact().len())
    };
    let mut expected = Vec::with_capacity(exact);
    for n in 0..exact {
        expected.push((0..=n).filter(|&p| p < ha.dims.len() && n - p < hb.dims.len()).map(|p| ha.dims[p] * hb.dims[n - p]).sum());
    }
    let got = ht.dims[..exact].to_vec();
    if got != expected {
        return Err(NcError::property("Kunneth", format!("tensor cohomology {got:?} != {expected:?}")));
    }
    Ok((got, expected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Scalar;

    fn interval() -> CochainComplex {
        // C^0 = C^2 -> C^1 = C, d = (-1, 1): cohomology (1, 0)
        let d = Matrix::from_ints(&[&[-1, 1]]);
        CochainComplex::new(vec![2, 1], vec![d]).unwrap().complete()
    }

    #[test]
    fn interval_cohomology() {
        let h = interval().cohomology().unwrap();
        assert_eq!(h.dims, vec![1, 0]);
        assert!(!h.truncated);
    }

    #[test]
    fn truncation_flagged() {
        let c = CochainComplex::new(vec![1, 1], vec![Matrix::zeros(1, 1)]).unwrap();
        assert!(c.cohomology().unwrap().truncated);
    }

    #[test]
    fn d_squared_failure_names_degree() {
        let one = Matrix::identity(1);
        let c = CochainComplex::new(vec![1, 1, 1], vec![one.clone(), one]).unwrap();
        let e = c.cohomology().unwrap_err().to_string();
        assert!(e.contains("degree 0"), "{e}");
    }

    #[test]
    fn kunneth_on_intervals_and_circles() {
        let circle = CochainComplex::new(vec![1, 1], vec![Matrix::zeros(1, 1)]).unwrap().complete();
        let (got, _) = kunneth_check(&circle, &circle).unwrap();
        assert_eq!(got, vec![1, 2, 1]);
        let (got, _) = kunneth_check(&interval(), &circle).unwrap();
        assert_eq!(got, vec![1, 1, 0]);
    }

    #[test]
    fn contractible_homotopy() {
        let c = CochainComplex::new(vec![1, 1], vec![Matrix::identity(1)]).unwrap().complete();
        let h = vec![Matrix::zeros(0, 1), Matrix::from_dense(vec![vec![Scalar::one()]])];
        assert!(verify_homotopy(&c, &h, 0..=0).is_ok());
    }
}
