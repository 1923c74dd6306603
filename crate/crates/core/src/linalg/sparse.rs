//! Sorted sparse vectors and a dense scratch accumulator.

use super::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    /// From already sorted, duplicate-free entries; zeros are dropped.
    pub fn from_sorted(entries: Vec<(usize, Scalar)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        SparseVec { entries: entries.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    /// From arbitrary entries; duplicates are summed.
    pub fn from_entries(mut entries: Vec<(usize, Scalar)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match out.last_mut() {
                Some((j, w)) if *j == i => *w += &v,
                _ => out.push((i, v)),
            }
        }
        SparseVec::from_sorted(out)
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, Scalar::one())] }
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        SparseVec {
            entries: v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect(),
        }
    }

    pub fn to_dense(&self, n: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); n];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Scalar)> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|e| e.0)
    }

    pub fn get(&self, i: usize) -> Scalar {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn get_ref(&self, i: usize) -> Option<&Scalar> {
        self.entries.binary_search_by_key(&i, |e| e.0).ok().map(|k| &self.entries[k].1)
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        if c.is_one() {
            return self.clone();
        }
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect() }
    }

    pub fn conj(&self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v.conj())).collect() }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Scalar, other: &SparseVec) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() || b < other.entries.len() {
            let ia = self.entries.get(a).map(|e| e.0).unwrap_or(usize::MAX);
            let ib = other.entries.get(b).map(|e| e.0).unwrap_or(usize::MAX);
            if ia < ib {
                out.push(self.entries[a].clone());
                a += 1;
            } else if ib < ia {
                out.push((ib, c * &other.entries[b].1));
                b += 1;
            } else {
                let mut v = self.entries[a].1.clone();
                v.add_mul(c, &other.entries[b].1);
                if !v.is_zero() {
                    out.push((ia, v));
                }
                a += 1;
                b += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&Scalar::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&-Scalar::one(), other)
    }

    /// Bilinear pairing `sum_i self_i other_i` (no conjugation).
    pub fn dot(&self, other: &SparseVec) -> Scalar {
        let mut acc = Scalar::zero();
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (ia, ib) = (self.entries[a].0, other.entries[b].0);
            if ia < ib {
                a += 1;
            } else if ib < ia {
                b += 1;
            } else {
                acc.add_mul(&self.entries[a].1, &other.entries[b].1);
                a += 1;
                b += 1;
            }
        }
        acc
    }

    /// Reindex entries through `f`; entries mapped to `None` are dropped.
    pub fn remap(&self, f: impl Fn(usize) -> Option<usize>) -> SparseVec {
        SparseVec::from_entries(self.entries.iter().filter_map(|(i, v)| f(*i).map(|j| (j, v.clone()))).collect())
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }
}

/// Dense scratch buffer that remembers which slots were written.
pub struct Acc {
    vals: Vec<Scalar>,
    touched_flag: Vec<bool>,
    touched: Vec<usize>,
}

impl Acc {
    pub fn new(n: usize) -> Self {
        Acc { vals: vec![Scalar::zero(); n], touched_flag: vec![false; n], touched: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    #[inline]
    fn touch(&mut self, i: usize) -> bool {
        if !self.touched_flag[i] {
            self.touched_flag[i] = true;
            self.touched.push(i);
            true
        } else {
            false
        }
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.vals[i]
    }

    pub fn add(&mut self, i: usize, v: &Scalar) {
        self.touch(i);
        self.vals[i] += v;
    }

    pub fn add_mul(&mut self, i: usize, a: &Scalar, b: &Scalar) {
        self.touch(i);
        self.vals[i].add_mul(a, b);
    }

    /// `self += c * v`, calling `on_new` for slots touched for the first time.
    pub fn axpy_with(&mut self, c: &Scalar, v: &SparseVec, mut on_new: impl FnMut(usize)) {
        for (i, x) in v.iter() {
            if self.touch(i) {
                on_new(i);
            }
            self.vals[i].add_mul(c, x);
        }
    }

    pub fn axpy(&mut self, c: &Scalar, v: &SparseVec) {
        self.axpy_with(c, v, |_| {});
    }

    pub fn take(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            self.touched_flag[i] = false;
            let v = std::mem::take(&mut self.vals[i]);
            if !v.is_zero() {
                out.push((i, v));
            }
        }
        self.touched.clear();
        SparseVec::from_sorted(out)
    }

    pub fn clear(&mut self) {
        for &i in &self.touched {
            self.touched_flag[i] = false;
            self.vals[i] = Scalar::zero();
        }
        self.touched.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axpy_cancels() {
        let a = SparseVec::from_entries(vec![(3, Scalar::int(2)), (1, Scalar::int(1))]);
        let b = SparseVec::from_entries(vec![(3, Scalar::int(1)), (5, Scalar::int(1))]);
        let c = a.axpy(&Scalar::int(-2), &b);
        assert_eq!(c.entries(), &[(1, Scalar::int(1)), (5, Scalar::int(-2))]);
        assert_eq!(a.dot(&b), Scalar::int(2));
    }

    #[test]
    fn acc_roundtrip() {
        let mut acc = Acc::new(6);
        let v = SparseVec::from_entries(vec![(4, Scalar::int(1)), (0, Scalar::int(3))]);
        acc.axpy(&Scalar::int(2), &v);
        acc.add(4, &Scalar::int(-2));
        assert_eq!(acc.take(), SparseVec::unit(0).scale(&Scalar::int(6)));
        assert!(acc.take().is_zero());
    }
}
