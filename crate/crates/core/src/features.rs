//! Paired feature matrices: `n` samples by `d` dimensions, one stable pair id per row.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major `n x d` matrix of finite reals with a pair id for every row.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix<T = f64> {
    n: usize,
    d: usize,
    values: Vec<T>,
    pair_ids: Vec<String>,
}

impl<T: Scalar> FeatureMatrix<T> {
    pub fn new(n: usize, d: usize, values: Vec<T>, pair_ids: Vec<String>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::invalid(format!("feature matrix must be non-empty, got {n}x{d}")));
        }
        if values.len() != n * d {
            return Err(Error::invalid(format!(
                "expected {} values for a {n}x{d} matrix, got {}",
                n * d,
                values.len()
            )));
        }
        if pair_ids.len() != n {
            return Err(Error::invalid(format!("{} pair ids for {n} rows", pair_ids.len())));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite value at row {}, column {}",
                pos / d,
                pos % d
            )));
        }
        let mut seen = HashSet::with_capacity(n);
        for id in &pair_ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::invalid(format!("duplicate pair id {id:?}")));
            }
        }
        Ok(Self { n, d, values, pair_ids })
    }

    /// Builds a matrix from rows, numbering pair ids `0..n`.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(n * d);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != d {
                return Err(Error::invalid(format!("row {i} has {} columns, expected {d}", r.len())));
            }
            values.extend_from_slice(r);
        }
        Self::new(n, d, values, (0..n).map(|i| i.to_string()).collect())
    }

    pub fn with_pair_ids(mut self, pair_ids: Vec<String>) -> Result<Self> {
        let values = std::mem::take(&mut self.values);
        Self::new(self.n, self.d, values, pair_ids)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[T]> + '_ {
        self.values.chunks_exact(self.d)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn pair_ids(&self) -> &[String] {
        &self.pair_ids
    }

    /// Keeps the rows whose index satisfies `keep`, preserving order.
    pub fn select_rows(&self, keep: impl Fn(usize) -> bool) -> Result<Self> {
        let idx: Vec<usize> = (0..self.n).filter(|&i| keep(i)).collect();
        let mut values = Vec::with_capacity(idx.len() * self.d);
        for &i in &idx {
            values.extend_from_slice(self.row(i));
        }
        let ids = idx.iter().map(|&i| self.pair_ids[i].clone()).collect();
        Self::new(idx.len(), self.d, values, ids)
    }

    /// Returns the matrix with every entry converted to another scalar type.
    pub fn cast<U: Scalar>(&self) -> FeatureMatrix<U> {
        FeatureMatrix {
            n: self.n,
            d: self.d,
            values: self.values.iter().map(|v| U::of(v.to_f64_lossy())).collect(),
            pair_ids: self.pair_ids.clone(),
        }
    }
}

/// Checks that two matrices describe the same pairs in the same order.
pub fn ensure_aligned<T: Scalar>(x: &FeatureMatrix<T>, y: &FeatureMatrix<T>) -> Result<()> {
    if x.n() != y.n() {
        return Err(Error::Misaligned(format!("row counts differ ({} vs {})", x.n(), y.n())));
    }
    if let Some(i) = (0..x.n()).find(|&i| x.pair_ids[i] != y.pair_ids[i]) {
        return Err(Error::Misaligned(format!(
            "row {i}: {:?} vs {:?}",
            x.pair_ids[i], y.pair_ids[i]
        )));
    }
    Ok(())
}
