use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::linalg::{dot, norm};
use crate::scalar::Scalar;

/// Representational dissimilarity matrix: symmetric, zero diagonal, entries in `[0, 2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rdm<T = f64> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Rdm<T> {
    pub fn from_vec(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::invalid(format!(
                "RDM needs {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        let two = T::of(2.0);
        for i in 0..n {
            if data[i * n + i] != T::zero() {
                return Err(Error::invalid(format!("RDM diagonal entry {i} is not zero")));
            }
            for j in (i + 1)..n {
                let v = data[i * n + j];
                if v != data[j * n + i] {
                    return Err(Error::invalid(format!("RDM not symmetric at ({i}, {j})")));
                }
                if !(v >= T::zero() && v <= two) {
                    return Err(Error::invalid(format!("RDM entry ({i}, {j}) = {v} outside [0, 2]")));
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let data: Vec<T> = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::from_vec(n, data)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    /// Entries above the diagonal in row-major order.
    pub fn upper_triangle(&self) -> Vec<T> {
        let n = self.n;
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| self.data[i * n + j])
            .collect()
    }
}

/// `D_ij = 1 - cos(x_i, x_j)`.
pub fn rdm_cosine<T: Scalar>(x: &FeatureMatrix<T>) -> Result<Rdm<T>> {
    let n = x.n();
    let norms: Vec<T> = x.rows().map(norm).collect();
    if let Some(i) = norms.iter().position(|&v| v <= T::zero()) {
        return Err(Error::degenerate(format!(
            "row {i} (pair {:?}) has zero norm",
            x.pair_ids()[i]
        )));
    }
    let two = T::of(2.0);
    let mut data = vec![T::zero(); n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = if x.row(i) == x.row(j) {
                T::zero()
            } else {
                let c = dot(x.row(i), x.row(j)) / (norms[i] * norms[j]);
                (T::one() - c).max(T::zero()).min(two)
            };
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    Ok(Rdm { n, data })
}
