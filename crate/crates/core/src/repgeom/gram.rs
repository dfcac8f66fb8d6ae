use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::linalg::{dot, sq_dist};
use crate::scalar::Scalar;

/// Square symmetric kernel matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix<T = f64> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> GramMatrix<T> {
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::invalid(format!(
                    "Gram matrix must be square: row {i} has {} entries for {n} rows",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::from_vec(n, data)
    }

    pub fn from_vec(n: usize, data: Vec<T>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::invalid(format!(
                "Gram matrix needs {n}x{n} > 0 entries, got {}",
                data.len()
            )));
        }
        let tol = T::of(1e-12);
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (data[i * n + j], data[j * n + i]);
                let scale = T::one().max(a.abs()).max(b.abs());
                if !((a - b).abs() <= tol * scale) {
                    return Err(Error::invalid(format!("Gram matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { n, data })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }
}

/// `K = X Xᵀ`.
pub fn linear_gram<T: Scalar>(x: &FeatureMatrix<T>) -> GramMatrix<T> {
    let n = x.n();
    let mut data = vec![T::zero(); n * n];
    for i in 0..n {
        for j in i..n {
            let v = dot(x.row(i), x.row(j));
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    GramMatrix { n, data }
}

/// `K_ij = exp(-|x_i - x_j|² / 2σ²)`.
pub fn rbf_gram<T: Scalar>(x: &FeatureMatrix<T>, sigma: T) -> Result<GramMatrix<T>> {
    if !(sigma > T::zero() && sigma.is_finite()) {
        return Err(Error::invalid(format!("RBF bandwidth must be positive, got {sigma}")));
    }
    let n = x.n();
    let denom = T::of(2.0) * sigma * sigma;
    let mut data = vec![T::zero(); n * n];
    for i in 0..n {
        data[i * n + i] = T::one();
        for j in (i + 1)..n {
            let v = (-sq_dist(x.row(i), x.row(j)) / denom).exp();
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    Ok(GramMatrix { n, data })
}

/// `H K H` with `H = I - 11ᵀ/n`.
pub fn center_gram<T: Scalar>(k: &GramMatrix<T>) -> GramMatrix<T> {
    let n = k.n;
    let nf = T::of_usize(n);
    let row_means: Vec<T> = k
        .data
        .chunks_exact(n)
        .map(|r| r.iter().copied().sum::<T>() / nf)
        .collect();
    // symmetric input: column means equal row means
    let grand = row_means.iter().copied().sum::<T>() / nf;
    let mut data = vec![T::zero(); n * n];
    for i in 0..n {
        for j in i..n {
            let v = k.data[i * n + j] - row_means[i] - row_means[j] + grand;
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    GramMatrix { n, data }
}

/// `tr(KL) / (n-1)²` on already-centred Gram matrices.
pub fn hsic<T: Scalar>(k: &GramMatrix<T>, l: &GramMatrix<T>) -> Result<T> {
    if k.n != l.n {
        return Err(Error::invalid(format!("HSIC size mismatch: {} vs {}", k.n, l.n)));
    }
    if k.n < 2 {
        return Err(Error::invalid("HSIC needs at least two samples"));
    }
    // tr(KL) = Σ_ij K_ij L_ji and both are symmetric
    let tr = dot(&k.data, &l.data);
    let m = T::of_usize(k.n - 1);
    Ok(tr / (m * m))
}

/// Median of the non-zero pairwise Euclidean distances between rows.
///
/// `None` when all rows coincide.
pub fn median_pairwise_distance<T: Scalar>(rows: &[&[T]]) -> Option<T> {
    let mut ds = Vec::with_capacity(rows.len() * rows.len().saturating_sub(1) / 2);
    for i in 0..rows.len() {
        for j in (i + 1)..rows.len() {
            let d = sq_dist(rows[i], rows[j]).sqrt();
            if d > T::zero() {
                ds.push(d);
            }
        }
    }
    if ds.is_empty() {
        return None;
    }
    ds.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let m = ds.len();
    Some(if m % 2 == 1 {
        ds[m / 2]
    } else {
        (ds[m / 2 - 1] + ds[m / 2]) / T::of(2.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centering_annihilates_constants() {
        let k = GramMatrix::<f64>::from_rows(&[[1.0; 3]; 3]).unwrap();
        assert!(center_gram(&k).as_slice().iter().all(|&v| v.abs() < 1e-15));
    }

    #[test]
    fn centred_identity_n2() {
        let k = GramMatrix::<f64>::from_rows(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let c = center_gram(&k);
        assert_eq!(c.as_slice(), &[0.5, -0.5, -0.5, 0.5]);
        // H is idempotent: tr(HH) = tr(H) = n - 1 = 1, and (n - 1)² = 1
        assert_eq!(hsic(&c, &c).unwrap(), 1.0);
    }

    #[test]
    fn centering_is_idempotent() {
        let k = GramMatrix::<f64>::from_rows(&[[2.0, 0.3, -1.0], [0.3, 1.0, 0.2], [-1.0, 0.2, 4.0]]).unwrap();
        let c1 = center_gram(&k);
        let c2 = center_gram(&c1);
        for (a, b) in c1.as_slice().iter().zip(c2.as_slice()) {
            assert!((a - b).abs() < 1e-12);
        }
        let rows_sum: f64 = c1.as_slice()[..3].iter().sum();
        assert!(rows_sum.abs() < 1e-8 * 3.0);
    }

    #[test]
    fn non_square_is_rejected() {
        assert!(GramMatrix::<f64>::from_rows(&[vec![1.0, 2.0]]).is_err());
        assert!(GramMatrix::<f64>::from_rows(&[[1.0, 2.0], [3.0, 1.0]]).is_err());
    }

    #[test]
    fn hsic_zero_and_symmetric() {
        let k =
            center_gram(&GramMatrix::<f64>::from_rows(&[[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 1.0]]).unwrap());
        let l =
            center_gram(&GramMatrix::<f64>::from_rows(&[[1.0, 0.5, 0.2], [0.5, 1.0, 0.1], [0.2, 0.1, 1.0]]).unwrap());
        let z = GramMatrix::<f64>::from_vec(3, vec![0.0; 9]).unwrap();
        assert_eq!(hsic(&k, &z).unwrap(), 0.0);
        assert_eq!(hsic(&k, &l).unwrap(), hsic(&l, &k).unwrap());
        let two = GramMatrix::<f64>::from_vec(2, vec![0.0; 4]).unwrap();
        assert!(hsic(&k, &two).is_err());
    }

    #[test]
    fn median_distance_examples() {
        let med = |xs: &[f64]| {
            let rows: Vec<[f64; 1]> = xs.iter().map(|&v| [v]).collect();
            let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
            median_pairwise_distance(&refs)
        };
        assert_eq!(med(&[0.0, 1.0]), Some(1.0));
        assert_eq!(med(&[0.0, 1.0, 3.0]), Some(2.0));
        assert_eq!(med(&[0.0, 0.0, 2.0]), Some(2.0));
        assert_eq!(med(&[4.0, 4.0]), None);
    }
}
