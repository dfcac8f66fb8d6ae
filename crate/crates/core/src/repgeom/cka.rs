use crate::error::{Error, Result};
use crate::features::{ensure_aligned, FeatureMatrix};
use crate::linalg::sq_dist;
use crate::scalar::Scalar;

use super::gram::{center_gram, hsic, linear_gram, median_pairwise_distance, GramMatrix};

/// RBF bandwidth choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth<T = f64> {
    Fixed(T),
    /// Median of each matrix's own non-zero pairwise distances.
    MedianHeuristic,
}

/// Linear CKA between paired representations.
pub fn cka_linear<T: Scalar>(x: &FeatureMatrix<T>, y: &FeatureMatrix<T>) -> Result<T> {
    ensure_aligned(x, y)?;
    cka_from_grams(&linear_gram(x), &linear_gram(y))
}

/// CKA on Gaussian kernels. With [`Bandwidth::MedianHeuristic`] the two
/// sides get independent bandwidths.
pub fn cka_rbf<T: Scalar>(x: &FeatureMatrix<T>, y: &FeatureMatrix<T>, bandwidth: Bandwidth<T>) -> Result<T> {
    ensure_aligned(x, y)?;
    let (sx, sy) = match bandwidth {
        Bandwidth::Fixed(s) => (s, s),
        Bandwidth::MedianHeuristic => (own_median(x, "X")?, own_median(y, "Y")?),
    };
    cka_from_grams(&rbf_gram_offset(x, sx)?, &rbf_gram_offset(y, sy)?)
}

// K - 11ᵀ via expm1. Centring removes the constant, and the offset keeps
// full precision when the bandwidth is large and every entry is close to 1.
fn rbf_gram_offset<T: Scalar>(x: &FeatureMatrix<T>, sigma: T) -> Result<GramMatrix<T>> {
    if !(sigma > T::zero() && sigma.is_finite()) {
        return Err(Error::invalid(format!("RBF bandwidth must be positive, got {sigma}")));
    }
    let n = x.n();
    let denom = T::of(2.0) * sigma * sigma;
    let mut data = vec![T::zero(); n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (-sq_dist(x.row(i), x.row(j)) / denom).exp_m1();
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    GramMatrix::from_vec(n, data)
}

fn own_median<T: Scalar>(m: &FeatureMatrix<T>, side: &str) -> Result<T> {
    let rows: Vec<&[T]> = m.rows().collect();
    median_pairwise_distance(&rows)
        .ok_or_else(|| Error::degenerate(format!("all rows of {side} are identical; median bandwidth is 0")))
}

fn cka_from_grams<T: Scalar>(k: &GramMatrix<T>, l: &GramMatrix<T>) -> Result<T> {
    let kc = center_gram(k);
    let lc = center_gram(l);
    let kk = self_hsic(k, &kc, "X")?;
    let ll = self_hsic(l, &lc, "Y")?;
    Ok(hsic(&kc, &lc)? / (kk * ll).sqrt())
}

// Self-HSIC that is zero up to rounding relative to the raw kernel means the
// centred kernel vanished: constant features.
fn self_hsic<T: Scalar>(raw: &GramMatrix<T>, centred: &GramMatrix<T>, side: &str) -> Result<T> {
    let h = hsic(centred, centred)?;
    let raw_energy = hsic(raw, raw)?;
    if !(h > T::of(1e-30) * raw_energy) {
        return Err(Error::degenerate(format!(
            "{side} has zero self-HSIC (constant features)"
        )));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fm(rows: &[Vec<f64>]) -> FeatureMatrix {
        FeatureMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn self_similarity_is_one() {
        let x = fm(&[vec![1.0, 0.2], vec![-0.3, 2.0], vec![0.7, 0.7], vec![3.0, -1.0]]);
        assert!((cka_linear(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        assert!((cka_rbf(&x, &x, Bandwidth::MedianHeuristic).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_features_are_degenerate() {
        let x = fm(&vec![vec![1.0, 2.0]; 4]);
        let y = fm(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![2.0, 2.0], vec![-1.0, 0.5]]);
        assert!(matches!(cka_linear(&x, &y), Err(Error::Degenerate(_))));
        assert!(matches!(
            cka_rbf(&x, &y, Bandwidth::MedianHeuristic),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn misaligned_pairs_error() {
        let x = fm(&[vec![1.0], vec![2.0], vec![4.0]]);
        let y = x
            .clone()
            .with_pair_ids(vec!["2".into(), "1".into(), "0".into()])
            .unwrap();
        assert!(matches!(cka_linear(&x, &y), Err(Error::Misaligned(_))));
    }
}
