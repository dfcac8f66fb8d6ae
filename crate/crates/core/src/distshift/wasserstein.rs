use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::linalg::{dot, first_principal_axis};
use crate::scalar::Scalar;

use super::ShiftResult;

/// 1-Wasserstein distance between equal-size 1-D samples: mean absolute
/// difference of their order statistics.
pub fn w1_sorted<T: Scalar>(s: &[T], t: &[T]) -> Result<T> {
    if s.len() != t.len() || s.is_empty() {
        return Err(Error::invalid(format!(
            "W1 on order statistics needs equal non-empty samples, got {} and {}",
            s.len(),
            t.len()
        )));
    }
    let mut s = s.to_vec();
    let mut t = t.to_vec();
    let cmp = |a: &T, b: &T| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal);
    s.sort_by(cmp);
    t.sort_by(cmp);
    let total: T = s.iter().zip(&t).map(|(&a, &b)| (a - b).abs()).sum();
    Ok(total / T::of_usize(s.len()))
}

/// W1 between the projections of `x` and `y` onto the first principal
/// component of their pooled, mean-centred rows.
pub fn w1_projected<T: Scalar>(x: &FeatureMatrix<T>, y: &FeatureMatrix<T>) -> Result<ShiftResult<T>> {
    if x.n() != y.n() {
        return Err(Error::invalid(format!(
            "projected W1 needs paired samples of equal size, got {} and {}",
            x.n(),
            y.n()
        )));
    }
    if x.d() != y.d() {
        return Err(Error::invalid(format!(
            "feature dimensions differ: {} vs {}",
            x.d(),
            y.d()
        )));
    }
    let rows: Vec<&[T]> = x.rows().chain(y.rows()).collect();
    let w = first_principal_axis(&rows).ok_or_else(|| Error::degenerate("pooled rows have zero variance"))?;
    let s: Vec<T> = x.rows().map(|r| dot(r, &w)).collect();
    let t: Vec<T> = y.rows().map(|r| dot(r, &w)).collect();
    Ok(ShiftResult {
        statistic: w1_sorted(&s, &t)?,
        p_value: None,
        bandwidth_used: None,
        n_x: x.n(),
        n_y: y.n(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(xs: &[f64]) -> FeatureMatrix {
        let rows: Vec<[f64; 1]> = xs.iter().map(|&v| [v]).collect();
        FeatureMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn one_dimensional_transport() {
        let r = w1_projected(&col(&[0.0, 1.0]), &col(&[2.0, 3.0])).unwrap();
        assert!((r.statistic - 2.0).abs() < 1e-12);
        assert!(r.p_value.is_none());
    }

    #[test]
    fn identical_samples() {
        let x = FeatureMatrix::from_rows(&[[1.0, 2.0], [0.5, -1.0], [3.0, 0.0]]).unwrap();
        assert_eq!(w1_projected(&x, &x).unwrap().statistic, 0.0);
    }

    #[test]
    fn unequal_counts_and_zero_variance() {
        assert!(matches!(
            w1_projected(&col(&[0.0, 1.0]), &col(&[2.0, 3.0, 4.0])),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            w1_projected(&col(&[1.0, 1.0]), &col(&[1.0, 1.0])),
            Err(Error::Degenerate(_))
        ));
    }
}
