use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::linalg::dist;
use crate::scalar::Scalar;
use crate::statctl::permutation_count_at_least;

use super::ShiftResult;

/// Energy distance in V-statistic form:
/// `2/(mn) Σ|x-y| - 1/m² Σ|x-x'| - 1/n² Σ|y-y'|`.
pub fn energy_distance<T: Scalar>(x: &FeatureMatrix<T>, y: &FeatureMatrix<T>) -> Result<T> {
    let pooled = PooledDistances::new(x, y)?;
    let identity: Vec<usize> = (0..pooled.total).collect();
    Ok(pooled.statistic(&identity))
}

/// Energy distance with a label-permutation p-value.
pub fn energy_perm_test<T: Scalar>(
    x: &FeatureMatrix<T>,
    y: &FeatureMatrix<T>,
    n_perm: usize,
    seed: u64,
) -> Result<ShiftResult<T>> {
    if x.n() < 2 || y.n() < 2 {
        return Err(Error::invalid(format!(
            "energy permutation test needs at least two samples per side, got {} and {}",
            x.n(),
            y.n()
        )));
    }
    if n_perm == 0 {
        return Err(Error::invalid("permutation test needs at least one permutation"));
    }
    let pooled = PooledDistances::new(x, y)?;
    let identity: Vec<usize> = (0..pooled.total).collect();
    let observed = pooled.statistic(&identity);
    let count = permutation_count_at_least(seed, n_perm, pooled.total, observed.to_f64_lossy(), |p| {
        pooled.statistic(p).to_f64_lossy()
    });
    Ok(ShiftResult {
        statistic: observed,
        p_value: Some((1 + count) as f64 / (1 + n_perm) as f64),
        bandwidth_used: None,
        n_x: x.n(),
        n_y: y.n(),
    })
}

struct PooledDistances<T> {
    m: usize,
    total: usize,
    d: Vec<T>,
}

impl<T: Scalar> PooledDistances<T> {
    fn new(x: &FeatureMatrix<T>, y: &FeatureMatrix<T>) -> Result<Self> {
        if x.d() != y.d() {
            return Err(Error::invalid(format!(
                "feature dimensions differ: {} vs {}",
                x.d(),
                y.d()
            )));
        }
        let rows: Vec<&[T]> = x.rows().chain(y.rows()).collect();
        let total = rows.len();
        let mut d = vec![T::zero(); total * total];
        for i in 0..total {
            for j in (i + 1)..total {
                let v = dist(rows[i], rows[j]);
                d[i * total + j] = v;
                d[j * total + i] = v;
            }
        }
        Ok(Self { m: x.n(), total, d })
    }

    fn statistic(&self, labels: &[usize]) -> T {
        let (xs, ys) = labels.split_at(self.m);
        let within = |idx: &[usize]| -> T {
            let mut s = T::zero();
            for (a, &i) in idx.iter().enumerate() {
                for &j in &idx[a + 1..] {
                    s = s + self.d[i * self.total + j];
                }
            }
            let c = T::of_usize(idx.len());
            T::of(2.0) * s / (c * c)
        };
        let mut cross = T::zero();
        for &i in xs {
            for &j in ys {
                cross = cross + self.d[i * self.total + j];
            }
        }
        let mn = T::of_usize(xs.len() * ys.len());
        T::of(2.0) * cross / mn - within(xs) - within(ys)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(xs: &[f64]) -> FeatureMatrix {
        let rows: Vec<[f64; 1]> = xs.iter().map(|&v| [v]).collect();
        FeatureMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn single_points() {
        assert_eq!(energy_distance(&col(&[0.0]), &col(&[3.0])).unwrap(), 6.0);
    }

    #[test]
    fn identical_samples_give_zero() {
        let x = col(&[0.3, -1.0, 2.5, 0.0]);
        assert!(energy_distance(&x, &x).unwrap().abs() < 1e-12);
    }

    #[test]
    fn permutation_test_needs_two_per_side() {
        assert!(energy_perm_test(&col(&[0.0]), &col(&[1.0, 2.0]), 10, 0).is_err());
    }
}
