use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::linalg::sq_dist;
use crate::repgeom::{median_pairwise_distance, Bandwidth};
use crate::scalar::Scalar;
use crate::statctl::permutation_count_at_least;

use super::ShiftResult;

/// Median of the non-zero pairwise distances over the pooled rows of `x` and `y`.
pub fn median_heuristic<T: Scalar>(x: &FeatureMatrix<T>, y: &FeatureMatrix<T>) -> Result<T> {
    check_dims(x, y)?;
    let rows: Vec<&[T]> = x.rows().chain(y.rows()).collect();
    median_pairwise_distance(&rows)
        .ok_or_else(|| Error::degenerate("all pooled rows are identical; median bandwidth is 0"))
}

/// Unbiased MMD² U-statistic with a Gaussian kernel of width `sigma`.
pub fn mmd_unbiased<T: Scalar>(x: &FeatureMatrix<T>, y: &FeatureMatrix<T>, sigma: T) -> Result<T> {
    check_sizes(x, y)?;
    let pooled = PooledKernel::new(x, y, sigma)?;
    let identity: Vec<usize> = (0..pooled.total).collect();
    Ok(pooled.statistic(&identity))
}

/// MMD² with a label-permutation p-value.
pub fn mmd_perm_test<T: Scalar>(
    x: &FeatureMatrix<T>,
    y: &FeatureMatrix<T>,
    bandwidth: Bandwidth<T>,
    n_perm: usize,
    seed: u64,
) -> Result<ShiftResult<T>> {
    check_sizes(x, y)?;
    if n_perm == 0 {
        return Err(Error::invalid("permutation test needs at least one permutation"));
    }
    let sigma = match bandwidth {
        Bandwidth::Fixed(s) => s,
        Bandwidth::MedianHeuristic => median_heuristic(x, y)?,
    };
    let pooled = PooledKernel::new(x, y, sigma)?;
    let identity: Vec<usize> = (0..pooled.total).collect();
    let observed = pooled.statistic(&identity);
    let count = permutation_count_at_least(seed, n_perm, pooled.total, observed.to_f64_lossy(), |p| {
        pooled.statistic(p).to_f64_lossy()
    });
    Ok(ShiftResult {
        statistic: observed,
        p_value: Some((1 + count) as f64 / (1 + n_perm) as f64),
        bandwidth_used: Some(sigma),
        n_x: x.n(),
        n_y: y.n(),
    })
}

fn check_dims<T: Scalar>(x: &FeatureMatrix<T>, y: &FeatureMatrix<T>) -> Result<()> {
    if x.d() != y.d() {
        return Err(Error::invalid(format!(
            "feature dimensions differ: {} vs {}",
            x.d(),
            y.d()
        )));
    }
    Ok(())
}

fn check_sizes<T: Scalar>(x: &FeatureMatrix<T>, y: &FeatureMatrix<T>) -> Result<()> {
    check_dims(x, y)?;
    if x.n() < 2 || y.n() < 2 {
        return Err(Error::invalid(format!(
            "unbiased MMD needs at least two samples per side, got {} and {}",
            x.n(),
            y.n()
        )));
    }
    Ok(())
}

/// Gaussian kernel over the pooled sample; the first `m` indices of a
/// relabelling are treated as X.
struct PooledKernel<T> {
    m: usize,
    total: usize,
    k: Vec<T>,
}

impl<T: Scalar> PooledKernel<T> {
    fn new(x: &FeatureMatrix<T>, y: &FeatureMatrix<T>, sigma: T) -> Result<Self> {
        if !(sigma > T::zero() && sigma.is_finite()) {
            return Err(Error::invalid(format!("RBF bandwidth must be positive, got {sigma}")));
        }
        let rows: Vec<&[T]> = x.rows().chain(y.rows()).collect();
        let total = rows.len();
        let denom = T::of(2.0) * sigma * sigma;
        let mut k = vec![T::one(); total * total];
        for i in 0..total {
            for j in (i + 1)..total {
                let v = (-sq_dist(rows[i], rows[j]) / denom).exp();
                k[i * total + j] = v;
                k[j * total + i] = v;
            }
        }
        Ok(Self { m: x.n(), total, k })
    }

    fn statistic(&self, labels: &[usize]) -> T {
        let (xs, ys) = labels.split_at(self.m);
        let within = |idx: &[usize]| -> T {
            let mut s = T::zero();
            for (a, &i) in idx.iter().enumerate() {
                for &j in &idx[a + 1..] {
                    s = s + self.k[i * self.total + j];
                }
            }
            let c = T::of_usize(idx.len());
            T::of(2.0) * s / (c * (c - T::one()))
        };
        let mut cross = T::zero();
        for &i in xs {
            for &j in ys {
                cross = cross + self.k[i * self.total + j];
            }
        }
        let mn = T::of_usize(xs.len() * ys.len());
        within(xs) + within(ys) - T::of(2.0) * cross / mn
    }
}
