use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::mid_ranks;
use crate::scalar::Scalar;
use crate::statctl::permutation_count_at_least;

use super::rdm::Rdm;

pub const DEFAULT_MANTEL_PERMUTATIONS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationMethod {
    #[default]
    Spearman,
    Pearson,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MantelResult<T = f64> {
    pub r: T,
    /// One-sided add-one permutation p-value, `(1 + #{r_perm >= r}) / (1 + n_perm)`.
    pub p: f64,
    pub n_perm: usize,
}

/// Correlates the upper triangles of two RDMs and assesses the correlation by
/// jointly permuting the rows and columns of `dy`.
pub fn mantel<T: Scalar>(
    dx: &Rdm<T>,
    dy: &Rdm<T>,
    n_perm: usize,
    seed: u64,
    method: CorrelationMethod,
) -> Result<MantelResult<T>> {
    let n = dx.n();
    if dy.n() != n {
        return Err(Error::invalid(format!("RDM sizes differ: {n} vs {}", dy.n())));
    }
    if n < 3 {
        return Err(Error::invalid(format!("Mantel test needs n >= 3, got {n}")));
    }
    if n_perm == 0 {
        return Err(Error::invalid("Mantel test needs at least one permutation"));
    }

    let (ux, uy) = match method {
        CorrelationMethod::Pearson => (dx.upper_triangle(), dy.upper_triangle()),
        CorrelationMethod::Spearman => (mid_ranks(&dx.upper_triangle()), mid_ranks(&dy.upper_triangle())),
    };
    // Permutations only reorder the Y entries, so their mean and spread are fixed.
    let cx = centred(&ux, "DX")?;
    let cy = centred(&uy, "DY")?;
    let sxx = cx.iter().map(|&v| v * v).sum::<T>();
    let syy = cy.iter().map(|&v| v * v).sum::<T>();
    let denom = (sxx * syy).sqrt();

    // Y entries as a full matrix so a permutation can be applied by lookup.
    let mut ymat = vec![T::zero(); n * n];
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            ymat[i * n + j] = cy[k];
            ymat[j * n + i] = cy[k];
            k += 1;
        }
    }
    let stat = |perm: &[usize]| -> T {
        let mut acc = T::zero();
        let mut k = 0;
        for i in 0..n {
            let row = perm[i] * n;
            for j in (i + 1)..n {
                acc = acc + cx[k] * ymat[row + perm[j]];
                k += 1;
            }
        }
        acc / denom
    };

    let identity: Vec<usize> = (0..n).collect();
    let r = stat(&identity);
    let count = permutation_count_at_least(seed, n_perm, n, r.to_f64_lossy(), |p| stat(p).to_f64_lossy());
    Ok(MantelResult {
        r,
        p: (1 + count) as f64 / (1 + n_perm) as f64,
        n_perm,
    })
}

fn centred<T: Scalar>(u: &[T], name: &str) -> Result<Vec<T>> {
    let first = u[0];
    if u.iter().all(|&v| v == first) {
        return Err(Error::degenerate(format!("{name} upper triangle is constant")));
    }
    let m = u.iter().copied().sum::<T>() / T::of_usize(u.len());
    Ok(u.iter().map(|&v| v - m).collect())
}
