use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::features::{ensure_aligned, FeatureMatrix};
use crate::linalg::{dist, dot, first_principal_axis, norm};
use crate::scalar::Scalar;

use super::normality::shapiro_wilk;
use super::wilcoxon::wilcoxon_signed_rank;

pub const DEFAULT_NORMALITY_ALPHA: f64 = 0.05;

/// Per-pair cosine similarity and Euclidean distance between matched rows.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSimilarity<T = f64> {
    pub mean_cosine: T,
    pub mean_l2: T,
    pub cosines: Vec<T>,
    pub l2: Vec<T>,
}

pub fn paired_similarity<T: Scalar>(x: &FeatureMatrix<T>, y: &FeatureMatrix<T>) -> Result<PairedSimilarity<T>> {
    ensure_aligned(x, y)?;
    if x.d() != y.d() {
        return Err(Error::invalid(format!(
            "feature dimensions differ: {} vs {}",
            x.d(),
            y.d()
        )));
    }
    let mut cosines = Vec::with_capacity(x.n());
    let mut l2 = Vec::with_capacity(x.n());
    for i in 0..x.n() {
        let (a, b) = (x.row(i), y.row(i));
        let (na, nb) = (norm(a), norm(b));
        if na <= T::zero() || nb <= T::zero() {
            return Err(Error::degenerate(format!(
                "pair {:?} has a zero-norm row; cosine undefined",
                x.pair_ids()[i]
            )));
        }
        let c = if a == b {
            T::one()
        } else {
            (dot(a, b) / (na * nb)).max(-T::one()).min(T::one())
        };
        cosines.push(c);
        l2.push(dist(a, b));
    }
    let nf = T::of_usize(x.n());
    Ok(PairedSimilarity {
        mean_cosine: cosines.iter().copied().sum::<T>() / nf,
        mean_l2: l2.iter().copied().sum::<T>() / nf,
        cosines,
        l2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairedTest {
    T,
    Wilcoxon,
}

impl PairedTest {
    pub fn as_str(self) -> &'static str {
        match self {
            PairedTest::T => "t",
            PairedTest::Wilcoxon => "wilcoxon",
        }
    }
}

/// Mean-shift test on the paired differences projected onto their first
/// principal component.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedStability<T = f64> {
    pub mean_cosine: T,
    pub mean_l2: T,
    pub test_type: PairedTest,
    /// Absent when the projected differences are all equal.
    pub statistic: Option<f64>,
    /// Two-sided.
    pub p_value: f64,
    /// Absent when the projected differences have zero range.
    pub shapiro_p: Option<f64>,
    /// Set when the projected differences are constant.
    pub degenerate: bool,
    pub n: usize,
    pub projected: Vec<T>,
}

/// Paired t statistic `d̄ / (s_d / √n)` and its two-sided p-value.
///
/// `None` when `s_d = 0` or `n < 2`.
pub fn paired_t(d: &[f64]) -> Option<(f64, f64)> {
    let n = d.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mean = d.iter().sum::<f64>() / nf;
    let var = d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    if var <= 0.0 {
        return None;
    }
    let t = mean / (var.sqrt() / nf.sqrt());
    let dist = StudentsT::new(0.0, 1.0, nf - 1.0).ok()?;
    Some((t, (2.0 * dist.sf(t.abs())).min(1.0)))
}

/// Shapiro-Wilk gates between a paired t-test (normality not rejected at
/// `alpha_normality`) and a Wilcoxon signed-rank test.
pub fn paired_shift_test<T: Scalar>(
    x: &FeatureMatrix<T>,
    y: &FeatureMatrix<T>,
    alpha_normality: f64,
) -> Result<PairedStability<T>> {
    let sim = paired_similarity(x, y)?;
    let n = x.n();
    if n < 4 {
        return Err(Error::invalid(format!("paired shift test needs n >= 4, got {n}")));
    }
    let diffs: Vec<Vec<T>> = (0..n)
        .map(|i| x.row(i).iter().zip(y.row(i)).map(|(&a, &b)| a - b).collect())
        .collect();
    let refs: Vec<&[T]> = diffs.iter().map(|v| v.as_slice()).collect();
    // A pure translation has no spread to take a principal axis from; project
    // onto the mean difference instead so the shift is still detected.
    let axis = first_principal_axis(&refs).or_else(|| {
        let mut m = diffs[0].clone();
        let nrm = norm(&m);
        (nrm > T::zero()).then(|| {
            m.iter_mut().for_each(|v| *v = *v / nrm);
            m
        })
    });
    let projected: Vec<T> = match &axis {
        Some(w) => refs.iter().map(|r| dot(r, w)).collect(),
        None => vec![T::zero(); n],
    };
    let d: Vec<f64> = projected.iter().map(|v| v.to_f64_lossy()).collect();

    let first = d[0];
    if d.iter().all(|&v| v == first) {
        return Ok(PairedStability {
            mean_cosine: sim.mean_cosine,
            mean_l2: sim.mean_l2,
            test_type: PairedTest::T,
            statistic: None,
            p_value: if first == 0.0 { 1.0 } else { 0.0 },
            shapiro_p: None,
            degenerate: true,
            n,
            projected,
        });
    }

    let sw = shapiro_wilk(&d)?;
    let (test_type, statistic, p_value) = if sw.p_value > alpha_normality {
        match paired_t(&d) {
            Some((t, p)) => (PairedTest::T, t, p),
            None => unreachable!("non-constant sample has positive variance"),
        }
    } else {
        let w = wilcoxon_signed_rank(&d);
        (PairedTest::Wilcoxon, w.statistic, w.p_value)
    };
    Ok(PairedStability {
        mean_cosine: sim.mean_cosine,
        mean_l2: sim.mean_l2,
        test_type,
        statistic: Some(statistic),
        p_value,
        shapiro_p: Some(sw.p_value),
        degenerate: false,
        n,
        projected,
    })
}
