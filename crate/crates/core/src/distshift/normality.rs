//! Shapiro-Wilk W test using Royston's (1995) polynomial approximations.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Samples above this size are tested on an evenly strided subsample.
pub const SHAPIRO_MAX_N: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapiroWilk {
    pub w: f64,
    pub p_value: f64,
    /// Number of observations actually tested.
    pub n: usize,
}

const SMALL: f64 = 1e-19;

const G: [f64; 2] = [-2.273, 0.459];
const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.544, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

/// Shapiro-Wilk normality test, valid for `4 <= n`. For `n > 5000` an evenly
/// strided subsample of 5000 sorted observations is tested.
pub fn shapiro_wilk(sample: &[f64]) -> Result<ShapiroWilk> {
    if sample.len() < 4 {
        return Err(Error::invalid(format!(
            "Shapiro-Wilk needs at least 4 observations, got {}",
            sample.len()
        )));
    }
    if sample.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("Shapiro-Wilk sample contains non-finite values"));
    }
    let mut x = sample.to_vec();
    x.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if x.len() > SHAPIRO_MAX_N {
        let total = x.len();
        x = (0..SHAPIRO_MAX_N).map(|i| x[i * total / SHAPIRO_MAX_N]).collect();
    }
    let n = x.len();
    let range = x[n - 1] - x[0];
    if range < SMALL {
        return Err(Error::degenerate("Shapiro-Wilk sample has zero range"));
    }

    let a = coefficients(n);
    let mean = x.iter().sum::<f64>() / n as f64;
    let ss: f64 = x.iter().map(|v| ((v - mean) / range).powi(2)).sum();
    let num: f64 = a
        .iter()
        .enumerate()
        .map(|(i, &ai)| ai * (x[n - 1 - i] - x[i]) / range)
        .sum();
    let w = (num * num / ss).min(1.0);

    Ok(ShapiroWilk {
        w,
        p_value: p_value(w, n),
        n,
    })
}

/// Upper-half antisymmetric coefficients `a_1..a_{n/2}` (largest first).
fn coefficients(n: usize) -> Vec<f64> {
    let half = n / 2;
    let an = n as f64;
    let std = Normal::standard();
    let m: Vec<f64> = (1..=half)
        .map(|i| std.inverse_cdf((i as f64 - 0.375) / (an + 0.25)))
        .collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / an.sqrt();
    let a1 = poly(&C1, rsn) - m[0] / ssumm2;

    let mut a = vec![0.0; half];
    a[0] = a1;
    let (first, fac) = if n > 5 {
        let a2 = -m[1] / ssumm2 + poly(&C2, rsn);
        a[1] = a2;
        let fac = ((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2)).sqrt();
        (2, fac)
    } else {
        let fac = ((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
        (1, fac)
    };
    for i in first..half {
        a[i] = -m[i] / fac;
    }
    a
}

fn p_value(w: f64, n: usize) -> f64 {
    let an = n as f64;
    let w1 = 1.0 - w;
    if w1 <= 0.0 {
        return 1.0;
    }
    let mut y = w1.ln();
    let (m, s) = if n <= 11 {
        let gamma = poly(&G, an);
        if y >= gamma {
            return 1e-99;
        }
        y = -(gamma - y).ln();
        (poly(&C3, an), poly(&C4, an).exp())
    } else {
        let xx = an.ln();
        (poly(&C5, xx), poly(&C6, xx).exp())
    };
    Normal::new(m, s).map(|d| d.sf(y)).unwrap_or(f64::NAN)
}
