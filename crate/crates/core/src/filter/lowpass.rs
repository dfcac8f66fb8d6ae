use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::raster::RgbImage;

/// Gaussian width whose gain falls to 1/2 at `cutoff`: `σ = f_c / √(2 ln 2)`.
pub fn sigma_for_half_gain(cutoff: f64) -> f64 {
    cutoff / (2.0 * std::f64::consts::LN_2).sqrt()
}

/// Signed frequency of DFT bin `k` of an `n`-point transform, cycles per sample.
#[inline]
pub(crate) fn bin_frequency(k: usize, n: usize) -> f64 {
    if 2 * k <= n {
        k as f64 / n as f64
    } else {
        (k as f64 - n as f64) / n as f64
    }
}

/// Frequency-domain Gaussian low-pass `H(u, v) = exp(-(u²+v²)/2σ²)` per channel,
/// frequencies in cycles per pixel. Real part of the inverse transform, clamped.
pub fn spatial_lowpass<T: Scalar>(img: &RgbImage<T>, sigma_lp: f64) -> Result<RgbImage<T>> {
    if img.is_empty() {
        return Err(Error::invalid("spatial low-pass on a zero-sized image"));
    }
    if !(sigma_lp > 0.0 && sigma_lp.is_finite()) {
        return Err(Error::config(format!("sigma_lp must be > 0, got {sigma_lp}")));
    }
    let (h, w) = (img.height(), img.width());
    let denom = 2.0 * sigma_lp * sigma_lp;
    let gain_x: Vec<f64> = (0..w).map(|k| bin_frequency(k, w).powi(2)).collect();
    let gain_y: Vec<f64> = (0..h).map(|k| bin_frequency(k, h).powi(2)).collect();
    let transfer: Vec<T> = (0..h)
        .flat_map(|ky| gain_x.iter().map(move |&ux| (ky, ux)))
        .map(|(ky, ux)| T::of((-(ux + gain_y[ky]) / denom).exp()))
        .collect();

    let mut planner = FftPlanner::<T>::new();
    let planes = [0, 1, 2].map(|c| {
        let mut buf: Vec<Complex<T>> = img.channel(c).into_iter().map(|v| Complex::new(v, T::zero())).collect();
        fft_2d(&mut planner, &mut buf, h, w, false);
        for (z, &g) in buf.iter_mut().zip(&transfer) {
            *z = *z * g;
        }
        fft_2d(&mut planner, &mut buf, h, w, true);
        let scale = T::one() / T::of_usize(h * w);
        buf.into_iter().map(|z| z.re * scale).collect::<Vec<T>>()
    });
    Ok(RgbImage::from_planes(h, w, planes))
}

/// Unnormalised in-place 2-D DFT of a row-major `h x w` buffer.
pub(crate) fn fft_2d<T: Scalar>(
    planner: &mut FftPlanner<T>,
    buf: &mut [Complex<T>],
    h: usize,
    w: usize,
    inverse: bool,
) {
    let row_fft = if inverse {
        planner.plan_fft_inverse(w)
    } else {
        planner.plan_fft_forward(w)
    };
    for row in buf.chunks_exact_mut(w) {
        row_fft.process(row);
    }
    let col_fft = if inverse {
        planner.plan_fft_inverse(h)
    } else {
        planner.plan_fft_forward(h)
    };
    let mut col = vec![Complex::new(T::zero(), T::zero()); h];
    for x in 0..w {
        for y in 0..h {
            col[y] = buf[y * w + x];
        }
        col_fft.process(&mut col);
        for y in 0..h {
            buf[y * w + x] = col[y];
        }
    }
}
