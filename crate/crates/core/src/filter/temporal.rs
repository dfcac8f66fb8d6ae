use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::Result;
use crate::scalar::Scalar;

use super::config::FilterConfig;
use super::lowpass::bin_frequency;
use super::raster::{clamp01, FrameSequence, RgbImage};

/// Band-pass gain `G(f) = exp(-(f-f0)²/2σ_f²) · 1[f <= f_ff]` on `|f|`, with the
/// DC term passed unchanged so static content survives.
pub fn temporal_gain(f: f64, cfg: &FilterConfig) -> f64 {
    let f = f.abs();
    if f == 0.0 {
        return 1.0;
    }
    if f > cfg.f_ff {
        return 0.0;
    }
    let z = f - cfg.f0;
    (-(z * z) / (2.0 * cfg.sigma_f * cfg.sigma_f)).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TemporalOutput<T = f64> {
    pub sequence: FrameSequence<T>,
    /// False when the sequence had a single frame and passed through untouched.
    pub applied: bool,
}

/// Filters every pixel's time series in the Fourier domain.
pub fn temporal_bandpass<T: Scalar>(seq: &FrameSequence<T>, cfg: &FilterConfig) -> Result<TemporalOutput<T>> {
    cfg.validate()?;
    let t = seq.len();
    if t < 2 {
        return Ok(TemporalOutput {
            sequence: seq.clone(),
            applied: false,
        });
    }
    let (h, w) = (seq.height(), seq.width());
    let gains: Vec<T> = (0..t)
        .map(|k| T::of(temporal_gain(bin_frequency(k, t) * seq.frame_rate(), cfg)))
        .collect();

    let mut planner = FftPlanner::<T>::new();
    let forward = planner.plan_fft_forward(t);
    let inverse = planner.plan_fft_inverse(t);
    let scale = T::one() / T::of_usize(t);

    let mut out: Vec<Vec<[T; 3]>> = vec![vec![[T::zero(); 3]; h * w]; t];
    let mut series = vec![Complex::new(T::zero(), T::zero()); t];
    for p in 0..h * w {
        for c in 0..3 {
            for (k, frame) in seq.frames().iter().enumerate() {
                series[k] = Complex::new(frame.pixels()[p][c], T::zero());
            }
            forward.process(&mut series);
            for (z, &g) in series.iter_mut().zip(&gains) {
                *z = *z * g;
            }
            inverse.process(&mut series);
            for (k, z) in series.iter().enumerate() {
                out[k][p][c] = clamp01(z.re * scale);
            }
        }
    }
    let frames = out
        .into_iter()
        .map(|data| RgbImage::from_fn(h, w, |y, x| data[y * w + x]))
        .collect();
    Ok(TemporalOutput {
        sequence: seq.with_frames(frames),
        applied: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gain_shape() {
        let cfg = FilterConfig::default();
        assert_eq!(temporal_gain(0.0, &cfg), 1.0);
        assert_eq!(temporal_gain(10.0, &cfg), 1.0);
        assert_eq!(temporal_gain(-10.0, &cfg), 1.0);
        assert_eq!(temporal_gain(55.5, &cfg), 0.0);
        assert!(temporal_gain(55.0, &cfg) > 0.0);
    }

    #[test]
    fn single_frame_is_skipped() {
        let seq = FrameSequence::new(vec![RgbImage::<f64>::filled(2, 2, [0.3; 3])], 30.0).unwrap();
        let out = temporal_bandpass(&seq, &FilterConfig::default()).unwrap();
        assert!(!out.applied);
        assert_eq!(out.sequence, seq);
    }

    #[test]
    fn constant_sequence_passes() {
        let frame = RgbImage::<f64>::filled(3, 2, [0.1, 0.6, 0.8]);
        let seq = FrameSequence::new(vec![frame.clone(); 7], 30.0).unwrap();
        let out = temporal_bandpass(&seq, &FilterConfig::default()).unwrap();
        assert!(out.applied);
        for f in out.sequence.frames() {
            assert!(f.max_abs_diff(&frame) < 1e-12);
        }
    }
}
