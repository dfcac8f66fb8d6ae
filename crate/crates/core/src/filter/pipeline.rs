use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::scalar::Scalar;

use super::config::FilterConfig;
use super::flow::{lucas_kanade, motion_bias};
use super::geometry::geometric_optics;
use super::lowpass::spatial_lowpass;
use super::raster::{FrameSequence, RgbImage};
use super::spectral::spectral_transform;
use super::tapetum::tapetum_gain;
use super::temporal::temporal_bandpass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StageStatus {
    Applied,
    Skipped,
}

/// Which of the time-dependent stages ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StageFlags {
    pub temporal: StageStatus,
    pub motion: StageStatus,
}

impl StageFlags {
    const SKIPPED: Self = Self {
        temporal: StageStatus::Skipped,
        motion: StageStatus::Skipped,
    };
}

#[derive(Debug, Clone, PartialEq)]
pub enum VisionInput<T = f64> {
    Image(RgbImage<T>),
    Sequence(FrameSequence<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatVisionOutput<T = f64> {
    pub output: VisionInput<T>,
    pub flags: StageFlags,
}

fn spatial_stages<T: Scalar>(img: &RgbImage<T>, cfg: &FilterConfig) -> Result<RgbImage<T>> {
    let spec = spectral_transform(img, cfg)?;
    let sp = spatial_lowpass(&spec, cfg.sigma_lp)?;
    geometric_optics(&sp, cfg)
}

/// Single image: spectral, low-pass, geometric, tapetum. Time stages are skipped.
pub fn apply_to_image<T: Scalar>(img: &RgbImage<T>, cfg: &FilterConfig) -> Result<(RgbImage<T>, StageFlags)> {
    cfg.validate()?;
    let fov = spatial_stages(img, cfg)?;
    Ok((tapetum_gain(&fov, cfg)?, StageFlags::SKIPPED))
}

/// Full pipeline on a frame sequence. A one-frame sequence behaves like an image.
pub fn apply_to_sequence<T: Scalar>(
    seq: &FrameSequence<T>,
    cfg: &FilterConfig,
) -> Result<(FrameSequence<T>, StageFlags)> {
    cfg.validate()?;
    let spatial = seq
        .frames()
        .par_iter()
        .map(|f| spatial_stages(f, cfg))
        .collect::<Result<Vec<_>>>()?;
    let fov = FrameSequence::new(spatial, seq.frame_rate())?;

    let temporal = temporal_bandpass(&fov, cfg)?;
    let (moved, flags) = if temporal.applied {
        let frames = temporal.sequence.frames();
        let flows = frames
            .par_windows(2)
            .map(|pair| lucas_kanade(&pair[0], &pair[1], cfg.lk_window))
            .collect::<Result<Vec<_>>>()?;
        let moved = motion_bias(&temporal.sequence, &flows, cfg)?;
        (
            moved,
            StageFlags {
                temporal: StageStatus::Applied,
                motion: StageStatus::Applied,
            },
        )
    } else {
        (temporal.sequence, StageFlags::SKIPPED)
    };

    let out = moved
        .frames()
        .par_iter()
        .map(|f| tapetum_gain(f, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok((FrameSequence::new(out, seq.frame_rate())?, flags))
}

pub fn apply_cat_vision<T: Scalar>(input: &VisionInput<T>, cfg: &FilterConfig) -> Result<CatVisionOutput<T>> {
    match input {
        VisionInput::Image(img) => {
            let (out, flags) = apply_to_image(img, cfg)?;
            Ok(CatVisionOutput {
                output: VisionInput::Image(out),
                flags,
            })
        }
        VisionInput::Sequence(seq) => {
            let (out, flags) = apply_to_sequence(seq, cfg)?;
            Ok(CatVisionOutput {
                output: VisionInput::Sequence(out),
                flags,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn image_mode_skips_time_stages() {
        let img = RgbImage::<f64>::from_fn(6, 7, |y, x| [x as f64 / 7.0, y as f64 / 6.0, 0.5]);
        let out = apply_cat_vision(&VisionInput::Image(img), &FilterConfig::default()).unwrap();
        assert_eq!(out.flags, StageFlags::SKIPPED);
        assert!(matches!(out.output, VisionInput::Image(_)));
    }

    #[test]
    fn black_in_black_out() {
        let black = RgbImage::<f64>::filled(5, 5, [0.0; 3]);
        let (out, _) = apply_to_image(&black, &FilterConfig::default()).unwrap();
        assert!(out.pixels().iter().all(|p| *p == [0.0; 3]));
        let seq = FrameSequence::new(vec![black; 4], 30.0).unwrap();
        let (out, flags) = apply_to_sequence(&seq, &FilterConfig::default()).unwrap();
        assert_eq!(flags.temporal, StageStatus::Applied);
        assert!(out.frames().iter().all(|f| f.pixels().iter().all(|p| *p == [0.0; 3])));
    }
}
