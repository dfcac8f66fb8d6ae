use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major RGB raster with channel values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage<T = f64> {
    height: usize,
    width: usize,
    data: Vec<[T; 3]>,
}

impl<T: Scalar> RgbImage<T> {
    pub fn new(height: usize, width: usize, data: Vec<[T; 3]>) -> Result<Self> {
        if data.len() != height * width {
            return Err(Error::invalid(format!(
                "{height}x{width} image needs {} pixels, got {}",
                height * width,
                data.len()
            )));
        }
        if let Some(i) = data
            .iter()
            .position(|px| px.iter().any(|&c| !(c >= T::zero() && c <= T::one())))
        {
            return Err(Error::invalid(format!(
                "pixel ({}, {}) has a channel outside [0, 1]",
                i / width.max(1),
                i % width.max(1)
            )));
        }
        Ok(Self { height, width, data })
    }

    /// Builds an image from `f(row, col)`, clamping every channel to `[0, 1]`.
    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> [T; 3]) -> Self {
        let mut data = Vec::with_capacity(height * width);
        for y in 0..height {
            for x in 0..width {
                data.push(clamp_px(f(y, x)));
            }
        }
        Self { height, width, data }
    }

    pub fn filled(height: usize, width: usize, px: [T; 3]) -> Self {
        Self::from_fn(height, width, |_, _| px)
    }

    /// Same value in all three channels.
    pub fn gray(height: usize, width: usize, f: impl Fn(usize, usize) -> T) -> Self {
        Self::from_fn(height, width, |y, x| {
            let v = f(y, x);
            [v, v, v]
        })
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize) -> [T; 3] {
        self.data[y * self.width + x]
    }

    pub fn pixels(&self) -> &[[T; 3]] {
        &self.data
    }

    /// Single channel as a row-major plane.
    pub fn channel(&self, c: usize) -> Vec<T> {
        self.data.iter().map(|px| px[c]).collect()
    }

    /// Per-pixel channel mean.
    pub fn luminance(&self) -> Vec<T> {
        let third = T::one() / T::of(3.0);
        self.data.iter().map(|px| (px[0] + px[1] + px[2]) * third).collect()
    }

    /// Applies `f` to every pixel and clamps the result.
    pub fn map_pixels(&self, mut f: impl FnMut(usize, [T; 3]) -> [T; 3]) -> Self {
        Self {
            height: self.height,
            width: self.width,
            data: self
                .data
                .iter()
                .enumerate()
                .map(|(i, &px)| clamp_px(f(i, px)))
                .collect(),
        }
    }

    /// Reassembles an image from three planes, clamping to `[0, 1]`.
    pub(crate) fn from_planes(height: usize, width: usize, planes: [Vec<T>; 3]) -> Self {
        let data = (0..height * width)
            .map(|i| clamp_px([planes[0][i], planes[1][i], planes[2][i]]))
            .collect();
        Self { height, width, data }
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.height == other.height && self.width == other.width
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .flat_map(|(a, b)| (0..3).map(move |c| (a[c] - b[c]).abs()))
            .fold(T::zero(), T::max)
    }
}

#[inline]
pub(crate) fn clamp01<T: Scalar>(v: T) -> T {
    // NaN maps to 0
    if v > T::zero() {
        v.min(T::one())
    } else {
        T::zero()
    }
}

#[inline]
fn clamp_px<T: Scalar>(px: [T; 3]) -> [T; 3] {
    [clamp01(px[0]), clamp01(px[1]), clamp01(px[2])]
}

/// Ordered frames sharing one size, sampled at `frame_rate` Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence<T = f64> {
    frames: Vec<RgbImage<T>>,
    frame_rate: f64,
}

impl<T: Scalar> FrameSequence<T> {
    pub fn new(frames: Vec<RgbImage<T>>, frame_rate: f64) -> Result<Self> {
        if !(frame_rate > 0.0 && frame_rate.is_finite()) {
            return Err(Error::invalid(format!("frame rate must be positive, got {frame_rate}")));
        }
        if frames.is_empty() {
            return Err(Error::invalid("frame sequence is empty"));
        }
        if let Some(i) = frames.iter().position(|f| !f.same_shape(&frames[0])) {
            return Err(Error::invalid(format!(
                "frame {i} is {}x{}, expected {}x{}",
                frames[i].height(),
                frames[i].width(),
                frames[0].height(),
                frames[0].width()
            )));
        }
        Ok(Self { frames, frame_rate })
    }

    pub fn frames(&self) -> &[RgbImage<T>] {
        &self.frames
    }

    pub fn into_frames(self) -> Vec<RgbImage<T>> {
        self.frames
    }

    pub fn frame_rate(&self) -> f64 {
        self.frame_rate
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn height(&self) -> usize {
        self.frames[0].height()
    }

    pub fn width(&self) -> usize {
        self.frames[0].width()
    }

    pub(crate) fn with_frames(&self, frames: Vec<RgbImage<T>>) -> Self {
        Self {
            frames,
            frame_rate: self.frame_rate,
        }
    }
}
