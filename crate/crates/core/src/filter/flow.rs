use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::config::FilterConfig;
use super::raster::{FrameSequence, RgbImage};

/// Structure-tensor determinant below which a window is treated as textureless.
pub const SINGULAR_DET: f64 = 1e-12;

/// Motion-energy range (pixels per frame) below which a frame is treated as
/// static, so round-off flow is not stretched to full scale by normalisation.
pub const MOTION_FLOOR: f64 = 1e-6;

/// Dense per-pixel displacement in pixels per frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowField<T = f64> {
    pub height: usize,
    pub width: usize,
    pub u: Vec<T>,
    pub v: Vec<T>,
}

impl<T: Scalar> FlowField<T> {
    pub fn zeros(height: usize, width: usize) -> Self {
        Self {
            height,
            width,
            u: vec![T::zero(); height * width],
            v: vec![T::zero(); height * width],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.u.iter().chain(&self.v).all(|&c| c == T::zero())
    }
}

/// Central difference along one axis, one-sided at the borders.
fn gradient<T: Scalar>(plane: &[T], h: usize, w: usize, horizontal: bool) -> Vec<T> {
    let mut g = vec![T::zero(); h * w];
    let half = T::of(0.5);
    for y in 0..h {
        for x in 0..w {
            let (len, pos) = if horizontal { (w, x) } else { (h, y) };
            if len < 2 {
                continue;
            }
            let at = |k: usize| if horizontal { plane[y * w + k] } else { plane[k * w + x] };
            g[y * w + x] = if pos == 0 {
                at(1) - at(0)
            } else if pos == len - 1 {
                at(len - 1) - at(len - 2)
            } else {
                (at(pos + 1) - at(pos - 1)) * half
            };
        }
    }
    g
}

/// Lucas-Kanade flow from `prev` to `next` on channel-mean intensity.
///
/// Spatial gradients are taken from the average of the two frames, the
/// temporal derivative is `next - prev`, and the normal equations are summed
/// over a `window x window` neighbourhood (truncated at the border). Windows
/// whose structure tensor has determinant below [`SINGULAR_DET`] get zero flow.
pub fn lucas_kanade<T: Scalar>(prev: &RgbImage<T>, next: &RgbImage<T>, window: usize) -> Result<FlowField<T>> {
    if !prev.same_shape(next) {
        return Err(Error::invalid(format!(
            "flow frames differ in size: {}x{} vs {}x{}",
            prev.height(),
            prev.width(),
            next.height(),
            next.width()
        )));
    }
    if window < 3 || window.is_multiple_of(2) {
        return Err(Error::invalid(format!("window must be odd and >= 3, got {window}")));
    }
    let (h, w) = (prev.height(), prev.width());
    let a = prev.luminance();
    let b = next.luminance();
    let half = T::of(0.5);
    let mean: Vec<T> = a.iter().zip(&b).map(|(&p, &q)| (p + q) * half).collect();
    let ix = gradient(&mean, h, w, true);
    let iy = gradient(&mean, h, w, false);
    let it: Vec<T> = a.iter().zip(&b).map(|(&p, &q)| q - p).collect();

    let r = window / 2;
    let eps = T::of(SINGULAR_DET);
    let mut flow = FlowField::zeros(h, w);
    for y in 0..h {
        for x in 0..w {
            let (mut sxx, mut sxy, mut syy, mut sxt, mut syt) = (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
            for yy in y.saturating_sub(r)..=(y + r).min(h - 1) {
                for xx in x.saturating_sub(r)..=(x + r).min(w - 1) {
                    let k = yy * w + xx;
                    sxx = sxx + ix[k] * ix[k];
                    sxy = sxy + ix[k] * iy[k];
                    syy = syy + iy[k] * iy[k];
                    sxt = sxt + ix[k] * it[k];
                    syt = syt + iy[k] * it[k];
                }
            }
            let det = sxx * syy - sxy * sxy;
            if det.abs() < eps {
                continue;
            }
            let k = y * w + x;
            flow.u[k] = (-syy * sxt + sxy * syt) / det;
            flow.v[k] = (sxy * sxt - sxx * syt) / det;
        }
    }
    Ok(flow)
}

/// Horizontally biased motion energy `M = (1 + κ|cos θ|)·|(u, v)|`.
#[inline]
pub(crate) fn motion_energy<T: Scalar>(u: T, v: T, kappa: T) -> T {
    let mag = (u * u + v * v).sqrt();
    if mag == T::zero() {
        return T::zero();
    }
    // |cos θ| = |u| / |(u, v)|
    (T::one() + kappa * u.abs() / mag) * mag
}

/// Adds the min-max normalised motion energy, scaled by `λ_M`, to every channel.
///
/// `flows[i]` is the flow from frame `i` to frame `i + 1`; frame `t > 0` uses
/// `flows[t - 1]` and frame 0 uses `flows[0]`. An energy field whose range is
/// at most [`MOTION_FLOOR`] normalises to zero.
pub fn motion_bias<T: Scalar>(
    seq: &FrameSequence<T>,
    flows: &[FlowField<T>],
    cfg: &FilterConfig,
) -> Result<FrameSequence<T>> {
    if flows.len() + 1 != seq.len() {
        return Err(Error::invalid(format!(
            "{} flow fields for {} frames; expected one per consecutive pair",
            flows.len(),
            seq.len()
        )));
    }
    if let Some(i) = flows
        .iter()
        .position(|f| f.height != seq.height() || f.width != seq.width())
    {
        return Err(Error::invalid(format!("flow field {i} does not match the frame size")));
    }
    let kappa = T::of(cfg.kappa);
    let lambda = T::of(cfg.lambda_m);
    let floor = T::of(MOTION_FLOOR);
    let frames = seq
        .frames()
        .iter()
        .enumerate()
        .map(|(t, frame)| {
            let flow = &flows[t.saturating_sub(1)];
            let m: Vec<T> = flow
                .u
                .iter()
                .zip(&flow.v)
                .map(|(&u, &v)| motion_energy(u, v, kappa))
                .collect();
            let lo = m.iter().copied().fold(T::infinity(), T::min);
            let hi = m.iter().copied().fold(T::neg_infinity(), T::max);
            let range = hi - lo;
            frame.map_pixels(|i, px| {
                let norm = if range > floor { (m[i] - lo) / range } else { T::zero() };
                px.map(|c| c + lambda * norm)
            })
        })
        .collect();
    Ok(seq.with_frames(frames))
}
