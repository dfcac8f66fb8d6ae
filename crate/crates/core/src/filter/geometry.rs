use crate::error::Result;
use crate::scalar::Scalar;

use super::config::FilterConfig;
use super::raster::RgbImage;

const EPS: f64 = 1e-12;

/// Center-surround acuity mask `A(r) = 1 / (1 + exp(γ (r - r0)))`.
#[inline]
pub fn acuity_mask(r: f64, gamma: f64, r0: f64) -> f64 {
    1.0 / (1.0 + (gamma * (r - r0)).exp())
}

/// Source pixel sampled for destination pixel `(y, x)` under the barrel map.
///
/// Coordinates are normalised so the image centre is 0 and a corner is at
/// radius 1; the distorted point is mapped back with the same affine scale.
/// Also returns the destination radius.
pub fn barrel_source(y: f64, x: f64, height: usize, width: usize, k1: f64, k2: f64) -> ((f64, f64), f64) {
    let cy = (height as f64 - 1.0) / 2.0;
    let cx = (width as f64 - 1.0) / 2.0;
    let scale = (cx * cx + cy * cy).sqrt();
    if scale == 0.0 {
        return ((y, x), 0.0);
    }
    let ny = (y - cy) / scale;
    let nx = (x - cx) / scale;
    let r = (nx * nx + ny * ny).sqrt();
    let r2 = r * r;
    let rd = r * (1.0 + k1 * r2 + k2 * r2 * r2);
    let f = rd / r.max(EPS);
    ((cy + f * ny * scale, cx + f * nx * scale), r)
}

/// Bilinear sample with edge clamping.
fn sample<T: Scalar>(img: &RgbImage<T>, y: f64, x: f64) -> [T; 3] {
    let (h, w) = (img.height(), img.width());
    let y = y.clamp(0.0, (h - 1) as f64);
    let x = x.clamp(0.0, (w - 1) as f64);
    let y0 = y.floor() as usize;
    let x0 = x.floor() as usize;
    let y1 = (y0 + 1).min(h - 1);
    let x1 = (x0 + 1).min(w - 1);
    let fy = T::of(y - y0 as f64);
    let fx = T::of(x - x0 as f64);
    let (p00, p01, p10, p11) = (img.get(y0, x0), img.get(y0, x1), img.get(y1, x0), img.get(y1, x1));
    let one = T::one();
    [0, 1, 2].map(|c| {
        let top = p00[c] * (one - fx) + p01[c] * fx;
        let bottom = p10[c] * (one - fx) + p11[c] * fx;
        top * (one - fy) + bottom * fy
    })
}

/// Inverse-mapped barrel resampling followed by the acuity mask evaluated at
/// destination coordinates. Samples beyond the border take the nearest edge value.
pub fn geometric_optics<T: Scalar>(img: &RgbImage<T>, cfg: &FilterConfig) -> Result<RgbImage<T>> {
    cfg.validate()?;
    let (h, w) = (img.height(), img.width());
    Ok(RgbImage::from_fn(h, w, |y, x| {
        let ((sy, sx), r) = barrel_source(y as f64, x as f64, h, w, cfg.k1, cfg.k2);
        let a = T::of(acuity_mask(r, cfg.gamma, cfg.r0));
        sample(img, sy, sx).map(|v| a * v)
    }))
}
