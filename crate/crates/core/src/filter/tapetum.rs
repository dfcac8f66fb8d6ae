use crate::error::Result;
use crate::scalar::Scalar;

use super::config::FilterConfig;
use super::raster::RgbImage;

/// Low-light gain `g = 1 + α·σ(β(τ - Ī))` for mean intensity `Ī`.
#[inline]
pub fn tapetum_gain_factor(mean_intensity: f64, cfg: &FilterConfig) -> f64 {
    let z = cfg.beta * (cfg.tau - mean_intensity);
    1.0 + cfg.alpha / (1.0 + (-z).exp())
}

/// Applies the luminance-dependent gain, then the blue-green tint, and clamps.
pub fn tapetum_gain<T: Scalar>(img: &RgbImage<T>, cfg: &FilterConfig) -> Result<RgbImage<T>> {
    cfg.validate()?;
    let tint = [cfg.tint_red, cfg.tint_green, cfg.tint_blue].map(T::of);
    let third = T::one() / T::of(3.0);
    Ok(img.map_pixels(|_, px| {
        let mean = (px[0] + px[1] + px[2]) * third;
        let g = T::of(tapetum_gain_factor(mean.to_f64_lossy(), cfg));
        [0, 1, 2].map(|c| tint[c] * g * px[c])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gain_range_and_midpoint() {
        let cfg = FilterConfig::default();
        for i in 0..=20 {
            let g = tapetum_gain_factor(i as f64 / 20.0, &cfg);
            assert!(g > 1.0 && g < 1.0 + cfg.alpha);
        }
        assert_eq!(tapetum_gain_factor(cfg.tau, &cfg), 1.0 + cfg.alpha / 2.0);
    }

    #[test]
    fn dark_pixels_gain_more() {
        let cfg = FilterConfig::default();
        assert!(tapetum_gain_factor(0.05, &cfg) > tapetum_gain_factor(0.95, &cfg));
    }

    #[test]
    fn black_stays_black() {
        let out = tapetum_gain(&RgbImage::<f64>::filled(2, 3, [0.0; 3]), &FilterConfig::default()).unwrap();
        assert!(out.pixels().iter().all(|p| *p == [0.0; 3]));
    }
}
