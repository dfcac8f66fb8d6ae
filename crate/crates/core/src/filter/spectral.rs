use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::config::FilterConfig;
use super::raster::RgbImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Photoreceptor {
    /// Short-wavelength cone.
    S,
    /// Long-wavelength cone.
    L,
    Rod,
}

impl Photoreceptor {
    pub const ALL: [Photoreceptor; 3] = [Photoreceptor::S, Photoreceptor::L, Photoreceptor::Rod];

    fn curve(self, cfg: &FilterConfig) -> (f64, f64) {
        match self {
            Photoreceptor::S => (cfg.mu_s, cfg.sigma_s),
            Photoreceptor::L => (cfg.mu_l, cfg.sigma_l),
            Photoreceptor::Rod => (cfg.mu_r, cfg.sigma_r),
        }
    }

    fn blend(self, cfg: &FilterConfig) -> f64 {
        match self {
            Photoreceptor::S => cfg.beta_s,
            Photoreceptor::L => cfg.beta_l,
            Photoreceptor::Rod => cfg.beta_r,
        }
    }
}

/// Gaussian sensitivity `exp(-(λ-μ)²/2σ²)` of one photoreceptor class.
pub fn spectral_sensitivity(lambda: f64, curve: Photoreceptor, cfg: &FilterConfig) -> Result<f64> {
    let (mu, sigma) = curve.curve(cfg);
    if !(sigma > 0.0) {
        return Err(Error::config(format!("sensitivity width must be > 0, got {sigma}")));
    }
    if !(lambda > 0.0) {
        return Err(Error::invalid(format!("wavelength must be > 0, got {lambda}")));
    }
    Ok(gaussian(lambda, mu, sigma))
}

#[inline]
fn gaussian(lambda: f64, mu: f64, sigma: f64) -> f64 {
    let z = lambda - mu;
    (-(z * z) / (2.0 * sigma * sigma)).exp()
}

/// Unnormalised blend response per display primary, `(R, G, B)`.
fn raw_weights(cfg: &FilterConfig) -> [f64; 3] {
    let primaries = [
        (cfg.lambda_red, cfg.w_red),
        (cfg.lambda_green, cfg.w_green),
        (cfg.lambda_blue, cfg.w_blue),
    ];
    primaries.map(|(lambda, w)| {
        Photoreceptor::ALL
            .iter()
            .map(|p| {
                let (mu, sigma) = p.curve(cfg);
                p.blend(cfg) * w * gaussian(lambda, mu, sigma)
            })
            .sum()
    })
}

/// Blend output for a white `(1, 1, 1)` pixel: the normalisation constant.
pub(crate) fn white_activation(cfg: &FilterConfig) -> f64 {
    raw_weights(cfg).iter().sum()
}

/// Per-primary weights `(a_R, a_G, a_B)` of the normalised blend; they sum to 1.
pub fn spectral_weights(cfg: &FilterConfig) -> [f64; 3] {
    let total = white_activation(cfg);
    raw_weights(cfg).map(|w| w / total)
}

/// Rod-dominant photoreceptor blend, divided by its response to white so the
/// output stays in `[0, 1]`. The result is achromatic (same value in all channels).
pub fn spectral_transform<T: Scalar>(img: &RgbImage<T>, cfg: &FilterConfig) -> Result<RgbImage<T>> {
    cfg.validate()?;
    let [ar, ag, ab] = spectral_weights(cfg).map(T::of);
    Ok(img.map_pixels(|_, [r, g, b]| {
        let v = ar * r + ag * g + ab * b;
        [v, v, v]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peaks_and_one_sigma() {
        let cfg = FilterConfig::default();
        assert_eq!(spectral_sensitivity(450.0, Photoreceptor::S, &cfg).unwrap(), 1.0);
        let v = spectral_sensitivity(cfg.mu_s + cfg.sigma_s, Photoreceptor::S, &cfg).unwrap();
        assert!((v - (-0.5f64).exp()).abs() < 1e-15);
        let rod501 = FilterConfig { mu_r: 501.0, ..cfg };
        assert_eq!(spectral_sensitivity(501.0, Photoreceptor::Rod, &rod501).unwrap(), 1.0);
    }

    #[test]
    fn bad_width_is_a_config_error() {
        let cfg = FilterConfig {
            sigma_l: 0.0,
            ..FilterConfig::default()
        };
        assert!(matches!(
            spectral_sensitivity(500.0, Photoreceptor::L, &cfg),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn black_and_gray() {
        let cfg = FilterConfig::default();
        let black = spectral_transform(&RgbImage::<f64>::filled(3, 4, [0.0; 3]), &cfg).unwrap();
        assert!(black.pixels().iter().all(|p| *p == [0.0; 3]));
        let gray = spectral_transform(&RgbImage::<f64>::filled(3, 4, [0.4; 3]), &cfg).unwrap();
        assert!(gray.pixels().iter().all(|p| p.iter().all(|&c| (c - 0.4).abs() < 1e-12)));
    }

    #[test]
    fn green_beats_red() {
        let cfg = FilterConfig::default();
        let red = spectral_transform(&RgbImage::<f64>::filled(2, 2, [0.8, 0.0, 0.0]), &cfg).unwrap();
        let green = spectral_transform(&RgbImage::<f64>::filled(2, 2, [0.0, 0.8, 0.0]), &cfg).unwrap();
        assert!(green.get(0, 0)[0] > red.get(0, 0)[0]);
    }
}
