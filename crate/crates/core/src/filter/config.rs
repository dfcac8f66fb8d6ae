use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every tunable parameter of the filter. Serialised as JSON; every key is
/// optional and unknown keys are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    /// Peak wavelengths (nm) of the S-cone, L-cone and rod curves.
    #[serde(rename = "mu_S")]
    pub mu_s: f64,
    #[serde(rename = "mu_L")]
    pub mu_l: f64,
    #[serde(rename = "mu_R")]
    pub mu_r: f64,
    /// Widths (nm) of the sensitivity curves.
    #[serde(rename = "sigma_S")]
    pub sigma_s: f64,
    #[serde(rename = "sigma_L")]
    pub sigma_l: f64,
    #[serde(rename = "sigma_R")]
    pub sigma_r: f64,
    /// Nominal wavelengths (nm) of the display primaries.
    #[serde(rename = "lambda_R")]
    pub lambda_red: f64,
    #[serde(rename = "lambda_G")]
    pub lambda_green: f64,
    #[serde(rename = "lambda_B")]
    pub lambda_blue: f64,
    #[serde(rename = "w_B")]
    pub w_blue: f64,
    #[serde(rename = "w_G")]
    pub w_green: f64,
    #[serde(rename = "w_R")]
    pub w_red: f64,
    /// Photoreceptor blend weights; rods dominate 25:1 by default.
    #[serde(rename = "beta_S")]
    pub beta_s: f64,
    #[serde(rename = "beta_L")]
    pub beta_l: f64,
    #[serde(rename = "beta_R")]
    pub beta_r: f64,
    /// Gaussian low-pass width in cycles per pixel.
    pub sigma_lp: f64,
    /// Radial distortion coefficients.
    pub k1: f64,
    pub k2: f64,
    /// Acuity mask steepness and midpoint radius (normalised, corner = 1).
    pub gamma: f64,
    pub r0: f64,
    /// Temporal peak, width and flicker-fusion cutoff, Hz.
    pub f0: f64,
    pub sigma_f: f64,
    pub f_ff: f64,
    /// Lucas-Kanade window side, odd.
    pub lk_window: usize,
    /// Horizontal motion bias.
    pub kappa: f64,
    #[serde(rename = "lambda_M")]
    pub lambda_m: f64,
    /// Tapetum gain amplitude, slope and luminance midpoint.
    pub alpha: f64,
    pub beta: f64,
    pub tau: f64,
    /// Tint diagonal.
    #[serde(rename = "t_R")]
    pub tint_red: f64,
    #[serde(rename = "t_G")]
    pub tint_green: f64,
    #[serde(rename = "t_B")]
    pub tint_blue: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            mu_s: 450.0,
            mu_l: 556.0,
            mu_r: 498.0,
            sigma_s: 40.0,
            sigma_l: 50.0,
            sigma_r: 45.0,
            lambda_red: 620.0,
            lambda_green: 535.0,
            lambda_blue: 470.0,
            w_blue: 1.0,
            w_green: 1.0,
            w_red: 1.0,
            beta_s: 0.5,
            beta_l: 0.5,
            beta_r: 25.0,
            // half gain at 1/6 of the Nyquist frequency (0.5 cycles/pixel)
            sigma_lp: super::lowpass::sigma_for_half_gain(0.5 / 6.0),
            k1: 0.15,
            k2: 0.05,
            gamma: 10.0,
            r0: 0.6,
            f0: 10.0,
            sigma_f: 5.0,
            f_ff: 55.0,
            lk_window: 5,
            kappa: 0.5,
            lambda_m: 0.2,
            alpha: 0.8,
            beta: 8.0,
            tau: 0.35,
            tint_red: 0.95,
            tint_green: 1.05,
            tint_blue: 1.0,
        }
    }
}

impl FilterConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("mu_S", self.mu_s),
            ("mu_L", self.mu_l),
            ("mu_R", self.mu_r),
            ("sigma_S", self.sigma_s),
            ("sigma_L", self.sigma_l),
            ("sigma_R", self.sigma_r),
            ("lambda_R", self.lambda_red),
            ("lambda_G", self.lambda_green),
            ("lambda_B", self.lambda_blue),
            ("w_B", self.w_blue),
            ("w_G", self.w_green),
            ("w_R", self.w_red),
            ("beta_S", self.beta_s),
            ("beta_L", self.beta_l),
            ("beta_R", self.beta_r),
            ("sigma_lp", self.sigma_lp),
            ("k1", self.k1),
            ("k2", self.k2),
            ("gamma", self.gamma),
            ("r0", self.r0),
            ("f0", self.f0),
            ("sigma_f", self.sigma_f),
            ("f_ff", self.f_ff),
            ("kappa", self.kappa),
            ("lambda_M", self.lambda_m),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("tau", self.tau),
            ("t_R", self.tint_red),
            ("t_G", self.tint_green),
            ("t_B", self.tint_blue),
        ];
        if let Some((name, v)) = named.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::config(format!("{name} must be finite, got {v}")));
        }
        let positive = [
            ("sigma_S", self.sigma_s),
            ("sigma_L", self.sigma_l),
            ("sigma_R", self.sigma_r),
            ("sigma_lp", self.sigma_lp),
            ("sigma_f", self.sigma_f),
            ("lambda_R", self.lambda_red),
            ("lambda_G", self.lambda_green),
            ("lambda_B", self.lambda_blue),
        ];
        if let Some((name, v)) = positive.iter().find(|(_, v)| *v <= 0.0) {
            return Err(Error::config(format!("{name} must be > 0, got {v}")));
        }
        let non_negative = [
            ("w_B", self.w_blue),
            ("w_G", self.w_green),
            ("w_R", self.w_red),
            ("beta_S", self.beta_s),
            ("beta_L", self.beta_l),
            ("beta_R", self.beta_r),
            ("gamma", self.gamma),
            ("kappa", self.kappa),
            ("lambda_M", self.lambda_m),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("t_R", self.tint_red),
        ];
        if let Some((name, v)) = non_negative.iter().find(|(_, v)| *v < 0.0) {
            return Err(Error::config(format!("{name} must be >= 0, got {v}")));
        }
        if !(self.f0 > 0.0 && self.f_ff > self.f0) {
            return Err(Error::config(format!(
                "need f_ff > f0 > 0, got f0 = {}, f_ff = {}",
                self.f0, self.f_ff
            )));
        }
        if self.lk_window < 3 || self.lk_window.is_multiple_of(2) {
            return Err(Error::config(format!(
                "lk_window must be odd and >= 3, got {}",
                self.lk_window
            )));
        }
        if !(self.tint_green >= self.tint_blue && self.tint_blue >= self.tint_red) {
            return Err(Error::config(format!(
                "tint must satisfy t_G >= t_B >= t_R, got ({}, {}, {})",
                self.tint_red, self.tint_green, self.tint_blue
            )));
        }
        if !(super::spectral::white_activation(self) > 0.0) {
            return Err(Error::config("spectral blend has zero response to white"));
        }
        Ok(())
    }
}
