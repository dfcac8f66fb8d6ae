//! Cat-vision transformation as a staged pipeline over images and frame sequences.
//!
//! Stage order: spectral → spatial low-pass → geometric optics →
//! (temporal band-pass → motion bias, sequences only) → tapetum gain.
//! Every stage keeps channel values in `[0, 1]` and preserves dimensions.

mod config;
mod flow;
mod geometry;
pub mod io;
mod lowpass;
mod pipeline;
mod raster;
mod spectral;
mod tapetum;
mod temporal;

pub use self::config::FilterConfig;
pub use self::flow::{lucas_kanade, motion_bias, FlowField, MOTION_FLOOR, SINGULAR_DET};
pub use self::geometry::{acuity_mask, barrel_source, geometric_optics};
pub use self::lowpass::{sigma_for_half_gain, spatial_lowpass};
pub use self::pipeline::{
    apply_cat_vision, apply_to_image, apply_to_sequence, CatVisionOutput, StageFlags, StageStatus, VisionInput,
};
pub use self::raster::{FrameSequence, RgbImage};
pub use self::spectral::{spectral_sensitivity, spectral_transform, spectral_weights, Photoreceptor};
pub use self::tapetum::{tapetum_gain, tapetum_gain_factor};
pub use self::temporal::{temporal_bandpass, temporal_gain, TemporalOutput};
