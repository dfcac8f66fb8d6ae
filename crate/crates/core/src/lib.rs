//! Cat-vision image transformation and cross-domain representational
//! alignment statistics.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the common instantiations. Pipeline and CLI code works in `f64`.

pub mod distshift;
pub mod error;
pub mod features;
pub mod filter;
pub mod ingest;
pub mod linalg;
pub mod pipeline;
pub mod repgeom;
pub mod scalar;
pub mod statctl;

pub use error::{Error, Result};
pub use features::FeatureMatrix;
pub use scalar::Scalar;

pub type FeatureMatrixF32 = FeatureMatrix<f32>;
pub type FeatureMatrixF64 = FeatureMatrix<f64>;
pub type GramMatrixF64 = repgeom::GramMatrix<f64>;
pub type RdmF64 = repgeom::Rdm<f64>;
pub type ShiftResultF64 = distshift::ShiftResult<f64>;
pub type RgbImageF32 = filter::RgbImage<f32>;
pub type RgbImageF64 = filter::RgbImage<f64>;
pub type FrameSequenceF32 = filter::FrameSequence<f32>;
pub type FrameSequenceF64 = filter::FrameSequence<f64>;
