//! docbin — two-stage historical document image binarization.
//!
//! Stage I trains a variational augmentation network that synthesizes novel
//! degraded document images from ground-truth/degraded pairs. Stage II trains
//! a conditional-adversarial binarization network on a live mixture of real
//! and generated samples. Classical thresholding baselines (Otsu, Niblack,
//! Sauvola), the standard contest metric suite (F-Measure, pseudo-F-Measure,
//! PSNR, DRD) and an evaluation/ablation harness ship alongside.
//!
//! The numeric core is generic over the scalar type through [`Scalar`];
//! concrete aliases for the common instantiations live at the crate root.

pub mod augnet;
pub mod binet;
pub mod checkpoint;
pub mod classical;
pub mod config;
pub mod datapipe;
pub mod error;
pub mod eval;
pub mod imagecore;
pub mod metrics;
pub mod nn;
pub mod scalar;
pub mod synth;
pub mod trainer;

pub use error::{Error, Result};
pub use imagecore::{BinaryMask, RasterImage};
pub use scalar::Scalar;

/// Training default scalar.
pub type Raster32 = RasterImage<f32>;
/// Oracle-precision raster used by metric and gradient checks.
pub type Raster64 = RasterImage<f64>;
pub type Tensor32 = nn::Tensor<f32>;
pub type Tensor64 = nn::Tensor<f64>;
pub type AugNet32 = augnet::AugNet<f32>;
pub type BiNet32 = binet::BiNet<f32>;
