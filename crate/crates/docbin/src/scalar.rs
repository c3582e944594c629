//! Scalar abstraction for the numeric core.
//!
//! Everything numeric (images, tensors, metrics, training) is generic over a
//! floating-point [`Scalar`]. `f32` is the training default, `f64` is used
//! where oracle-grade precision matters (metric checks, gradient checks).

use ndarray::LinalgScalar;
use num_traits::{Float, FromPrimitive, NumAssign};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, StandardUniform};
use std::fmt::{Debug, Display};
use std::iter::Sum;

pub trait Scalar:
    Float
    + FromPrimitive
    + NumAssign
    + LinalgScalar
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Type tag recorded in checkpoints and config hashes.
    const DTYPE: &'static str;

    fn of_f64(v: f64) -> Self;
    fn of_usize(v: usize) -> Self;
    fn as_f64(self) -> f64;

    /// Draw from the standard normal distribution N(0, 1).
    fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
    /// Draw uniformly from [0, 1).
    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

macro_rules! impl_scalar {
    ($ty:ty, $tag:literal) => {
        impl Scalar for $ty {
            const DTYPE: &'static str = $tag;

            #[inline]
            fn of_f64(v: f64) -> Self {
                v as $ty
            }

            #[inline]
            fn of_usize(v: usize) -> Self {
                v as $ty
            }

            #[inline]
            fn as_f64(self) -> f64 {
                self as f64
            }

            #[inline]
            fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                StandardNormal.sample(rng)
            }

            #[inline]
            fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
                StandardUniform.sample(rng)
            }
        }
    };
}

impl_scalar!(f32, "f32");
impl_scalar!(f64, "f64");

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn conversions_round_trip() {
        assert_eq!(f32::of_f64(0.25).as_f64(), 0.25);
        assert_eq!(f64::of_usize(7), 7.0);
        assert_eq!(f32::DTYPE, "f32");
        assert_eq!(f64::DTYPE, "f64");
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let mut a = ChaCha8Rng::seed_from_u64(11);
        let mut b = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..32 {
            assert_eq!(f64::std_normal(&mut a), f64::std_normal(&mut b));
            assert_eq!(f32::unit_uniform(&mut a), f32::unit_uniform(&mut b));
        }
    }
}
