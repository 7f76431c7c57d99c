//! Scalar abstraction for the numeric core.
//!
//! Everything numeric in this crate is generic over [`Scalar`], which is any
//! IEEE float with the conversions and sampling hooks the training code needs.
//! The crate root pins `f64` aliases for the concrete types; `f64` is the lane
//! the benchmark harness runs on.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssignOps, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// A floating-point scalar usable throughout the numeric core.
///
/// Sampling always draws `f64` from the RNG and converts, so f32 and f64
/// instantiations consume the RNG stream identically.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssignOps + Sum<Self> + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` constant into this scalar type.
    fn c(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 constant converts to scalar")
    }

    /// Uniform sample from `[low, high)`.
    fn sample_uniform<R: Rng + ?Sized>(rng: &mut R, low: Self, high: Self) -> Self {
        let lo = low.to_f64().expect("finite bound");
        let hi = high.to_f64().expect("finite bound");
        Self::c(rng.gen_range(lo..hi))
    }

    /// Standard normal sample.
    fn sample_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let z: f64 = StandardNormal.sample(rng);
        Self::c(z)
    }

    /// Uniform sample from `[0, 1)`.
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::c(rng.gen::<f64>())
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// True iff every element is finite.
pub fn all_finite<F: Scalar>(values: &[F]) -> bool {
    values.iter().all(|v| v.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_conversion_round_trips() {
        assert_eq!(f64::c(0.25), 0.25);
        assert_eq!(f32::c(0.25), 0.25f32);
    }

    #[test]
    fn f32_and_f64_consume_identical_rng_streams() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = f32::sample_unit(&mut a);
            let y = f64::sample_unit(&mut b);
            assert_eq!(x as f64, y as f32 as f64);
        }
        assert_eq!(a.gen::<u64>(), b.gen::<u64>());
    }

    #[test]
    fn uniform_respects_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let v = f64::sample_uniform(&mut rng, -2.0, 3.0);
            assert!((-2.0..3.0).contains(&v));
        }
    }
}
