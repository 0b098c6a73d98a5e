//! Numeric abstraction for the LP side of the crate.
//!
//! Graph construction works on integer weights only. Everything that deals
//! with fractional quantities (dual prices, relaxation values, flows of a
//! linear relaxation) is written against [`Scalar`], so the same code runs
//! in floating point for speed and in exact rational arithmetic when a test
//! needs an oracle that cannot suffer from round-off.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// A field element usable by the simplex, pricing and bound code.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync
{
    /// Comparison tolerance. Zero for exact types.
    fn tolerance() -> Self;

    fn from_u64(v: u64) -> Self {
        <Self as FromPrimitive>::from_u64(v).expect("integer representable in scalar type")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Smallest integer not below `self`, after snapping values within
    /// tolerance of an integer onto it.
    fn ceil_tol(&self) -> i64;

    fn floor_tol(&self) -> i64;

    fn is_pos(&self) -> bool {
        *self > Self::tolerance()
    }

    fn is_neg(&self) -> bool {
        *self < -Self::tolerance()
    }

    fn approx_zero(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).approx_zero()
    }
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            fn tolerance() -> Self {
                $tol
            }

            fn ceil_tol(&self) -> i64 {
                let r = self.round();
                if (self - r).abs() <= $tol {
                    r as i64
                } else {
                    self.ceil() as i64
                }
            }

            fn floor_tol(&self) -> i64 {
                let r = self.round();
                if (self - r).abs() <= $tol {
                    r as i64
                } else {
                    self.floor() as i64
                }
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-5);

impl Scalar for BigRational {
    fn tolerance() -> Self {
        Self::zero()
    }

    fn from_u64(v: u64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }

    fn ceil_tol(&self) -> i64 {
        self.ceil().to_integer().to_i64().expect("ceil fits in i64")
    }

    fn floor_tol(&self) -> i64 {
        self.floor().to_integer().to_i64().expect("floor fits in i64")
    }
}

/// Exact rational from a numerator/denominator pair.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_ceil_snaps_near_integers() {
        assert_eq!(3.000_000_000_1_f64.ceil_tol(), 3);
        assert_eq!(3.1_f64.ceil_tol(), 4);
        assert_eq!(2.999_999_999_9_f64.floor_tol(), 3);
        assert_eq!((-0.5_f64).ceil_tol(), 0);
    }

    #[test]
    fn rational_ceil_is_exact() {
        assert_eq!(ratio(22, 7).ceil_tol(), 4);
        assert_eq!(ratio(21, 7).ceil_tol(), 3);
        assert_eq!(ratio(22, 7).floor_tol(), 3);
        assert!(ratio(1, 1_000_000_000_000).is_pos());
    }
}
