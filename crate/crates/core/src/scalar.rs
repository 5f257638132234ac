//! Numeric backends for cost computations.
//!
//! Everything that multiplies LLRs by tree weights is generic over
//! [`Scalar`]. `f64` is the production backend; [`BigRational`] gives exact
//! arithmetic and is what the oracle tests run on. Every finite `f64` is a
//! dyadic rational, so an `f64` LLR vector converts losslessly.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &BigRational) -> Self;

    /// Panics on non-finite input.
    fn from_f64(x: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn recip_usize(n: usize) -> Self {
        Self::from_rational(&BigRational::new(BigInt::one(), BigInt::from(n)))
    }
}

impl Scalar for f64 {
    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite value {x}");
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn recip_usize(n: usize) -> Self {
        1.0 / n as f64
    }
}

impl Scalar for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(|| panic!("non-finite value {x}"))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Converts a slice of `f64` values into the given backend.
pub fn convert_slice<S: Scalar>(values: &[f64]) -> Vec<S> {
    values.iter().map(|&x| S::from_f64(x)).collect()
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn inner_product<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_converts_exactly() {
        let r = BigRational::from_f64(0.1);
        assert_eq!(Scalar::to_f64(&r), 0.1);
        assert_ne!(r, ratio(1, 10));
        assert_eq!(BigRational::from_f64(-2.5), ratio(-5, 2));
    }

    #[test]
    fn reciprocal() {
        assert_eq!(<BigRational as Scalar>::recip_usize(6), ratio(1, 6));
        assert_eq!(<f64 as Scalar>::recip_usize(4), 0.25);
    }
}
