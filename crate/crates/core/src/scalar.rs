//! Scalar types the normalized quality score can be computed in.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Num;

/// Number type for normalized scores. `BigRational` gives exact values;
/// `f64`/`f32` are available when speed matters more than exactness.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Display + Send + Sync {
    fn from_count(n: usize) -> Self;

    /// `2^-e`
    fn inv_pow2(e: usize) -> Self {
        Self::one() / num_traits::pow(Self::from_count(2), e)
    }

    /// `num / den`
    fn ratio(num: usize, den: usize) -> Self {
        Self::from_count(num) / Self::from_count(den)
    }
}

impl Scalar for f64 {
    fn from_count(n: usize) -> Self {
        n as f64
    }

    fn inv_pow2(e: usize) -> Self {
        (-(e as f64)).exp2()
    }
}

impl Scalar for f32 {
    fn from_count(n: usize) -> Self {
        n as f32
    }

    fn inv_pow2(e: usize) -> Self {
        (-(e as f32)).exp2()
    }
}

impl Scalar for BigRational {
    fn from_count(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn inv_pow2(e: usize) -> Self {
        BigRational::new(BigInt::from(1), BigInt::from(1) << e)
    }
}
