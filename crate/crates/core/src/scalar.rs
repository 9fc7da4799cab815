//! Numeric scalars the bound formulas can be evaluated in.

use std::fmt::Debug;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

/// A field-like numeric type: exact rationals or IEEE floats.
pub trait Scalar: Num + Clone + PartialOrd + Debug {
    fn from_biguint(v: &BigUint) -> Self;
    fn to_f64(&self) -> f64;

    fn from_u64(v: u64) -> Self {
        Self::from_biguint(&BigUint::from(v))
    }

    /// Integer power with a possibly negative exponent.
    fn powi(&self, e: i64) -> Self {
        let p = num_traits::pow(self.clone(), e.unsigned_abs() as usize);
        if e >= 0 {
            p
        } else {
            Self::one() / p
        }
    }
}

impl Scalar for f64 {
    fn from_biguint(v: &BigUint) -> Self {
        v.to_f64().unwrap_or(f64::INFINITY)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_biguint(v: &BigUint) -> Self {
        v.to_f32().unwrap_or(f32::INFINITY)
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for BigRational {
    fn from_biguint(v: &BigUint) -> Self {
        BigRational::from_integer(BigInt::from(v.clone()))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powi_negative_exponent() {
        let two = BigRational::from_u64(2);
        assert_eq!(two.powi(-3), BigRational::new(1.into(), 8.into()));
        assert_eq!(2.0f64.powi(-3), 0.125);
        assert_eq!(Scalar::powi(&3.0f32, 0), 1.0);
    }
}
