//! Exact coefficient scalars and the ring abstraction the rest of the crate is
//! generic over.
//!
//! Three concrete scalars are provided: arbitrary precision rationals
//! ([`Rat`]), truncated 2-adic integers ([`Padic2`]) and the field with two
//! elements ([`Gf2`]). The symbolic polynomial ring [`crate::poly::Poly`] is a
//! fourth implementor, which is how generic coefficient rings such as
//! `Q[b1, ..., b4]` are modelled.

mod gf2;
mod padic;

use std::fmt;
use std::ops::{Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

pub use gf2::Gf2;
pub use padic::{padic_inverse, padic_log, Padic2, DEFAULT_PRECISION, EXACT};

/// Arbitrary precision rational number, always stored in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error("2-adic logarithm needs u = 1 mod 4, got {0}")]
    NotInDomain(String),
    #[error("precision {0} is below the minimum of 4 bits")]
    PrecisionTooLow(u32),
    #[error("rational {0} has an even denominator")]
    EvenDenominator(String),
    #[error("division of {num} by {den} leaves the 2-adic integers")]
    NotDivisible { num: String, den: String },
}

/// A commutative ring with unit.
///
/// Implementors provide by-reference arithmetic so that big-number heavy code
/// does not have to clone operands; the defaults fall back to the by-value
/// operators.
pub trait CoeffRing:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    /// Image of an integer under the unique ring map `Z -> R`.
    fn from_bigint(n: &BigInt) -> Self;

    /// Multiplicative inverse, `None` when the element is not a unit.
    fn inverse(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    /// Image of a rational number, defined when its denominator is a unit.
    fn from_rat(q: &Rat) -> Option<Self> {
        let den = Self::from_bigint(q.denom()).inverse()?;
        Some(Self::from_bigint(q.numer()) * den)
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self.clone() - rhs.clone()
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }

    fn is_unit(&self) -> bool {
        self.inverse().is_some()
    }

    fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }
}

impl CoeffRing for BigInt {
    fn from_bigint(n: &BigInt) -> Self {
        n.clone()
    }

    fn inverse(&self) -> Option<Self> {
        (self.is_one() || *self == -BigInt::one()).then(|| self.clone())
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

/// Rings in which every nonzero element is invertible.
pub trait Field: CoeffRing {}

impl CoeffRing for Rat {
    fn from_bigint(n: &BigInt) -> Self {
        Rat::from_integer(n.clone())
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_rat(q: &Rat) -> Option<Self> {
        Some(q.clone())
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

impl Field for Rat {}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Reduction `Z_(2) -> Z/2^prec`, defined on rationals with odd denominator.
pub fn rat_to_padic(q: &Rat, prec: u32) -> Result<Padic2, ScalarError> {
    Padic2::from_rat(q, prec)
}

/// Reduction `Z -> GF(2)`.
pub fn int_to_gf2(n: &BigInt) -> Gf2 {
    Gf2::from_bigint(n)
}

/// Reduction `Z_(2) -> GF(2)`: parity of the numerator.
pub fn rat_to_gf2(q: &Rat) -> Result<Gf2, ScalarError> {
    if q.denom().is_even() {
        return Err(ScalarError::EvenDenominator(q.to_string()));
    }
    Ok(Gf2::from_bigint(q.numer()))
}

/// 2-adic valuation of a nonzero integer.
pub fn valuation2(n: &BigInt) -> Option<u64> {
    if n.is_zero() {
        None
    } else {
        n.trailing_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn rat_agrees_with_integers(a in -10_000i64..10_000, b in -10_000i64..10_000) {
            prop_assert_eq!(int(a) + int(b), int(a + b));
            prop_assert_eq!(int(a) * int(b), int(a * b));
            prop_assert_eq!(int(a) - int(b), int(a - b));
        }

        #[test]
        fn gf2_reduction_is_numerator_parity(p in -1000i64..1000, q in 0i64..500) {
            let den = 2 * q + 1;
            let r = rat(p, den);
            let expected = Gf2::from_i64(p.rem_euclid(2));
            prop_assert_eq!(rat_to_gf2(&r).unwrap(), expected);
        }

        #[test]
        fn gf2_reduction_is_a_ring_map(a in -200i64..200, b in 0i64..50, c in -200i64..200, d in 0i64..50) {
            let x = rat(a, 2 * b + 1);
            let y = rat(c, 2 * d + 1);
            let fx = rat_to_gf2(&x).unwrap();
            let fy = rat_to_gf2(&y).unwrap();
            prop_assert_eq!(rat_to_gf2(&(&x + &y)).unwrap(), fx + fy);
            prop_assert_eq!(rat_to_gf2(&(&x * &y)).unwrap(), fx * fy);
        }

        #[test]
        fn padic_reduction_is_a_ring_map(a in -500i64..500, b in 0i64..80, c in -500i64..500, d in 0i64..80) {
            let x = rat(a, 2 * b + 1);
            let y = rat(c, 2 * d + 1);
            let px = rat_to_padic(&x, 40).unwrap();
            let py = rat_to_padic(&y, 40).unwrap();
            prop_assert_eq!(rat_to_padic(&(&x + &y), 40).unwrap(), px.clone() + py.clone());
            prop_assert_eq!(rat_to_padic(&(&x * &y), 40).unwrap(), px * py);
        }
    }

    #[test]
    fn even_denominator_is_rejected() {
        assert!(rat_to_gf2(&rat(1, 2)).is_err());
        assert!(rat_to_padic(&rat(3, 4), 16).is_err());
    }

    #[test]
    fn ring_pow() {
        assert_eq!(int(3).pow(5), int(243));
        assert_eq!(rat(1, 3).pow(0), int(1));
    }
}
