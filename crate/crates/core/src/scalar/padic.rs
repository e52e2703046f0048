use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{valuation2, CoeffRing, Rat, ScalarError};

/// Precision marker for values known exactly (integers that were never
/// truncated).
pub const EXACT: u32 = u32::MAX;

pub const DEFAULT_PRECISION: u32 = 64;

/// A 2-adic integer known modulo `2^prec`.
///
/// Values with finite precision are kept in `[0, 2^prec)`. The exact
/// precision is reserved for integers produced by [`CoeffRing::from_bigint`],
/// which keeps `Zero`/`One` neutral for the min-precision rule of binary
/// operations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Padic2 {
    value: BigInt,
    prec: u32,
}

fn modulus(prec: u32) -> BigInt {
    BigInt::one() << prec as usize
}

fn reduce(v: BigInt, prec: u32) -> BigInt {
    if prec == EXACT {
        v
    } else {
        v.mod_floor(&modulus(prec))
    }
}

impl Padic2 {
    pub fn new(value: impl Into<BigInt>, prec: u32) -> Self {
        let value = reduce(value.into(), prec);
        Padic2 { value, prec }
    }

    pub fn exact(value: impl Into<BigInt>) -> Self {
        Padic2 {
            value: value.into(),
            prec: EXACT,
        }
    }

    /// Embedding of a rational with odd denominator, inverting the
    /// denominator modulo `2^prec`.
    pub fn from_rat(q: &Rat, prec: u32) -> Result<Self, ScalarError> {
        if q.denom().is_even() {
            return Err(ScalarError::EvenDenominator(q.to_string()));
        }
        let prec = if prec == EXACT { DEFAULT_PRECISION } else { prec };
        let den = padic_inverse(&Padic2::new(q.denom().clone(), prec))?;
        Ok(Padic2::new(q.numer() * den.value, prec))
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Padic2::new(self.value.clone(), prec.min(self.prec))
    }

    /// 2-adic valuation; `None` for a value indistinguishable from zero.
    pub fn valuation(&self) -> Option<u32> {
        valuation2(&self.value).map(|v| v as u32)
    }

    pub fn is_odd(&self) -> bool {
        self.value.is_odd()
    }

    /// Equality at the smaller of the two precisions.
    pub fn agrees_with(&self, other: &Padic2) -> bool {
        let p = self.prec.min(other.prec);
        reduce(self.value.clone(), p) == reduce(other.value.clone(), p)
    }

    /// Division by an arbitrary nonzero element. Dividing by `2^k * unit`
    /// costs `k` bits of precision.
    pub fn checked_div(&self, rhs: &Padic2) -> Result<Padic2, ScalarError> {
        let k = rhs.valuation().ok_or_else(|| ScalarError::NotDivisible {
            num: self.to_string(),
            den: rhs.to_string(),
        })?;
        let num_val = self.valuation().unwrap_or(u32::MAX);
        if num_val < k {
            return Err(ScalarError::NotDivisible {
                num: self.to_string(),
                den: rhs.to_string(),
            });
        }
        let prec = self.prec.min(rhs.prec);
        let prec = if prec == EXACT { DEFAULT_PRECISION } else { prec };
        let out_prec = prec.saturating_sub(k);
        let unit = Padic2::new(&rhs.value >> k as usize, out_prec);
        let inv = padic_inverse(&unit)?;
        Ok(Padic2::new(&self.value >> k as usize, out_prec) * inv)
    }

    fn combine(&self, rhs: &Padic2, v: BigInt) -> Padic2 {
        Padic2::new(v, self.prec.min(rhs.prec))
    }
}

impl fmt::Display for Padic2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{} (mod 2^{})", self.value, self.prec)
        }
    }
}

impl Add for Padic2 {
    type Output = Padic2;
    fn add(self, rhs: Padic2) -> Padic2 {
        self.add_ref(&rhs)
    }
}

impl Sub for Padic2 {
    type Output = Padic2;
    fn sub(self, rhs: Padic2) -> Padic2 {
        self.sub_ref(&rhs)
    }
}

impl Mul for Padic2 {
    type Output = Padic2;
    fn mul(self, rhs: Padic2) -> Padic2 {
        self.mul_ref(&rhs)
    }
}

impl Neg for Padic2 {
    type Output = Padic2;
    fn neg(self) -> Padic2 {
        Padic2::new(-self.value, self.prec)
    }
}

impl Zero for Padic2 {
    fn zero() -> Self {
        Padic2::exact(0)
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl One for Padic2 {
    fn one() -> Self {
        Padic2::exact(1)
    }
}

impl CoeffRing for Padic2 {
    fn from_bigint(n: &BigInt) -> Self {
        Padic2::exact(n.clone())
    }

    fn inverse(&self) -> Option<Self> {
        padic_inverse(self).ok()
    }

    fn from_rat(q: &Rat) -> Option<Self> {
        if q.is_integer() {
            Some(Padic2::exact(q.numer().clone()))
        } else {
            Padic2::from_rat(q, DEFAULT_PRECISION).ok()
        }
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self.combine(rhs, &self.value + &rhs.value)
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self.combine(rhs, &self.value - &rhs.value)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self.combine(rhs, &self.value * &rhs.value)
    }
}

/// Inverse of an odd element by Newton iteration `y <- y (2 - u y)`, which
/// doubles the number of correct bits each step. Exact inputs other than
/// `+-1` are inverted at [`DEFAULT_PRECISION`].
pub fn padic_inverse(u: &Padic2) -> Result<Padic2, ScalarError> {
    if !u.is_odd() {
        return Err(ScalarError::NotAUnit(u.to_string()));
    }
    if u.is_exact() && u.value.abs().is_one() {
        return Ok(u.clone());
    }
    let prec = if u.is_exact() { DEFAULT_PRECISION } else { u.prec };
    let m = modulus(prec);
    let a = u.value.mod_floor(&m);
    let two = BigInt::from(2);
    let mut y = BigInt::one();
    let mut good = 1u32;
    while good < prec {
        y = (&y * (&two - &a * &y)).mod_floor(&m);
        good = good.saturating_mul(2);
    }
    Ok(Padic2::new(y, prec))
}

/// 2-adic logarithm `log(u) = sum_{n>=1} (-1)^(n+1) (u-1)^n / n`.
///
/// Each term `x^n / n` is determined modulo `2^P` by `x` modulo `2^P`, since
/// perturbing `x` by `2^P t` changes `x^n` by a multiple of `2^(P + v(n))`.
/// The result therefore carries the full input precision (loss bound 0).
/// Summation stops once `n v(x) - floor(log2 n) >= P`, after which every
/// further term vanishes modulo `2^P`.
pub fn padic_log(u: &Padic2) -> Result<Padic2, ScalarError> {
    let prec = if u.is_exact() { DEFAULT_PRECISION } else { u.prec };
    if prec < 4 {
        return Err(ScalarError::PrecisionTooLow(prec));
    }
    let four = BigInt::from(4);
    if !u.value.mod_floor(&four).is_one() {
        return Err(ScalarError::NotInDomain(u.to_string()));
    }
    let x = (&u.value - BigInt::one()).mod_floor(&modulus(prec));
    let vx = match valuation2(&x) {
        None => return Ok(Padic2::new(0, prec)),
        Some(v) => v,
    };

    let p = prec as u64;
    let mut n_max = 1u64;
    while !(n_max * vx >= p + u64::from(63 - n_max.leading_zeros())) {
        n_max += 1;
    }
    let guard = u64::from(64 - n_max.leading_zeros());
    let work = modulus((p + guard) as u32);
    let target = modulus(prec);

    let mut sum = BigInt::zero();
    let mut xn = BigInt::one();
    for n in 1..=n_max {
        xn = (&xn * &x).mod_floor(&work);
        let vn = n.trailing_zeros() as usize;
        let odd = n >> vn;
        let shifted = (&xn >> vn).mod_floor(&target);
        let inv = padic_inverse(&Padic2::new(odd, prec))?;
        let term = (shifted * inv.value).mod_floor(&target);
        if n % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(Padic2::new(sum, prec))
}
