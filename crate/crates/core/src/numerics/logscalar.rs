use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::special::log1mexp;
use crate::{Error, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    fn times(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

/// A signed real stored as `sign · exp(logmag)`.
///
/// `sign == Zero` exactly when `logmag == -inf`. Products and quotients are
/// exact up to one rounding of the log magnitude; sums go through a
/// two-term log-sum-exp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScalar<T> {
    sign: Sign,
    logmag: T,
}

impl<T: Real> LogScalar<T> {
    pub fn zero() -> Self {
        LogScalar {
            sign: Sign::Zero,
            logmag: T::neg_infinity(),
        }
    }

    pub fn one() -> Self {
        LogScalar {
            sign: Sign::Positive,
            logmag: T::zero(),
        }
    }

    /// Positive value `exp(ln_value)`; `-inf` yields zero.
    pub fn from_ln(ln_value: T) -> Self {
        if ln_value == T::neg_infinity() {
            Self::zero()
        } else {
            LogScalar {
                sign: Sign::Positive,
                logmag: ln_value,
            }
        }
    }

    pub fn from_signed_ln(sign: Sign, ln_magnitude: T) -> Self {
        if sign == Sign::Zero || ln_magnitude == T::neg_infinity() {
            Self::zero()
        } else {
            LogScalar {
                sign,
                logmag: ln_magnitude,
            }
        }
    }

    pub fn from_value(value: T) -> Self {
        if value > T::zero() {
            Self::from_ln(value.ln())
        } else if value < T::zero() {
            Self::from_signed_ln(Sign::Negative, (-value).ln())
        } else {
            Self::zero()
        }
    }

    /// `2^exponent`, exact in the log domain for any exponent.
    pub fn pow2(exponent: i64) -> Self {
        Self::from_ln(T::from_i64(exponent).expect("exponent representable") * T::LN_2())
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Natural log of the magnitude (`-inf` for zero).
    pub fn logmag(&self) -> T {
        self.logmag
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    /// Converts back to a plain real; may overflow to `±inf` or underflow to `0`.
    pub fn value(&self) -> T {
        match self.sign {
            Sign::Zero => T::zero(),
            Sign::Positive => self.logmag.exp(),
            Sign::Negative => -self.logmag.exp(),
        }
    }

    pub fn abs(self) -> Self {
        match self.sign {
            Sign::Negative => -self,
            _ => self,
        }
    }

    pub fn recip(self) -> Self {
        Self::one() / self
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::one();
        }
        let sign = if n % 2 == 0 && self.sign == Sign::Negative {
            Sign::Positive
        } else {
            self.sign
        };
        Self::from_signed_ln(
            sign,
            self.logmag * T::from_i32(n).expect("exponent representable"),
        )
    }

    /// Square root of a non-negative value; negative inputs give `None`.
    pub fn sqrt(self) -> Option<Self> {
        match self.sign {
            Sign::Negative => None,
            Sign::Zero => Some(self),
            Sign::Positive => Some(Self::from_ln(self.logmag * T::lit(0.5))),
        }
    }

    pub fn checked_div(self, rhs: Self) -> crate::Result<Self> {
        if rhs.sign == Sign::Zero {
            return Err(Error::domain("LogScalar::div", "division by zero"));
        }
        Ok(Self::from_signed_ln(
            self.sign.times(rhs.sign),
            self.logmag - rhs.logmag,
        ))
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn add_same_sign(sign: Sign, a: T, b: T) -> Self {
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if hi == T::infinity() {
            return Self::from_signed_ln(sign, hi);
        }
        Self::from_signed_ln(sign, hi + (lo - hi).exp().ln_1p())
    }
}

impl<T: Real> Default for LogScalar<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real> From<T> for LogScalar<T> {
    fn from(value: T) -> Self {
        Self::from_value(value)
    }
}

impl<T: Real> Neg for LogScalar<T> {
    type Output = Self;

    fn neg(self) -> Self {
        LogScalar {
            sign: self.sign.flip(),
            logmag: self.logmag,
        }
    }
}

impl<T: Real> Mul for LogScalar<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let sign = self.sign.times(rhs.sign);
        if sign == Sign::Zero {
            return Self::zero();
        }
        Self::from_signed_ln(sign, self.logmag + rhs.logmag)
    }
}

impl<T: Real> Div for LogScalar<T> {
    type Output = Self;

    /// Panics on a zero divisor; see [`LogScalar::checked_div`].
    fn div(self, rhs: Self) -> Self {
        self.checked_div(rhs).expect("LogScalar division by zero")
    }
}

impl<T: Real> Add for LogScalar<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        match (self.sign, rhs.sign) {
            (Sign::Zero, _) => rhs,
            (_, Sign::Zero) => self,
            (a, b) if a == b => Self::add_same_sign(a, self.logmag, rhs.logmag),
            _ => {
                let (big, small) = if self.logmag >= rhs.logmag {
                    (self, rhs)
                } else {
                    (rhs, self)
                };
                let gap = big.logmag - small.logmag;
                if gap == T::zero() {
                    return Self::zero();
                }
                if big.logmag == T::infinity() {
                    return big;
                }
                let shrink = log1mexp(gap).expect("positive gap");
                Self::from_signed_ln(big.sign, big.logmag + shrink)
            }
        }
    }
}

impl<T: Real> Sub for LogScalar<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Real> std::iter::Sum for LogScalar<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl<T: Real> PartialOrd for LogScalar<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                Sign::Zero => Some(Ordering::Equal),
                Sign::Positive => self.logmag.partial_cmp(&other.logmag),
                Sign::Negative => other.logmag.partial_cmp(&self.logmag),
            },
            ord => Some(ord),
        }
    }
}

impl<T: Real> fmt::Display for LogScalar<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.value();
        if v != T::zero() && v.is_finite() {
            write!(f, "{v:e}")
        } else {
            match self.sign {
                Sign::Zero => write!(f, "0"),
                Sign::Positive => write!(f, "exp({})", self.logmag),
                Sign::Negative => write!(f, "-exp({})", self.logmag),
            }
        }
    }
}
