use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::numeric::{exact_sqrt, sign_of, RatInterval};
use crate::Rational;

/// Why a coefficient has no square root in its domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoefficientSqrtError {
    Negative,
    Indeterminate,
    NotPerfectSquare,
}

/// A coefficient domain for [`LcNumber`](super::LcNumber).
///
/// `Rational` gives exact arithmetic; `RatInterval` gives certified
/// enclosures, which is what square roots of non-square constants need.
pub trait Coefficient:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Short name of the mode, used in error messages.
    const MODE: &'static str;

    fn from_rational(q: Rational) -> Self;

    /// `None` when the sign cannot be decided.
    fn sign(&self) -> Option<Ordering>;

    /// `None` when the coefficient is (or may be) zero.
    fn checked_recip(&self) -> Option<Self>;

    fn sqrt(&self, bits: u32) -> Result<Self, CoefficientSqrtError>;

    /// Split into a sign and a magnitude for printing `a - b` rather than
    /// `a + -b`.
    fn split_sign(&self) -> (bool, Self) {
        if self.sign() == Some(Ordering::Less) {
            (true, -self.clone())
        } else {
            (false, self.clone())
        }
    }
}

impl Coefficient for Rational {
    const MODE: &'static str = "exact";

    fn from_rational(q: Rational) -> Self {
        q
    }

    fn sign(&self) -> Option<Ordering> {
        Some(sign_of(self))
    }

    fn checked_recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn sqrt(&self, _bits: u32) -> Result<Self, CoefficientSqrtError> {
        if self.is_negative() {
            return Err(CoefficientSqrtError::Negative);
        }
        exact_sqrt(self).ok_or(CoefficientSqrtError::NotPerfectSquare)
    }
}

impl Coefficient for RatInterval {
    const MODE: &'static str = "interval";

    fn from_rational(q: Rational) -> Self {
        RatInterval::point(q)
    }

    fn sign(&self) -> Option<Ordering> {
        if self.lo().is_positive() {
            Some(Ordering::Greater)
        } else if self.hi().is_negative() {
            Some(Ordering::Less)
        } else if self.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    fn checked_recip(&self) -> Option<Self> {
        self.recip().ok()
    }

    fn sqrt(&self, bits: u32) -> Result<Self, CoefficientSqrtError> {
        match self.sign() {
            Some(Ordering::Less) => Err(CoefficientSqrtError::Negative),
            None => Err(CoefficientSqrtError::Indeterminate),
            _ => RatInterval::sqrt(self, bits.max(1)).map_err(|_| CoefficientSqrtError::Negative),
        }
    }
}
