//! Closed intervals with exact rational endpoints.
//!
//! Endpoint arithmetic is exact, so every operation except [`RatInterval::sqrt`]
//! and [`RatInterval::compress`] returns the exact image of its inputs. Those
//! two widen outward onto a dyadic grid of `2^-p`, adding at most `2^(1-p)`
//! of width.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{ceil_dyadic, exact_sqrt, floor_dyadic, format_rational, to_decimal};
use super::{ArithOp, NumericError};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: Rational,
    hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, NumericError> {
        if lo > hi {
            return Err(NumericError::InvertedInterval {
                lo: format_rational(&lo),
                hi: format_rational(&hi),
            });
        }
        Ok(Self { lo, hi })
    }

    /// The degenerate interval `[q, q]`.
    pub fn point(q: Rational) -> Self {
        Self { lo: q.clone(), hi: q }
    }

    /// Smallest interval containing both endpoints, in either order.
    pub fn spanning(a: Rational, b: Rational) -> Self {
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn into_bounds(self) -> (Rational, Rational) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &RatInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &RatInterval) -> Option<RatInterval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(RatInterval { lo, hi })
    }

    pub fn hull(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: (&self.lo).min(&other.lo).clone(),
            hi: (&self.hi).max(&other.hi).clone(),
        }
    }

    /// Largest distance from `x` to a point of the interval.
    pub fn max_distance_to(&self, x: &Rational) -> Rational {
        let a = (&self.lo - x).abs();
        let b = (&self.hi - x).abs();
        a.max(b)
    }

    /// Smallest distance from `x` to a point of the interval.
    pub fn min_distance_to(&self, x: &Rational) -> Rational {
        if self.contains(x) {
            Rational::zero()
        } else if x < &self.lo {
            &self.lo - x
        } else {
            x - &self.hi
        }
    }

    pub fn checked_div(&self, rhs: &RatInterval) -> Result<RatInterval, NumericError> {
        Ok(self * &rhs.recip()?)
    }

    pub fn recip(&self) -> Result<RatInterval, NumericError> {
        if self.contains_zero() {
            return Err(NumericError::DivisorContainsZero(self.to_string()));
        }
        Ok(RatInterval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    /// Integer power with the tight enclosure for even exponents of
    /// intervals straddling zero.
    pub fn powi(&self, exp: i32) -> Result<RatInterval, NumericError> {
        if exp < 0 {
            return self.recip()?.powi(-exp);
        }
        let e = exp as usize;
        let a = num_traits::pow(self.lo.clone(), e);
        let b = num_traits::pow(self.hi.clone(), e);
        if e == 0 {
            return Ok(RatInterval::point(Rational::one()));
        }
        if e % 2 == 1 || !self.lo.is_negative() {
            return Ok(RatInterval::spanning(a, b));
        }
        if !self.hi.is_positive() {
            return Ok(RatInterval::spanning(a, b));
        }
        Ok(RatInterval {
            lo: Rational::zero(),
            hi: a.max(b),
        })
    }

    /// Certified enclosure of `{√x : x ∈ self}`.
    ///
    /// Each endpoint is rounded outward onto the grid `2^-p` via an exact
    /// integer square root, so the result is monotone under inclusion and
    /// adds at most `2^(1-p)` beyond the exact image. An endpoint that is the
    /// square of a rational is returned exactly.
    pub fn sqrt(&self, p: u32) -> Result<RatInterval, NumericError> {
        if self.lo.is_negative() {
            return Err(NumericError::NegativeRadicand(self.to_string()));
        }
        if p == 0 {
            return Err(NumericError::ZeroPrecision);
        }
        let lo = exact_sqrt(&self.lo).unwrap_or_else(|| sqrt_floor(&self.lo, p));
        let hi = exact_sqrt(&self.hi).unwrap_or_else(|| sqrt_ceil(&self.hi, p));
        Ok(RatInterval { lo, hi })
    }

    /// Outward rounding of both endpoints to denominators dividing `2^p`.
    pub fn compress(&self, p: u32) -> RatInterval {
        RatInterval {
            lo: floor_dyadic(&self.lo, p),
            hi: ceil_dyadic(&self.hi, p),
        }
    }

    pub fn to_decimal_string(&self, digits: usize) -> String {
        format!("[{}, {}]", to_decimal(&self.lo, digits), to_decimal(&self.hi, digits))
    }
}

/// `floor(√x · 2^p) / 2^p`, computed as `isqrt(floor(x · 4^p)) / 2^p`.
fn sqrt_floor(x: &Rational, p: u32) -> Rational {
    use num_bigint::BigInt;
    let scaled = (x * Rational::from_integer(BigInt::one() << (2 * p))).floor().to_integer();
    Rational::new(scaled.sqrt(), BigInt::one() << p)
}

/// `ceil(√x · 2^p) / 2^p` for non-square `x`.
fn sqrt_ceil(x: &Rational, p: u32) -> Rational {
    use num_bigint::BigInt;
    let scaled = x * Rational::from_integer(BigInt::one() << (2 * p));
    let floor = scaled.floor().to_integer();
    let mut root = floor.sqrt();
    if !(scaled.is_integer() && &root * &root == floor) {
        root += 1;
    }
    Rational::new(root, BigInt::one() << p)
}

/// Interval arithmetic dispatch.
pub fn ival_arith(
    x: &RatInterval,
    y: &RatInterval,
    op: ArithOp,
) -> Result<RatInterval, NumericError> {
    Ok(match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => x.checked_div(y)?,
    })
}

pub fn ival_sqrt(x: &RatInterval, p: u32) -> Result<RatInterval, NumericError> {
    x.sqrt(p)
}

pub fn ival_compress(x: &RatInterval, p: u32) -> RatInterval {
    x.compress(p)
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl From<Rational> for RatInterval {
    fn from(q: Rational) -> Self {
        RatInterval::point(q)
    }
}

impl<'a> Add<&'a RatInterval> for &'a RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl<'a> Sub<&'a RatInterval> for &'a RatInterval {
    type Output = RatInterval;
    fn sub(self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl<'a> Mul<&'a RatInterval> for &'a RatInterval {
    type Output = RatInterval;
    fn mul(self, rhs: &RatInterval) -> RatInterval {
        if self.is_point() && rhs.is_point() {
            return RatInterval::point(&self.lo * &rhs.lo);
        }
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }
}

impl Neg for &RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        RatInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatInterval {
            type Output = RatInterval;
            fn $m(self, rhs: RatInterval) -> RatInterval {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        -&self
    }
}

impl Zero for RatInterval {
    fn zero() -> Self {
        RatInterval::point(Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}

impl One for RatInterval {
    fn one() -> Self {
        RatInterval::point(Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{int, pow2, ratio};

    fn iv(lo: Rational, hi: Rational) -> RatInterval {
        RatInterval::new(lo, hi).unwrap()
    }

    #[test]
    fn rejects_inverted() {
        assert!(RatInterval::new(int(2), int(1)).is_err());
    }

    #[test]
    fn monotone_product() {
        let r = ival_arith(&iv(int(1), int(2)), &iv(int(3), int(4)), ArithOp::Mul).unwrap();
        assert_eq!(r, iv(int(3), int(8)));
    }

    #[test]
    fn sign_case_product() {
        let s = iv(int(-1), int(1));
        assert_eq!(ival_arith(&s, &s, ArithOp::Mul).unwrap(), s);
    }

    #[test]
    fn divide_by_zero_interval() {
        let r = ival_arith(&iv(int(1), int(1)), &iv(int(0), int(1)), ArithOp::Div);
        assert!(matches!(r, Err(NumericError::DivisorContainsZero(_))));
    }

    #[test]
    fn division_encloses() {
        let r = iv(int(1), int(2)).checked_div(&iv(int(4), int(8))).unwrap();
        assert_eq!(r, iv(ratio(1, 8), ratio(1, 2)));
    }

    #[test]
    fn sqrt_perfect_square_is_exact() {
        assert_eq!(RatInterval::point(int(4)).sqrt(1).unwrap(), RatInterval::point(int(2)));
        assert_eq!(RatInterval::point(ratio(1, 9)).sqrt(3).unwrap(), RatInterval::point(ratio(1, 3)));
    }

    #[test]
    fn sqrt_negative_radicand() {
        let r = iv(int(-1), int(1)).sqrt(10);
        assert!(matches!(r, Err(NumericError::NegativeRadicand(_))));
    }

    #[test]
    fn sqrt_zero_precision() {
        assert_eq!(RatInterval::point(int(2)).sqrt(0), Err(NumericError::ZeroPrecision));
    }

    #[test]
    fn sqrt_two_width_bound() {
        let r = RatInterval::point(int(2)).sqrt(40).unwrap();
        assert!(r.width() <= pow2(-39));
        assert!(r.lo() * r.lo() <= int(2));
        assert!(r.hi() * r.hi() >= int(2));
    }

    #[test]
    fn powi_even_straddle() {
        let r = iv(int(-2), int(1)).powi(2).unwrap();
        assert_eq!(r, iv(int(0), int(4)));
        let r = iv(int(-2), int(-1)).powi(3).unwrap();
        assert_eq!(r, iv(int(-8), int(-1)));
        let r = iv(int(2), int(4)).powi(-1).unwrap();
        assert_eq!(r, iv(ratio(1, 4), ratio(1, 2)));
        assert!(iv(int(-1), int(1)).powi(-2).is_err());
    }

    #[test]
    fn compress_third() {
        let x = RatInterval::point(ratio(1, 3));
        let y = x.compress(4);
        assert!(x.is_subset_of(&y));
        assert!(y.width() <= pow2(-3));
        assert!(y.lo().denom() <= &16.into() && y.hi().denom() <= &16.into());
    }

    #[test]
    fn compress_representable_is_identity() {
        let x = iv(int(0), int(1));
        assert_eq!(x.compress(10), x);
    }

    #[test]
    fn compress_matches_dyadic_grid_search() {
        // Exhaustive search over the grid k/4 for the tightest containing interval.
        let x = ratio(355, 113);
        let grid: Vec<Rational> = (0..=16).map(|k| ratio(k, 4)).collect();
        let lo = grid.iter().filter(|g| **g <= x).max().unwrap().clone();
        let hi = grid.iter().filter(|g| **g >= x).min().unwrap().clone();
        let y = RatInterval::point(x).compress(2);
        assert_eq!(y, iv(lo, hi));
        assert_eq!(y, iv(ratio(3, 1), ratio(13, 4)));
    }

    #[test]
    fn display_form() {
        assert_eq!(iv(ratio(1, 2), ratio(3, 4)).to_string(), "[1/2, 3/4]");
    }
}
