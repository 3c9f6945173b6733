//! Exact rational helpers: checked arithmetic, decimal-scientific parsing,
//! dyadic rounding, and exact decimal rendering.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::NumericError;
use crate::Rational;

/// The four field operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact rational arithmetic. `BigRational` keeps every result in lowest
/// terms with a positive denominator.
pub fn rat_arith(a: &Rational, b: &Rational, op: ArithOp) -> Result<Rational, NumericError> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => {
            if b.is_zero() {
                return Err(NumericError::DivisionByZero);
            }
            a / b
        }
    })
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^k` for any signed `k`.
pub fn pow2(k: i64) -> Rational {
    let big = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        Rational::from_integer(big)
    } else {
        Rational::new(BigInt::one(), big)
    }
}

/// `10^k` for any signed `k`.
pub fn pow10(k: i64) -> Rational {
    let big = num_traits::pow(BigInt::from(10), k.unsigned_abs() as usize);
    if k >= 0 {
        Rational::from_integer(big)
    } else {
        Rational::new(BigInt::one(), big)
    }
}

/// Largest multiple of `2^-bits` that is `<= x`.
pub fn floor_dyadic(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = (x * Rational::from_integer(scale.clone())).floor();
    Rational::new(scaled.to_integer(), scale)
}

/// Smallest multiple of `2^-bits` that is `>= x`.
pub fn ceil_dyadic(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = (x * Rational::from_integer(scale.clone())).ceil();
    Rational::new(scaled.to_integer(), scale)
}

/// The exact square root of `x` when `x` is the square of a rational.
pub fn exact_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Parse an exact rational from `p/q`, an integer, a decimal (`3.25`), or
/// decimal-scientific notation (`1e-30`, `-2.5E+3`).
pub fn parse_rational(text: &str) -> Result<Rational, NumericError> {
    let s = text.trim();
    let bad = || NumericError::Parse(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        return Ok(Rational::new(p, q));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{whole}{frac}").parse().map_err(|_| bad())?;
    let mut value = Rational::from_integer(all) * pow10(exponent - frac.len() as i64);
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Serialize as `p/q`, or `p` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// Exact decimal rendering truncated toward zero after `digits` fractional
/// digits. A trailing `…` marks that the expansion was cut short.
pub fn to_decimal(x: &Rational, digits: usize) -> String {
    let negative = x.is_negative();
    let magnitude = x.abs();
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = magnitude.numer() * &scale;
    let (q, r) = scaled.div_rem(magnitude.denom());
    let (whole, frac) = q.div_rem(&scale);
    let mut out = String::new();
    if negative && !(q.is_zero() && r.is_zero()) {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if digits > 0 {
        let frac = frac.to_str_radix(10);
        out.push('.');
        out.extend(std::iter::repeat('0').take(digits - frac.len()));
        out.push_str(&frac);
    }
    if !r.is_zero() {
        out.push('…');
    }
    out
}

/// Scientific rendering `d.ddd…e±k` with `digits` fractional mantissa
/// digits, truncated toward zero; `…` marks an inexact mantissa.
pub fn to_scientific(x: &Rational, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let magnitude = x.abs();
    let mut k = magnitude.numer().to_string().len() as i64 - magnitude.denom().to_string().len() as i64;
    if magnitude < pow10(k) {
        k -= 1;
    }
    let mantissa = &magnitude / pow10(k);
    let sign = if x.is_negative() { "-" } else { "" };
    format!("{sign}{}e{k}", to_decimal(&mantissa, digits))
}

/// Number of bits `b` with `2^-b <= tol`, i.e. `ceil(log2(1/tol))`, floored
/// at zero.
pub fn bits_for(tol: &Rational) -> u32 {
    if tol >= &Rational::one() {
        return 0;
    }
    let inv = tol.recip();
    let mut b = inv.to_integer().bits() as u32;
    // tighten: find smallest b with 2^b >= 1/tol
    while b > 0 && pow2(b as i64 - 1) >= inv {
        b -= 1;
    }
    while pow2(b as i64) < inv {
        b += 1;
    }
    b
}

pub(crate) fn sign_of(x: &Rational) -> Ordering {
    match x.numer().sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scientific() {
        assert_eq!(to_scientific(&pow2(-39), 3), "1.818…e-12");
        assert_eq!(to_scientific(&int(1000), 2), "1.00e3");
        assert_eq!(to_scientific(&ratio(-1, 8), 3), "-1.250e-1");
        assert_eq!(to_scientific(&ratio(9, 10), 1), "9.0e-1");
    }

    #[test]
    fn add_thirds_and_halves() {
        assert_eq!(rat_arith(&ratio(1, 2), &ratio(1, 3), ArithOp::Add).unwrap(), ratio(5, 6));
    }

    #[test]
    fn canonical_form() {
        let x = ratio(2, 4);
        assert_eq!(x.numer(), &BigInt::from(1));
        assert_eq!(x.denom(), &BigInt::from(2));
        let y = ratio(3, -6);
        assert_eq!(y.numer(), &BigInt::from(-1));
        assert_eq!(y.denom(), &BigInt::from(2));
    }

    #[test]
    fn divide_by_zero() {
        assert_eq!(
            rat_arith(&ratio(3, 5), &Rational::zero(), ArithOp::Div),
            Err(NumericError::DivisionByZero)
        );
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1e-30").unwrap(), pow10(-30));
        assert_eq!(parse_rational("-2.5E+3").unwrap(), int(-2500));
        assert_eq!(parse_rational("355/113").unwrap(), ratio(355, 113));
        assert_eq!(parse_rational(" 0.125 ").unwrap(), ratio(1, 8));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1e").is_err());
        assert!(parse_rational("-").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&ratio(1, 3), 4), "0.3333…");
        assert_eq!(to_decimal(&ratio(-1, 8), 3), "-0.125");
        assert_eq!(to_decimal(&ratio(-1, 8), 2), "-0.12…");
        assert_eq!(to_decimal(&int(2), 0), "2");
        assert_eq!(to_decimal(&ratio(1, 20), 3), "0.050");
    }

    #[test]
    fn dyadic_rounding_brackets() {
        let x = ratio(1, 3);
        let lo = floor_dyadic(&x, 4);
        let hi = ceil_dyadic(&x, 4);
        assert_eq!(lo, ratio(5, 16));
        assert_eq!(hi, ratio(6, 16));
        assert_eq!(floor_dyadic(&ratio(-1, 3), 2), ratio(-2, 4));
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(exact_sqrt(&ratio(4, 9)), Some(ratio(2, 3)));
        assert_eq!(exact_sqrt(&int(2)), None);
        assert_eq!(exact_sqrt(&int(-4)), None);
        assert_eq!(exact_sqrt(&Rational::zero()), Some(Rational::zero()));
    }

    #[test]
    fn bits_for_tolerances() {
        assert_eq!(bits_for(&ratio(1, 8)), 3);
        assert_eq!(bits_for(&ratio(1, 9)), 4);
        assert_eq!(bits_for(&int(2)), 0);
        assert_eq!(bits_for(&pow10(-30)), 100);
    }
}
