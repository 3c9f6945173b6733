//! Exact numerics: rationals and rational intervals.

mod interval;
mod rational;

pub use interval::{ival_arith, ival_compress, ival_sqrt, RatInterval};
pub use rational::{
    bits_for, ceil_dyadic, exact_sqrt, floor_dyadic, format_rational, int, parse_rational, pow10,
    pow2, rat_arith, ratio, to_decimal, to_scientific, ArithOp,
};
pub(crate) use rational::sign_of;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by an interval containing zero: {0}")]
    DivisorContainsZero(String),
    #[error("square root of an interval with negative lower endpoint: {0}")]
    NegativeRadicand(String),
    #[error("precision must be at least one bit")]
    ZeroPrecision,
    #[error("interval endpoints out of order: lo = {lo}, hi = {hi}")]
    InvertedInterval { lo: String, hi: String },
    #[error("cannot parse `{0}` as a rational number")]
    Parse(String),
}
