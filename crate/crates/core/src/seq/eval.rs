//! Evaluation of [`SeqExpr`] trees in any domain implementing
//! [`Semantics`]: rational intervals at a finite index, or the Levi-Civita
//! field at the infinite index `ω`.

use std::fmt;

use num_traits::One;
use thiserror::Error;

use super::expr::SeqExpr;
use crate::lc::{Coefficient, FieldConfig, LcError, LcNumber};
use crate::numeric::{format_rational, NumericError, RatInterval};
use crate::Rational;

/// Why an operation has no value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fault {
    ZeroDivisor,
    NegativeRadicand,
    Unsupported(&'static str),
    Numeric(NumericError),
    Field(LcError),
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fault::ZeroDivisor => f.write_str("division by zero"),
            Fault::NegativeRadicand => f.write_str("square root of a negative number"),
            Fault::Unsupported(what) => write!(f, "{what} is not available here"),
            Fault::Numeric(e) => e.fmt(f),
            Fault::Field(e) => e.fmt(f),
        }
    }
}

/// A fault together with the subterm where it happened.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{fault} in subterm `{subterm}`")]
pub struct EvalError {
    pub subterm: String,
    pub fault: Fault,
}

impl EvalError {
    pub fn is_domain_error(&self) -> bool {
        !matches!(self.fault, Fault::Unsupported(_))
    }
}

/// Interpretation of the node kinds of a [`SeqExpr`].
pub trait Semantics {
    type Value: Clone;

    fn constant(&self, q: &Rational) -> Self::Value;
    fn index(&self) -> Result<Self::Value, Fault>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, Fault>;
    fn powi(&self, a: &Self::Value, e: i32) -> Result<Self::Value, Fault>;
    fn sqrt(&self, a: &Self::Value) -> Result<Self::Value, Fault>;

    /// `ε^r`; only infinitesimal-aware domains support it.
    fn eps_power(&self, _r: &Rational) -> Result<Self::Value, Fault> {
        Err(Fault::Unsupported("`eps`"))
    }

    /// `o(ε^r)`.
    fn negligible(&self, _r: &Rational) -> Result<Self::Value, Fault> {
        Err(Fault::Unsupported("`o(..)`"))
    }
}

pub fn evaluate<S: Semantics>(e: &SeqExpr, sem: &S) -> Result<S::Value, EvalError> {
    let here = |fault: Fault| EvalError {
        subterm: e.to_string(),
        fault,
    };
    Ok(match e {
        SeqExpr::Const(q) => sem.constant(q),
        SeqExpr::Index => sem.index().map_err(here)?,
        SeqExpr::Eps => sem.eps_power(&Rational::one()).map_err(here)?,
        SeqExpr::Omega => sem.eps_power(&-Rational::one()).map_err(here)?,
        SeqExpr::EpsPow(r) => sem.eps_power(r).map_err(here)?,
        SeqExpr::LittleO(r) => sem.negligible(r).map_err(here)?,
        SeqExpr::Neg(a) => sem.neg(&evaluate(a, sem)?),
        SeqExpr::Add(a, b) => sem.add(&evaluate(a, sem)?, &evaluate(b, sem)?),
        SeqExpr::Sub(a, b) => sem.sub(&evaluate(a, sem)?, &evaluate(b, sem)?),
        SeqExpr::Mul(a, b) => sem.mul(&evaluate(a, sem)?, &evaluate(b, sem)?),
        SeqExpr::Div(a, b) => {
            let (x, y) = (evaluate(a, sem)?, evaluate(b, sem)?);
            sem.div(&x, &y).map_err(here)?
        }
        SeqExpr::Pow(a, k) => sem.powi(&evaluate(a, sem)?, *k).map_err(here)?,
        SeqExpr::Sqrt(a) => sem.sqrt(&evaluate(a, sem)?).map_err(here)?,
    })
}

/// Rational intervals at a fixed finite index.
#[derive(Debug, Clone)]
pub struct FiniteIndex {
    pub n: Rational,
    pub precision: u32,
}

fn numeric_fault(e: NumericError) -> Fault {
    match e {
        NumericError::DivisorContainsZero(_) | NumericError::DivisionByZero => Fault::ZeroDivisor,
        NumericError::NegativeRadicand(_) => Fault::NegativeRadicand,
        other => Fault::Numeric(other),
    }
}

impl Semantics for FiniteIndex {
    type Value = RatInterval;

    fn constant(&self, q: &Rational) -> RatInterval {
        RatInterval::point(q.clone())
    }

    fn index(&self) -> Result<RatInterval, Fault> {
        Ok(RatInterval::point(self.n.clone()))
    }

    fn add(&self, a: &RatInterval, b: &RatInterval) -> RatInterval {
        a + b
    }

    fn sub(&self, a: &RatInterval, b: &RatInterval) -> RatInterval {
        a - b
    }

    fn mul(&self, a: &RatInterval, b: &RatInterval) -> RatInterval {
        a * b
    }

    fn neg(&self, a: &RatInterval) -> RatInterval {
        -a
    }

    fn div(&self, a: &RatInterval, b: &RatInterval) -> Result<RatInterval, Fault> {
        a.checked_div(b).map_err(numeric_fault)
    }

    fn powi(&self, a: &RatInterval, e: i32) -> Result<RatInterval, Fault> {
        a.powi(e).map_err(numeric_fault)
    }

    fn sqrt(&self, a: &RatInterval) -> Result<RatInterval, Fault> {
        a.sqrt(self.precision).map_err(numeric_fault)
    }
}

/// The Levi-Civita field with the index bound to `ω`.
#[derive(Debug, Clone)]
pub struct InfiniteIndex<C> {
    pub cfg: FieldConfig,
    _coefficients: std::marker::PhantomData<C>,
}

impl<C> InfiniteIndex<C> {
    pub fn new(cfg: FieldConfig) -> Self {
        Self {
            cfg,
            _coefficients: std::marker::PhantomData,
        }
    }
}

fn field_fault(e: LcError) -> Fault {
    match e {
        LcError::DivisionByZero => Fault::ZeroDivisor,
        LcError::NotPositive(_) => Fault::NegativeRadicand,
        other => Fault::Field(other),
    }
}

impl<C: Coefficient> Semantics for InfiniteIndex<C> {
    type Value = LcNumber<C>;

    fn constant(&self, q: &Rational) -> LcNumber<C> {
        LcNumber::constant(q.clone())
    }

    fn index(&self) -> Result<LcNumber<C>, Fault> {
        Ok(LcNumber::omega())
    }

    fn add(&self, a: &LcNumber<C>, b: &LcNumber<C>) -> LcNumber<C> {
        a + b
    }

    fn sub(&self, a: &LcNumber<C>, b: &LcNumber<C>) -> LcNumber<C> {
        a - b
    }

    fn mul(&self, a: &LcNumber<C>, b: &LcNumber<C>) -> LcNumber<C> {
        a * b
    }

    fn neg(&self, a: &LcNumber<C>) -> LcNumber<C> {
        -a
    }

    fn div(&self, a: &LcNumber<C>, b: &LcNumber<C>) -> Result<LcNumber<C>, Fault> {
        a.checked_div(b, &self.cfg).map_err(field_fault)
    }

    fn powi(&self, a: &LcNumber<C>, e: i32) -> Result<LcNumber<C>, Fault> {
        a.powi(e, &self.cfg).map_err(field_fault)
    }

    fn sqrt(&self, a: &LcNumber<C>) -> Result<LcNumber<C>, Fault> {
        // √0 = 0 is fine; the field's sqrt only takes positive inputs
        if a.is_exact_zero() {
            return Ok(LcNumber::zero());
        }
        a.sqrt(&self.cfg).map_err(field_fault)
    }

    fn eps_power(&self, r: &Rational) -> Result<LcNumber<C>, Fault> {
        Ok(LcNumber::monomial(C::one(), r.clone()))
    }

    fn negligible(&self, r: &Rational) -> Result<LcNumber<C>, Fault> {
        Ok(LcNumber::negligible(r.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiniteEvalError {
    #[error("index must be at least 1, got {0}")]
    IndexOutOfRange(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Certified enclosure of `e(n0)`; exact (width 0) when `e` has no square
/// root of a non-square.
pub fn eval_finite(e: &SeqExpr, n0: &Rational, precision: u32) -> Result<RatInterval, FiniteEvalError> {
    if n0 < &Rational::one() {
        return Err(FiniteEvalError::IndexOutOfRange(format_rational(n0)));
    }
    let sem = FiniteIndex {
        n: n0.clone(),
        precision: precision.max(1),
    };
    Ok(evaluate(e, &sem)?)
}

/// `e(ω)`: substitute the infinite index and compute in the field.
pub fn eval_hyperfinite<C: Coefficient>(e: &SeqExpr, cfg: &FieldConfig) -> Result<LcNumber<C>, EvalError> {
    evaluate(e, &InfiniteIndex::new(cfg.clone()))
}

/// Evaluate a Levi-Civita expression (`eps`, `omega`, and `n` read as `ω`).
pub fn eval_lc<C: Coefficient>(e: &SeqExpr, cfg: &FieldConfig) -> Result<LcNumber<C>, EvalError> {
    eval_hyperfinite(e, cfg)
}
