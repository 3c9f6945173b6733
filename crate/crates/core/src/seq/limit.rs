//! Limits and terminations read off as shadows of values at the infinite
//! index.

use thiserror::Error;

use super::eval::{eval_hyperfinite, EvalError};
use super::expr::SeqExpr;
use crate::lc::{Coefficient, FieldConfig, LcError, LcNumber, Magnitude};
use crate::numeric::ratio;

/// Which operand of a termination failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Single,
    Lower,
    Upper,
}

impl Side {
    fn label(self) -> &'static str {
        match self {
            Side::Single => "",
            Side::Lower => "lower: ",
            Side::Upper => "upper: ",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LimitError<C: Coefficient> {
    #[error("{}{source}", side.label())]
    Eval { side: Side, source: EvalError },
    #[error("{}`{expr}` diverges: its value at ω is {expansion}", side.label())]
    Diverges { side: Side, expr: String, expansion: String },
    #[error("{}{source}", side.label())]
    Undecidable { side: Side, source: LcError },
    #[error("not adequal: shadows {lower} and {upper} differ by {gap}")]
    NotAdequal { gap: C, lower: C, upper: C },
}

impl<C: Coefficient> LimitError<C> {
    /// Coarse error class, stable under swapping the operands of a
    /// termination.
    pub fn class(&self) -> &'static str {
        match self {
            LimitError::Eval { .. } => "domain",
            LimitError::Diverges { .. } => "diverges",
            LimitError::Undecidable { .. } => "undecidable",
            LimitError::NotAdequal { .. } => "not-adequal",
        }
    }

    fn severity(&self) -> u8 {
        match self {
            LimitError::Eval { .. } => 3,
            LimitError::Undecidable { .. } => 2,
            LimitError::Diverges { .. } => 1,
            LimitError::NotAdequal { .. } => 0,
        }
    }
}

/// A limit together with the value at `ω` it was read from.
#[derive(Debug, Clone, PartialEq)]
pub struct Limit<C: Coefficient> {
    pub value: C,
    pub expansion: LcNumber<C>,
}

fn finite_value<C: Coefficient>(e: &SeqExpr, cfg: &FieldConfig, side: Side) -> Result<LcNumber<C>, LimitError<C>> {
    let x = eval_hyperfinite::<C>(e, cfg).map_err(|source| LimitError::Eval { side, source })?;
    match x.classify() {
        Ok(Magnitude::Infinite) => Err(LimitError::Diverges {
            side,
            expr: e.to_string(),
            expansion: x.render(Some(4)),
        }),
        Ok(_) => Ok(x),
        Err(source) => Err(LimitError::Undecidable { side, source }),
    }
}

fn shadow<C: Coefficient>(x: &LcNumber<C>, side: Side) -> Result<C, LimitError<C>> {
    x.standard_part().map_err(|source| LimitError::Undecidable { side, source })
}

/// `st(e(ω))`, with the expansion it came from.
pub fn limit_shadow<C: Coefficient>(e: &SeqExpr, cfg: &FieldConfig) -> Result<Limit<C>, LimitError<C>> {
    let expansion = finite_value::<C>(e, cfg, Side::Single)?;
    let value = shadow(&expansion, Side::Single)?;
    Ok(Limit { value, expansion })
}

/// Common shadow of `lower(ω)` and `upper(ω)` when the two are adequal.
///
/// In interval mode the two shadows are separate enclosures of one number;
/// their average is returned, which does not depend on operand order.
pub fn terminate_closed_form<C: Coefficient>(
    lower: &SeqExpr,
    upper: &SeqExpr,
    cfg: &FieldConfig,
) -> Result<C, LimitError<C>> {
    let lo = finite_value::<C>(lower, cfg, Side::Lower);
    let hi = finite_value::<C>(upper, cfg, Side::Upper);
    let (lo, hi) = match (lo, hi) {
        (Ok(lo), Ok(hi)) => (lo, hi),
        (Err(e), Ok(_)) | (Ok(_), Err(e)) => return Err(e),
        // report the more severe class so the outcome ignores operand order
        (Err(a), Err(b)) => return Err(if b.severity() > a.severity() { b } else { a }),
    };
    let lo_st = shadow(&lo, Side::Lower)?;
    let hi_st = shadow(&hi, Side::Upper)?;
    let together = lo
        .adequal(&hi)
        .map_err(|source| LimitError::Undecidable { side: Side::Single, source })?;
    if !together {
        return Err(LimitError::NotAdequal {
            gap: hi_st.clone() - lo_st.clone(),
            lower: lo_st,
            upper: hi_st,
        });
    }
    if lo_st == hi_st {
        return Ok(lo_st);
    }
    Ok((lo_st + hi_st) * C::from_rational(ratio(1, 2)))
}
