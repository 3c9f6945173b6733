//! Sequences over a natural index `n`: expression trees, parsing,
//! evaluation at finite and infinite indices, and limits.

mod epsilontic;
mod eval;
mod expr;
mod limit;
mod parser;

pub use eval::{
    eval_finite, eval_hyperfinite, eval_lc, evaluate, EvalError, Fault, FiniteEvalError, FiniteIndex,
    InfiniteIndex, Semantics,
};
pub use expr::{SeqExpr, MAX_EXPONENT};
pub use parser::{parse_lc_expr, parse_seq_expr, parse_with, Dialect, ParseError};
pub use epsilontic::{
    decimal_tolerances, epsilontic_check, sample_indices, EpsError, EpsOutcome, EpsReport, Verdict, DENSE_PREFIX,
};
pub use limit::{limit_shadow, terminate_closed_form, Limit, LimitError, Side};
