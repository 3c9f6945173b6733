//! A sampling oracle for the ε–N definition of a limit.
//!
//! For each tolerance ε the oracle looks for `N ≤ n_max` such that
//! `|e(n) − L| < ε` at every sampled `n` in `(N, n_max]`. Distances are
//! certified upper bounds from interval evaluation. This is a falsifiable
//! test at desk scale, not a proof.
//!
//! When even the last sample misses ε the verdict depends on the trend: a
//! distance that still shrinks by at least half over the last decade of
//! samples is *inconclusive* (the range is too short for this ε), anything
//! else is *refuted*.

use num_traits::{One, Signed};
use thiserror::Error;

use super::eval::{eval_finite, FiniteEvalError};
use super::expr::SeqExpr;
use crate::numeric::{bits_for, format_rational, int, ratio};
use crate::Rational;

/// Every index up to this bound is sampled.
pub const DENSE_PREFIX: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// All samples after `witness` are within ε.
    Confirmed { witness: u64 },
    /// The distance at `n_max` is not within ε and has stopped shrinking.
    Refuted { at: u64 },
    /// The distance is still shrinking but `n_max` is too small for ε.
    Inconclusive { at: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsOutcome {
    pub eps: Rational,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsReport {
    pub limit: Rational,
    pub n_max: u64,
    pub samples: usize,
    pub outcomes: Vec<EpsOutcome>,
}

impl EpsReport {
    /// `Some(true)` when every ε is confirmed, `Some(false)` when one is
    /// refuted, `None` otherwise.
    pub fn holds(&self) -> Option<bool> {
        let verdicts = || self.outcomes.iter().map(|o| &o.verdict);
        if verdicts().any(|v| matches!(v, Verdict::Refuted { .. })) {
            Some(false)
        } else if verdicts().all(|v| matches!(v, Verdict::Confirmed { .. })) {
            Some(true)
        } else {
            None
        }
    }

    pub fn outcome(&self, eps: &Rational) -> Option<&Verdict> {
        self.outcomes.iter().find(|o| &o.eps == eps).map(|o| &o.verdict)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpsError {
    #[error("the tolerance list is empty")]
    NoTolerances,
    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(String),
    #[error("n_max must be at least 1")]
    EmptyRange,
    #[error("at n = {n}: {source}")]
    Eval { n: u64, source: FiniteEvalError },
}

/// Sample indices: all of `1..=min(DENSE_PREFIX, n_max)`, then steps of
/// about 17/16, always ending at `n_max`.
pub fn sample_indices(n_max: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n_max.min(DENSE_PREFIX)).collect();
    let mut n = DENSE_PREFIX;
    while n < n_max {
        n = (n + n.div_ceil(16)).min(n_max);
        out.push(n);
    }
    out
}

struct Sample {
    n: u64,
    /// Certified bounds on `|e(n) − L|`.
    lo: Rational,
    hi: Rational,
}

pub fn epsilontic_check(e: &SeqExpr, limit: &Rational, eps_list: &[Rational], n_max: u64) -> Result<EpsReport, EpsError> {
    let smallest = eps_list.iter().min().ok_or(EpsError::NoTolerances)?;
    if let Some(bad) = eps_list.iter().find(|x| !x.is_positive()) {
        return Err(EpsError::NonPositiveTolerance(format_rational(bad)));
    }
    if n_max == 0 {
        return Err(EpsError::EmptyRange);
    }
    let precision = bits_for(smallest) + 32;
    let samples = sample_indices(n_max)
        .into_iter()
        .map(|n| {
            let v = eval_finite(e, &Rational::from_integer(n.into()), precision)
                .map_err(|source| EpsError::Eval { n, source })?;
            Ok(Sample {
                n,
                lo: v.min_distance_to(limit),
                hi: v.max_distance_to(limit),
            })
        })
        .collect::<Result<Vec<_>, EpsError>>()?;
    let outcomes = eps_list
        .iter()
        .map(|eps| EpsOutcome {
            eps: eps.clone(),
            verdict: judge(&samples, eps),
        })
        .collect();
    Ok(EpsReport {
        limit: limit.clone(),
        n_max,
        samples: samples.len(),
        outcomes,
    })
}

fn judge(samples: &[Sample], eps: &Rational) -> Verdict {
    let last_miss = samples.iter().rposition(|s| &s.hi >= eps);
    let last = samples.last().expect("at least one sample");
    match last_miss {
        None => Verdict::Confirmed { witness: 0 },
        Some(i) if i + 1 < samples.len() => Verdict::Confirmed { witness: samples[i].n },
        Some(_) => {
            // a certified miss that no longer shrinks refutes; otherwise
            // the range or the precision ran out first
            let reference = samples.iter().rev().find(|s| s.n <= last.n / 10);
            let shrinking = match reference {
                Some(r) => last.hi <= &r.lo * ratio(1, 2),
                None => false,
            };
            if &last.lo < eps || shrinking {
                Verdict::Inconclusive { at: last.n }
            } else {
                Verdict::Refuted { at: last.n }
            }
        }
    }
}

/// `10^-k` for each `k`.
pub fn decimal_tolerances(exponents: &[u32]) -> Vec<Rational> {
    exponents
        .iter()
        .map(|&k| Rational::one() / num_traits::pow(int(10), k as usize))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::parser::parse_seq_expr;

    fn check(text: &str, l: Rational, eps: &[Rational], n_max: u64) -> EpsReport {
        epsilontic_check(&parse_seq_expr(text).unwrap(), &l, eps, n_max).unwrap()
    }

    #[test]
    fn sampling_grid() {
        let s = sample_indices(1_000_000);
        assert_eq!(&s[..3], &[1, 2, 3]);
        assert_eq!(s[9_999], 10_000);
        assert_eq!(*s.last().unwrap(), 1_000_000);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(s.len() < 10_100);
        assert_eq!(sample_indices(5), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn confirms_true_limit() {
        let r = check("(n+1)/n", int(1), &[ratio(1, 10), ratio(1, 1000)], 1_000_000);
        assert_eq!(r.holds(), Some(true));
        assert_eq!(r.outcome(&ratio(1, 10)), Some(&Verdict::Confirmed { witness: 10 }));
        assert_eq!(r.outcome(&ratio(1, 1000)), Some(&Verdict::Confirmed { witness: 1000 }));
    }

    #[test]
    fn refutes_wrong_limit() {
        let r = check("(n+1)/n", int(2), &[ratio(1, 10)], 1_000_000);
        assert_eq!(r.holds(), Some(false));
    }

    #[test]
    fn rational_function() {
        let r = check("(2*n^2+n)/(n^2+3)", int(2), &[ratio(1, 100)], 1_000_000);
        assert_eq!(r.holds(), Some(true));
    }

    #[test]
    fn out_of_range_tolerance_is_inconclusive() {
        let r = check("1/n", int(0), &decimal_tolerances(&[3, 9]), 1_000_000);
        assert_eq!(r.holds(), None);
        assert!(matches!(r.outcomes[1].verdict, Verdict::Inconclusive { at: 1_000_000 }));
    }

    #[test]
    fn input_errors() {
        let e = parse_seq_expr("1/(n-3)").unwrap();
        assert!(matches!(epsilontic_check(&e, &int(0), &[ratio(1, 2)], 10), Err(EpsError::Eval { n: 3, .. })));
        assert_eq!(epsilontic_check(&e, &int(0), &[], 10), Err(EpsError::NoTolerances));
        assert!(matches!(
            epsilontic_check(&e, &int(0), &[int(0)], 10),
            Err(EpsError::NonPositiveTolerance(_))
        ));
    }
}
