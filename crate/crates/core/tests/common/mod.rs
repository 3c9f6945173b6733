#![allow(dead_code)]

use num_traits::{One, Zero};
use proptest::prelude::*;

use terminus::numeric::{int, ratio};
use terminus::seq::{SeqExpr, MAX_EXPONENT};
use terminus::{ExactLc, Rational};

/// Closed-form sequences with their limits.
pub const LIMIT_CORPUS: &[(&str, i64, i64)] = &[
    ("(n+1)/n", 1, 1),
    ("(2*n^2+n)/(n^2+3)", 2, 1),
    ("sqrt(n^2+n)-n", 1, 2),
    ("1/n", 0, 1),
    ("(n^2+1)/(3*n^2-n)", 1, 3),
    ("(n-1)/n", 1, 1),
    ("(3*n^3-2*n)/(n^3+n^2+1)", 3, 1),
    ("(n/(n+1))^2", 1, 1),
    ("sqrt(4*n^2+3*n)/n", 2, 1),
    ("(1+1/n)^3", 1, 1),
    ("sqrt(n+1)-sqrt(n)", 0, 1),
    ("n^2*(1/n-1/(n+1))", 1, 1),
    ("n*(sqrt(1+1/n^2)-1)", 0, 1),
];

pub fn corpus_limit(num: i64, den: i64) -> Rational {
    ratio(num, den)
}

fn literal() -> impl Strategy<Value = SeqExpr> {
    (-40i64..=40, 1i64..=9).prop_map(|(n, d)| SeqExpr::Const(ratio(n, d)))
}

/// Random trees over the sequence grammar.
pub fn seq_tree(depth: u32) -> impl Strategy<Value = SeqExpr> {
    let leaf = prop_oneof![literal(), Just(SeqExpr::Index)];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(SeqExpr::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SeqExpr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SeqExpr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SeqExpr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SeqExpr::div(a, b)),
            (inner.clone(), -MAX_EXPONENT..=MAX_EXPONENT).prop_map(|(a, e)| SeqExpr::pow(a, e)),
            inner.prop_map(SeqExpr::sqrt),
        ]
    })
}

/// Interval Newton iteration for `√x`, started from the integer-part bracket
/// `[⌊√x⌋, ⌊√x⌋ + 1]` (x >= 1), kept independent of the library's sqrt.
pub fn newton_sqrt_bracket(x: &Rational, width: &Rational) -> (Rational, Rational) {
    assert!(x >= &Rational::one());
    let r = x.floor().to_integer().sqrt();
    let mut lo = Rational::from_integer(r.clone());
    let mut hi = Rational::from_integer(r + 1);
    let two = int(2);
    while &(&hi - &lo) > width {
        let m = (&lo + &hi) / &two;
        let d = &m * &m - x;
        // N(X) = m - d / (2X), with 2X = [2lo, 2hi] positive.
        let (a, b) = if d >= Rational::zero() {
            (&m - &d / (&two * &lo), &m - &d / (&two * &hi))
        } else {
            (&m - &d / (&two * &hi), &m - &d / (&two * &lo))
        };
        lo = lo.max(a);
        hi = hi.min(b);
    }
    (lo, hi)
}

pub fn coefficient() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| ratio(n, d))
}

pub fn terms(min_half_exp: i64) -> impl Strategy<Value = ExactLc> {
    prop::collection::vec((min_half_exp..=8i64, coefficient()), 1..4)
        .prop_map(|ts| ExactLc::from_terms(ts.into_iter().map(|(k, c)| (ratio(k, 2), c)), None))
}

pub fn any_lc() -> impl Strategy<Value = ExactLc> {
    terms(-4)
}

pub fn finite_lc() -> impl Strategy<Value = ExactLc> {
    terms(0)
}

pub fn nonzero_lc() -> impl Strategy<Value = ExactLc> {
    any_lc().prop_filter("nonzero", |x| !x.is_exact_zero())
}

/// Positive, with a leading coefficient that is a rational square.
pub fn positive_square_lead() -> impl Strategy<Value = ExactLc> {
    (-4i64..=4, 1i64..=7, 1i64..=7, prop::collection::vec((1i64..=8, coefficient()), 0..3)).prop_map(
        |(lead, a, b, rest)| {
            let q = ratio(lead, 2);
            let c = ratio(a * a, b * b);
            let tail = rest.into_iter().map(|(k, d)| (&q + ratio(k, 2), d));
            ExactLc::from_terms(std::iter::once((q.clone(), c)).chain(tail), None)
        },
    )
}
