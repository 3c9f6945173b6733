mod common;

use proptest::prelude::*;

use terminus::numeric::{int, ratio, RatInterval};
use terminus::seq::{
    eval_finite, eval_hyperfinite, parse_seq_expr, terminate_closed_form, LimitError, SeqExpr,
};
use terminus::{ExactLc, FieldConfig, Rational};

use common::seq_tree;

/// Laurent polynomials in `n`: division only by monomials, so the value at
/// `ω` is an exact finite sum.
fn laurent() -> impl Strategy<Value = SeqExpr> {
    let monomial = (-3i32..=3, -9i64..=9, 1i64..=5)
        .prop_map(|(k, a, b)| SeqExpr::mul(SeqExpr::Const(ratio(a, b)), SeqExpr::pow(SeqExpr::Index, k)));
    monomial.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SeqExpr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SeqExpr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SeqExpr::mul(a, b)),
            (inner.clone(), 1i32..=3).prop_map(|(a, k)| SeqExpr::div(a, SeqExpr::pow(SeqExpr::Index, k))),
            inner.prop_map(SeqExpr::neg),
        ]
    })
}

fn bounded_rational() -> impl Strategy<Value = SeqExpr> {
    let atom = prop_oneof![
        (1i64..=5).prop_map(|k| SeqExpr::Const(int(k))),
        Just(SeqExpr::Index),
    ];
    atom.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SeqExpr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SeqExpr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SeqExpr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SeqExpr::div(a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_parse_fixpoint(tree in seq_tree(8)) {
        let printed = tree.to_string();
        let parsed = parse_seq_expr(&printed).unwrap();
        prop_assert_eq!(parsed.to_string(), printed.clone());
        prop_assert_eq!(parse_seq_expr(&parsed.to_string()).unwrap(), parsed);
    }

    #[test]
    fn finite_matches_substituted_infinite(e in laurent(), num in 1i64..=400, den in 1i64..=20) {
        let n0 = ratio(num, den);
        prop_assume!(n0 >= int(1));
        let x: ExactLc = eval_hyperfinite(&e, &FieldConfig::default()).unwrap();
        prop_assert!(x.is_exact());
        let substituted = x.substitute_eps(&(int(1) / &n0)).unwrap();
        let finite = eval_finite(&e, &n0, 64).unwrap();
        prop_assert_eq!(finite, RatInterval::point(substituted));
    }

    #[test]
    fn termination_is_symmetric(a in bounded_rational(), b in bounded_rational()) {
        let cfg = FieldConfig::default();
        let ab = terminate_closed_form::<Rational>(&a, &b, &cfg);
        let ba = terminate_closed_form::<Rational>(&b, &a, &cfg);
        match (&ab, &ba) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
            (Err(LimitError::NotAdequal { gap: g1, .. }), Err(LimitError::NotAdequal { gap: g2, .. })) => {
                prop_assert_eq!(g1, &-g2.clone());
            }
            (Err(x), Err(y)) => prop_assert_eq!(x.class(), y.class()),
            _ => prop_assert!(false, "{:?} vs {:?}", ab, ba),
        }
    }
}

#[test]
fn parse_examples() {
    assert_eq!(
        parse_seq_expr("(n+1)/n").unwrap(),
        SeqExpr::div(SeqExpr::add(SeqExpr::Index, SeqExpr::Const(int(1))), SeqExpr::Index)
    );
    assert_eq!(
        parse_seq_expr("sqrt(n^2+n)-n").unwrap(),
        SeqExpr::sub(
            SeqExpr::sqrt(SeqExpr::add(SeqExpr::pow(SeqExpr::Index, 2), SeqExpr::Index)),
            SeqExpr::Index
        )
    );
    let err = parse_seq_expr("n +").unwrap_err();
    assert!(err.to_string().contains("offset 3"), "{err}");
}

#[test]
fn interval_and_exact_limits_agree() {
    let cfg = FieldConfig::default();
    for (text, num, den) in common::LIMIT_CORPUS {
        let e = parse_seq_expr(text).unwrap();
        let l = common::corpus_limit(*num, *den);
        let certified = terminus::seq::limit_shadow::<RatInterval>(&e, &cfg).unwrap();
        assert!(certified.value.contains(&l), "{text}: {}", certified.value);
        if let Ok(exact) = terminus::seq::limit_shadow::<Rational>(&e, &cfg) {
            assert_eq!(exact.value, l, "{text}");
        }
    }
}
