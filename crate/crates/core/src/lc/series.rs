//! Inverse and square root by factoring `x = c·ε^q·(1 + u)` with `u`
//! infinitesimal and expanding `(1 + u)^-1` or `(1 + u)^(1/2)`.
//!
//! Both expansions are computed coefficient by coefficient from the
//! defining identities `(1 + u)·b = 1` and `s² = 1 + u`, over the set of
//! exponents reachable as finite sums of exponents of `u`. A coefficient at
//! relative exponent `e` only reads terms of `u` at exponents `<= e`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use super::{Coefficient, CoefficientSqrtError, FieldConfig, LcError, LcNumber, MAX_EXPANSION_TERMS};
use crate::numeric::ratio;
use crate::Rational;

/// `x = c·ε^q·(1 + u)`: the leading term and `u` with its relative validity.
struct Factored<C> {
    q: Rational,
    c: C,
    c_inv: C,
    u: BTreeMap<Rational, C>,
    /// Validity of `u`, relative to `ε^0`.
    u_validity: Option<Rational>,
}

fn factor<C: Coefficient>(x: &LcNumber<C>) -> Result<Factored<C>, LcError> {
    let (q, c) = match x.terms.first() {
        Some((q, c)) => (q.clone(), c.clone()),
        None if x.is_exact() => return Err(LcError::DivisionByZero),
        None => return Err(x.undecidable_tail()),
    };
    let c_inv = c
        .checked_recip()
        .ok_or_else(|| LcError::Undecidable(LcNumber::<C>::describe_term(&q, &c)))?;
    let u = x.terms[1..]
        .iter()
        .map(|(e, d)| (e - &q, d.clone() * c_inv.clone()))
        .collect();
    let u_validity = x.validity.as_ref().map(|v| v - &q);
    Ok(Factored {
        q,
        c,
        c_inv,
        u,
        u_validity,
    })
}

/// All finite sums of `steps` (each positive) that lie in `[0, bound)`.
fn reachable_exponents(
    steps: &[Rational],
    bound: &Rational,
    limit: usize,
) -> Result<Vec<Rational>, LcError> {
    let mut seen = BTreeSet::from([Rational::zero()]);
    let mut frontier = vec![Rational::zero()];
    while let Some(s) = frontier.pop() {
        for a in steps {
            let t = &s + a;
            if &t < bound && seen.insert(t.clone()) {
                if seen.len() > limit {
                    return Err(LcError::ExpansionTooLarge(limit));
                }
                frontier.push(t);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

fn relative_bound(f: &Factored<impl Coefficient>, window: &Rational) -> Rational {
    match &f.u_validity {
        Some(v) => v.clone().min(window.clone()),
        None => window.clone(),
    }
}

/// `(1 + u)^-1` below relative exponent `bound`.
fn inverse_series<C: Coefficient>(
    u: &BTreeMap<Rational, C>,
    bound: &Rational,
) -> Result<BTreeMap<Rational, C>, LcError> {
    let steps: Vec<Rational> = u.keys().filter(|e| *e < bound).cloned().collect();
    let exponents = reachable_exponents(&steps, bound, MAX_EXPANSION_TERMS)?;
    let mut b: BTreeMap<Rational, C> = BTreeMap::new();
    b.insert(Rational::zero(), C::one());
    for e in exponents.iter().skip(1) {
        // b_e = -Σ_{a ∈ supp u, a <= e} u_a · b_{e-a}
        let mut acc = C::zero();
        for (a, ua) in u.range(..=e.clone()) {
            if let Some(prev) = b.get(&(e - a)) {
                acc = acc + ua.clone() * prev.clone();
            }
        }
        if !acc.is_zero() {
            b.insert(e.clone(), -acc);
        }
    }
    Ok(b)
}

/// `(1 + u)^(1/2)` below relative exponent `bound`.
fn sqrt_series<C: Coefficient>(
    u: &BTreeMap<Rational, C>,
    bound: &Rational,
) -> Result<BTreeMap<Rational, C>, LcError> {
    let steps: Vec<Rational> = u.keys().filter(|e| *e < bound).cloned().collect();
    let exponents = reachable_exponents(&steps, bound, MAX_EXPANSION_TERMS)?;
    let half = C::from_rational(ratio(1, 2));
    let mut s: BTreeMap<Rational, C> = BTreeMap::new();
    s.insert(Rational::zero(), C::one());
    for e in exponents.iter().skip(1) {
        // 2·s_e = u_e - Σ_{0 < a < e} s_a · s_{e-a}
        let mut acc = u.get(e).cloned().unwrap_or_else(C::zero);
        for (a, sa) in s.range(..e.clone()) {
            if a.is_zero() {
                continue;
            }
            if let Some(sb) = s.get(&(e - a)) {
                acc = acc - sa.clone() * sb.clone();
            }
        }
        let coef = acc * half.clone();
        if !coef.is_zero() {
            s.insert(e.clone(), coef);
        }
    }
    Ok(s)
}

pub(super) fn inverse<C: Coefficient>(
    x: &LcNumber<C>,
    cfg: &FieldConfig,
) -> Result<LcNumber<C>, LcError> {
    let f = factor(x)?;
    let shift = -&f.q;
    if f.u.is_empty() && x.is_exact() {
        return Ok(LcNumber::monomial(f.c_inv, shift));
    }
    // absolute validity min(-q + W, Ωx - 2q)
    let bound = relative_bound(&f, cfg.window());
    let b = inverse_series(&f.u, &bound)?;
    let validity = &bound + &shift;
    let terms = b
        .into_iter()
        .map(|(e, coef)| (e + &shift, coef * f.c_inv.clone()));
    Ok(LcNumber::from_terms(terms, Some(validity)))
}

pub(super) fn sqrt<C: Coefficient>(
    x: &LcNumber<C>,
    cfg: &FieldConfig,
) -> Result<LcNumber<C>, LcError> {
    match x.signum() {
        Ok(Ordering::Greater) => {}
        Ok(_) => return Err(LcError::NotPositive(x.to_string())),
        Err(e) => return Err(e),
    }
    let f = factor(x)?;
    let root_c = f.c.sqrt(cfg.sqrt_bits).map_err(|e| match e {
        CoefficientSqrtError::NotPerfectSquare => LcError::NotPerfectSquare(f.c.to_string()),
        CoefficientSqrtError::Negative => LcError::NotPositive(x.to_string()),
        CoefficientSqrtError::Indeterminate => LcError::Undecidable(f.c.to_string()),
    })?;
    let shift = &f.q / Rational::from_integer(2.into());
    if f.u.is_empty() && x.is_exact() {
        return Ok(LcNumber::monomial(root_c, shift));
    }
    // absolute validity min(q/2 + W, Ωx - q/2)
    let bound = relative_bound(&f, cfg.window());
    debug_assert!(bound.is_positive() || bound.is_zero());
    let s = sqrt_series(&f.u, &bound)?;
    let validity = &bound + &shift;
    let terms = s
        .into_iter()
        .map(|(e, coef)| (e + &shift, coef * root_c.clone()));
    Ok(LcNumber::from_terms(terms, Some(validity)))
}
