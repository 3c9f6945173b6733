//! A computable non-Archimedean ordered field.
//!
//! Elements are finite sums `Σ cᵢ·ε^eᵢ` with rational exponents, plus an
//! optional validity bound `Ω`: when present the sum is only trusted for
//! exponents below `Ω` (a big-O term `o(ε^Ω)`). `ε` is a positive
//! infinitesimal and `ω = ε⁻¹` an infinite number.
//!
//! Addition, negation and multiplication propagate `Ω`; inverse and square
//! root expand a series up to a configurable window past the leading
//! exponent. Equality (`==`) is strict term-list equality; infinite
//! proximity is the separate relation [`LcNumber::adequal`].

mod coefficient;
pub(crate) mod display;
mod series;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use coefficient::{Coefficient, CoefficientSqrtError};

use crate::numeric::{format_rational, int};
use crate::Rational;

/// Upper bound on the number of exponents a single series expansion may
/// visit.
pub const MAX_EXPANSION_TERMS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LcError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a non-positive number: {0}")]
    NotPositive(String),
    #[error(
        "leading coefficient {0} is not the square of a rational; \
         switch to interval coefficients to take this root"
    )]
    NotPerfectSquare(String),
    #[error("undecidable sign of term {0}")]
    Undecidable(String),
    #[error("not finite: {0} has an infinite part")]
    NotFinite(String),
    #[error("zero has no leading term")]
    NoLeadingTerm,
    #[error("window must be positive, got {0}")]
    InvalidWindow(String),
    #[error("series expansion would exceed {0} exponents")]
    ExpansionTooLarge(usize),
}

/// Truncation policy for inverse and square root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldConfig {
    window: Rational,
    /// Precision for square roots of interval coefficients.
    pub sqrt_bits: u32,
}

impl FieldConfig {
    pub const DEFAULT_WINDOW: i64 = 16;
    pub const DEFAULT_SQRT_BITS: u32 = 128;

    pub fn new(window: Rational) -> Result<Self, LcError> {
        if !window.is_positive() {
            return Err(LcError::InvalidWindow(format_rational(&window)));
        }
        Ok(Self {
            window,
            sqrt_bits: Self::DEFAULT_SQRT_BITS,
        })
    }

    pub fn with_sqrt_bits(mut self, bits: u32) -> Self {
        self.sqrt_bits = bits.max(1);
        self
    }

    pub fn window(&self) -> &Rational {
        &self.window
    }
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self::new(int(Self::DEFAULT_WINDOW)).unwrap()
    }
}

/// Order-of-magnitude class of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Magnitude {
    Zero,
    Infinitesimal,
    Appreciable,
    Infinite,
}

impl Magnitude {
    pub fn is_finite(self) -> bool {
        self != Magnitude::Infinite
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Magnitude::Zero => "zero",
            Magnitude::Infinitesimal => "infinitesimal",
            Magnitude::Appreciable => "finite-appreciable",
            Magnitude::Infinite => "infinite",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcNumber<C> {
    terms: Vec<(Rational, C)>,
    validity: Option<Rational>,
}

fn min_opt(a: Option<Rational>, b: Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

fn add_opt(a: &Option<Rational>, b: &Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    }
}

impl<C: Coefficient> LcNumber<C> {
    pub fn zero() -> Self {
        Self {
            terms: Vec::new(),
            validity: None,
        }
    }

    pub fn constant(q: Rational) -> Self {
        Self::monomial(C::from_rational(q), Rational::zero())
    }

    /// The positive infinitesimal `ε`.
    pub fn eps() -> Self {
        Self::monomial(C::one(), Rational::one())
    }

    /// The infinite number `ω = ε⁻¹`.
    pub fn omega() -> Self {
        Self::monomial(C::one(), -Rational::one())
    }

    /// `c·ε^exponent`, exact.
    pub fn monomial(c: C, exponent: Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: vec![(exponent, c)],
            validity: None,
        }
    }

    /// Zero up to `o(ε^validity)`.
    pub fn negligible(validity: Rational) -> Self {
        Self {
            terms: Vec::new(),
            validity: Some(validity),
        }
    }

    /// Build from arbitrary terms: like exponents are merged, zero
    /// coefficients and terms at or past `validity` are dropped.
    pub fn from_terms<I>(terms: I, validity: Option<Rational>) -> Self
    where
        I: IntoIterator<Item = (Rational, C)>,
    {
        let mut map: BTreeMap<Rational, C> = BTreeMap::new();
        for (e, c) in terms {
            match map.remove(&e) {
                Some(prev) => map.insert(e, prev + c),
                None => map.insert(e, c),
            };
        }
        Self::from_sorted(map, validity)
    }

    fn from_sorted(map: BTreeMap<Rational, C>, validity: Option<Rational>) -> Self {
        let terms = map
            .into_iter()
            .filter(|(e, c)| !c.is_zero() && validity.as_ref().map_or(true, |v| e < v))
            .collect();
        Self { terms, validity }
    }

    pub fn terms(&self) -> &[(Rational, C)] {
        &self.terms
    }

    pub fn validity(&self) -> Option<&Rational> {
        self.validity.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.validity.is_none()
    }

    /// Exact zero (no terms, no error term).
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.validity.is_none()
    }

    pub fn leading(&self) -> Option<(&Rational, &C)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    pub fn leading_exponent(&self) -> Option<&Rational> {
        self.terms.first().map(|(e, _)| e)
    }

    pub fn coefficient_at(&self, exponent: &Rational) -> Option<&C> {
        self.terms
            .binary_search_by(|(e, _)| e.cmp(exponent))
            .ok()
            .map(|i| &self.terms[i].1)
    }

    /// Drop everything at or past `bound`, recording it as the validity.
    pub fn truncate(&self, bound: Rational) -> Self {
        let validity = min_opt(self.validity.clone(), Some(bound));
        Self::from_sorted(self.terms.iter().cloned().collect(), validity)
    }

    /// Forget the validity bound, treating the stored terms as exact.
    pub fn without_validity(&self) -> Self {
        Self {
            terms: self.terms.clone(),
            validity: None,
        }
    }

    /// Lowest exponent at which the value can be nonzero: the leading
    /// exponent, else the validity bound; `None` for exact zero.
    fn effective_lead(&self) -> Option<Rational> {
        self.leading_exponent().cloned().or_else(|| self.validity.clone())
    }

    fn describe_term(e: &Rational, c: &C) -> String {
        LcNumber::monomial(c.clone(), e.clone()).to_string()
    }

    fn undecidable_tail(&self) -> LcError {
        LcError::Undecidable(LcNumber::<C>::negligible(self.validity.clone().unwrap_or_default()).to_string())
    }

    pub fn checked_inv(&self, cfg: &FieldConfig) -> Result<Self, LcError> {
        series::inverse(self, cfg)
    }

    pub fn checked_div(&self, rhs: &Self, cfg: &FieldConfig) -> Result<Self, LcError> {
        Ok(self * &rhs.checked_inv(cfg)?)
    }

    pub fn sqrt(&self, cfg: &FieldConfig) -> Result<Self, LcError> {
        series::sqrt(self, cfg)
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn powi(&self, exp: i32, cfg: &FieldConfig) -> Result<Self, LcError> {
        if exp < 0 {
            return self.checked_inv(cfg)?.powi(-exp, cfg);
        }
        let mut base = self.clone();
        let mut acc = Self::constant(Rational::one());
        let mut e = exp as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Sign of the element, decided by its leading coefficient.
    pub fn signum(&self) -> Result<Ordering, LcError> {
        match self.terms.first() {
            Some((e, c)) => c.sign().ok_or_else(|| LcError::Undecidable(Self::describe_term(e, c))),
            None if self.is_exact() => Ok(Ordering::Equal),
            None => Err(self.undecidable_tail()),
        }
    }

    /// Order by the sign of the leading coefficient of `self - other`.
    pub fn cmp_checked(&self, other: &Self) -> Result<Ordering, LcError> {
        (self - other).signum()
    }

    /// Classify by leading exponent: `> 0` infinitesimal, `= 0`
    /// appreciable, `< 0` infinite. A truncated value with no stored terms
    /// and a positive validity bound is reported as infinitesimal (it is
    /// zero or infinitesimal, and nothing finer is known).
    pub fn classify(&self) -> Result<Magnitude, LcError> {
        match self.terms.first() {
            Some((e, c)) => {
                if e.is_positive() {
                    return Ok(Magnitude::Infinitesimal);
                }
                match c.sign() {
                    Some(_) if e.is_zero() => Ok(Magnitude::Appreciable),
                    Some(_) => Ok(Magnitude::Infinite),
                    None => Err(LcError::Undecidable(Self::describe_term(e, c))),
                }
            }
            None => match &self.validity {
                None => Ok(Magnitude::Zero),
                Some(v) if v.is_positive() => Ok(Magnitude::Infinitesimal),
                Some(_) => Err(self.undecidable_tail()),
            },
        }
    }

    pub fn is_infinitesimal(&self) -> Result<bool, LcError> {
        Ok(matches!(self.classify()?, Magnitude::Zero | Magnitude::Infinitesimal))
    }

    /// The shadow (standard part): the coefficient at `ε⁰`, discarding all
    /// infinitesimal terms. Only finite elements have one.
    pub fn standard_part(&self) -> Result<C, LcError> {
        if let Some((e, c)) = self.terms.iter().find(|(e, _)| e.is_negative()) {
            return Err(match c.sign() {
                Some(_) => LcError::NotFinite(self.to_string()),
                None => LcError::Undecidable(Self::describe_term(e, c)),
            });
        }
        if let Some(v) = &self.validity {
            if !v.is_positive() {
                return Err(self.undecidable_tail());
            }
        }
        Ok(self
            .coefficient_at(&Rational::zero())
            .cloned()
            .unwrap_or_else(C::zero))
    }

    /// Infinite proximity: the difference is zero or infinitesimal.
    pub fn adequal(&self, other: &Self) -> Result<bool, LcError> {
        if self == other {
            return Ok(true);
        }
        (self - other).is_infinitesimal()
    }

    /// Leading monomial: every term of strictly higher order is discarded.
    pub fn dominant(&self) -> Result<Self, LcError> {
        let (e, c) = self.terms.first().ok_or(LcError::NoLeadingTerm)?;
        Ok(Self::monomial(c.clone(), e.clone()))
    }
}

impl LcNumber<Rational> {
    /// Replace `ε` by the rational `value`. Defined for exact elements with
    /// integer exponents, where it is a ring homomorphism.
    pub fn substitute_eps(&self, value: &Rational) -> Option<Rational> {
        if !self.is_exact() || (value.is_zero() && self.terms.iter().any(|(e, _)| e.is_negative())) {
            return None;
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            if !e.is_integer() {
                return None;
            }
            let k: i32 = e.to_integer().try_into().ok()?;
            acc += c * num_traits::pow::Pow::pow(value, k);
        }
        Some(acc)
    }
}

pub fn lc_add<C: Coefficient>(x: &LcNumber<C>, y: &LcNumber<C>) -> LcNumber<C> {
    x + y
}

pub fn lc_neg<C: Coefficient>(x: &LcNumber<C>) -> LcNumber<C> {
    -x
}

pub fn lc_mul<C: Coefficient>(x: &LcNumber<C>, y: &LcNumber<C>) -> LcNumber<C> {
    x * y
}

pub fn lc_inv<C: Coefficient>(x: &LcNumber<C>, cfg: &FieldConfig) -> Result<LcNumber<C>, LcError> {
    x.checked_inv(cfg)
}

pub fn lc_sqrt<C: Coefficient>(x: &LcNumber<C>, cfg: &FieldConfig) -> Result<LcNumber<C>, LcError> {
    x.sqrt(cfg)
}

pub fn lc_cmp<C: Coefficient>(x: &LcNumber<C>, y: &LcNumber<C>) -> Result<Ordering, LcError> {
    x.cmp_checked(y)
}

pub fn lc_classify<C: Coefficient>(x: &LcNumber<C>) -> Result<Magnitude, LcError> {
    x.classify()
}

pub fn lc_st<C: Coefficient>(x: &LcNumber<C>) -> Result<C, LcError> {
    x.standard_part()
}

pub fn lc_adequal<C: Coefficient>(x: &LcNumber<C>, y: &LcNumber<C>) -> Result<bool, LcError> {
    x.adequal(y)
}

/// Transcendental law of homogeneity: reduce to the dominant monomial.
pub fn lc_tlh<C: Coefficient>(x: &LcNumber<C>) -> Result<LcNumber<C>, LcError> {
    x.dominant()
}

impl<'a, C: Coefficient> Add<&'a LcNumber<C>> for &'a LcNumber<C> {
    type Output = LcNumber<C>;

    fn add(self, rhs: &LcNumber<C>) -> LcNumber<C> {
        let validity = min_opt(self.validity.clone(), rhs.validity.clone());
        LcNumber::from_terms(self.terms.iter().chain(&rhs.terms).cloned(), validity)
    }
}

impl<'a, C: Coefficient> Sub<&'a LcNumber<C>> for &'a LcNumber<C> {
    type Output = LcNumber<C>;

    fn sub(self, rhs: &LcNumber<C>) -> LcNumber<C> {
        self + &(-rhs)
    }
}

impl<C: Coefficient> Neg for &LcNumber<C> {
    type Output = LcNumber<C>;

    fn neg(self) -> LcNumber<C> {
        LcNumber {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
            validity: self.validity.clone(),
        }
    }
}

impl<'a, C: Coefficient> Mul<&'a LcNumber<C>> for &'a LcNumber<C> {
    type Output = LcNumber<C>;

    fn mul(self, rhs: &LcNumber<C>) -> LcNumber<C> {
        let validity = min_opt(
            add_opt(&self.validity, &rhs.effective_lead()),
            add_opt(&rhs.validity, &self.effective_lead()),
        );
        let mut map: BTreeMap<Rational, C> = BTreeMap::new();
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                let e = a + b;
                if validity.as_ref().is_some_and(|v| &e >= v) {
                    // rhs terms are sorted, so later ones are past the bound too
                    break;
                }
                let p = c.clone() * d.clone();
                match map.remove(&e) {
                    Some(prev) => map.insert(e, prev + p),
                    None => map.insert(e, p),
                };
            }
        }
        LcNumber::from_sorted(map, validity)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl<C: Coefficient> $tr for LcNumber<C> {
            type Output = LcNumber<C>;
            fn $m(self, rhs: LcNumber<C>) -> LcNumber<C> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl<C: Coefficient> Neg for LcNumber<C> {
    type Output = LcNumber<C>;
    fn neg(self) -> LcNumber<C> {
        -&self
    }
}
