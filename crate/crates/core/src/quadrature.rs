//! Gregory's double sequence of inscribed and circumscribed areas,
//!
//! ```text
//! I' = √(C·I)            C' = 2·C·I' / (C + I')
//! ```
//!
//! iterated on certified rational intervals, with an independent arctangent
//! enclosure of π to check it against.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numeric::{bits_for, ceil_dyadic, floor_dyadic, format_rational, int, pow10, pow2, ratio, to_scientific, NumericError, RatInterval};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadratureState {
    pub n: u64,
    pub inscribed: RatInterval,
    pub circumscribed: RatInterval,
}

impl QuadratureState {
    pub fn new(inscribed: RatInterval, circumscribed: RatInterval) -> Self {
        Self {
            n: 0,
            inscribed,
            circumscribed,
        }
    }

    /// `C.hi − I.lo`: the width of the hull of both enclosures.
    pub fn width(&self) -> Rational {
        self.circumscribed.hi() - self.inscribed.lo()
    }

    pub fn hull(&self) -> RatInterval {
        RatInterval::spanning(self.inscribed.lo().clone(), self.circumscribed.hi().clone())
    }

    /// Midpoint of `C` minus midpoint of `I`.
    pub fn midgap(&self) -> Rational {
        self.circumscribed.midpoint() - self.inscribed.midpoint()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadratureError {
    #[error("starting areas must be positive, got I = {inscribed}, C = {circumscribed}")]
    NonPositiveStart { inscribed: String, circumscribed: String },
    #[error("inscribed area {inscribed} exceeds circumscribed area {circumscribed}")]
    InvertedStart { inscribed: String, circumscribed: String },
    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(String),
    #[error(
        "iteration budget exceeded after {iterations} steps: width {width} is not below the tolerance; \
         at precision {precision} the interval width floor is about 2^(1-{precision}) = {floor}, \
         raise the precision"
    )]
    BudgetExceeded {
        iterations: u64,
        width: String,
        precision: u32,
        floor: String,
    },
    #[error("internal invariant violated at step {step}: {detail}")]
    InvariantViolation { step: u64, detail: String },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// `2ab / (a + b)` for positive `a`, `b`.
fn harmonic(a: &Rational, b: &Rational) -> Rational {
    int(2) * a * b / (a + b)
}

/// Endpoints with denominators longer than `p` bits are rounded outward to
/// the grid `2^-p`; shorter ones are kept exact.
fn shorten(x: RatInterval, p: u32) -> RatInterval {
    let (lo, hi) = x.into_bounds();
    let short = |q: &Rational| q.denom().bits() <= u64::from(p);
    let lo = if short(&lo) { lo } else { floor_dyadic(&lo, p) };
    let hi = if short(&hi) { hi } else { ceil_dyadic(&hi, p) };
    RatInterval::spanning(lo, hi)
}

/// One certified step. Both means are monotone in each argument, so the
/// circumscribed update is evaluated endpoint by endpoint. The results are
/// rounded outward at precision `p` and then intersected with what the
/// previous state already proves: `I` can only grow and `C` only shrink.
pub fn gregory_step(s: &QuadratureState, p: u32) -> Result<QuadratureState, QuadratureError> {
    let (i, c) = (&s.inscribed, &s.circumscribed);
    if !i.lo().is_positive() || !c.lo().is_positive() {
        return Err(QuadratureError::NonPositiveStart {
            inscribed: i.to_string(),
            circumscribed: c.to_string(),
        });
    }
    let geometric = (c * i).sqrt(p)?;
    let i_next = RatInterval::new(geometric.lo().max(i.lo()).clone(), geometric.hi().clone())?;
    let c_lo = harmonic(c.lo(), i_next.lo());
    let c_hi = harmonic(c.hi(), i_next.hi());
    let c_next = shorten(RatInterval::new(c_lo, c_hi)?, p);
    let c_next = RatInterval::new(c_next.lo().clone(), c_next.hi().min(c.hi()).clone())?;
    Ok(QuadratureState {
        n: s.n + 1,
        inscribed: i_next,
        circumscribed: c_next,
    })
}

fn check_step(prev: &QuadratureState, next: &QuadratureState) -> Result<(), QuadratureError> {
    let violation = |detail: String| QuadratureError::InvariantViolation { step: next.n, detail };
    let (i, c) = (&next.inscribed, &next.circumscribed);
    if !i.lo().is_positive() {
        return Err(violation(format!("inscribed enclosure {i} is not positive")));
    }
    if i.lo() < prev.inscribed.lo() {
        return Err(violation(format!("inscribed lower bound fell to {}", i.lo())));
    }
    if c.hi() > prev.circumscribed.hi() {
        return Err(violation(format!("circumscribed upper bound rose to {}", c.hi())));
    }
    // strict separation until the gap is below interval resolution
    if i.hi() >= c.lo() && i.midpoint() > c.midpoint() {
        return Err(violation(format!("midpoint order lost: I = {i}, C = {c}")));
    }
    Ok(())
}

/// Precision that keeps rounding slack well below `tol`:
/// `bits(tol) + 8·⌈log₂ k⌉`, where `k` is the step count expected from
/// the fourfold contraction of the gap.
pub fn default_precision(i0: &RatInterval, c0: &RatInterval, tol: &Rational) -> u32 {
    let gap = c0.hi() - i0.lo();
    let gap_bits = if gap > Rational::one() {
        gap.to_integer().bits() as u32
    } else {
        0
    };
    let steps = (bits_for(tol) + gap_bits) / 2 + 2;
    let log_steps = u32::BITS - (steps - 1).leading_zeros();
    bits_for(tol) + 8 * log_steps.max(1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Termination {
    /// `[I.lo, C.hi]` of the last state.
    pub enclosure: RatInterval,
    /// Every state from the start, `history[k].n == k`.
    pub history: Vec<QuadratureState>,
    pub precision: u32,
}

/// Iterate until `C.hi − I.lo < tol`. The width test comes before the
/// budget test, so a start that already meets the tolerance returns after
/// zero steps even with `max_iter = 0`.
pub fn terminate_numeric(
    i0: &RatInterval,
    c0: &RatInterval,
    tol: &Rational,
    max_iter: u64,
    p: u32,
) -> Result<Termination, QuadratureError> {
    if !tol.is_positive() {
        return Err(QuadratureError::NonPositiveTolerance(format_rational(tol)));
    }
    if !i0.lo().is_positive() || !c0.lo().is_positive() {
        return Err(QuadratureError::NonPositiveStart {
            inscribed: i0.to_string(),
            circumscribed: c0.to_string(),
        });
    }
    if i0.midpoint() > c0.midpoint() {
        return Err(QuadratureError::InvertedStart {
            inscribed: i0.to_string(),
            circumscribed: c0.to_string(),
        });
    }
    if p == 0 {
        return Err(NumericError::ZeroPrecision.into());
    }
    let mut history = vec![QuadratureState::new(i0.clone(), c0.clone())];
    loop {
        let state = history.last().expect("history is never empty");
        let width = state.width();
        if &width < tol {
            return Ok(Termination {
                enclosure: state.hull(),
                history,
                precision: p,
            });
        }
        let exhausted = state.n >= max_iter;
        let next = if exhausted { None } else { Some(gregory_step(state, p)?) };
        // a width that no longer shrinks has hit the rounding floor
        let stalled = next.as_ref().is_some_and(|s| s.width() >= width);
        if exhausted || stalled {
            return Err(QuadratureError::BudgetExceeded {
                iterations: state.n,
                width: to_scientific(&width, 3),
                precision: p,
                floor: to_scientific(&pow2(1 - p as i64), 3),
            });
        }
        let next = next.expect("checked above");
        check_step(state, &next)?;
        history.push(next);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Squares in and around the unit circle: `I₀ = 2`, `C₀ = 4`.
    Squares,
    /// Hexagons: `I₀ = 3√3/2`, `C₀ = 2√3`.
    Hexagons,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Squares => "squares",
            Preset::Hexagons => "hexagons",
        }
    }

    pub fn start(self, p: u32) -> (RatInterval, RatInterval) {
        match self {
            Preset::Squares => (RatInterval::point(int(2)), RatInterval::point(int(4))),
            Preset::Hexagons => {
                let root = |q: Rational| RatInterval::point(q).sqrt(p).expect("positive radicand");
                (root(ratio(27, 4)), root(int(12)))
            }
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "squares" => Ok(Preset::Squares),
            "hexagons" => Ok(Preset::Hexagons),
            other => Err(format!("unknown preset `{other}` (expected squares or hexagons)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rate {
    /// `midgap(n+1) / midgap(n)`.
    Ratio { n: u64, ratio: Rational },
    /// `midgap(n)` is zero.
    Degenerate { n: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("rate estimation needs at least 3 states, got {0}")]
pub struct HistoryTooShort(pub usize);

pub fn rate_estimate(history: &[QuadratureState]) -> Result<Vec<Rate>, HistoryTooShort> {
    if history.len() < 3 {
        return Err(HistoryTooShort(history.len()));
    }
    Ok(history
        .windows(2)
        .map(|w| {
            let gap = w[0].midgap();
            if gap.is_zero() {
                Rate::Degenerate { n: w[0].n }
            } else {
                Rate::Ratio {
                    n: w[0].n,
                    ratio: w[1].midgap() / gap,
                }
            }
        })
        .collect())
}

/// `[S_k, S_{k+1}]` bracket of `arctan(1/x)` with `|term_{k+1}| < tol`.
fn arctan_recip(x: i64, tol: &Rational) -> RatInterval {
    let x2 = int(x * x);
    let mut power = int(x); // x^(2k+1)
    let mut sum = Rational::zero();
    let mut k = 0i64;
    loop {
        let term = Rational::one() / (int(2 * k + 1) * &power);
        let next = if k % 2 == 0 { &sum + &term } else { &sum - &term };
        if &term < tol {
            return RatInterval::spanning(sum, next);
        }
        sum = next;
        power *= &x2;
        k += 1;
    }
}

pub const PI_MAX_DIGITS: u32 = 1000;

/// Enclosure of π of width `< 10^-digits` from Machin's formula
/// `π = 16·arctan(1/5) − 4·arctan(1/239)`; `digits` is clamped to
/// `1..=PI_MAX_DIGITS`. Enclosures for more digits nest inside those for
/// fewer.
pub fn pi_reference(digits: u32) -> RatInterval {
    let digits = digits.clamp(1, PI_MAX_DIGITS);
    let tol = pow10(-(digits as i64));
    let inner = &tol / int(64);
    let a = arctan_recip(5, &inner);
    let b = arctan_recip(239, &inner);
    let pi = &(&RatInterval::point(int(16)) * &a) - &(&RatInterval::point(int(4)) * &b);
    pi.compress(bits_for(&inner))
}

/// `n\tI.lo\tI.hi\tC.lo\tC.hi`, one line per state, exact rationals.
pub fn history_tsv(history: &[QuadratureState]) -> String {
    let mut out = String::from("n\tI.lo\tI.hi\tC.lo\tC.hi\n");
    for s in history {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            s.n,
            s.inscribed.lo(),
            s.inscribed.hi(),
            s.circumscribed.lo(),
            s.circumscribed.hi()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(n: i64) -> RatInterval {
        RatInterval::point(int(n))
    }

    #[test]
    fn first_step_from_squares() {
        let s = gregory_step(&QuadratureState::new(point(2), point(4)), 80).unwrap();
        assert_eq!(s.n, 1);
        // 2√2 and 8(√2 − 1) by squaring the bounds
        let (i, c) = (&s.inscribed, &s.circumscribed);
        assert!(i.lo() * i.lo() <= int(8) && i.hi() * i.hi() >= int(8));
        let shifted = c.lo() / int(8) + int(1);
        assert!(&shifted * &shifted <= int(2));
        let shifted = c.hi() / int(8) + int(1);
        assert!(&shifted * &shifted >= int(2));
    }

    #[test]
    fn fixed_point() {
        let q = RatInterval::point(ratio(7, 3));
        let t = terminate_numeric(&q, &q, &ratio(1, 10), 0, 32).unwrap();
        assert_eq!(t.history.len(), 1);
        assert_eq!(t.enclosure, q);
        let s = gregory_step(&QuadratureState::new(q.clone(), q.clone()), 32).unwrap();
        assert_eq!((s.inscribed, s.circumscribed), (q.clone(), q));
    }

    #[test]
    fn budget_names_floor() {
        let err = terminate_numeric(&point(2), &point(4), &pow10(-50), 1000, 40).unwrap_err();
        let text = err.to_string();
        assert!(matches!(err, QuadratureError::BudgetExceeded { precision: 40, .. }));
        assert!(text.contains("2^(1-40)"), "{text}");
        let err = terminate_numeric(&point(2), &point(4), &pow10(-10), 3, 80).unwrap_err();
        assert!(matches!(err, QuadratureError::BudgetExceeded { iterations: 3, .. }));
    }

    #[test]
    fn rejects_bad_starts() {
        assert!(matches!(
            terminate_numeric(&point(4), &point(2), &ratio(1, 10), 10, 32),
            Err(QuadratureError::InvertedStart { .. })
        ));
        assert!(matches!(
            terminate_numeric(&point(0), &point(2), &ratio(1, 10), 10, 32),
            Err(QuadratureError::NonPositiveStart { .. })
        ));
        assert!(matches!(
            terminate_numeric(&point(1), &point(2), &int(0), 10, 32),
            Err(QuadratureError::NonPositiveTolerance(_))
        ));
    }

    #[test]
    fn pi_to_ten_digits() {
        let pi = pi_reference(10);
        assert!(pi.width() < pow10(-10));
        assert!(pi.lo() > &ratio(31415926535, 10_000_000_000));
        assert!(pi.hi() < &ratio(31415926536, 10_000_000_000));
        let coarse = pi_reference(1);
        assert!(coarse.is_subset_of(&RatInterval::new(ratio(31, 10), ratio(32, 10)).unwrap()));
        assert!(pi_reference(20).is_subset_of(&pi));
    }

    #[test]
    fn rates_need_history() {
        let s = QuadratureState::new(point(1), point(1));
        assert_eq!(rate_estimate(&[s.clone(), s.clone()]), Err(HistoryTooShort(2)));
        let rates = rate_estimate(&[s.clone(), s.clone(), s]).unwrap();
        assert!(rates.iter().all(|r| matches!(r, Rate::Degenerate { .. })));
    }

    #[test]
    fn tsv_layout() {
        let tsv = history_tsv(&[QuadratureState::new(point(2), point(4))]);
        assert_eq!(tsv, "n\tI.lo\tI.hi\tC.lo\tC.hi\n0\t2\t2\t4\t4\n");
    }

    #[test]
    fn precision_schedule() {
        let p = default_precision(&point(2), &point(4), &pow10(-30));
        assert!(p >= bits_for(&pow10(-30)) + 8 * 5, "{p}");
    }
}
