use std::fmt;

use num_traits::{One, Zero};

use super::{Coefficient, LcNumber};
use crate::Rational;

/// `eps`, `eps^3`, `eps^-1`, `eps^(1/2)`, `eps^(-3/2)`.
pub(crate) fn eps_power(e: &Rational) -> String {
    if e.is_one() {
        "eps".to_string()
    } else if e.is_integer() {
        format!("eps^{}", e)
    } else {
        format!("eps^({})", e)
    }
}

fn write_term<C: Coefficient>(
    out: &mut String,
    first: bool,
    exponent: &Rational,
    coefficient: &C,
) {
    let (negative, magnitude) = coefficient.split_sign();
    match (first, negative) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
    if exponent.is_zero() {
        out.push_str(&magnitude.to_string());
    } else if magnitude.is_one() {
        out.push_str(&eps_power(exponent));
    } else {
        out.push_str(&format!("{}*{}", magnitude, eps_power(exponent)));
    }
}

impl<C: Coefficient> LcNumber<C> {
    /// Textual form in increasing-exponent order. With `max_terms`, only the
    /// first terms are printed and an elision `+ …` marks the rest; the
    /// validity bound is always printed as `o(eps^Ω)`.
    pub fn render(&self, max_terms: Option<usize>) -> String {
        let mut out = String::new();
        let shown = max_terms.unwrap_or(usize::MAX).min(self.terms.len());
        for (i, (e, c)) in self.terms[..shown].iter().enumerate() {
            write_term(&mut out, i == 0, e, c);
        }
        if shown < self.terms.len() {
            out.push_str(" + …");
        }
        if let Some(v) = &self.validity {
            if out.is_empty() {
                out.push_str(&format!("o({})", eps_power(v)));
            } else {
                out.push_str(&format!(" + o({})", eps_power(v)));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Whether a rendering with `max_terms` drops any stored term.
    pub fn is_elided(&self, max_terms: usize) -> bool {
        self.terms.len() > max_terms
    }
}

impl<C: Coefficient> fmt::Display for LcNumber<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}
