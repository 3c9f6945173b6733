use std::fmt;

use num_traits::Signed;

use crate::lc::display::eps_power;
use crate::Rational;

/// Largest admissible `|e|` in `x^e`.
pub const MAX_EXPONENT: i32 = 64;

/// Expression tree over the index symbol `n`.
///
/// `Eps`, `Omega`, `EpsPow` and `LittleO` only come out of the
/// Levi-Civita dialect of the parser; sequences never contain them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SeqExpr {
    Const(Rational),
    Index,
    Eps,
    Omega,
    /// `eps^(p/q)`.
    EpsPow(Rational),
    /// `o(eps^r)`: zero up to terms of order `r` and beyond.
    LittleO(Rational),
    Neg(Box<SeqExpr>),
    Add(Box<SeqExpr>, Box<SeqExpr>),
    Sub(Box<SeqExpr>, Box<SeqExpr>),
    Mul(Box<SeqExpr>, Box<SeqExpr>),
    Div(Box<SeqExpr>, Box<SeqExpr>),
    Pow(Box<SeqExpr>, i32),
    Sqrt(Box<SeqExpr>),
}

impl SeqExpr {
    pub fn constant(q: Rational) -> Self {
        SeqExpr::Const(q)
    }

    pub fn add(a: SeqExpr, b: SeqExpr) -> Self {
        SeqExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: SeqExpr, b: SeqExpr) -> Self {
        SeqExpr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: SeqExpr, b: SeqExpr) -> Self {
        SeqExpr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: SeqExpr, b: SeqExpr) -> Self {
        SeqExpr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: SeqExpr, e: i32) -> Self {
        SeqExpr::Pow(Box::new(a), e)
    }

    pub fn sqrt(a: SeqExpr) -> Self {
        SeqExpr::Sqrt(Box::new(a))
    }

    pub fn neg(a: SeqExpr) -> Self {
        SeqExpr::Neg(Box::new(a))
    }

    pub fn depth(&self) -> usize {
        1 + self.children().map(SeqExpr::depth).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children().map(SeqExpr::size).sum::<usize>()
    }

    pub fn children(&self) -> impl Iterator<Item = &SeqExpr> {
        let (a, b): (Option<&SeqExpr>, Option<&SeqExpr>) = match self {
            SeqExpr::Neg(a) | SeqExpr::Pow(a, _) | SeqExpr::Sqrt(a) => (Some(a), None),
            SeqExpr::Add(a, b) | SeqExpr::Sub(a, b) | SeqExpr::Mul(a, b) | SeqExpr::Div(a, b) => {
                (Some(a), Some(b))
            }
            _ => (None, None),
        };
        a.into_iter().chain(b)
    }

    /// Whether the tree mentions `eps`, `omega` or `o(..)`.
    pub fn has_infinitesimal_atoms(&self) -> bool {
        matches!(
            self,
            SeqExpr::Eps | SeqExpr::Omega | SeqExpr::EpsPow(_) | SeqExpr::LittleO(_)
        ) || self.children().any(SeqExpr::has_infinitesimal_atoms)
    }

    pub fn has_sqrt(&self) -> bool {
        matches!(self, SeqExpr::Sqrt(_)) || self.children().any(SeqExpr::has_sqrt)
    }

    fn precedence(&self) -> u8 {
        match self {
            SeqExpr::Add(..) | SeqExpr::Sub(..) => 1,
            SeqExpr::Mul(..) | SeqExpr::Div(..) => 2,
            SeqExpr::Neg(_) => 3,
            SeqExpr::Const(q) if q.is_negative() => 3,
            SeqExpr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn render(&self) -> String {
        match self {
            SeqExpr::Const(q) if q.is_negative() => format!("-{}", -q),
            SeqExpr::Const(q) => q.to_string(),
            SeqExpr::Index => "n".into(),
            SeqExpr::Eps => "eps".into(),
            SeqExpr::Omega => "omega".into(),
            SeqExpr::EpsPow(r) => format!("eps^({r})"),
            SeqExpr::LittleO(r) => format!("o({})", eps_power(r)),
            SeqExpr::Neg(a) => format!("-{}", a.render_at(3)),
            SeqExpr::Add(a, b) => binary(a, " + ", b, 1),
            SeqExpr::Sub(a, b) => binary(a, " - ", b, 1),
            SeqExpr::Mul(a, b) => binary(a, "*", b, 2),
            SeqExpr::Div(a, b) => binary(a, "/", b, 2),
            // the base must be a primary: a literal, `n`, a call, or parenthesized
            SeqExpr::Pow(a, e) => format!("{}^{}", a.render_at(5), e),
            SeqExpr::Sqrt(a) => format!("sqrt({})", a.render()),
        }
    }

    fn render_at(&self, min_precedence: u8) -> String {
        let s = self.render();
        if self.precedence() < min_precedence {
            format!("({s})")
        } else {
            s
        }
    }
}

/// Left-associative binary operator: the right operand is parenthesized at
/// equal precedence. An integer literal directly followed by `/` and a
/// digit would lex as a rational literal, so such a right operand is
/// parenthesized as well.
fn binary(a: &SeqExpr, op: &str, b: &SeqExpr, prec: u8) -> String {
    let left = a.render_at(prec);
    let mut right = b.render_at(prec + 1);
    let digit_after_digit = left.ends_with(|c: char| c.is_ascii_digit())
        && right.starts_with(|c: char| c.is_ascii_digit());
    if op == "/" && digit_after_digit && !right.starts_with('(') {
        right = format!("({right})");
    }
    format!("{left}{op}{right}")
}

impl fmt::Display for SeqExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, ratio};

    fn n() -> SeqExpr {
        SeqExpr::Index
    }

    fn c(q: i64) -> SeqExpr {
        SeqExpr::Const(int(q))
    }

    #[test]
    fn printing() {
        assert_eq!(SeqExpr::div(SeqExpr::add(n(), c(1)), n()).to_string(), "(n + 1)/n");
        let e = SeqExpr::sub(SeqExpr::sqrt(SeqExpr::add(SeqExpr::pow(n(), 2), n())), n());
        assert_eq!(e.to_string(), "sqrt(n^2 + n) - n");
        assert_eq!(SeqExpr::sub(n(), SeqExpr::sub(n(), c(1))).to_string(), "n - (n - 1)");
        assert_eq!(SeqExpr::pow(SeqExpr::neg(n()), -2).to_string(), "(-n)^-2");
        assert_eq!(SeqExpr::neg(SeqExpr::mul(n(), c(2))).to_string(), "-(n*2)");
        assert_eq!(SeqExpr::div(c(1), c(2)).to_string(), "1/(2)");
        assert_eq!(SeqExpr::Const(ratio(1, 2)).to_string(), "1/2");
        assert_eq!(SeqExpr::mul(SeqExpr::Const(ratio(-1, 2)), n()).to_string(), "-1/2*n");
        assert_eq!(SeqExpr::pow(SeqExpr::pow(n(), 2), 3).to_string(), "(n^2)^3");
    }

    #[test]
    fn measures() {
        let e = SeqExpr::div(SeqExpr::add(n(), c(1)), n());
        assert_eq!(e.depth(), 3);
        assert_eq!(e.size(), 5);
        assert!(!e.has_sqrt());
        assert!(!e.has_infinitesimal_atoms());
    }
}
