//! Recursive-descent parser for sequence expressions.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := '-' factor | base ('^' signed-integer)?
//! base     := 'n' | rational | '(' expr ')' | 'sqrt' '(' expr ')'
//! rational := integer ('/' positive-integer)?
//! ```
//!
//! The Levi-Civita dialect adds the atoms `eps`, `omega`, `o(eps^r)` and
//! rational powers of `eps`/`omega` written `eps^(p/q)`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use super::expr::{SeqExpr, MAX_EXPONENT};
use crate::Rational;

pub const MAX_DEPTH: usize = 128;
pub const MAX_INPUT_LEN: usize = 65_536;
pub const MAX_NODES: usize = 16_384;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dialect {
    /// Closed-form sequences in `n`.
    Sequence,
    /// Sequence grammar plus `eps`, `omega` and `o(..)`.
    LeviCivita,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("expression nests deeper than {0} levels")]
    TooDeep(usize),
    #[error("expression is too large ({0})")]
    TooLarge(String),
    #[error("exponent {exponent} at offset {offset} is outside -{max}..={max}", max = MAX_EXPONENT)]
    ExponentOutOfRange { offset: usize, exponent: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Int(i) => format!("number `{i}`"),
            Token::Ident(s) => format!("`{s}`"),
            Token::Plus => "`+`".into(),
            Token::Minus => "`-`".into(),
            Token::Star => "`*`".into(),
            Token::Slash => "`/`".into(),
            Token::Caret => "`^`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Token::Int(text[start..i].parse().unwrap())));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Token::Ident(text[start..i].to_string())));
                continue;
            }
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'*' => Token::Star,
            b'/' => Token::Slash,
            b'^' => Token::Caret,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(ParseError::Syntax {
                    offset: i,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Token::End));
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    depth: usize,
    dialect: Dialect,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn peek_at(&self, k: usize) -> &Token {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)].1
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].1.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Token, wanted: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(wanted)
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::TooDeep(MAX_DEPTH));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<SeqExpr, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.bump();
                    lhs = SeqExpr::add(lhs, self.term()?);
                }
                Token::Minus => {
                    self.bump();
                    lhs = SeqExpr::sub(lhs, self.term()?);
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<SeqExpr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Token::Star => {
                    self.bump();
                    lhs = SeqExpr::mul(lhs, self.factor()?);
                }
                Token::Slash => {
                    self.bump();
                    lhs = SeqExpr::div(lhs, self.factor()?);
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<SeqExpr, ParseError> {
        if *self.peek() == Token::Minus {
            self.bump();
            self.enter()?;
            let inner = self.factor()?;
            self.depth -= 1;
            return Ok(SeqExpr::neg(inner));
        }
        let base = self.base()?;
        if *self.peek() != Token::Caret {
            return Ok(base);
        }
        self.bump();
        let is_eps_like = matches!(base, SeqExpr::Eps | SeqExpr::Omega);
        if *self.peek() == Token::LParen && is_eps_like {
            let r = self.parenthesized_rational()?;
            return Ok(match base {
                SeqExpr::Omega => SeqExpr::EpsPow(-r),
                _ => SeqExpr::EpsPow(r),
            });
        }
        let offset = self.offset();
        let e = self.signed_integer()?;
        let small: Option<i32> = (&e).try_into().ok().filter(|v: &i32| v.abs() <= MAX_EXPONENT);
        match small {
            Some(v) => Ok(SeqExpr::pow(base, v)),
            None => Err(ParseError::ExponentOutOfRange {
                offset,
                exponent: e.to_string(),
            }),
        }
    }

    fn signed_integer(&mut self) -> Result<BigInt, ParseError> {
        let negative = match self.peek() {
            Token::Minus => {
                self.bump();
                true
            }
            Token::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        match self.bump() {
            Token::Int(i) => Ok(if negative { -i } else { i }),
            _ => {
                self.pos -= 1;
                self.unexpected("an integer exponent")
            }
        }
    }

    /// `( signed-integer ('/' positive-integer)? )`
    fn parenthesized_rational(&mut self) -> Result<Rational, ParseError> {
        self.expect(Token::LParen, "`(`")?;
        let p = self.signed_integer()?;
        let q = if *self.peek() == Token::Slash {
            self.bump();
            self.positive_integer()?
        } else {
            BigInt::from(1)
        };
        self.expect(Token::RParen, "`)`")?;
        Ok(Rational::new(p, q))
    }

    fn positive_integer(&mut self) -> Result<BigInt, ParseError> {
        match self.peek().clone() {
            Token::Int(i) if i.is_positive() => {
                self.bump();
                Ok(i)
            }
            Token::Int(_) => self.error("denominator must be positive"),
            _ => self.unexpected("a positive integer"),
        }
    }

    fn base(&mut self) -> Result<SeqExpr, ParseError> {
        let offset = self.offset();
        match self.peek().clone() {
            Token::Int(p) => {
                self.bump();
                // `p/q` with an integer right after the slash is one literal
                if *self.peek() == Token::Slash {
                    if let Token::Int(q) = self.peek_at(1).clone() {
                        self.bump();
                        if q.is_zero() {
                            return self.error("denominator must be positive");
                        }
                        self.bump();
                        return Ok(SeqExpr::Const(Rational::new(p, q)));
                    }
                }
                Ok(SeqExpr::Const(Rational::from_integer(p)))
            }
            Token::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(e)
            }
            Token::Ident(name) => {
                self.bump();
                self.identifier(&name, offset)
            }
            _ => self.unexpected("`n`, a number, `(` or `sqrt`"),
        }
    }

    fn identifier(&mut self, name: &str, offset: usize) -> Result<SeqExpr, ParseError> {
        let lc = self.dialect == Dialect::LeviCivita;
        match name {
            "n" => Ok(SeqExpr::Index),
            "sqrt" => {
                self.expect(Token::LParen, "`(` after `sqrt`")?;
                let e = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(SeqExpr::sqrt(e))
            }
            "eps" if lc => Ok(SeqExpr::Eps),
            "omega" if lc => Ok(SeqExpr::Omega),
            "o" if lc => {
                self.expect(Token::LParen, "`(` after `o`")?;
                match self.bump() {
                    Token::Ident(s) if s == "eps" => {}
                    _ => {
                        self.pos -= 1;
                        return self.unexpected("`eps`");
                    }
                }
                let order = if *self.peek() == Token::Caret {
                    self.bump();
                    if *self.peek() == Token::LParen {
                        self.parenthesized_rational()?
                    } else {
                        Rational::from_integer(self.signed_integer()?)
                    }
                } else {
                    Rational::from_integer(1.into())
                };
                self.expect(Token::RParen, "`)`")?;
                Ok(SeqExpr::LittleO(order))
            }
            _ => Err(ParseError::Syntax {
                offset,
                message: format!("unknown identifier `{name}`"),
            }),
        }
    }
}

pub fn parse_with(text: &str, dialect: Dialect) -> Result<SeqExpr, ParseError> {
    if text.len() > MAX_INPUT_LEN {
        return Err(ParseError::TooLarge(format!(
            "{} bytes, limit {MAX_INPUT_LEN}",
            text.len()
        )));
    }
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        depth: 0,
        dialect,
    };
    let e = parser.expr()?;
    if *parser.peek() != Token::End {
        return parser.unexpected("an operator or end of input");
    }
    if e.depth() > MAX_DEPTH {
        return Err(ParseError::TooDeep(MAX_DEPTH));
    }
    let size = e.size();
    if size > MAX_NODES {
        return Err(ParseError::TooLarge(format!("{size} nodes, limit {MAX_NODES}")));
    }
    Ok(e)
}

/// Parse a closed-form sequence in `n`.
pub fn parse_seq_expr(text: &str) -> Result<SeqExpr, ParseError> {
    parse_with(text, Dialect::Sequence)
}

/// Parse a Levi-Civita expression (sequence grammar plus `eps`, `omega`,
/// `o(eps^r)`).
pub fn parse_lc_expr(text: &str) -> Result<SeqExpr, ParseError> {
    parse_with(text, Dialect::LeviCivita)
}
