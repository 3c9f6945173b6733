//! Rendering of exact and certified values for plain and JSON output.

use serde_json::{json, Value};
use terminus::numeric::{to_decimal, to_scientific, RatInterval};
use terminus::{Coefficient, LcNumber, Rational};

/// A value that prints both exactly and as a truncated decimal.
pub trait Render {
    fn exact(&self) -> String;
    fn decimal(&self, digits: usize) -> String;
    fn to_json(&self, digits: usize) -> Value;
}

impl Render for Rational {
    fn exact(&self) -> String {
        self.to_string()
    }

    fn decimal(&self, digits: usize) -> String {
        to_decimal(self, digits)
    }

    fn to_json(&self, digits: usize) -> Value {
        json!({ "exact": self.exact(), "decimal": self.decimal(digits) })
    }
}

impl Render for RatInterval {
    fn exact(&self) -> String {
        self.to_string()
    }

    fn decimal(&self, digits: usize) -> String {
        self.to_decimal_string(digits)
    }

    fn to_json(&self, digits: usize) -> Value {
        json!({
            "lo": self.lo().to_string(),
            "hi": self.hi().to_string(),
            "decimal": self.decimal(digits),
        })
    }
}

pub fn scientific(x: &Rational) -> String {
    to_scientific(x, 3)
}

/// The first `terms` terms of an expansion, as text and as JSON.
pub fn expansion<C: Coefficient>(x: &LcNumber<C>, terms: usize) -> (String, Value) {
    let text = x.render(Some(terms));
    let listed: Vec<Value> = x
        .terms()
        .iter()
        .take(terms)
        .map(|(e, c)| json!({ "exponent": e.to_string(), "coefficient": c.to_string() }))
        .collect();
    let json = json!({
        "text": text,
        "terms": listed,
        "truncated": x.is_elided(terms),
        "validity": x.validity().map(|v| v.to_string()),
    });
    (text, json)
}
