//! The `.dd` presentation format, the element expression grammar and the
//! builtin presets.
//!
//! ```text
//! # Laurent ring in z; D S = z S D
//! ring z inv
//! type 1 1
//! sigma 1
//!   on z -> z
//!   inv z -> z
//!   matrix [z]
//! delta 1
//!   on z -> 0
//! ```
//!
//! Row `j` of a sigma matrix lists the coefficients of `sigma_i(D_j)` in
//! `D_1, ..., D_n`.

mod lexer;
mod parser;
pub mod presets;

use std::fmt;

use thiserror::Error;

use crate::ddalgebra::DdPresentation;

pub use parser::{parse_expr, parse_ring_elem, parse_spec, MAX_EXPONENT};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(line: usize, col: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, col, kind }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UndeclaredVariable(String),
    MatrixArity { expected: usize, found: usize },
    UnknownGenerator(String),
    NegativeGeneratorExponent,
    NegativeExponent(String),
    ExponentTooLarge,
    MalformedRational,
    DuplicateSection(String),
    MissingSection(String),
    MissingImage(String),
    Invalid(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ParseErrorKind::*;
        match self {
            Syntax(s) => write!(f, "syntax error: {s}"),
            UndeclaredVariable(v) => write!(f, "undeclared variable `{v}`"),
            MatrixArity { expected, found } => write!(f, "matrix arity: expected {expected} entries, found {found}"),
            UnknownGenerator(g) => write!(f, "unknown generator `{g}`"),
            NegativeGeneratorExponent => write!(f, "negative exponent on a generator"),
            NegativeExponent(v) => write!(f, "negative exponent on non-invertible variable `{v}`"),
            ExponentTooLarge => write!(f, "exponent exceeds {MAX_EXPONENT}"),
            MalformedRational => write!(f, "malformed rational"),
            DuplicateSection(s) => write!(f, "duplicate section `{s}`"),
            MissingSection(s) => write!(f, "missing section `{s}`"),
            MissingImage(v) => write!(f, "missing image for `{v}`"),
            Invalid(s) => write!(f, "{s}"),
        }
    }
}

/// Canonical text of a presentation; `parse_spec` reads it back.
pub fn render_spec(p: &DdPresentation) -> String {
    let ring = &p.ring;
    let mut s = String::from("ring");
    for (t, v) in ring.vars().iter().enumerate() {
        s.push(' ');
        s.push_str(v);
        if ring.is_invertible(t) {
            s.push_str(" inv");
        }
    }
    s.push('\n');
    s.push_str(&format!("type {} {}\n", p.m, p.n));
    for (i, sigma) in p.sigma_ring.iter().enumerate() {
        s.push_str(&format!("sigma {}\n", i + 1));
        s.push_str("  on");
        for (t, im) in sigma.images.iter().enumerate() {
            s.push_str(&format!("{} {} -> {}", if t == 0 { "" } else { "," }, ring.vars()[t], ring.render(im)));
        }
        s.push('\n');
        s.push_str("  inv");
        for (t, im) in sigma.inverse_images.iter().flatten().enumerate() {
            s.push_str(&format!("{} {} -> {}", if t == 0 { "" } else { "," }, ring.vars()[t], ring.render(im)));
        }
        s.push('\n');
        s.push_str("  matrix\n");
        for row in &p.sigma_d[i] {
            let entries: Vec<String> = row.iter().map(|e| ring.render(e)).collect();
            s.push_str(&format!("    [{}]\n", entries.join(", ")));
        }
    }
    for (j, delta) in p.delta.iter().enumerate() {
        s.push_str(&format!("delta {}\n", j + 1));
        s.push_str("  on");
        for (t, im) in delta.images.iter().enumerate() {
            s.push_str(&format!("{} {} -> {}", if t == 0 { "" } else { "," }, ring.vars()[t], ring.render(im)));
        }
        s.push('\n');
    }
    s
}
