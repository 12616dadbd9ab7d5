use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::lexer::{lex, Tok, Token};
use super::{ParseError, ParseErrorKind};
use crate::coeffring::{Q, RingElem, RingMap, RingSpec};
use crate::ddalgebra::{DdAlgebra, DdElement, DdPresentation};

/// Largest accepted exponent magnitude in any expression.
pub const MAX_EXPONENT: u32 = 256;

/// Largest accepted `m` or `n` in a `type` line.
const MAX_GENERATORS: usize = 64;

const KEYWORDS: &[&str] = &["ring", "type", "sigma", "delta", "on", "inv", "matrix"];

type PResult<T> = Result<T, ParseError>;

enum Factor {
    Rational(Q),
    Var { name: String, exp: i64, at: (usize, usize) },
    Gen { letter: char, idx: usize, exp: u32, at: (usize, usize) },
    Paren(Expr),
}

struct Expr {
    terms: Vec<(bool, Vec<Factor>)>,
}

fn generator_name(s: &str) -> Option<(char, usize)> {
    let mut chars = s.chars();
    let letter = chars.next()?;
    let rest = chars.as_str();
    if (letter == 'S' || letter == 'D') && !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
        // Out-of-range indices still count as generator names.
        Some((letter, rest.parse().unwrap_or(usize::MAX)))
    } else {
        None
    }
}

struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    fn new(text: &str) -> PResult<Self> {
        Ok(Cursor { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn at(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, kind: ParseErrorKind) -> PResult<T> {
        let (l, c) = self.at();
        Err(ParseError::new(l, c, kind))
    }

    fn syntax<T>(&self, what: &str) -> PResult<T> {
        let found = match self.peek() {
            Tok::Eof => "end of input".to_string(),
            t => format!("{t:?}"),
        };
        self.err(ParseErrorKind::Syntax(format!("expected {what}, found {found}")))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.syntax(what)
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.advance();
            Ok(())
        } else {
            self.syntax(&format!("`{kw}`"))
        }
    }

    fn uint(&mut self, what: &str) -> PResult<BigInt> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.advance();
                Ok(v)
            }
            _ => self.syntax(what),
        }
    }

    fn small_uint(&mut self, what: &str, max: usize) -> PResult<usize> {
        let at = self.at();
        let v = self.uint(what)?;
        match v.to_usize() {
            Some(x) if x <= max => Ok(x),
            _ => Err(ParseError::new(at.0, at.1, ParseErrorKind::Invalid(format!("{what} must be at most {max}")))),
        }
    }

    fn exponent(&mut self) -> PResult<i64> {
        if !self.eat(&Tok::Caret) {
            return Ok(1);
        }
        let neg = self.eat(&Tok::Minus);
        let at = self.at();
        let v = self.uint("an integer exponent")?;
        match v.to_u32() {
            Some(x) if x <= MAX_EXPONENT => Ok(if neg { -(x as i64) } else { x as i64 }),
            _ => Err(ParseError::new(at.0, at.1, ParseErrorKind::ExponentTooLarge)),
        }
    }

    fn rational(&mut self) -> PResult<Q> {
        let num = self.uint("a number")?;
        if self.eat(&Tok::Slash) {
            let at = self.at();
            let den = match self.peek().clone() {
                Tok::Int(d) => {
                    self.advance();
                    d
                }
                _ => return Err(ParseError::new(at.0, at.1, ParseErrorKind::MalformedRational)),
            };
            if den.is_zero() {
                return Err(ParseError::new(at.0, at.1, ParseErrorKind::MalformedRational));
            }
            Ok(Q::new(num, den))
        } else {
            Ok(Q::from_integer(num))
        }
    }

    fn factor(&mut self) -> PResult<Factor> {
        let at = self.at();
        match self.peek().clone() {
            Tok::Int(_) => Ok(Factor::Rational(self.rational()?)),
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Factor::Paren(e))
            }
            Tok::Ident(name) => {
                if KEYWORDS.contains(&name.as_str()) {
                    return self.syntax("a factor");
                }
                self.advance();
                let exp = self.exponent()?;
                if let Some((letter, idx)) = generator_name(&name) {
                    if exp < 0 {
                        return Err(ParseError::new(at.0, at.1, ParseErrorKind::NegativeGeneratorExponent));
                    }
                    Ok(Factor::Gen { letter, idx, exp: exp as u32, at })
                } else {
                    Ok(Factor::Var { name, exp, at })
                }
            }
            _ => self.syntax("a factor"),
        }
    }

    fn term(&mut self) -> PResult<Vec<Factor>> {
        let mut fs = vec![self.factor()?];
        while self.eat(&Tok::Star) {
            fs.push(self.factor()?);
        }
        Ok(fs)
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut terms = Vec::new();
        let mut neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        loop {
            // A sign directly after a binary operator, as in `a + -1 * S1`.
            if self.eat(&Tok::Minus) {
                neg = !neg;
            } else {
                self.eat(&Tok::Plus);
            }
            terms.push((neg, self.term()?));
            neg = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.advance();
        }
        Ok(Expr { terms })
    }
}

fn var_power(ring: &RingSpec, name: &str, exp: i64, at: (usize, usize)) -> PResult<RingElem> {
    let idx = ring
        .var_index(name)
        .ok_or_else(|| ParseError::new(at.0, at.1, ParseErrorKind::UndeclaredVariable(name.into())))?;
    if exp < 0 && !ring.is_invertible(idx) {
        return Err(ParseError::new(at.0, at.1, ParseErrorKind::NegativeExponent(name.into())));
    }
    let mut exps = vec![0; ring.arity()];
    exps[idx] = exp as i32;
    Ok(RingElem::monomial(exps, Q::from_integer(1.into())))
}

fn eval_ring(e: &Expr, ring: &RingSpec) -> PResult<RingElem> {
    let mut acc = ring.zero();
    for (neg, factors) in &e.terms {
        let mut t = ring.one();
        for f in factors {
            let v = match f {
                Factor::Rational(c) => ring.constant(c.clone()),
                Factor::Var { name, exp, at } => var_power(ring, name, *exp, *at)?,
                Factor::Gen { letter, idx, at, .. } => {
                    return Err(ParseError::new(
                        at.0,
                        at.1,
                        ParseErrorKind::UnknownGenerator(format!("{letter}{idx} (ring expressions take no generators)")),
                    ))
                }
                Factor::Paren(inner) => eval_ring(inner, ring)?,
            };
            t = &t * &v;
        }
        acc = if *neg { &acc - &t } else { &acc + &t };
    }
    Ok(acc)
}

fn eval_dd(e: &Expr, alg: &DdAlgebra) -> PResult<DdElement> {
    let mut acc = alg.zero();
    for (neg, factors) in &e.terms {
        let mut t = alg.one();
        for f in factors {
            let v = match f {
                Factor::Rational(c) => alg.scalar(c.clone()),
                Factor::Var { name, exp, at } => alg.from_ring(var_power(alg.ring(), name, *exp, *at)?),
                Factor::Gen { letter, idx, exp, at } => {
                    let count = if *letter == 'S' { alg.m() } else { alg.n() };
                    if *idx == 0 || *idx > count {
                        return Err(ParseError::new(
                            at.0,
                            at.1,
                            ParseErrorKind::UnknownGenerator(format!("{letter}{idx}")),
                        ));
                    }
                    let g = if *letter == 'S' { alg.s(idx - 1) } else { alg.d(idx - 1) };
                    alg.pow(&g, *exp)
                }
                Factor::Paren(inner) => eval_dd(inner, alg)?,
            };
            t = alg.mul_elem(&t, &v);
        }
        acc = if *neg { acc.sub(&t) } else { acc.add(&t) };
    }
    Ok(acc)
}

/// Parses a ring element such as `3/2*z^-1 + 1`.
pub fn parse_ring_elem(ring: &RingSpec, text: &str) -> PResult<RingElem> {
    let mut c = Cursor::new(text)?;
    let e = c.expr()?;
    if *c.peek() != Tok::Eof {
        return c.syntax("`+`, `-`, `*` or end of input");
    }
    eval_ring(&e, ring)
}

/// Parses an element expression and returns its normal form. Factors are
/// multiplied left to right in the algebra.
pub fn parse_expr(alg: &DdAlgebra, text: &str) -> PResult<DdElement> {
    let mut c = Cursor::new(text)?;
    let e = c.expr()?;
    if *c.peek() != Tok::Eof {
        return c.syntax("`+`, `-`, `*` or end of input");
    }
    eval_dd(&e, alg)
}

/// `var -> poly` pairs until a token in `stop` (or end of input).
fn mappings(c: &mut Cursor, ring: &RingSpec, stop: &[&str], section_at: (usize, usize)) -> PResult<Vec<RingElem>> {
    let mut images: Vec<Option<RingElem>> = vec![None; ring.arity()];
    loop {
        match c.peek().clone() {
            Tok::Ident(s) if stop.contains(&s.as_str()) => break,
            Tok::Eof => break,
            Tok::Comma => {
                c.advance();
            }
            Tok::Ident(s) => {
                let at = c.at();
                let idx = match ring.var_index(&s) {
                    Some(i) => i,
                    None if KEYWORDS.contains(&s.as_str()) => return c.syntax(&format!("one of {stop:?}")),
                    None => return c.err(ParseErrorKind::UndeclaredVariable(s)),
                };
                c.advance();
                c.expect(&Tok::Arrow, "`->`")?;
                let e = c.expr()?;
                if images[idx].is_some() {
                    return Err(ParseError::new(at.0, at.1, ParseErrorKind::Syntax(format!("duplicate image for `{s}`"))));
                }
                images[idx] = Some(eval_ring(&e, ring)?);
            }
            _ => return c.syntax("a variable mapping"),
        }
    }
    images
        .into_iter()
        .enumerate()
        .map(|(t, im)| {
            im.ok_or_else(|| {
                ParseError::new(section_at.0, section_at.1, ParseErrorKind::MissingImage(ring.vars()[t].clone()))
            })
        })
        .collect()
}

/// Parses the `.dd` presentation format.
pub fn parse_spec(text: &str) -> PResult<DdPresentation> {
    let mut c = Cursor::new(text)?;
    c.expect_kw("ring")?;
    let mut vars: Vec<(String, bool)> = Vec::new();
    while let Tok::Ident(name) = c.peek().clone() {
        if name == "type" {
            break;
        }
        if KEYWORDS.contains(&name.as_str()) || generator_name(&name).is_some() {
            return c.syntax("a variable name or `type`");
        }
        let at = c.at();
        c.advance();
        let inv = if c.is_kw("inv") {
            c.advance();
            true
        } else {
            false
        };
        if vars.iter().any(|(v, _)| *v == name) {
            return Err(ParseError::new(at.0, at.1, ParseErrorKind::Invalid(format!("duplicate variable `{name}`"))));
        }
        vars.push((name, inv));
    }
    let ring = RingSpec::new(vars).expect("names checked above");
    c.expect_kw("type")?;
    let m = c.small_uint("m", MAX_GENERATORS)?;
    let n = c.small_uint("n", MAX_GENERATORS)?;

    let mut sigmas: Vec<Option<(RingMap, Vec<Vec<RingElem>>)>> = vec![None; m];
    let mut deltas: Vec<Option<RingMap>> = vec![None; n];
    loop {
        let section_at = c.at();
        match c.peek().clone() {
            Tok::Eof => break,
            Tok::Ident(s) if s == "sigma" => {
                c.advance();
                let idx_at = c.at();
                let i = c.small_uint("sigma index", MAX_GENERATORS)?;
                if i == 0 || i > m {
                    return Err(ParseError::new(idx_at.0, idx_at.1, ParseErrorKind::UnknownGenerator(format!("sigma {i}"))));
                }
                if sigmas[i - 1].is_some() {
                    return Err(ParseError::new(section_at.0, section_at.1, ParseErrorKind::DuplicateSection(format!("sigma {i}"))));
                }
                let on_at = c.at();
                c.expect_kw("on")?;
                let images = mappings(&mut c, &ring, &["inv"], on_at)?;
                let inv_at = c.at();
                c.expect_kw("inv")?;
                let inverse = mappings(&mut c, &ring, &["matrix"], inv_at)?;
                let matrix_at = c.at();
                c.expect_kw("matrix")?;
                let mut rows = Vec::new();
                while *c.peek() == Tok::LBracket {
                    let row_at = c.at();
                    c.advance();
                    let mut row = Vec::new();
                    if *c.peek() != Tok::RBracket {
                        loop {
                            let e = c.expr()?;
                            row.push(eval_ring(&e, &ring)?);
                            if !c.eat(&Tok::Comma) {
                                break;
                            }
                        }
                    }
                    c.expect(&Tok::RBracket, "`,` or `]`")?;
                    if row.len() != n {
                        return Err(ParseError::new(
                            row_at.0,
                            row_at.1,
                            ParseErrorKind::MatrixArity { expected: n, found: row.len() },
                        ));
                    }
                    rows.push(row);
                }
                if rows.len() != n {
                    return Err(ParseError::new(
                        matrix_at.0,
                        matrix_at.1,
                        ParseErrorKind::MatrixArity { expected: n, found: rows.len() },
                    ));
                }
                sigmas[i - 1] = Some((RingMap::endomorphism(images, Some(inverse)), rows));
            }
            Tok::Ident(s) if s == "delta" => {
                c.advance();
                let idx_at = c.at();
                let j = c.small_uint("delta index", MAX_GENERATORS)?;
                if j == 0 || j > n {
                    return Err(ParseError::new(idx_at.0, idx_at.1, ParseErrorKind::UnknownGenerator(format!("delta {j}"))));
                }
                if deltas[j - 1].is_some() {
                    return Err(ParseError::new(section_at.0, section_at.1, ParseErrorKind::DuplicateSection(format!("delta {j}"))));
                }
                let on_at = c.at();
                c.expect_kw("on")?;
                let images = mappings(&mut c, &ring, &["sigma", "delta"], on_at)?;
                deltas[j - 1] = Some(RingMap::derivation(images));
            }
            _ => return c.syntax("`sigma`, `delta` or end of input"),
        }
    }
    let end = c.at();
    let missing = |what: String| ParseError::new(end.0, end.1, ParseErrorKind::MissingSection(what));
    let mut sigma_ring = Vec::new();
    let mut sigma_d = Vec::new();
    for (i, s) in sigmas.into_iter().enumerate() {
        let (map, mat) = s.ok_or_else(|| missing(format!("sigma {}", i + 1)))?;
        sigma_ring.push(map);
        sigma_d.push(mat);
    }
    let delta = deltas
        .into_iter()
        .enumerate()
        .map(|(j, d)| d.ok_or_else(|| missing(format!("delta {}", j + 1))))
        .collect::<PResult<Vec<_>>>()?;
    let p = DdPresentation { m, n, ring, sigma_ring, sigma_d, delta };
    p.check_structure().map_err(|e| ParseError::new(1, 1, ParseErrorKind::Invalid(e.to_string())))?;
    Ok(p)
}
