//! Plain-text rendering and parsing of differential polynomials and
//! λ-polynomials.
//!
//! Grammar (informal):
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := factor (('*' | '·')? factor | '/' factor)*
//! factor  := atom ['^' ['-'] int]
//! atom    := int | name | 'k' | 'λ' | '∂' ['^' int] '(' expr ')' | '(' expr ')'
//! ```
//!
//! Rendered output always parses back to the same value.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::diffpoly::{DiffPoly, DiffSymbol, GeneratorSpace, Monomial};
use crate::lambda::LambdaPoly;
use crate::scalar::{Scalar, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at offset {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token {found} at offset {pos}, expected {expected}")]
    UnexpectedToken {
        found: String,
        expected: &'static str,
        pos: usize,
    },
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("negative power of {0}")]
    NegativePower(String),
    #[error("cannot divide by {0}")]
    BadDivision(String),
    #[error("expression contains λ where none is allowed")]
    UnexpectedLambda,
}

pub fn render_symbol(space: &GeneratorSpace, s: &DiffSymbol) -> String {
    let name = space.name(s.gen());
    match s.order {
        0 => name.to_string(),
        1 => format!("∂({})", name),
        n => format!("∂^{}({})", n, name),
    }
}

pub fn render_monomial(space: &GeneratorSpace, m: &Monomial) -> String {
    m.symbols()
        .iter()
        .map(|s| render_symbol(space, s))
        .collect::<Vec<_>>()
        .join("*")
}

/// Renders one signed term. `body` is the product of non-scalar factors.
fn push_term(out: &mut String, first: bool, c: &Scalar, body: &str) {
    let (neg, coeff) = match c.as_monomial() {
        Some((v, e)) => {
            let neg = v.is_negative();
            let unit = v.abs().is_one() && e == 0;
            let coeff = if unit && !body.is_empty() {
                String::new()
            } else {
                Scalar::monomial(v.abs(), e).to_string()
            };
            (neg, coeff)
        }
        None => (false, format!("({})", c)),
    };
    match (first, neg) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
    out.push_str(&coeff);
    if !coeff.is_empty() && !body.is_empty() {
        out.push('·');
    }
    out.push_str(body);
}

pub fn render_diffpoly(p: &DiffPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        push_term(&mut out, i == 0, c, &render_monomial(p.space(), m));
    }
    out
}

fn render_lambda_pow(n: u32) -> String {
    match n {
        0 => String::new(),
        1 => "λ".to_string(),
        _ => format!("λ^{}", n),
    }
}

/// Terms are ordered by λ-degree, then by monomial.
pub fn render_lambdapoly(p: &LambdaPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for (n, c) in p.coeffs() {
        for (m, s) in c.terms() {
            let mut body = render_lambda_pow(n);
            let mono = render_monomial(c.space(), m);
            if !body.is_empty() && !mono.is_empty() {
                body.push('·');
            }
            body.push_str(&mono);
            push_term(&mut out, first, s, &body);
            first = false;
        }
    }
    out
}

/// Renders a rational as `3`, `-1/2`.
pub fn render_q(c: &Q) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Renders a scalar factor `c` in front of `body` as in the term renderer.
pub fn render_scaled(c: &Scalar, body: &str) -> String {
    let mut out = String::new();
    push_term(&mut out, true, c, body);
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Lambda,
    Partial,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => n.to_string(),
            Tok::Name(s) => s.clone(),
            Tok::Lambda => "λ".into(),
            Tok::Partial => "∂".into(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Caret => "^".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        match ch {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => out.push((Tok::Plus, pos)),
            '-' | '−' => out.push((Tok::Minus, pos)),
            '*' | '·' => out.push((Tok::Star, pos)),
            '/' => out.push((Tok::Slash, pos)),
            '^' => out.push((Tok::Caret, pos)),
            '(' => out.push((Tok::LParen, pos)),
            ')' => out.push((Tok::RParen, pos)),
            'λ' => out.push((Tok::Lambda, pos)),
            '∂' => out.push((Tok::Partial, pos)),
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i..j].iter().map(|(_, c)| c).collect();
                out.push((Tok::Int(digits.parse().unwrap()), pos));
                i = j;
                continue;
            }
            c if c.is_alphabetic() => {
                let mut j = i;
                while j < chars.len() {
                    let c = chars[j].1;
                    if (c.is_alphanumeric() && c != 'λ' && c != '∂') || c == '_' || c == '@' {
                        j += 1;
                    } else {
                        break;
                    }
                }
                let name: String = chars[i..j].iter().map(|(_, c)| c).collect();
                out.push((Tok::Name(name), pos));
                i = j;
                continue;
            }
            _ => return Err(ParseError::UnexpectedChar { ch, pos }),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    space: &'a Arc<GeneratorSpace>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(usize::MAX, |(_, p)| *p)
    }

    fn expect(&mut self, want: Tok, expected: &'static str) -> Result<(), ParseError> {
        let pos = self.offset();
        match self.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(ParseError::UnexpectedToken {
                found: t.describe(),
                expected,
                pos,
            }),
            None => Err(ParseError::UnexpectedEnd),
        }
    }

    fn expr(&mut self) -> Result<LambdaPoly, ParseError> {
        let mut acc = LambdaPoly::zero(self.space);
        let mut neg = false;
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            neg = true;
        } else if self.peek() == Some(&Tok::Plus) {
            self.next();
        }
        loop {
            let t = self.term()?;
            if neg {
                acc -= &t;
            } else {
                acc += &t;
            }
            match self.peek() {
                Some(Tok::Plus) => neg = false,
                Some(Tok::Minus) => neg = true,
                _ => break,
            }
            self.next();
        }
        Ok(acc)
    }

    fn starts_factor(t: Option<&Tok>) -> bool {
        matches!(
            t,
            Some(Tok::Int(_) | Tok::Name(_) | Tok::Lambda | Tok::Partial | Tok::LParen)
        )
    }

    fn term(&mut self) -> Result<LambdaPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Some(Tok::Slash) => {
                    self.next();
                    let f = self.factor()?;
                    let c = f
                        .as_constant()
                        .ok_or_else(|| ParseError::BadDivision(render_lambdapoly(&f)))?;
                    let inv = c
                        .inv()
                        .map_err(|_| ParseError::BadDivision(render_lambdapoly(&f)))?;
                    acc = acc.scale(&inv);
                }
                t if Self::starts_factor(t) => {
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let mut neg = false;
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            neg = true;
        }
        let pos = self.offset();
        match self.next() {
            Some(Tok::Int(n)) => {
                let v: i64 = (&n).try_into().map_err(|_| ParseError::UnexpectedToken {
                    found: n.to_string(),
                    expected: "small exponent",
                    pos,
                })?;
                Ok(if neg { -v } else { v })
            }
            Some(t) => Err(ParseError::UnexpectedToken {
                found: t.describe(),
                expected: "integer exponent",
                pos,
            }),
            None => Err(ParseError::UnexpectedEnd),
        }
    }

    fn factor(&mut self) -> Result<LambdaPoly, ParseError> {
        let pos = self.offset();
        let base = match self.next() {
            None => return Err(ParseError::UnexpectedEnd),
            Some(Tok::Int(n)) => {
                LambdaPoly::constant_scalar(self.space, Scalar::from_q(Q::from_integer(n)))
            }
            Some(Tok::Name(name)) if name == "k" => {
                if self.peek() == Some(&Tok::Caret) {
                    self.next();
                    let e = self.exponent()?;
                    return Ok(LambdaPoly::constant_scalar(self.space, Scalar::k_pow(e as i32)));
                }
                LambdaPoly::constant_scalar(self.space, Scalar::k())
            }
            Some(Tok::Name(name)) => {
                let g = self
                    .space
                    .lookup(&name)
                    .ok_or(ParseError::UnknownGenerator(name))?;
                LambdaPoly::constant(DiffPoly::var(self.space, g))
            }
            Some(Tok::Lambda) => LambdaPoly::lambda_pow(self.space, 1, Scalar::one()),
            Some(Tok::Partial) => {
                let mut n = 1;
                if self.peek() == Some(&Tok::Caret) {
                    self.next();
                    let e = self.exponent()?;
                    if e < 0 {
                        return Err(ParseError::NegativePower("∂".into()));
                    }
                    n = e as u32;
                }
                self.expect(Tok::LParen, "'(' after ∂")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                inner.map_coeffs(|c| c.partial_n(n))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                inner
            }
            Some(t) => {
                return Err(ParseError::UnexpectedToken {
                    found: t.describe(),
                    expected: "a factor",
                    pos,
                })
            }
        };
        if self.peek() == Some(&Tok::Caret) {
            self.next();
            let e = self.exponent()?;
            if e < 0 {
                return Err(ParseError::NegativePower(render_lambdapoly(&base)));
            }
            let mut acc = LambdaPoly::constant(DiffPoly::one(self.space));
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }
}

/// Parses an expression that may contain `λ`.
pub fn parse_lambdapoly(space: &Arc<GeneratorSpace>, src: &str) -> Result<LambdaPoly, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, space };
    let out = p.expr()?;
    if let Some((t, pos)) = p.toks.get(p.pos) {
        return Err(ParseError::UnexpectedToken {
            found: t.describe(),
            expected: "end of input",
            pos: *pos,
        });
    }
    Ok(out)
}

/// Parses a λ-free expression.
pub fn parse_diffpoly(space: &Arc<GeneratorSpace>, src: &str) -> Result<DiffPoly, ParseError> {
    let lp = parse_lambdapoly(space, src)?;
    if lp.degree().unwrap_or(0) > 0 {
        return Err(ParseError::UnexpectedLambda);
    }
    Ok(lp.coeff(0))
}

/// Splits a λ-polynomial into `(degree, rendered coefficient)` pairs.
pub fn lambda_terms(p: &LambdaPoly) -> Vec<(u32, String)> {
    p.coeffs().map(|(n, c)| (n, render_diffpoly(c))).collect()
}

/// Rebuilds a λ-polynomial from `(degree, expression)` pairs.
pub fn lambda_from_terms(
    space: &Arc<GeneratorSpace>,
    terms: &[(u32, String)],
) -> Result<LambdaPoly, ParseError> {
    let mut acc: BTreeMap<u32, DiffPoly> = BTreeMap::new();
    for (n, src) in terms {
        let c = parse_diffpoly(space, src)?;
        let slot = acc.entry(*n).or_insert_with(|| DiffPoly::zero(space));
        *slot += &c;
    }
    let mut out = LambdaPoly::zero(space);
    for (n, c) in acc {
        out.add_coeff(n, &c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::Parity;

    fn space() -> Arc<GeneratorSpace> {
        GeneratorSpace::new(
            "t",
            [
                ("E11", Parity::Odd),
                ("F12", Parity::Odd),
                ("H1", Parity::Even),
                ("phi_ev", Parity::Even),
            ],
        )
        .unwrap()
    }

    #[test]
    fn renders_and_parses_back() {
        let s = space();
        let p = parse_diffpoly(&s, "∂^2(E11)*F12 + (1/2)k^-1 * H1*H1").unwrap();
        let text = p.to_string();
        assert_eq!(parse_diffpoly(&s, &text).unwrap(), p);
        assert!(text.contains("(1/2)k^-1·H1*H1"), "{}", text);
    }

    #[test]
    fn lambda_rendering() {
        let s = space();
        let p = parse_lambdapoly(&s, "-2 phi_ev - 2 λ^2").unwrap();
        assert_eq!(render_lambdapoly(&p), "-2·phi_ev - 2·λ^2");
        let q = parse_lambdapoly(&s, "-∂(H1) - 3/2 λ H1").unwrap();
        assert_eq!(render_lambdapoly(&q), "-∂(H1) - (3/2)·λ·H1");
    }

    #[test]
    fn multi_term_scalars_are_parenthesized() {
        let s = space();
        let p = parse_diffpoly(&s, "(k + 1) H1 - (k - 2k^-1)").unwrap();
        let text = p.to_string();
        assert_eq!(parse_diffpoly(&s, &text).unwrap(), p);
        assert!(text.starts_with("(-k + 2k^-1)"), "{}", text);
    }

    #[test]
    fn errors_are_reported() {
        let s = space();
        assert!(matches!(parse_diffpoly(&s, "foo"), Err(ParseError::UnknownGenerator(_))));
        assert!(parse_diffpoly(&s, "H1 +").is_err());
        assert!(parse_diffpoly(&s, "λ H1").is_err());
        assert!(parse_diffpoly(&s, "H1 / (k + 1)").is_err());
    }
}

fn latex_name(name: &str) -> String {
    let (head, sub) = match name.split_once('_') {
        Some((h, s)) => (h.to_string(), Some(s.to_string())),
        None => {
            let cut = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
            let (h, s) = name.split_at(cut);
            (h.to_string(), (!s.is_empty()).then(|| s.to_string()))
        }
    };
    let head = match head.as_str() {
        "phi" => "\\phi".to_string(),
        "Phi" => "\\Phi".to_string(),
        "psi" => "\\psi".to_string(),
        "eta" => "\\eta".to_string(),
        _ => head,
    };
    match sub {
        Some(s) => format!("{}_{{{}}}", head, s.replace('_', ",")),
        None => head,
    }
}

fn latex_symbol(space: &GeneratorSpace, s: &DiffSymbol) -> String {
    let name = latex_name(space.name(s.gen()));
    match s.order {
        0 => name,
        1 => format!("\\partial {}", name),
        n => format!("\\partial^{{{}}} {}", n, name),
    }
}

fn latex_q(c: &Q) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

fn latex_scalar(c: &Scalar) -> String {
    let mut out = String::new();
    for (i, (e, v)) in c.terms().enumerate() {
        let neg = v.is_negative();
        if i > 0 {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        let a = v.abs();
        let kp = match e {
            0 => String::new(),
            1 => "k".to_string(),
            _ => format!("k^{{{}}}", e),
        };
        if !(a.is_one() && !kp.is_empty()) {
            out.push_str(&latex_q(&a));
        }
        out.push_str(&kp);
    }
    out
}

fn push_latex_term(out: &mut String, first: bool, c: &Scalar, body: &str) {
    let (neg, coeff) = match c.as_monomial() {
        Some((v, e)) => {
            let neg = v.is_negative();
            let s = Scalar::monomial(v.abs(), e);
            let coeff = if s.is_one() && !body.is_empty() {
                String::new()
            } else {
                latex_scalar(&s)
            };
            (neg, coeff)
        }
        None => (false, format!("\\left({}\\right)", latex_scalar(c))),
    };
    match (first, neg) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
    out.push_str(&coeff);
    if !coeff.is_empty() && !body.is_empty() {
        out.push_str("\\, ");
    }
    out.push_str(body);
}

/// LaTeX form of a λ-polynomial, for display only.
pub fn render_latex(p: &LambdaPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for (n, c) in p.coeffs() {
        for (m, s) in c.terms() {
            let mut parts = Vec::new();
            match n {
                0 => {}
                1 => parts.push("\\lambda".to_string()),
                _ => parts.push(format!("\\lambda^{{{}}}", n)),
            }
            parts.extend(m.symbols().iter().map(|s| latex_symbol(c.space(), s)));
            push_latex_term(&mut out, first, s, &parts.join(" "));
            first = false;
        }
    }
    out
}

/// LaTeX form of a differential polynomial.
pub fn render_latex_diffpoly(p: &DiffPoly) -> String {
    render_latex(&LambdaPoly::constant(p.clone()))
}
