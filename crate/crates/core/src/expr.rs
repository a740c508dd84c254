//! Expression text: a recursive-descent parser and the canonical formatter.
//!
//! ```text
//! expr   := ['-'] term { ('+' | '-') term }
//! term   := factor { '*' factor }
//! factor := base [ '^' ['-'] integer ]
//! base   := rational | symbol | '(' expr ')'
//! ```
//!
//! Products are normalized through the algebra product, so `y1*x1` in a
//! Weyl signature parses to `x1*y1 - 1`.

use num_bigint::BigInt;
use thiserror::Error;

use crate::element::Element;
use crate::monomial::Monomial;
use crate::signature::Signature;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("bad exponent: {0}")]
    BadExponent(String),
    #[error("bad coefficient: {0}")]
    BadCoefficient(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Number(BigInt),
    Symbol(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                out.push((start, Token::Number(s.parse().expect("digits"))));
                continue;
            }
            a if a.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Token::Symbol(bytes[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(ParseError::Syntax { position: start, message: format!("unexpected character `{other}`") })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    sig: &'a Signature,
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn error<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { position: self.offset(), message: message.to_string() })
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Element, ParseError> {
        let negate = self.eat(&Token::Minus);
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            if self.eat(&Token::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Token::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Element, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(&Token::Star) {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Element, ParseError> {
        let base_start = self.pos;
        let base = self.base()?;
        if !self.eat(&Token::Caret) {
            return Ok(base);
        }
        let negative = self.eat(&Token::Minus);
        let e = match self.peek() {
            Some(Token::Number(n)) => {
                let n = n.clone();
                self.pos += 1;
                n
            }
            _ => return self.error("expected integer exponent"),
        };
        let e: u32 = u32::try_from(&e).map_err(|_| ParseError::BadExponent(format!("exponent {e} too large")))?;
        if !negative {
            return Ok(base.pow(e));
        }
        // Negative powers are only meaningful for Laurent generators.
        let inv = base.inverse_unit().map_err(|_| {
            let shown: Vec<String> = self.tokens[base_start..self.pos]
                .iter()
                .map(|(_, t)| match t {
                    Token::Symbol(s) => s.clone(),
                    _ => String::new(),
                })
                .collect();
            ParseError::BadExponent(format!("negative exponent on non-invertible `{}`", shown.concat()))
        })?;
        Ok(inv.pow(e))
    }

    fn base(&mut self) -> Result<Element, ParseError> {
        match self.peek().cloned() {
            Some(Token::Number(n)) => {
                self.pos += 1;
                let den = if self.eat(&Token::Slash) {
                    match self.peek().cloned() {
                        Some(Token::Number(d)) => {
                            self.pos += 1;
                            d
                        }
                        _ => return self.error("expected denominator"),
                    }
                } else {
                    BigInt::from(1)
                };
                let c = self
                    .sig
                    .field()
                    .from_ratio(&n, &den)
                    .map_err(|e| ParseError::BadCoefficient(format!("{n}/{den}: {e}")))?;
                Ok(Element::scalar(self.sig, c))
            }
            Some(Token::Symbol(s)) => {
                self.pos += 1;
                let g = self.sig.generator_index(&s).ok_or(ParseError::UnknownSymbol(s))?;
                Ok(Element::generator(self.sig, g))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(&Token::RParen) {
                    return self.error("expected `)`");
                }
                Ok(e)
            }
            _ => self.error("expected number, symbol or `(`"),
        }
    }
}

pub fn parse_element(text: &str, sig: &Signature) -> Result<Element, ParseError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(ParseError::Syntax { position: 0, message: "empty expression".into() });
    }
    let mut p = Parser { sig, tokens, pos: 0, end: text.chars().count() };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}

/// Monomial part of a term, e.g. `x1^2*y1`; `1` for the unit monomial.
pub fn format_monomial(sig: &Signature, m: &Monomial) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(g, &e)| {
            let name = &sig.generators()[g].name;
            if e == 1 {
                name.clone()
            } else {
                format!("{name}^{e}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Canonical text: terms in descending monomial order, `" + "`/`" - "`
/// separators, unit coefficients omitted.
pub fn format_element(f: &Element) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let sig = f.signature();
    let mut out = String::new();
    for (i, (m, c)) in f.terms().rev().enumerate() {
        let neg = c.is_negative();
        let abs = if neg { -c } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&format_monomial(sig, m));
        } else {
            out.push_str(&format!("{abs}*{}", format_monomial(sig, m)));
        }
    }
    out
}
