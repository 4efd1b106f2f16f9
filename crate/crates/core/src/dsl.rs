//! Text form of solution expressions.
//!
//! ```text
//! expr  := combo ( '|' group )*
//! combo := term ( ('+' | '-') term )*
//! term  := [ number '*' ] 'C' digit '[' integer ']'
//! group := 'G' digit '(' number ')'
//! ```
//!
//! Whitespace is ignored between tokens. The grammar is LL(1): every choice
//! is decided by the next non-blank character, and the parser below is a
//! plain recursive descent with one character of lookahead.
//!
//! Example: `2*C1[0] - C4[-2] | G3(0.1) | G6(-0.5)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, ParseError, Result, SemanticError};
use crate::numeric::format_shortest;
use crate::solutions::{BaseCombo, EvalPoint, ModelParams, Partials, SolutionFn, SolutionTerm};
use crate::symmetry::{pullback_chain, GroupElement};

/// A linear combination of base solutions followed by a symmetry pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionExpr {
    pub combo: BaseCombo,
    pub pipeline: Vec<GroupElement>,
}

impl SolutionExpr {
    pub fn new(combo: BaseCombo, pipeline: Vec<GroupElement>) -> Self {
        SolutionExpr { combo, pipeline }
    }

    pub fn with_group(mut self, g: GroupElement) -> Self {
        self.pipeline.push(g);
        self
    }
}

impl SolutionFn for SolutionExpr {
    fn value(&self, p: EvalPoint, mp: &ModelParams) -> Result<f64> {
        pullback_chain(&self.pipeline, &self.combo, p, mp)
    }

    fn partials(&self, p: EvalPoint, mp: &ModelParams) -> Option<Result<Partials>> {
        if self.pipeline.is_empty() {
            self.combo.partials(p, mp)
        } else {
            None
        }
    }
}

impl fmt::Display for SolutionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_expr(self))
    }
}

impl FromStr for SolutionExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_expr(s)
    }
}

pub fn parse_expr(text: &str) -> Result<SolutionExpr> {
    let mut p = Parser { src: text, pos: 0 };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.unexpected(&["'+'", "'-'", "'|'", "end of input"]));
    }
    Ok(expr)
}

pub fn parse_group(text: &str) -> Result<GroupElement> {
    let mut p = Parser { src: text, pos: 0 };
    let g = p.group()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.unexpected(&["end of input"]));
    }
    Ok(g)
}

pub fn format_expr(e: &SolutionExpr) -> String {
    let mut out = String::new();
    for (i, term) in e.combo.terms().iter().enumerate() {
        let c = term.coeff();
        if i == 0 {
            out.push_str(&format_shortest(c));
        } else if c.is_sign_negative() {
            out.push_str(" - ");
            out.push_str(&format_shortest(-c));
        } else {
            out.push_str(" + ");
            out.push_str(&format_shortest(c));
        }
        out.push_str(&format!("*C{}[{}]", term.class(), term.order()));
    }
    for g in &e.pipeline {
        out.push_str(&format!(" | G{}({})", g.index(), format_shortest(g.epsilon())));
    }
    out
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn unexpected(&self, expected: &[&'static str]) -> Error {
        let found = match self.src[self.pos..].chars().next() {
            Some(c) => format!("{c:?}"),
            None => "end of input".to_string(),
        };
        Error::Parse(ParseError { offset: self.pos, expected: expected.to_vec(), found })
    }

    fn semantic(offset: usize, message: String) -> Error {
        Error::Semantic(SemanticError { offset, message })
    }

    fn expect(&mut self, c: char, name: &'static str) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.unexpected(&[name]))
        }
    }

    fn expr(&mut self) -> Result<SolutionExpr> {
        let combo = self.combo()?;
        let mut pipeline = Vec::new();
        while self.peek() == Some('|') {
            self.pos += 1;
            pipeline.push(self.group()?);
        }
        Ok(SolutionExpr { combo, pipeline })
    }

    fn combo(&mut self) -> Result<BaseCombo> {
        let mut terms = vec![self.term(false)?];
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    terms.push(self.term(false)?);
                }
                Some('-') => {
                    self.pos += 1;
                    terms.push(self.term(true)?);
                }
                _ => break,
            }
        }
        BaseCombo::new(terms)
    }

    fn term(&mut self, negate: bool) -> Result<SolutionTerm> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let coeff = match self.peek() {
            Some('C') => 1.0,
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => {
                let (value, at) = self.number()?;
                self.expect('*', "'*'")?;
                if !value.is_finite() {
                    return Err(Self::semantic(at, format!("coefficient {value} is not finite")));
                }
                value
            }
            _ => return Err(self.unexpected(&["number", "'C'"])),
        };
        self.expect('C', "'C'")?;
        let (class, class_at) = self.digit()?;
        self.expect('[', "'['")?;
        let (order, order_at) = self.integer()?;
        self.expect(']', "']'")?;

        if !(1..=4).contains(&class) {
            return Err(Self::semantic(class_at, format!("solution class C{class} does not exist; use C1..C4")));
        }
        let order = i32::try_from(order)
            .ok()
            .filter(|n| *n <= 0 && n % 2 == 0)
            .ok_or_else(|| Self::semantic(order_at, format!("order {order} must be 0 or a negative even integer")))?;
        let coeff = if negate { -coeff } else { coeff };
        SolutionTerm::new(class, order, coeff).map_err(|e| Self::semantic(start, e.to_string()))
    }

    fn group(&mut self) -> Result<GroupElement> {
        self.expect('G', "'G'")?;
        let (index, index_at) = self.digit()?;
        self.expect('(', "'('")?;
        let (eps, eps_at) = self.number()?;
        self.expect(')', "')'")?;
        if !(1..=6).contains(&index) {
            return Err(Self::semantic(index_at, format!("group G{index} does not exist; use G1..G6")));
        }
        GroupElement::new(index, eps).map_err(|e| Self::semantic(eps_at, e.to_string()))
    }

    fn digit(&mut self) -> Result<(u8, usize)> {
        self.skip_ws();
        let at = self.pos;
        match self.src[self.pos..].chars().next() {
            Some(c) if c.is_ascii_digit() => {
                self.pos += 1;
                Ok((c as u8 - b'0', at))
            }
            _ => Err(self.unexpected(&["digit"])),
        }
    }

    fn scan_digits(&mut self) -> usize {
        let n = self.src[self.pos..].bytes().take_while(u8::is_ascii_digit).count();
        self.pos += n;
        n
    }

    fn scan_sign(&mut self) {
        if matches!(self.src.as_bytes().get(self.pos), Some(b'+' | b'-')) {
            self.pos += 1;
        }
    }

    fn integer(&mut self) -> Result<(i64, usize)> {
        self.skip_ws();
        let at = self.pos;
        self.scan_sign();
        if self.scan_digits() == 0 {
            return Err(self.unexpected(&["digit"]));
        }
        let text = &self.src[at..self.pos];
        let value = text.parse::<i64>().map_err(|_| Self::semantic(at, format!("integer {text} is out of range")))?;
        Ok((value, at))
    }

    fn number(&mut self) -> Result<(f64, usize)> {
        self.skip_ws();
        let at = self.pos;
        self.scan_sign();
        let mut digits = self.scan_digits();
        if self.src.as_bytes().get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits += self.scan_digits();
        }
        if digits == 0 {
            return Err(self.unexpected(&["digit"]));
        }
        if matches!(self.src.as_bytes().get(self.pos), Some(b'e' | b'E')) {
            self.pos += 1;
            self.scan_sign();
            if self.scan_digits() == 0 {
                return Err(self.unexpected(&["exponent digit"]));
            }
        }
        let text = &self.src[at..self.pos];
        let value = text.parse::<f64>().map_err(|_| Self::semantic(at, format!("cannot read number {text}")))?;
        if !value.is_finite() {
            return Err(Self::semantic(at, format!("number {text} overflows")));
        }
        Ok((value, at))
    }
}
