//! Tokenizer and parser for linear constraints.
//!
//! Grammar: `term (("+"|"-") term)* REL rational` with
//! `term := [rational "*"] "x" index` and `REL ∈ {<=, <, =, >=, >}`. A leading
//! sign on the first term is accepted. Errors report byte offsets.

use crate::error::{Error, Result};
use crate::linear::{Constraint, ConstraintSystem, LinearExpr, Relation};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Debug)]
pub enum Tok {
    Ident(String),
    Num(Rational),
    Sym(&'static str),
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(v) => write!(f, "`{v}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

const SYMBOLS: [&str; 17] = ["<=", ">=", "<", ">", "=", "+", "-", "*", ";", "{", "}", "(", ")", "[", "]", ",", ":"];

pub fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let b = bytes[pos];
        if b.is_ascii_whitespace() {
            pos += 1;
        } else if b == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
        } else if b.is_ascii_alphabetic() || b == b'_' {
            let start = pos;
            while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                pos += 1;
            }
            out.push((start, Tok::Ident(text[start..pos].to_string())));
        } else if b.is_ascii_digit() {
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if pos + 1 < bytes.len() && bytes[pos] == b'/' && bytes[pos + 1].is_ascii_digit() {
                pos += 1;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
            }
            let v: Rational = text[start..pos].parse().map_err(|_| Error::parse(start, "invalid rational literal"))?;
            out.push((start, Tok::Num(v)));
        } else if let Some(s) = SYMBOLS.iter().find(|s| text[pos..].starts_with(**s)) {
            out.push((pos, Tok::Sym(s)));
            pos += s.len();
        } else {
            let ch = text[pos..].chars().next().unwrap_or('?');
            return Err(Error::parse(pos, format!("unexpected character `{ch}`")));
        }
    }
    Ok(out)
}

/// A cursor over a token stream.
pub struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    pub fn new(text: &str) -> Result<Self> {
        Ok(Parser { toks: tokenize(text)?, pos: 0, end: text.len() })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    pub fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.offset(), message)
    }

    fn unexpected(&self, wanted: &str) -> Error {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {t}")),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{s}`")))
        }
    }

    pub fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == s)
    }

    pub fn expect_ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    pub fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    /// `["-"|"+"] digits ["/" digits]`.
    pub fn signed_rational(&mut self) -> Result<Rational> {
        let neg = if self.eat_sym("-") {
            true
        } else {
            self.eat_sym("+");
            false
        };
        match self.peek() {
            Some(Tok::Num(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.unexpected("a rational number")),
        }
    }

    pub fn usize_literal(&mut self) -> Result<usize> {
        match self.peek() {
            Some(Tok::Num(v)) if v.is_integer() => {
                let n = v.to_i64().and_then(|n| usize::try_from(n).ok()).ok_or_else(|| self.error("number too large"))?;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.unexpected("a non-negative integer")),
        }
    }

    /// A variable name `x<k>` with `k ≥ 1`, returned 0-based.
    pub fn variable(&mut self) -> Result<usize> {
        let off = self.offset();
        let name = self.expect_ident()?;
        name.strip_prefix('x')
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&k| k >= 1 && !name[1..].starts_with('0'))
            .map(|k| k - 1)
            .ok_or_else(|| Error::parse(off, format!("expected a variable `x<index>`, found `{name}`")))
    }

    /// One constraint; the returned dimension is the largest variable index.
    pub fn raw_constraint(&mut self) -> Result<RawConstraint> {
        let offset = self.offset();
        let mut terms: Vec<(usize, Rational)> = Vec::new();
        let mut sign = if self.eat_sym("-") {
            -Rational::one()
        } else {
            self.eat_sym("+");
            Rational::one()
        };
        loop {
            let coeff = match self.peek() {
                Some(Tok::Num(v)) => {
                    let v = v.clone();
                    self.pos += 1;
                    self.expect_sym("*")?;
                    v
                }
                _ => Rational::one(),
            };
            let var = self.variable()?;
            terms.push((var, &sign * &coeff));
            if self.eat_sym("+") {
                sign = Rational::one();
            } else if self.eat_sym("-") {
                sign = -Rational::one();
            } else {
                break;
            }
        }
        let (rel, flip) = match self.next() {
            Some(Tok::Sym("<=")) => (Relation::Le, false),
            Some(Tok::Sym("<")) => (Relation::Lt, false),
            Some(Tok::Sym("=")) => (Relation::Eq, false),
            Some(Tok::Sym(">=")) => (Relation::Le, true),
            Some(Tok::Sym(">")) => (Relation::Lt, true),
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("a relation"));
            }
        };
        let bound = self.signed_rational()?;
        Ok(RawConstraint { offset, terms, rel, flip, bound })
    }
}

/// A parsed constraint before its space dimension is fixed.
#[derive(Clone, Debug)]
pub struct RawConstraint {
    pub offset: usize,
    terms: Vec<(usize, Rational)>,
    rel: Relation,
    flip: bool,
    bound: Rational,
}

impl RawConstraint {
    pub fn min_dim(&self) -> usize {
        self.terms.iter().map(|(v, _)| v + 1).max().unwrap_or(0)
    }

    pub fn build(&self, dim: usize) -> Result<Constraint> {
        if self.min_dim() > dim {
            return Err(Error::DimensionMismatch { expected: dim, found: self.min_dim() });
        }
        let mut coeffs = vec![Rational::zero(); dim];
        for (v, c) in &self.terms {
            coeffs[*v] += c;
        }
        let mut expr = LinearExpr::new(coeffs);
        let mut bound = self.bound.clone();
        if self.flip {
            expr = -&expr;
            bound = -bound;
        }
        Constraint::new(expr, self.rel, bound).map_err(|e| match e {
            Error::ZeroExpression => Error::parse(self.offset, "zero linear expression"),
            e => e,
        })
    }
}

/// Parses a single constraint; its dimension is its largest variable index.
pub fn parse_constraint(text: &str) -> Result<Constraint> {
    let mut p = Parser::new(text)?;
    let raw = p.raw_constraint()?;
    p.expect_end()?;
    raw.build(raw.min_dim())
}

/// Parses `;`-separated constraints in a space of dimension `dim`.
pub fn parse_system(text: &str, dim: usize) -> Result<ConstraintSystem> {
    let mut p = Parser::new(text)?;
    let mut cs = ConstraintSystem::new(dim);
    while !p.at_end() {
        let raw = p.raw_constraint()?;
        cs.insert(raw.build(dim)?)?;
        if !p.eat_sym(";") {
            break;
        }
    }
    p.expect_end()?;
    Ok(cs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let c = parse_constraint("2*x1 <= 4").unwrap();
        assert_eq!(c.to_string(), "x1 <= 2");
        let c = parse_constraint("x1 + x2 <= 0").unwrap();
        assert_eq!(c.to_string(), "x1 + x2 <= 0");
        let c = parse_constraint("x1 - x2 < 1/3").unwrap();
        assert!(c.is_strict());
        assert_eq!(c.bound(), &Rational::new(1, 3));
    }

    #[test]
    fn ge_and_gt_are_negated() {
        assert_eq!(parse_constraint("x1 >= 0").unwrap().to_string(), "-x1 <= 0");
        assert_eq!(parse_constraint("x1 - x2 > 2").unwrap().to_string(), "-x1 + x2 < -2");
        assert_eq!(parse_constraint("-x1 <= -3").unwrap().to_string(), "-x1 <= -3");
    }

    #[test]
    fn reports_offsets() {
        match parse_constraint("x1 + y2 <= 1") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("{other:?}"),
        }
        match parse_constraint("x1 - x1 <= 1") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("{other:?}"),
        }
        match parse_constraint("x1 <= ") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("{other:?}"),
        }
        assert!(parse_constraint("x0 <= 1").is_err());
        assert!(parse_constraint("x1 <= 1 2").is_err());
    }

    #[test]
    fn systems_respect_dimension() {
        let cs = parse_system("x1 <= 1; x2 >= 0;", 3).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs.dim(), 3);
        assert!(matches!(parse_system("x4 <= 1", 3), Err(Error::DimensionMismatch { .. })));
    }
}
