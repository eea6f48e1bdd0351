//! Textual expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := number | identifier | '(' expr ')'
//! number := digits ['.' digits]
//! ```
//!
//! `p/q` rationals fall out of the division rule.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, Var};
use super::{Rational, SymError, SymbolicReal};

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses `p`, `p/q`, `-p/q` or a decimal literal into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, SymError> {
    let t = text.trim();
    let err = || SymError::Parse {
        pos: 0,
        msg: format!("`{t}` is not a rational literal"),
    };
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim_start()),
        None => (false, t),
    };
    let value = if let Some((p, q)) = body.split_once('/') {
        let p = parse_decimal(p.trim()).ok_or_else(err)?;
        let q = parse_decimal(q.trim()).ok_or_else(err)?;
        if q.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        p / q
    } else {
        parse_decimal(body).ok_or_else(err)?
    };
    Ok(if neg { -value } else { value })
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let n: BigInt = format!("{int}{frac}").parse().ok()?;
    Some(Rational::new(n, BigInt::from(10u32).pow(frac.len() as u32)))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, SymError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            let lit = &text[start..i];
            let q = parse_decimal(lit).ok_or(SymError::Parse {
                pos: start,
                msg: format!("bad number `{lit}`"),
            })?;
            out.push((start, Tok::Num(q)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(SymError::Parse {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a, F> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
    resolve: &'a F,
}

impl<F> Parser<'_, F>
where
    F: Fn(&str) -> Result<SymbolicReal, SymError>,
{
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.len)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SymbolicReal, SymError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SymbolicReal, SymError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?)?;
            } else if self.eat('/') {
                acc = acc.div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<SymbolicReal, SymError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<SymbolicReal, SymError> {
        let base = self.atom()?;
        if self.eat('^') {
            let at = self.offset();
            match self.toks.get(self.pos).map(|(_, t)| t.clone()) {
                Some(Tok::Num(q)) if q.is_integer() && !q.is_negative() => {
                    self.pos += 1;
                    let e: u32 = q.to_integer().try_into().map_err(|_| SymError::Parse {
                        pos: at,
                        msg: "exponent too large".into(),
                    })?;
                    return base.pow(e);
                }
                _ => {
                    return Err(SymError::Parse {
                        pos: at,
                        msg: "expected a non-negative integer exponent".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<SymbolicReal, SymError> {
        let at = self.offset();
        match self.toks.get(self.pos).map(|(_, t)| t.clone()) {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(SymbolicReal::from_rational(q))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                (self.resolve)(&name)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(SymError::Parse {
                        pos: self.offset(),
                        msg: "expected `)`".into(),
                    });
                }
                Ok(inner)
            }
            Some(t) => Err(SymError::Parse {
                pos: at,
                msg: format!("unexpected token {t:?}"),
            }),
            None => Err(SymError::Parse {
                pos: at,
                msg: "unexpected end of expression".into(),
            }),
        }
    }
}

pub(crate) fn parse_expr<F>(text: &str, resolve: F) -> Result<SymbolicReal, SymError>
where
    F: Fn(&str) -> Result<SymbolicReal, SymError>,
{
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: text.len(),
        resolve: &resolve,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(SymError::Parse {
            pos: p.offset(),
            msg: "trailing input".into(),
        });
    }
    Ok(out)
}

fn format_monomial(m: &Monomial, name: &impl Fn(Var) -> String) -> String {
    m.factors()
        .iter()
        .map(|&(v, e)| {
            if e == 1 {
                name(v)
            } else {
                format!("{}^{e}", name(v))
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn format_poly(p: &super::Poly, name: &impl Fn(Var) -> String) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&a.to_string());
        } else if a.is_one() {
            out.push_str(&format_monomial(m, name));
        } else {
            out.push_str(&format!("{a}*{}", format_monomial(m, name)));
        }
    }
    out
}

/// Renders an expression in the grammar accepted by [`parse_expr`].
pub(crate) fn format_expr(x: &SymbolicReal, name: impl Fn(Var) -> String) -> String {
    let num = format_poly(x.numerator(), &name);
    if x.is_polynomial() {
        num
    } else {
        format!("({num})/({})", format_poly(x.denominator(), &name))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Binding, Mode, NamedConstant, Registry};
    use super::*;

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("3/4").unwrap(), Rational::new(3.into(), 4.into()));
        assert_eq!(parse_rational("-2").unwrap(), Rational::from_integer((-2).into()));
        assert_eq!(parse_rational("0.25").unwrap(), Rational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("1/0"), Err(SymError::DivisionByZero));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn grammar_and_round_trip() {
        let reg = Registry::new();
        reg.declare("s1", Mode::Linear, Binding::decimal("1.414").unwrap()).unwrap();
        reg.declare("s2", Mode::Linear, Binding::decimal("1.732").unwrap()).unwrap();
        reg.declare("t", Mode::Algebraic, Binding::Constant(NamedConstant::E)).unwrap();
        let x = reg.parse("(3*s1 - s2)/2").unwrap();
        assert_eq!(reg.format(&x), "3/2*s1 - 1/2*s2");
        for text in ["(3*s1 - s2)/2", "-s1 + 2/3", "(t^2 + 1)/(t - 3)", "-t^3/5", "0", "7/3"] {
            let v = reg.parse(text).unwrap();
            assert_eq!(reg.parse(&reg.format(&v)).unwrap(), v, "{text}");
        }
        assert!(matches!(reg.parse("s1 +"), Err(SymError::Parse { .. })));
        assert!(matches!(reg.parse("s1 ) "), Err(SymError::Parse { .. })));
        assert!(matches!(reg.parse("u"), Err(SymError::UnknownSymbol(_))));
        assert!(matches!(reg.parse("s1*s2"), Err(SymError::ModeViolation(_))));
    }
}
