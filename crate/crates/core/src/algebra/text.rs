//! Text and JSON forms of polynomials.
//!
//! Text: `coef * x1^a1 * y2^b2 + ...` for phase-space polynomials and
//! `coef * z1^a1 * zb1^b1 + ...` for complex ones. Coefficients may be real
//! literals, `i`, imaginary literals like `2.5i`, or parenthesised
//! sub-expressions such as `(1 - 2i)`. A bare variable name means index 1.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::multi::{Mono, MultiIndex};
use super::poly::{Poly, PolyXY, PolyZ, Vars};
use crate::cplx::{c, r, C64, I};
use crate::{Error, Result};

/// One entry of the JSON array-of-terms form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub p: Vec<u32>,
    pub q: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

impl<V: Vars> Poly<V> {
    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        self.terms()
            .map(|(m, coef)| JsonTerm {
                p: m.p.entries().to_vec(),
                q: m.q.entries().to_vec(),
                re: coef.re,
                im: coef.im,
            })
            .collect()
    }

    pub fn from_json_terms(n: usize, terms: &[JsonTerm]) -> Result<Self> {
        Poly::from_terms(
            n,
            terms.iter().map(|t| {
                (
                    Mono::new(MultiIndex::new(t.p.clone()), MultiIndex::new(t.q.clone())),
                    c(t.re, t.im),
                )
            }),
        )
    }
}

impl<V: Vars> Serialize for Poly<V> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

pub(crate) fn format_coef(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("({} - {}i)", z.re, -z.im)
    } else {
        format!("({} + {}i)", z.re, z.im)
    }
}

pub(crate) fn write_factors(f: &mut fmt::Formatter<'_>, name: &str, e: &MultiIndex) -> fmt::Result {
    for (k, &p) in e.entries().iter().enumerate() {
        match p {
            0 => {}
            1 => write!(f, " * {name}{}", k + 1)?,
            _ => write!(f, " * {name}{}^{p}", k + 1)?,
        }
    }
    Ok(())
}

impl<V: Vars> fmt::Display for Poly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, coef)) in self.terms().collect::<Vec<_>>().into_iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", format_coef(*coef))?;
            write_factors(f, V::FIRST, &m.p)?;
            write_factors(f, V::SECOND, &m.q)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value: f64 = text
                .parse()
                .map_err(|_| Error::Parse(format!("bad number `{text}`")))?;
            let imaginary = i < chars.len()
                && chars[i] == 'i'
                && !chars.get(i + 1).is_some_and(|c| c.is_alphanumeric());
            if imaginary {
                i += 1;
                out.push(Tok::Imag(value));
            } else {
                out.push(Tok::Num(value));
            }
        } else if ch.is_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(ch) {
            out.push(Tok::Sym(ch));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{ch}`")));
        }
    }
    Ok(out)
}

struct Parser<'a, V: Vars> {
    toks: &'a [Tok],
    pos: usize,
    n: usize,
    _v: std::marker::PhantomData<V>,
}

impl<V: Vars> Parser<'_, V> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<Poly<V>> {
        let mut acc = Poly::zero(self.n);
        let mut sign = 1.0;
        if let Some(Tok::Sym(s @ ('+' | '-'))) = self.peek() {
            sign = if *s == '-' { -1.0 } else { 1.0 };
            self.pos += 1;
        }
        loop {
            let t = self.term()?;
            acc = &acc + &t.scale(r(sign));
            match self.peek() {
                Some(Tok::Sym('+')) => sign = 1.0,
                Some(Tok::Sym('-')) => sign = -1.0,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Poly<V>> {
        let mut acc = self.factor()?;
        while let Some(Tok::Sym('*')) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly<V>> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        let base = match tok {
            Tok::Num(v) => Poly::constant(self.n, r(v)),
            Tok::Imag(v) => Poly::constant(self.n, c(0.0, v)),
            Tok::Ident(name) if name == "i" => Poly::constant(self.n, I),
            Tok::Ident(name) => self.variable(&name)?,
            Tok::Sym('(') => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::Sym(')')) {
                    return Err(Error::Parse("missing `)`".into()));
                }
                self.pos += 1;
                inner
            }
            Tok::Sym(s) => return Err(Error::Parse(format!("unexpected `{s}`"))),
        };
        if let Some(Tok::Sym('^')) = self.peek() {
            self.pos += 1;
            match self.peek() {
                Some(Tok::Num(e)) if e.fract() == 0.0 && *e >= 0.0 => {
                    let e = *e as u32;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::Parse("exponent must be a non-negative integer".into())),
            }
        }
        Ok(base)
    }

    fn variable(&self, name: &str) -> Result<Poly<V>> {
        // Try the longer family name first so `zb1` is not read as `z` + `b1`.
        let (long, short, long_is_second) = if V::SECOND.len() >= V::FIRST.len() {
            (V::SECOND, V::FIRST, true)
        } else {
            (V::FIRST, V::SECOND, false)
        };
        let (second, rest) = if let Some(rest) = name.strip_prefix(long) {
            (long_is_second, rest)
        } else if let Some(rest) = name.strip_prefix(short) {
            (!long_is_second, rest)
        } else {
            return Err(Error::Parse(format!("unknown variable `{name}`")));
        };
        let index: usize = if rest.is_empty() {
            1
        } else {
            rest.parse()
                .map_err(|_| Error::Parse(format!("unknown variable `{name}`")))?
        };
        if index == 0 || index > self.n {
            return Err(Error::Parse(format!(
                "variable `{name}` out of range for dimension {}",
                self.n
            )));
        }
        let slot = if second {
            super::Slot::Second(index - 1)
        } else {
            super::Slot::First(index - 1)
        };
        Ok(Poly::var(self.n, slot))
    }
}

fn parse<V: Vars>(s: &str, n: usize) -> Result<Poly<V>> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser::<V> {
        toks: &toks,
        pos: 0,
        n,
        _v: std::marker::PhantomData,
    };
    let out = p.expr()?;
    if p.pos != toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos + 1)));
    }
    Ok(out)
}

pub fn parse_poly_xy(s: &str, n: usize) -> Result<PolyXY> {
    parse(s, n)
}

pub fn parse_poly_z(s: &str, n: usize) -> Result<PolyZ> {
    parse(s, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Slot;

    #[test]
    fn parse_and_print() {
        let f = parse_poly_xy("2 * x1^2 * y1 - (1 + 0.5i) * y1 + 3", 1).unwrap();
        let x = PolyXY::var(1, Slot::First(0));
        let y = PolyXY::var(1, Slot::Second(0));
        let expected = &(&(&(&x * &x) * &y).scale(r(2.0)) - &y.scale(c(1.0, 0.5)))
            + &PolyXY::constant(1, r(3.0));
        assert_eq!(f, expected);
        let again = parse_poly_xy(&f.to_string(), 1).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn complex_variables() {
        let f = parse_poly_z("z1 * zb1 - 2i * zb2^2 + 1e-1", 2).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(parse_poly_z(&f.to_string(), 2).unwrap(), f);
        assert!(parse_poly_z("z3", 2).is_err());
        assert!(parse_poly_z("w1", 2).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = parse_poly_z("(1 - 2i) * z1^2 * zb1 + 4", 1).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        let terms: Vec<JsonTerm> = serde_json::from_str(&json).unwrap();
        assert_eq!(PolyZ::from_json_terms(1, &terms).unwrap(), f);
    }
}
