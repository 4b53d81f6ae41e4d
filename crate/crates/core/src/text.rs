//! Plain-text polynomial format.
//!
//! ```text
//! ring F2[X0,Y0,X1,Y1] weights [1,1,2,2]
//! X0^2*Y1 + X1
//! ```
//!
//! The header declares field, variables and optional weights; each further
//! non-empty line holds one polynomial. Lines starting with `#` are ignored.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{CoefficientField, Field, PrimeField, Rationals};
use crate::monomial::{Exp, Monomial};
use crate::poly::Polynomial;
use crate::ring::{Ring, RingRef, Weight};

pub trait FieldFromDescriptor: Field + Sized {
    fn from_descriptor(d: CoefficientField) -> Result<Self>;
}

impl FieldFromDescriptor for PrimeField {
    fn from_descriptor(d: CoefficientField) -> Result<Self> {
        match d {
            CoefficientField::Prime(p) => PrimeField::new(p),
            CoefficientField::Rationals => {
                Err(Error::Parse("expected a prime field, found Q".into()))
            }
        }
    }
}

impl FieldFromDescriptor for Rationals {
    fn from_descriptor(d: CoefficientField) -> Result<Self> {
        match d {
            CoefficientField::Rationals => Ok(Rationals),
            CoefficientField::Prime(p) => Err(Error::Parse(format!("expected Q, found F{p}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingHeader {
    pub field: CoefficientField,
    pub names: Vec<String>,
    pub weights: Vec<Weight>,
}

fn parse_weight(s: &str) -> Result<Weight> {
    let bad = || Error::Parse(format!("bad weight {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: u64 = n.trim().parse().map_err(|_| bad())?;
            let d: u64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Weight::new(n, d))
        }
        None => Ok(Weight::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn bracketed(s: &str) -> Result<(&str, &str)> {
    let s = s.trim_start();
    let rest = s
        .strip_prefix('[')
        .ok_or_else(|| Error::Parse(format!("expected '[' in {s:?}")))?;
    let end = rest
        .find(']')
        .ok_or_else(|| Error::Parse("unclosed '['".into()))?;
    Ok((&rest[..end], &rest[end + 1..]))
}

pub fn parse_header(line: &str) -> Result<RingHeader> {
    let rest = line
        .trim()
        .strip_prefix("ring")
        .ok_or_else(|| Error::Parse("header must start with 'ring'".into()))?
        .trim_start();
    let open = rest
        .find('[')
        .ok_or_else(|| Error::Parse("missing variable list".into()))?;
    let field = match rest[..open].trim() {
        "Q" => CoefficientField::Rationals,
        f => {
            let p = f
                .strip_prefix('F')
                .and_then(|p| p.parse::<u32>().ok())
                .ok_or_else(|| Error::Parse(format!("unknown field {f:?}")))?;
            PrimeField::new(p)?;
            CoefficientField::Prime(p)
        }
    };
    let (vars, tail) = bracketed(&rest[open..])?;
    let names: Vec<String> = if vars.trim().is_empty() {
        Vec::new()
    } else {
        vars.split(',').map(|v| v.trim().to_string()).collect()
    };
    let tail = tail.trim();
    let weights = if tail.is_empty() {
        vec![Weight::from_integer(1); names.len()]
    } else {
        let w = tail
            .strip_prefix("weights")
            .ok_or_else(|| Error::Parse(format!("unexpected {tail:?} after variables")))?;
        let (ws, after) = bracketed(w)?;
        if !after.trim().is_empty() {
            return Err(Error::Parse(format!("trailing text {after:?}")));
        }
        let ws: Vec<Weight> = if ws.trim().is_empty() {
            Vec::new()
        } else {
            ws.split(',').map(parse_weight).collect::<Result<_>>()?
        };
        if ws.len() != names.len() {
            return Err(Error::Parse(
                "weight count differs from variable count".into(),
            ));
        }
        ws
    };
    Ok(RingHeader {
        field,
        names,
        weights,
    })
}

pub fn ring_from_header<F: FieldFromDescriptor>(h: &RingHeader) -> Result<RingRef<F>> {
    Ring::with_weights(F::from_descriptor(h.field)?, &h.names, h.weights.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(cs[st..i].iter().collect()));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*^()/".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    ring: &'a RingRef<F>,
    toks: Vec<Tok>,
    pos: usize,
}

impl<F: Field> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial<F>> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<F>> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial<F>> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent {n}")))?;
                    base.try_pow(e)
                }
                _ => Err(Error::Parse("expected exponent after '^'".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial<F>> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut lit = n;
                if self.eat('/') {
                    match self.toks.get(self.pos).cloned() {
                        Some(Tok::Num(d)) => {
                            self.pos += 1;
                            lit = format!("{lit}/{d}");
                        }
                        _ => return Err(Error::Parse("expected denominator".into())),
                    }
                }
                Ok(Polynomial::constant(
                    self.ring,
                    self.ring.field().parse_literal(&lit)?,
                ))
            }
            Some(Tok::Ident(v)) => {
                self.pos += 1;
                Polynomial::var_named(self.ring, &v)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("expected ')'".into()));
                }
                Ok(e)
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }
}

pub fn parse_poly<F: Field>(ring: &RingRef<F>, s: &str) -> Result<Polynomial<F>> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { ring, toks, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(out)
}

pub fn format_monomial<F: Field>(ring: &Ring<F>, m: &Monomial) -> String {
    let parts: Vec<String> = m
        .exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                ring.name(i).to_string()
            } else {
                format!("{}^{e}", ring.name(i))
            }
        })
        .collect();
    parts.join("*")
}

pub fn format_poly<F: Field>(p: &Polynomial<F>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let k = p.field();
    let mut s = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let (neg, abs) = k.signed_parts(c);
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        if m.is_one() {
            s.push_str(&abs);
        } else {
            if abs != "1" {
                s.push_str(&abs);
                s.push('*');
            }
            s.push_str(&format_monomial(p.ring(), m));
        }
    }
    s
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self))
    }
}

/// A ring header plus a list of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFile<F: Field> {
    pub ring: RingRef<F>,
    pub polys: Vec<Polynomial<F>>,
}

impl<F: FieldFromDescriptor> PolyFile<F> {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing ring header".into()))?;
        let ring = ring_from_header::<F>(&parse_header(header)?)?;
        let polys = lines.map(|l| parse_poly(&ring, l)).collect::<Result<_>>()?;
        Ok(PolyFile { ring, polys })
    }
}

impl<F: Field> PolyFile<F> {
    pub fn new(ring: RingRef<F>, polys: Vec<Polynomial<F>>) -> Self {
        PolyFile { ring, polys }
    }

    pub fn render(&self) -> String {
        let mut s = self.ring.header();
        s.push('\n');
        for p in &self.polys {
            s.push_str(&format_poly(p));
            s.push('\n');
        }
        s
    }
}

/// Exponent vector of a single monomial expression like `X^2*Y`.
pub fn parse_monomial<F: Field>(ring: &RingRef<F>, s: &str) -> Result<Vec<Exp>> {
    let p = parse_poly(ring, s)?;
    match p.terms() {
        [(m, c)] if ring.field().is_one(c) => Ok(m.exps().to_vec()),
        _ => Err(Error::Parse(format!("{s:?} is not a monomial"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_round_trip() {
        let line = "ring F2[X0,Y0,X1,Y1] weights [1,1,2,2]";
        let h = parse_header(line).unwrap();
        let r = ring_from_header::<PrimeField>(&h).unwrap();
        assert_eq!(r.header(), line);
        assert_eq!(
            parse_header("ring Q[x,y]").unwrap().field,
            CoefficientField::Rationals
        );
        assert!(parse_header("ring F4[x]").is_err());
    }

    #[test]
    fn poly_round_trip() {
        let r = Ring::new(PrimeField::new(5).unwrap(), &["X", "Y", "Z"]).unwrap();
        let p = parse_poly(&r, "3*X^2*Y - (Y + 2)^2 + 1/2*Z").unwrap();
        let s = format_poly(&p);
        assert_eq!(parse_poly(&r, &s).unwrap(), p);
        assert_eq!(format_poly(&parse_poly(&r, &s).unwrap()), s);
        assert_eq!(format_poly(&Polynomial::zero(&r)), "0");
    }

    #[test]
    fn rational_coefficients() {
        let r = Ring::new(Rationals, &["x"]).unwrap();
        let p = parse_poly(&r, "-3/4*x^2 + 2").unwrap();
        assert_eq!(format_poly(&p), "-3/4*x^2 + 2");
    }

    #[test]
    fn file_round_trip() {
        let text = "ring F3[a,b] weights [1/3,1]\n# comment\na^3 + b\n\nb^2\n";
        let f = PolyFile::<PrimeField>::parse(text).unwrap();
        assert_eq!(f.polys.len(), 2);
        let again = PolyFile::<PrimeField>::parse(&f.render()).unwrap();
        assert_eq!(again, f);
        assert_eq!(again.render(), f.render());
    }

    #[test]
    fn rejects_garbage() {
        let r = Ring::new(PrimeField::new(2).unwrap(), &["X"]).unwrap();
        assert!(parse_poly(&r, "X +").is_err());
        assert!(parse_poly(&r, "W").is_err());
        assert!(parse_poly(&r, "X $").is_err());
        assert!(parse_poly(&r, "(X").is_err());
    }
}
