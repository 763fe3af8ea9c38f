//! Human-readable printing and parsing of polynomials and scalars.
//!
//! Powers of `v` are shown as powers of `q = v^2` whenever every `v`
//! exponent of the printed object is even.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::poly::{Mono, Poly, Var};
use super::{Scalar, ScalarError};

fn format_mono(m: &Mono, in_q: bool) -> String {
    let mut parts = Vec::new();
    for v in Var::ALL {
        let e = m.exp(v);
        if e == 0 {
            continue;
        }
        let (name, e) = if v == Var::V && in_q { ("q", e / 2) } else { (v.name(), e) };
        if e == 1 {
            parts.push(name.to_string());
        } else if e < 0 {
            parts.push(format!("{name}^({e})"));
        } else {
            parts.push(format!("{name}^{e}"));
        }
    }
    parts.join("*")
}

fn format_terms(p: &Poly, in_q: bool) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let ms = format_mono(m, in_q);
        if ms.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&ms);
        } else {
            out.push_str(&format!("{mag}*{ms}"));
        }
    }
    out
}

fn v_exponents_even(p: &Poly) -> bool {
    p.terms().iter().all(|(m, _)| m.exp(Var::V) % 2 == 0)
}

pub fn format_poly(p: &Poly, in_q: bool) -> String {
    format_terms(p, in_q && v_exponents_even(p))
}

pub fn format_scalar(s: &Scalar) -> String {
    let in_q = v_exponents_even(s.num()) && v_exponents_even(s.den());
    let num = format_terms(s.num(), in_q);
    if s.den().is_one() {
        return num;
    }
    let den = format_terms(s.den(), in_q);
    let num = if s.num().len() > 1 { format!("({num})") } else { num };
    let den_simple = s.den().is_constant()
        || (s.den().len() == 1
            && s.den().terms()[0].1.is_one()
            && s.den().terms()[0].0 .0.iter().filter(|&&e| e != 0).count() == 1);
    let den = if den_simple { den } else { format!("({den})") };
    format!("{num}/{den}")
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, ScalarError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = chars[st..i].iter().collect();
            out.push(Tok::Num(txt.parse().unwrap()));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(chars[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(ScalarError::Parse(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

/// Parsed exponent: numerator over denominator (1 or 2).
struct Exp {
    num: i64,
    den: i64,
}

impl Parser {
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

    fn expect(&mut self, c: char) -> Result<(), ScalarError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ScalarError::Parse(format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
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

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                acc = acc.div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, ScalarError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar, ScalarError> {
        let (base, is_q) = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        if e.den == 1 {
            return base.powi(e.num);
        }
        if is_q && e.den == 2 {
            return Ok(Scalar::v_pow(e.num as i32));
        }
        Err(ScalarError::Parse("fractional exponent is only allowed on q".into()))
    }

    fn exponent(&mut self) -> Result<Exp, ScalarError> {
        if self.eat('(') {
            let neg = self.eat('-');
            let num = self.integer()?;
            let den = if self.eat('/') { self.integer()? } else { 1 };
            self.expect(')')?;
            let num = if neg { -num } else { num };
            if den != 1 && den != 2 {
                return Err(ScalarError::Parse("exponent denominator must be 1 or 2".into()));
            }
            if den == 2 && num % 2 == 0 {
                return Ok(Exp { num: num / 2, den: 1 });
            }
            return Ok(Exp { num, den });
        }
        let neg = self.eat('-');
        let num = self.integer()?;
        Ok(Exp { num: if neg { -num } else { num }, den: 1 })
    }

    fn integer(&mut self) -> Result<i64, ScalarError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                i64::try_from(n).map_err(|_| ScalarError::Parse("exponent too large".into()))
            }
            _ => Err(ScalarError::Parse("expected integer".into())),
        }
    }

    fn atom(&mut self) -> Result<(Scalar, bool), ScalarError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok((Scalar::from_int(n), false))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                let s = match id.as_str() {
                    "q" => return Ok((Scalar::q(), true)),
                    "v" => Scalar::var(Var::V),
                    "z" => Scalar::var(Var::Z),
                    "x" => Scalar::var(Var::X),
                    "y" => Scalar::var(Var::Y),
                    "u1" => Scalar::var(Var::U1),
                    "u3" => Scalar::var(Var::U3),
                    "u4" => Scalar::var(Var::U4),
                    "u2" => Scalar::generic_u2(),
                    "r" => Scalar::r(),
                    _ => return Err(ScalarError::Parse(format!("unknown symbol '{id}'"))),
                };
                Ok((s, false))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok((e, false))
            }
            other => Err(ScalarError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse_scalar(s: &str) -> Result<Scalar, ScalarError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(ScalarError::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ScalarError::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}

/// Parses an expression that must reduce to a Laurent polynomial.
pub fn parse_poly(s: &str) -> Result<Poly, ScalarError> {
    let sc = parse_scalar(s)?;
    if !sc.den().is_monomial() {
        return Err(ScalarError::Parse(format!("'{s}' is not a polynomial")));
    }
    let (m, c) = sc.den().terms()[0].clone();
    if !c.is_one() && !(-c.clone()).is_one() {
        return Err(ScalarError::Parse(format!("'{s}' has a rational coefficient")));
    }
    let inv = Mono::one().div(&m);
    let p = sc.num().shift(&inv);
    Ok(if c.is_negative() { p.neg() } else { p })
}
