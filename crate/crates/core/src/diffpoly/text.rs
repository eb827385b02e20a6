//! Plain-text and LaTeX rendering, and a small expression parser.
//!
//! Text syntax: `1/2*u1^2*u2 - 1/48*eps^2*u2_2 + (1/2 + i*sqrt(3))*u1_4`.
//! A variable is a prefix, an optional field index and an optional `_order`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{DiffPoly, JetVar, Monomial};
use crate::error::Error;
use crate::scalars::{AlgScalar, Rational};

/// How field variables are named in text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarNames {
    pub prefix: String,
    /// Index printed for the zero-based field 0.
    pub base: u16,
    pub n: usize,
}

impl VarNames {
    /// `u^1..u^n` (one-based).
    pub fn u(n: usize) -> Self {
        VarNames { prefix: "u".into(), base: 1, n }
    }
    /// `w^1..w^n` (one-based).
    pub fn w(n: usize) -> Self {
        VarNames { prefix: "w".into(), base: 1, n }
    }
    /// `f_0..f_{n−1}` (zero-based).
    pub fn f(n: usize) -> Self {
        VarNames { prefix: "f".into(), base: 0, n }
    }

    fn show_index(&self) -> bool {
        self.n > 1 || self.base == 0
    }

    fn text_var(&self, v: JetVar) -> String {
        let mut s = self.prefix.clone();
        if self.show_index() {
            s.push_str(&(v.field + self.base).to_string());
        }
        if v.order > 0 {
            s.push('_');
            s.push_str(&v.order.to_string());
        }
        s
    }

    fn latex_var(&self, v: JetVar) -> String {
        let mut s = self.prefix.clone();
        if self.base == 0 {
            // f_{i} with derivatives as primes-free subscripts: f_{i,k}
            if v.order > 0 {
                s.push_str(&format!("_{{{},{}}}", v.field, v.order));
            } else {
                s.push_str(&format!("_{{{}}}", v.field));
            }
            return s;
        }
        if self.show_index() {
            s.push_str(&format!("^{{{}}}", v.field + self.base));
        }
        if v.order > 0 {
            s.push_str(&format!("_{{{}}}", v.order));
        }
        s
    }
}

fn join_signed(parts: Vec<(bool, String)>) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (neg, body)) in parts.into_iter().enumerate() {
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

/// Splits a coefficient into (is_negative, magnitude) when rational.
fn sign_split(c: &AlgScalar) -> (bool, AlgScalar) {
    match c.as_rational() {
        Some(q) if q.is_negative() => (true, -c),
        _ => (false, c.clone()),
    }
}

pub fn render_text(p: &DiffPoly, names: &VarNames) -> String {
    let parts = p
        .terms()
        .map(|(m, c)| {
            let (neg, mag) = sign_split(c);
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_constant() && m.eps == 0 {
                factors.push(mag.to_text());
            }
            if m.eps > 0 {
                factors.push(if m.eps == 1 { "eps".into() } else { format!("eps^{}", m.eps) });
            }
            for (v, pw) in m.vars() {
                let name = names.text_var(*v);
                factors.push(if *pw == 1 { name } else { format!("{}^{}", name, pw) });
            }
            (neg, factors.join("*"))
        })
        .collect();
    join_signed(parts)
}

fn latex_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", q.numer(), q.denom())
    }
}

fn latex_scalar(c: &AlgScalar) -> String {
    if let Some(q) = c.as_rational() {
        return latex_rational(q);
    }
    let sq = format!("\\sqrt{{{}}}", c.radicand());
    let units = [String::new(), "i".into(), sq.clone(), format!("i{}", sq)];
    let parts = c
        .components()
        .iter()
        .zip(units.iter())
        .filter(|(q, _)| !q.is_zero())
        .map(|(q, u)| {
            let neg = q.is_negative();
            let mag = q.abs();
            let body = if u.is_empty() {
                latex_rational(&mag)
            } else if mag.is_one() {
                u.clone()
            } else {
                format!("{}{}", latex_rational(&mag), u)
            };
            (neg, body)
        })
        .collect();
    format!("\\left({}\\right)", join_signed(parts))
}

pub fn render_latex(p: &DiffPoly, names: &VarNames) -> String {
    let parts = p
        .terms()
        .map(|(m, c)| {
            let (neg, mag) = sign_split(c);
            let mut s = String::new();
            if !mag.is_one() || m.is_constant() && m.eps == 0 {
                s.push_str(&latex_scalar(&mag));
            }
            if m.eps > 0 {
                if !s.is_empty() {
                    s.push(' ');
                }
                s.push_str("\\varepsilon");
                if m.eps > 1 {
                    s.push_str(&format!("^{{{}}}", m.eps));
                }
            }
            for (v, pw) in m.vars() {
                if !s.is_empty() {
                    s.push(' ');
                }
                let name = names.latex_var(*v);
                if *pw == 1 {
                    s.push_str(&name);
                } else {
                    s.push_str(&format!("\\left({}\\right)^{{{}}}", name, pw));
                }
            }
            (neg, s)
        })
        .collect();
    join_signed(parts)
}

struct Parser<'s> {
    src: &'s [u8],
    pos: usize,
    names: &'s VarNames,
}

impl<'s> Parser<'s> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{} at byte {}", msg, self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        core::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("expected integer"))
    }

    fn expr(&mut self) -> Result<DiffPoly, Error> {
        let n = self.names.n;
        let mut acc = DiffPoly::zero(n);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            if sign < 0 {
                acc -= &t;
            } else {
                acc += t;
            }
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<DiffPoly, Error> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let f = self.power()?;
                    if f.len() != 1 || !f.terms().next().unwrap().0.is_constant() || f.terms().next().unwrap().0.eps != 0 {
                        return Err(self.err("division only by scalars"));
                    }
                    let inv = f.constant_term().inverse().ok_or_else(|| self.err("division by zero"))?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<DiffPoly, Error> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.number()?;
            return Ok(base.pow(k as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<DiffPoly, Error> {
        let n = self.names.n;
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.number()?;
                Ok(DiffPoly::constant(n, AlgScalar::from_int(v as i64)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let word = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match word {
                    "eps" => Ok(DiffPoly::eps_power(n, 1)),
                    "i" => Ok(DiffPoly::constant(n, AlgScalar::i())),
                    "sqrt" => {
                        if self.peek() != Some(b'(') {
                            return Err(self.err("expected '(' after sqrt"));
                        }
                        self.pos += 1;
                        let k = self.number()?;
                        if self.peek() != Some(b')') || k == 0 {
                            return Err(self.err("bad sqrt argument"));
                        }
                        self.pos += 1;
                        Ok(DiffPoly::constant(n, AlgScalar::sqrt_int(k)))
                    }
                    w if w == self.names.prefix => self.variable(),
                    _ => Err(self.err(&format!("unknown symbol {:?}", word))),
                }
            }
            Some(c) => Err(self.err(&format!("unexpected character {:?}", c as char))),
        }
    }

    fn variable(&mut self) -> Result<DiffPoly, Error> {
        let n = self.names.n;
        let has_digit = self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit());
        let field = if has_digit {
            let k = self.number()? as i64 - self.names.base as i64;
            if k < 0 || k as usize >= n {
                return Err(self.err("field index out of range"));
            }
            k as u16
        } else if self.names.show_index() {
            return Err(self.err("missing field index"));
        } else {
            0
        };
        let mut order = 0;
        if self.src.get(self.pos) == Some(&b'_') {
            self.pos += 1;
            order = self.number()? as u16;
        }
        Ok(DiffPoly::term(n, Monomial::var(JetVar::new(field, order)), AlgScalar::one()))
    }
}

/// Parses a text expression into a differential polynomial.
pub fn parse_diffpoly(s: &str, names: &VarNames) -> Result<DiffPoly, Error> {
    let mut p = Parser { src: s.as_bytes(), pos: 0, names };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(out.with_n(names.n))
}
