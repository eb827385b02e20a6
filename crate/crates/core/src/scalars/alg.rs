//! Elements of ℚ(i, √d): `a + b·i + c·√d + e·i·√d`.

use alloc::string::String;
use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use super::Rational;
use crate::error::Error;

/// An element of the quadratic-with-i extension ℚ(i, √d).
///
/// `d` is squarefree. Values without a radical part are normalized to `d = 1`,
/// so rationals and Gaussian rationals mix freely with any extension. Combining
/// two values carrying radicals of different `d` is an error.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgScalar {
    a: Rational,
    b: Rational,
    c: Rational,
    e: Rational,
    d: u32,
}

/// Splits `n > 0` into `(k, d)` with `n = k²·d` and `d` squarefree.
pub fn squarefree_split(n: u64) -> (u64, u32) {
    assert!(n > 0);
    let mut k = 1u64;
    let mut d = n;
    let mut p = 2u64;
    while p * p <= d {
        while d % (p * p) == 0 {
            d /= p * p;
            k *= p;
        }
        p += 1;
    }
    (k, d as u32)
}

impl AlgScalar {
    /// Builds `a + b i + c √d + e i √d`. Panics if `d` is zero or not squarefree.
    pub fn new(a: Rational, b: Rational, c: Rational, e: Rational, d: u32) -> Self {
        assert!(d > 0 && squarefree_split(d as u64).0 == 1, "d must be squarefree");
        let mut s = AlgScalar { a, b, c, e, d };
        s.normalize();
        s
    }

    pub fn rational(q: Rational) -> Self {
        AlgScalar { a: q, b: Rational::zero(), c: Rational::zero(), e: Rational::zero(), d: 1 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(Rational::from_integer(n))
    }

    pub fn frac(n: i64, m: i64) -> Self {
        Self::rational(Rational::new(n, m))
    }

    pub fn i() -> Self {
        Self::gaussian(Rational::zero(), Rational::one())
    }

    pub fn gaussian(a: Rational, b: Rational) -> Self {
        AlgScalar { a, b, c: Rational::zero(), e: Rational::zero(), d: 1 }
    }

    /// `√n` for a positive integer `n`.
    pub fn sqrt_int(n: u64) -> Self {
        let (k, d) = squarefree_split(n);
        let k = Rational::from_integer(k as i64);
        Self::new(Rational::zero(), Rational::zero(), k, Rational::zero(), d)
    }

    /// `(−r)^{m/2}` on the branch `√(−r) = i·√r` with `√r > 0`.
    pub fn neg_half_power(r: u64, m: i32) -> Self {
        let root = Self::i() * Self::sqrt_int(r);
        root.pow(m)
    }

    fn normalize(&mut self) {
        if self.d == 1 {
            let c = core::mem::take(&mut self.c);
            let e = core::mem::take(&mut self.e);
            self.a += c;
            self.b += e;
        } else if self.c.is_zero() && self.e.is_zero() {
            self.d = 1;
        }
    }

    pub fn re(&self) -> &Rational {
        &self.a
    }
    pub fn im(&self) -> &Rational {
        &self.b
    }
    pub fn radical_re(&self) -> &Rational {
        &self.c
    }
    pub fn radical_im(&self) -> &Rational {
        &self.e
    }
    /// The squarefree radicand (1 when there is no radical part).
    pub fn radicand(&self) -> u32 {
        self.d
    }

    pub fn components(&self) -> [&Rational; 4] {
        [&self.a, &self.b, &self.c, &self.e]
    }

    /// The value as a rational, if it is one.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.b.is_zero() && self.d == 1 {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    fn joint_d(&self, other: &Self) -> Result<u32, Error> {
        match (self.d, other.d) {
            (1, d) | (d, 1) => Ok(d),
            (x, y) if x == y => Ok(x),
            (x, y) => Err(Error::RadicalMismatch(x, y)),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, Error> {
        let d = self.joint_d(other)?;
        let mut s = AlgScalar {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            c: &self.c + &other.c,
            e: &self.e + &other.e,
            d,
        };
        s.normalize();
        Ok(s)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, Error> {
        if self.d == 1 && other.d == 1 {
            if self.b.is_zero() && other.b.is_zero() {
                return Ok(Self::rational(&self.a * &other.a));
            }
            return Ok(Self::gaussian(
                &self.a * &other.a - &self.b * &other.b,
                &self.a * &other.b + &self.b * &other.a,
            ));
        }
        let d = self.joint_d(other)?;
        let dq = Rational::from_integer(d as i64);
        let (a, b, c, e) = (&self.a, &self.b, &self.c, &self.e);
        let (a2, b2, c2, e2) = (&other.a, &other.b, &other.c, &other.e);
        let mut s = AlgScalar {
            a: a * a2 - b * b2 + &dq * &(c * c2 - e * e2),
            b: a * b2 + b * a2 + &dq * &(c * e2 + e * c2),
            c: a * c2 + c * a2 - b * e2 - e * b2,
            e: a * e2 + e * a2 + b * c2 + c * b2,
            d,
        };
        s.normalize();
        Ok(s)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // z = x + y√d with Gaussian x, y; 1/z = (x − y√d)/(x² − d y²).
        let x = Self::gaussian(self.a.clone(), self.b.clone());
        let y = Self::gaussian(self.c.clone(), self.e.clone());
        let dq = Self::from_int(self.d as i64);
        let g = &(&x * &x) - &(&dq * &(&y * &y));
        let n2 = &g.a * &g.a + &g.b * &g.b;
        let ginv = Self::gaussian(&g.a / &n2, -(&g.b / &n2));
        let conj = AlgScalar {
            a: self.a.clone(),
            b: self.b.clone(),
            c: -&self.c,
            e: -&self.e,
            d: self.d,
        };
        Some(&conj * &ginv)
    }

    pub fn pow(&self, m: i32) -> Self {
        if m < 0 {
            return self.inverse().expect("negative power of zero").pow(-m);
        }
        let mut acc = Self::one();
        for _ in 0..m {
            acc = &acc * self;
        }
        acc
    }

    /// Complex conjugate (i ↦ −i, √d fixed).
    pub fn conj(&self) -> Self {
        AlgScalar {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            e: -&self.e,
            d: self.d,
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        AlgScalar { a: &self.a * q, b: &self.b * q, c: &self.c * q, e: &self.e * q, d: self.d }
    }

    /// Parses `"p/q"` as a rational element.
    pub fn parse_rational(s: &str) -> Result<Self, Error> {
        Ok(Self::rational(s.parse()?))
    }

    /// Formats as text: a bare rational when possible, otherwise a parenthesized sum.
    pub fn to_text(&self) -> String {
        alloc::format!("{}", self)
    }
}

impl Zero for AlgScalar {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.e.is_zero()
    }
}

impl One for AlgScalar {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

impl Default for AlgScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for AlgScalar {
    fn from(q: Rational) -> Self {
        Self::rational(q)
    }
}

impl From<i64> for AlgScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl fmt::Display for AlgScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", q);
        }
        let mut parts: alloc::vec::Vec<String> = alloc::vec::Vec::new();
        let sq = alloc::format!("sqrt({})", self.d);
        for (q, unit) in [
            (&self.a, String::new()),
            (&self.b, String::from("i")),
            (&self.c, sq.clone()),
            (&self.e, alloc::format!("i*{}", sq)),
        ] {
            if q.is_zero() {
                continue;
            }
            if unit.is_empty() {
                parts.push(alloc::format!("{}", q));
            } else if q.is_one() {
                parts.push(unit);
            } else if *q == -Rational::one() {
                parts.push(alloc::format!("-{}", unit));
            } else {
                parts.push(alloc::format!("{}*{}", q, unit));
            }
        }
        let mut out = String::new();
        for (k, p) in parts.iter().enumerate() {
            if k == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        if parts.len() > 1 {
            write!(f, "({})", out)
        } else {
            write!(f, "{}", out)
        }
    }
}

impl fmt::Debug for AlgScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a AlgScalar> for &'a AlgScalar {
    type Output = AlgScalar;
    fn add(self, rhs: &'a AlgScalar) -> AlgScalar {
        self.try_add(rhs).expect("incompatible quadratic extensions")
    }
}

impl<'a> Sub<&'a AlgScalar> for &'a AlgScalar {
    type Output = AlgScalar;
    fn sub(self, rhs: &'a AlgScalar) -> AlgScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a AlgScalar> for &'a AlgScalar {
    type Output = AlgScalar;
    fn mul(self, rhs: &'a AlgScalar) -> AlgScalar {
        self.try_mul(rhs).expect("incompatible quadratic extensions")
    }
}

impl<'a> Div<&'a AlgScalar> for &'a AlgScalar {
    type Output = AlgScalar;
    fn div(self, rhs: &'a AlgScalar) -> AlgScalar {
        self * &rhs.inverse().expect("division by zero")
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<AlgScalar> for AlgScalar {
            type Output = AlgScalar;
            fn $m(self, rhs: AlgScalar) -> AlgScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a AlgScalar> for AlgScalar {
            type Output = AlgScalar;
            fn $m(self, rhs: &'a AlgScalar) -> AlgScalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<AlgScalar> for &'a AlgScalar {
            type Output = AlgScalar;
            fn $m(self, rhs: AlgScalar) -> AlgScalar {
                self.$m(&rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for &AlgScalar {
    type Output = AlgScalar;
    fn neg(self) -> AlgScalar {
        AlgScalar { a: -&self.a, b: -&self.b, c: -&self.c, e: -&self.e, d: self.d }
    }
}

impl Neg for AlgScalar {
    type Output = AlgScalar;
    fn neg(self) -> AlgScalar {
        -&self
    }
}

impl AddAssign<&AlgScalar> for AlgScalar {
    fn add_assign(&mut self, rhs: &AlgScalar) {
        if rhs.d == 1 && self.d == 1 {
            self.a += &rhs.a;
            self.b += &rhs.b;
            return;
        }
        *self = &*self + rhs;
    }
}

impl AddAssign for AlgScalar {
    fn add_assign(&mut self, rhs: AlgScalar) {
        *self += &rhs;
    }
}

impl SubAssign<&AlgScalar> for AlgScalar {
    fn sub_assign(&mut self, rhs: &AlgScalar) {
        *self += &(-rhs);
    }
}

impl MulAssign<&AlgScalar> for AlgScalar {
    fn mul_assign(&mut self, rhs: &AlgScalar) {
        *self = &*self * rhs;
    }
}

impl Sum for AlgScalar {
    fn sum<I: Iterator<Item = AlgScalar>>(iter: I) -> Self {
        iter.fold(AlgScalar::zero(), |a, b| a + b)
    }
}
