//! Bernoulli data, Stirling-type numbers and the coefficient functions `s_l(t)`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::Rational;
use crate::error::Error;

/// Bernoulli numbers `B_0..=B_l` with `B_1 = −1/2`.
pub fn bernoulli_numbers(l: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(l + 1);
    b.push(Rational::one());
    for m in 1..=l {
        let s: Rational = (0..m)
            .map(|k| Rational::binomial(m as i64 + 1, k as u32) * &b[k])
            .sum();
        b.push(-s / Rational::from_integer(m as i64 + 1));
    }
    b
}

pub fn bernoulli_number(l: usize) -> Rational {
    bernoulli_numbers(l).pop().unwrap()
}

/// Coefficients of `B_l(x)` in increasing powers of `x`.
pub fn bernoulli_poly_coeffs(l: usize) -> Vec<Rational> {
    let b = bernoulli_numbers(l);
    (0..=l)
        .map(|p| Rational::binomial(l as i64, (l - p) as u32) * &b[l - p])
        .collect()
}

pub fn bernoulli_poly(l: usize, x: &Rational) -> Rational {
    // Horner in x.
    bernoulli_poly_coeffs(l)
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}

/// `γ(l, k)`: coefficient of `z^l/l!` in `(e^z − 1)^k / k!`.
pub fn stirling_gamma(l: usize, k: usize) -> Rational {
    if k > l {
        return Rational::zero();
    }
    let mut row = vec![Rational::zero(); k + 1];
    row[0] = Rational::one();
    for _ in 0..l {
        for j in (0..=k).rev() {
            let mut v = &row[j] * &Rational::from_integer(j as i64);
            if j > 0 {
                v += &row[j - 1];
            }
            row[j] = v;
        }
    }
    row[k].clone()
}

/// `s_l(t)` as a polynomial in `τ = t/(1−t)`; `l = 0` is the logarithmic case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SCoeffRep {
    pub l: usize,
    /// Coefficient of `τ^k` at index `k`; empty when `logarithmic`.
    pub tau: Vec<Rational>,
    /// `s_0(t) = −ln(1 − t)`, kept symbolic.
    pub logarithmic: bool,
}

pub fn s_coefficient(l: usize) -> SCoeffRep {
    if l == 0 {
        return SCoeffRep { l, tau: Vec::new(), logarithmic: true };
    }
    let mut tau = vec![Rational::zero(); l + 1];
    tau[0] = bernoulli_number(l) / Rational::from_integer(l as i64);
    let sign = if l % 2 == 0 { Rational::one() } else { -Rational::one() };
    for (k, slot) in tau.iter_mut().enumerate().skip(1) {
        *slot = &sign * &Rational::factorial(k as u32 - 1) * stirling_gamma(l, k);
    }
    SCoeffRep { l, tau, logarithmic: false }
}

impl SCoeffRep {
    pub fn evaluate(&self, t: &Rational) -> Result<Rational, Error> {
        if self.logarithmic {
            return Err(Error::Unsupported("s_0 is logarithmic".into()));
        }
        if t.is_one() {
            return Err(Error::Precondition("s_l has a pole at t = 1".into()));
        }
        let tau = t / &(Rational::one() - t);
        Ok(self.tau.iter().rev().fold(Rational::zero(), |acc, c| acc * &tau + c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    /// Power series in t whose coefficients are polynomials in x (index = power of x).
    type XSeries = Vec<Vec<Rational>>;

    fn poly_add(a: &mut Vec<Rational>, b: &[Rational], s: &Rational) {
        if a.len() < b.len() {
            a.resize(b.len(), Rational::zero());
        }
        for (i, c) in b.iter().enumerate() {
            a[i] += c * s;
        }
    }

    /// Oracle: t·e^{xt}/(e^t − 1) = e^{xt} / ((e^t − 1)/t), by series division.
    fn bernoulli_series(order: usize) -> XSeries {
        let num: XSeries = (0..=order)
            .map(|n| {
                let mut p = vec![Rational::zero(); n + 1];
                p[n] = Rational::factorial(n as u32).recip();
                p
            })
            .collect();
        let den: Vec<Rational> = (0..=order).map(|n| Rational::factorial(n as u32 + 1).recip()).collect();
        let mut out: XSeries = Vec::new();
        for n in 0..=order {
            let mut c = num[n].clone();
            for k in 1..=n {
                let prev = out[n - k].clone();
                poly_add(&mut c, &prev, &-den[k].clone());
            }
            out.push(c);
        }
        out
    }

    #[test]
    fn small_bernoulli_numbers() {
        assert_eq!(bernoulli_number(0), q(1, 1));
        assert_eq!(bernoulli_number(1), q(-1, 2));
        assert_eq!(bernoulli_number(2), q(1, 6));
        assert_eq!(bernoulli_number(12), q(-691, 2730));
    }

    #[test]
    fn odd_bernoulli_vanish() {
        let b = bernoulli_numbers(21);
        for k in 1..=10 {
            assert!(b[2 * k + 1].is_zero(), "B_{}", 2 * k + 1);
        }
    }

    #[test]
    fn bernoulli_polys_match_generating_series() {
        let s = bernoulli_series(12);
        for (l, coeffs) in s.iter().enumerate() {
            let mut expected: Vec<Rational> =
                coeffs.iter().map(|c| c * &Rational::factorial(l as u32)).collect();
            expected.resize(l + 1, Rational::zero());
            assert_eq!(bernoulli_poly_coeffs(l), expected, "l = {}", l);
        }
        assert_eq!(bernoulli_poly(1, &q(0, 1)), q(-1, 2));
        assert_eq!(bernoulli_poly(2, &q(1, 2)), q(-1, 12));
        assert_eq!(bernoulli_poly(0, &q(17, 5)), q(1, 1));
    }

    #[test]
    fn gamma_matches_generating_series() {
        // Oracle: expand (e^z − 1)^k / k! directly.
        let order = 10;
        let base: Vec<Rational> = (0..=order)
            .map(|n| if n == 0 { Rational::zero() } else { Rational::factorial(n as u32).recip() })
            .collect();
        let mut power = vec![Rational::zero(); order + 1];
        power[0] = Rational::one();
        for k in 0..=order {
            for l in 0..=order {
                let expect = &power[l] * &Rational::factorial(l as u32) / Rational::factorial(k as u32);
                assert_eq!(stirling_gamma(l, k), expect, "γ({}, {})", l, k);
            }
            let mut next = vec![Rational::zero(); order + 1];
            for i in 0..=order {
                for j in 0..=order - i {
                    next[i + j] += &power[i] * &base[j];
                }
            }
            power = next;
        }
        assert_eq!(stirling_gamma(3, 5), q(0, 1));
        assert_eq!(stirling_gamma(2, 1), q(1, 1));
    }

    #[test]
    fn gamma_recurrence() {
        for l in 0..10 {
            for k in 1..=l + 1 {
                assert_eq!(
                    stirling_gamma(l + 1, k),
                    Rational::from_integer(k as i64) * stirling_gamma(l, k) + stirling_gamma(l, k - 1)
                );
            }
        }
    }

    #[test]
    fn s_values() {
        let s1 = s_coefficient(1);
        assert_eq!(s1.evaluate(&q(0, 1)).unwrap(), q(-1, 2));
        assert_eq!(s1.evaluate(&q(1, 2)).unwrap(), q(-3, 2));
        // Direct formula at τ = 0 leaves B_2 / 2.
        assert_eq!(s_coefficient(2).evaluate(&q(0, 1)).unwrap(), q(1, 12));
        assert!(s1.evaluate(&q(1, 1)).is_err());
        assert!(s_coefficient(0).logarithmic);
        for l in 1..8 {
            assert!(s_coefficient(l).tau.len() <= l + 1);
        }
    }

    #[test]
    fn s_closed_form_l1() {
        for (n, d) in [(1, 3), (-2, 7), (5, 4)] {
            let t = q(n, d);
            let expect = q(-1, 2) - &t / &(Rational::one() - &t);
            assert_eq!(s_coefficient(1).evaluate(&t).unwrap(), expect);
        }
    }
}
