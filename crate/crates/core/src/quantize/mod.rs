//! Truncated Weyl algebra in the modes `p^α_k`, `|k| ≤ M`, with the normal-ordered
//! star product for the standard and the deformed commutation relations, and the
//! isomorphisms induced by linear constant-coefficient Miura maps.

#[cfg(test)]
mod tests;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::diffpoly::{PMonomial, PSeries};
use crate::error::Error;
use crate::gdhier::GDContext;
use crate::hamops::HamiltonianOperator;
use crate::scalars::{AlgScalar, Rational};

/// One commutator constant: `ħ^hbar ε^eps c`.
pub type Contraction = (u16, u16, AlgScalar);

/// Commutation relations of the modes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommRule {
    /// `[p^α_k, p^β_j] = iħ k η^{αβ} δ_{k+j,0}`.
    Standard(Vec<Vec<AlgScalar>>),
    /// `[p̃^α_m, p̃^β_n] = ħ δ_{m+n,0} Σ_j ε^j (im)^{j+1} K^{αβ}_j`; entry `[α][β]` lists `(j, K^{αβ}_j)`.
    Deformed(Vec<Vec<Vec<(u16, AlgScalar)>>>),
}

impl CommRule {
    pub fn standard(eta_inv: Vec<Vec<AlgScalar>>) -> Self {
        CommRule::Standard(eta_inv)
    }

    /// Deformed rule from an operator `Σ_j K_j ε^j ∂_x^{j+1}` with constant `K_j`.
    pub fn from_operator(k: &HamiltonianOperator) -> Result<Self, Error> {
        let n = k.n_fields();
        let mut consts = vec![vec![Vec::new(); n]; n];
        for (a, row) in consts.iter_mut().enumerate() {
            for (b, slot) in row.iter_mut().enumerate() {
                for (ord, c) in k.get(a, b).coeffs() {
                    for (m, v) in c.terms() {
                        if !m.is_constant() || ord == 0 || m.eps + 1 != ord {
                            return Err(Error::Precondition(format!(
                                "entry ({}, {}) is not of the form Σ K_j ε^j ∂^(j+1) with constant K_j",
                                a + 1,
                                b + 1
                            )));
                        }
                        slot.push((m.eps, v.clone()));
                    }
                }
            }
        }
        Ok(CommRule::Deformed(consts))
    }

    /// The deformed rule of the r-spin operator.
    pub fn deformed(r: u32) -> Result<Self, Error> {
        let ctx = GDContext::new(r)?;
        Self::from_operator(ctx.rspin_operator()?)
    }

    pub fn n_fields(&self) -> usize {
        match self {
            CommRule::Standard(e) => e.len(),
            CommRule::Deformed(c) => c.len(),
        }
    }

    /// `[p^α_k, p^β_{−k}]` as a polynomial in `ħ, ε`.
    pub fn contraction(&self, alpha: usize, beta: usize, k: i32) -> Vec<Contraction> {
        let ik = AlgScalar::i() * AlgScalar::from_int(k as i64);
        match self {
            CommRule::Standard(eta) => {
                if eta[alpha][beta].is_zero() {
                    vec![]
                } else {
                    vec![(1, 0, &ik * &eta[alpha][beta])]
                }
            }
            CommRule::Deformed(c) => c[alpha][beta]
                .iter()
                .filter(|(_, v)| !v.is_zero() && k != 0)
                .map(|(j, v)| (1, *j, &ik.pow(*j as i32 + 1) * v))
                .collect(),
        }
    }
}

/// Key of a normal-ordered term: the commuting monomial (with `ε`) and the power of `ħ`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WKey {
    pub hbar: u16,
    pub mono: PMonomial,
}

/// An element of the Weyl algebra in normal form: every `p_{≤0}` to the left of every `p_{>0}`.
///
/// Modes `≤ 0` commute among themselves, as do modes `> 0`, so a normal-ordered
/// monomial is determined by its multiset of variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylElement {
    pub n: usize,
    pub window: i32,
    terms: BTreeMap<WKey, AlgScalar>,
}

impl WeylElement {
    pub fn zero(n: usize, window: i32) -> Self {
        WeylElement { n, window, terms: BTreeMap::new() }
    }

    pub fn scalar(n: usize, window: i32, c: AlgScalar) -> Self {
        let mut w = Self::zero(n, window);
        w.terms.insert(WKey { hbar: 0, mono: PMonomial::new(0, []) }, c);
        w.prune();
        w
    }

    /// The mode `p^α_k` (`α` zero-based).
    pub fn var(n: usize, window: i32, alpha: u16, k: i32) -> Result<Self, Error> {
        let mut w = Self::zero(n, window);
        w.add_term(PMonomial::new(0, [(alpha, k, 1)]), 0, AlgScalar::one())?;
        Ok(w)
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn add_term(&mut self, mono: PMonomial, hbar: u16, c: AlgScalar) -> Result<(), Error> {
        if mono.max_mode() > self.window {
            return Err(Error::Truncation(format!("mode outside window {}", self.window)));
        }
        if mono.vars().iter().any(|v| v.0 as usize >= self.n) {
            return Err(Error::ContextMismatch(format!("field index beyond {}", self.n)));
        }
        if c.is_zero() {
            return Ok(());
        }
        let key = WKey { hbar, mono };
        let e = self.terms.entry(key.clone()).or_insert_with(AlgScalar::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WKey, &AlgScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest power of `ħ` present, if nonzero.
    pub fn hbar_order(&self) -> Option<u16> {
        self.terms.keys().map(|k| k.hbar).min()
    }

    fn check_compatible(&self, other: &WeylElement) -> Result<(), Error> {
        if self.window != other.window {
            return Err(Error::ContextMismatch(format!("windows {} and {}", self.window, other.window)));
        }
        if self.n != other.n {
            return Err(Error::ContextMismatch(format!("{} and {} fields", self.n, other.n)));
        }
        Ok(())
    }

    pub fn add(&self, other: &WeylElement) -> Result<WeylElement, Error> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.mono.clone(), k.hbar, c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &WeylElement) -> Result<WeylElement, Error> {
        self.add(&other.scale(&-AlgScalar::one()))
    }

    pub fn scale(&self, s: &AlgScalar) -> WeylElement {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = &*c * s;
        }
        out.prune();
        out
    }

    /// Product of the commuting symbols (no reordering corrections).
    pub fn symbol_mul(&self, other: &WeylElement) -> Result<WeylElement, Error> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.n, self.window);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mono.mul(&b.mono), a.hbar + b.hbar, x * y)?;
            }
        }
        Ok(out)
    }

    /// `ħ = 0`, as a commutative polynomial.
    pub fn classical_limit(&self) -> PSeries {
        PSeries::from_terms(
            self.n,
            self.window,
            self.terms.iter().filter(|(k, _)| k.hbar == 0).map(|(k, c)| (k.mono.clone(), c.clone())),
        )
    }

    /// The lift of a commutative polynomial with no `ħ`.
    pub fn from_pseries(p: &PSeries) -> WeylElement {
        WeylElement {
            n: p.n,
            window: p.window,
            terms: p.terms().map(|(m, c)| (WKey { hbar: 0, mono: m.clone() }, c.clone())).collect(),
        }
    }

    /// Normal-ordered text, e.g. `i*hbar + p1_-1*p1_1`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in &self.terms {
            let mut factors: Vec<String> = Vec::new();
            if k.hbar > 0 {
                factors.push(power("hbar", k.hbar));
            }
            if k.mono.eps > 0 {
                factors.push(power("eps", k.mono.eps));
            }
            let mut vars: Vec<&(u16, i32, u16)> = k.mono.vars().iter().collect();
            vars.sort_by_key(|(a, m, _)| (*m > 0, *a, *m));
            for (a, m, p) in vars {
                factors.push(power(&format!("p{}_{}", a + 1, m), *p));
            }
            let body = factors.join("*");
            let coeff = c.to_text();
            let term = if body.is_empty() {
                coeff
            } else if c.is_one() {
                body
            } else if (-c).is_one() {
                format!("-{}", body)
            } else if coeff.chars().skip(1).any(|ch| matches!(ch, '+' | '-' | ' ')) {
                format!("({})*{}", coeff, body)
            } else {
                format!("{}*{}", coeff, body)
            };
            parts.push(term);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

fn power(base: &str, p: u16) -> String {
    if p == 1 {
        base.into()
    } else {
        format!("{}^{}", base, p)
    }
}

fn derive(m: &PMonomial, alpha: u16, k: i32) -> Option<(u16, PMonomial)> {
    let pos = m.vars().iter().position(|v| v.0 == alpha && v.1 == k)?;
    let p = m.vars()[pos].2;
    let rest = m.vars().iter().enumerate().map(|(i, v)| if i == pos { (v.0, v.1, v.2 - 1) } else { *v });
    Some((p, PMonomial::new(m.eps, rest)))
}

/// Normal-ordered product: `Σ_n (1/n!) Σ Π [x_i, y_i] ∂^n f/∂x ⋯ · ∂^n g/∂y ⋯`, with `x`
/// running over positive modes of `f` and `y` over nonpositive modes of `g`.
pub fn weyl_star(a: &WeylElement, b: &WeylElement, rule: &CommRule) -> Result<WeylElement, Error> {
    a.check_compatible(b)?;
    if rule.n_fields() != a.n {
        return Err(Error::ContextMismatch(format!("rule in {} fields, element in {}", rule.n_fields(), a.n)));
    }
    let mut out = WeylElement::zero(a.n, a.window);
    let mut contraction_cache: BTreeMap<(u16, u16, i32), Vec<Contraction>> = BTreeMap::new();
    for (ka, ca) in &a.terms {
        for (kb, cb) in &b.terms {
            // State: (remaining f, remaining g, ħ power) → coefficient.
            let mut states: BTreeMap<(PMonomial, PMonomial, u16), AlgScalar> = BTreeMap::new();
            states.insert((ka.mono.clone(), kb.mono.clone(), ka.hbar + kb.hbar), ca * cb);
            let mut n_fact = Rational::one();
            let mut level = 0i64;
            while !states.is_empty() {
                let inv = AlgScalar::rational(n_fact.recip());
                for ((f, g, h), c) in &states {
                    out.add_term(f.mul(g), *h, c * &inv)?;
                }
                let mut next: BTreeMap<(PMonomial, PMonomial, u16), AlgScalar> = BTreeMap::new();
                for ((f, g, h), c) in &states {
                    for &(al, k, _) in f.vars().iter().filter(|v| v.1 > 0) {
                        for &(be, j, _) in g.vars().iter().filter(|v| v.1 == -k) {
                            let consts = contraction_cache
                                .entry((al, be, k))
                                .or_insert_with(|| rule.contraction(al as usize, be as usize, k))
                                .clone();
                            if consts.is_empty() {
                                continue;
                            }
                            let (pf, df) = derive(f, al, k).expect("present");
                            let (pg, dg) = derive(g, be, j).expect("present");
                            let mult = AlgScalar::from_int(pf as i64 * pg as i64);
                            for (hh, ee, v) in consts {
                                let df = PMonomial::new(df.eps + ee, df.vars().iter().copied());
                                let e = next.entry((df, dg.clone(), h + hh)).or_insert_with(AlgScalar::zero);
                                *e += &(&(c * &mult) * &v);
                            }
                        }
                    }
                }
                next.retain(|_, c| !c.is_zero());
                states = next;
                level += 1;
                n_fact = &n_fact * &Rational::from_integer(level);
            }
        }
    }
    Ok(out)
}

/// `a ⋆ b − b ⋆ a`.
pub fn weyl_commutator(a: &WeylElement, b: &WeylElement, rule: &CommRule) -> Result<WeylElement, Error> {
    weyl_star(a, b, rule)?.sub(&weyl_star(b, a, rule)?)
}

/// Images `f(p̃^α_n) = Σ c ε^e (in)^d p^β_n` read off a linear Miura map `w^α = Σ c ε^e u^β_d`.
pub fn linear_mode_map(images: &[crate::diffpoly::DiffPoly]) -> Result<Vec<Vec<(u16, u16, u16, AlgScalar)>>, Error> {
    images
        .iter()
        .map(|w| {
            w.terms()
                .map(|(m, c)| {
                    if m.degree() != 1 {
                        return Err(Error::Precondition("Miura map is not linear with constant coefficients".into()));
                    }
                    let (v, _) = m.vars()[0];
                    Ok((v.field, v.order, m.eps, c.clone()))
                })
                .collect()
        })
        .collect()
}

/// Applies the mode substitution of a linear Miura map; it preserves the normal form.
pub fn apply_mode_map(map: &[Vec<(u16, u16, u16, AlgScalar)>], a: &WeylElement) -> Result<WeylElement, Error> {
    if map.len() != a.n {
        return Err(Error::ContextMismatch(format!("map in {} fields, element in {}", map.len(), a.n)));
    }
    let image = |alpha: u16, k: i32| -> Result<WeylElement, Error> {
        let mut w = WeylElement::zero(a.n, a.window);
        let ik = AlgScalar::i() * AlgScalar::from_int(k as i64);
        for (beta, d, e, c) in &map[alpha as usize] {
            w.add_term(PMonomial::new(*e, [(*beta, k, 1)]), 0, c * &ik.pow(*d as i32))?;
        }
        Ok(w)
    };
    let mut out = WeylElement::zero(a.n, a.window);
    for (key, c) in &a.terms {
        let mut acc = WeylElement::zero(a.n, a.window);
        acc.add_term(PMonomial::new(key.mono.eps, []), key.hbar, c.clone())?;
        for &(alpha, k, p) in key.mono.vars() {
            let img = image(alpha, k)?;
            for _ in 0..p {
                acc = acc.symbol_mul(&img)?;
            }
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}

/// `f_r` from the deformed algebra of `K^{r-spin}` to the standard one, `r ∈ {4, 5}`.
pub fn f_r_map(r: u32, a: &WeylElement) -> Result<WeylElement, Error> {
    if !(4..=5).contains(&r) {
        return Err(Error::Unsupported(format!("f_r is defined for r = 4, 5, not {}", r)));
    }
    let m = crate::gdhier::reference::theorem_miura(r)?;
    apply_mode_map(&linear_mode_map(m.images())?, a)
}
