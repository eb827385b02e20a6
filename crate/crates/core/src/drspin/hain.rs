//! Hain's formula on compact type, tautological monomials and integral tables.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::scalars::Rational;

/// A boundary divisor `δ_h^J`: genus `h` component carrying the markings `J` (sorted).
pub type Boundary = (u32, Vec<u32>);

/// A product of ψ-classes and boundary divisors on `M̄_{g,n}` with markings `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TautMonomial {
    /// Exponent of `ψ_i` at index `i−1`.
    pub psi: Vec<u32>,
    /// Sorted multiset of boundary divisors.
    pub boundary: Vec<Boundary>,
}

impl TautMonomial {
    pub fn one(n: usize) -> Self {
        TautMonomial { psi: vec![0; n], boundary: Vec::new() }
    }

    pub fn psi_only(psi: Vec<u32>) -> Self {
        TautMonomial { psi, boundary: Vec::new() }
    }

    /// Cohomological degree.
    pub fn degree(&self) -> u32 {
        self.psi.iter().sum::<u32>() + self.boundary.len() as u32
    }

    pub fn mul(&self, other: &TautMonomial) -> TautMonomial {
        let psi = self.psi.iter().zip(&other.psi).map(|(a, b)| a + b).collect();
        let mut boundary = self.boundary.clone();
        boundary.extend(other.boundary.iter().cloned());
        boundary.sort();
        TautMonomial { psi, boundary }
    }

    /// Representative under `δ_h^J = δ_{g−h}^{J^c}` and relabelings preserving `labels`.
    pub fn canonical(&self, g: u32, labels: &[u32]) -> TautMonomial {
        let n = labels.len();
        let mut best: Option<TautMonomial> = None;
        for perm in label_permutations(labels) {
            // perm[i] is the new position of marking i+1.
            let mut psi = vec![0; n];
            for (i, e) in self.psi.iter().enumerate() {
                psi[perm[i]] = *e;
            }
            let mut boundary: Vec<Boundary> = self
                .boundary
                .iter()
                .map(|(h, j)| {
                    let mut jj: Vec<u32> = j.iter().map(|m| perm[*m as usize - 1] as u32 + 1).collect();
                    jj.sort_unstable();
                    canonical_divisor(g, n, *h, jj)
                })
                .collect();
            boundary.sort();
            let cand = TautMonomial { psi, boundary };
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
        best.unwrap_or_else(|| self.clone())
    }
}

impl core::fmt::Display for TautMonomial {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (i, e) in self.psi.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("psi{}", i + 1)),
                _ => parts.push(format!("psi{}^{}", i + 1, e)),
            }
        }
        for (h, j) in &self.boundary {
            let js: Vec<String> = j.iter().map(|m| format!("{}", m)).collect();
            parts.push(format!("delta{}[{}]", h, js.join(",")));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

fn canonical_divisor(g: u32, n: usize, h: u32, j: Vec<u32>) -> Boundary {
    let comp: Vec<u32> = (1..=n as u32).filter(|m| !j.contains(m)).collect();
    let a = (h, j);
    let b = (g - h, comp);
    if b < a { b } else { a }
}

/// All permutations of positions that map each marking to one with the same label.
fn label_permutations(labels: &[u32]) -> Vec<Vec<usize>> {
    let n = labels.len();
    let mut out = Vec::new();
    let mut cur = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(i: usize, labels: &[u32], cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if i == labels.len() {
            out.push(cur.clone());
            return;
        }
        for t in 0..labels.len() {
            if !used[t] && labels[t] == labels[i] {
                used[t] = true;
                cur[i] = t;
                rec(i + 1, labels, cur, used, out);
                used[t] = false;
            }
        }
    }
    rec(0, labels, &mut cur, &mut used, &mut out);
    out
}

/// A polynomial in `a_1..a_n` with rational coefficients, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct APoly {
    pub n: usize,
    pub terms: BTreeMap<Vec<u32>, Rational>,
}

impl APoly {
    pub fn zero(n: usize) -> Self {
        APoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; n], c);
        p
    }

    /// `a_i` for one-based `i`.
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i - 1] = 1;
        let mut p = Self::zero(n);
        p.add_term(e, Rational::one());
        p
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &APoly) -> APoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> APoly {
        let mut out = APoly::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &APoly) -> APoly {
        let mut out = APoly::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Degree if homogeneous, `None` otherwise (zero counts as homogeneous of any degree).
    pub fn homogeneous_degree(&self) -> Option<Option<u32>> {
        let mut deg = None;
        for e in self.terms.keys() {
            let d: u32 = e.iter().sum();
            match deg {
                None => deg = Some(d),
                Some(x) if x != d => return None,
                _ => {}
            }
        }
        Some(deg)
    }

    /// `Σ_i a_i`.
    pub fn sum_of_vars(n: usize) -> APoly {
        (1..=n).fold(APoly::zero(n), |acc, i| acc.add(&APoly::var(n, i)))
    }

    /// Reduces modulo `Σ a_i` by substituting `a_n = −(a_1 + … + a_{n−1})`.
    pub fn reduce_mod_sum(&self) -> APoly {
        let n = self.n;
        if n == 0 {
            return self.clone();
        }
        let mut minus = APoly::zero(n);
        for i in 1..n {
            minus.add_term(unit(n, i), -Rational::one());
        }
        let mut out = APoly::zero(n);
        for (e, c) in &self.terms {
            let mut base = e.clone();
            let k = base[n - 1];
            base[n - 1] = 0;
            let mut term = APoly::zero(n);
            term.add_term(base, c.clone());
            for _ in 0..k {
                term = term.mul(&minus);
            }
            out = out.add(&term);
        }
        out
    }

    /// Drops variable `i` (one-based), which must not occur.
    pub fn drop_var(&self, i: usize) -> Result<APoly, Error> {
        let mut out = APoly::zero(self.n - 1);
        for (e, c) in &self.terms {
            if e[i - 1] != 0 {
                return Err(Error::Precondition(format!("variable a_{} occurs", i)));
            }
            let mut f = e.clone();
            f.remove(i - 1);
            out.add_term(f, c.clone());
        }
        Ok(out)
    }
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i - 1] = 1;
    e
}

/// `DR_g(a_1..a_n)` on compact type as a polynomial in the `a_i` with tautological coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HainExpansion {
    pub g: u32,
    pub n: usize,
    /// Marking whose weight is forced to zero, if any.
    pub zero_weight: Option<usize>,
    pub terms: BTreeMap<TautMonomial, APoly>,
}

impl HainExpansion {
    /// Applies [`APoly::reduce_mod_sum`] to every coefficient and drops vanishing ones.
    pub fn reduce_mod_sum(&self) -> HainExpansion {
        let mut terms = BTreeMap::new();
        for (m, p) in &self.terms {
            let q = p.reduce_mod_sum();
            if !q.is_zero() {
                terms.insert(m.clone(), q);
            }
        }
        HainExpansion { terms, ..self.clone() }
    }
}

/// Expands `(Σ a_j²ψ_j/2 − ½ Σ_{|J|≥2} a_J² δ_0^J − ¼ Σ_J Σ_{h=1}^{g−1} a_J² δ_h^J)^g / g!`.
///
/// Boundary divisors are identified via `δ_h^J = δ_{g−h}^{J^c}`.
pub fn hain_expand(g: u32, n: usize, zero_weight: Option<usize>) -> HainExpansion {
    let weight = |i: usize| -> APoly {
        if Some(i) == zero_weight {
            APoly::zero(n)
        } else {
            APoly::var(n, i)
        }
    };
    let mut base: BTreeMap<TautMonomial, APoly> = BTreeMap::new();
    let mut push = |m: TautMonomial, p: APoly| {
        let slot = base.entry(m).or_insert_with(|| APoly::zero(n));
        *slot = slot.add(&p);
    };
    let half = Rational::new(1, 2);
    for j in 1..=n {
        let mut psi = vec![0; n];
        psi[j - 1] = 1;
        let a = weight(j);
        push(TautMonomial::psi_only(psi), a.mul(&a).scale(&half));
    }
    if g > 0 {
        for mask in 1u64..(1u64 << n) {
            let set: Vec<u32> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| b as u32 + 1).collect();
            let a_j = set.iter().fold(APoly::zero(n), |acc, m| acc.add(&weight(*m as usize)));
            let sq = a_j.mul(&a_j);
            if sq.is_zero() {
                continue;
            }
            if set.len() >= 2 {
                let d = canonical_divisor(g, n, 0, set.clone());
                push(TautMonomial { psi: vec![0; n], boundary: vec![d] }, sq.scale(&-half.clone()));
            }
            for h in 1..g {
                let d = canonical_divisor(g, n, h, set.clone());
                push(TautMonomial { psi: vec![0; n], boundary: vec![d] }, sq.scale(&Rational::new(-1, 4)));
            }
        }
    }
    base.retain(|_, p| !p.is_zero());
    let mut acc: BTreeMap<TautMonomial, APoly> = BTreeMap::new();
    acc.insert(TautMonomial::one(n), APoly::constant(n, Rational::one()));
    for _ in 0..g {
        let mut next: BTreeMap<TautMonomial, APoly> = BTreeMap::new();
        for (m1, p1) in &acc {
            for (m2, p2) in &base {
                let m = m1.mul(m2);
                let slot = next.entry(m).or_insert_with(|| APoly::zero(n));
                *slot = slot.add(&p1.mul(p2));
            }
        }
        next.retain(|_, p| !p.is_zero());
        acc = next;
    }
    let inv = Rational::factorial(g).recip();
    let terms = acc.into_iter().map(|(m, p)| (m, p.scale(&inv))).collect();
    HainExpansion { g, n, zero_weight, terms }
}

/// Intersection numbers `∫_{M̄_{g,n}} λ_g c^{r-spin}_{g,n}(⊗ e_{m_i}) · (monomial)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralTable {
    pub g: u32,
    pub labels: Vec<u32>,
    entries: BTreeMap<TautMonomial, Rational>,
    /// Absent keys read as zero instead of raising an error.
    pub default_zero: bool,
}

impl IntegralTable {
    pub fn new(g: u32, labels: Vec<u32>, default_zero: bool) -> Self {
        IntegralTable { g, labels, entries: BTreeMap::new(), default_zero }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Stores a value; monomials related by symmetry share one entry.
    pub fn insert(&mut self, m: TautMonomial, v: Rational) -> Result<(), Error> {
        if m.psi.len() != self.n() {
            return Err(Error::ContextMismatch(format!("monomial has {} markings, table {}", m.psi.len(), self.n())));
        }
        let key = m.canonical(self.g, &self.labels);
        if let Some(old) = self.entries.get(&key) {
            if *old != v {
                return Err(Error::Precondition(format!("conflicting values for {}", key)));
            }
        }
        self.entries.insert(key, v);
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&TautMonomial, &Rational)> {
        self.entries.iter()
    }

    pub fn lookup(&self, m: &TautMonomial) -> Result<Rational, Error> {
        let key = m.canonical(self.g, &self.labels);
        match self.entries.get(&key) {
            Some(v) => Ok(v.clone()),
            None if self.default_zero => Ok(Rational::zero()),
            None => Err(Error::MissingEntry(format!("{}", key))),
        }
    }
}

/// How the point carrying `e_α ψ^d` enters the pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pairing {
    /// `(α, d) = (1, 1)`: forget the extra point, multiply by `2g − 2 + n`.
    Dilaton,
    /// The expansion's zero-weight marking carries `ψ^d`; the table lives on the full space.
    Direct { d: u32 },
}

/// `∫ λ_g c · DR_g` as a polynomial in the weights of the ordinary markings.
pub fn pair_with_table(expansion: &HainExpansion, table: &IntegralTable, route: Pairing) -> Result<APoly, Error> {
    let g = expansion.g;
    let n = expansion.n;
    if table.g != g || table.n() != n {
        return Err(Error::ContextMismatch(format!(
            "expansion on M_({},{}), table on M_({},{})",
            g,
            n,
            table.g,
            table.n()
        )));
    }
    let mut out = APoly::zero(n);
    for (m, p) in &expansion.terms {
        let mut m = m.clone();
        if let Pairing::Direct { d } = route {
            let z = expansion
                .zero_weight
                .ok_or_else(|| Error::Precondition("direct pairing needs a zero-weight marking".into()))?;
            m.psi[z - 1] += d;
        }
        let v = table.lookup(&m)?;
        if !v.is_zero() {
            out = out.add(&p.scale(&v));
        }
    }
    match route {
        Pairing::Dilaton => {
            if expansion.zero_weight.is_some() {
                return Err(Error::Precondition("dilaton pairing expects no zero-weight marking".into()));
            }
            let f = Rational::from_integer(2 * g as i64 - 2 + n as i64);
            Ok(out.scale(&f))
        }
        Pairing::Direct { .. } => out.drop_var(expansion.zero_weight.unwrap()),
    }
}
