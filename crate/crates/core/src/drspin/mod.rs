//! Double ramification Hamiltonians of the r-spin theory: degree selection,
//! profile enumeration, Hain expansion, pairing with intersection tables and
//! assembly into local functionals.

mod hain;

use alloc::format;
use alloc::vec::Vec;

use crate::diffpoly::{parse_diffpoly, DiffPoly, JetVar, LocalFunctional, Monomial, VarNames};
use crate::error::Error;
use crate::scalars::{AlgScalar, Rational};

pub use hain::{hain_expand, pair_with_table, APoly, Boundary, HainExpansion, IntegralTable, Pairing, TautMonomial};

/// A polynomial in `a_1..a_n`, meaningful modulo `Σ a_i`.
pub type DRPolynomial = APoly;

/// Genus and label multiplicities `n_1..n_{r−1}` of one contribution to `ḡ_{α,d}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile {
    pub g: u32,
    /// `n_k` at index `k−1`.
    pub counts: Vec<u32>,
    pub alpha: u32,
    pub d: u32,
}

impl Profile {
    pub fn n(&self) -> usize {
        self.counts.iter().sum::<u32>() as usize
    }

    /// Labels `α_1 ≤ … ≤ α_n` of the ordinary markings.
    pub fn labels(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (k, c) in self.counts.iter().enumerate() {
            out.extend(core::iter::repeat_n(k as u32 + 1, *c as usize));
        }
        out
    }

    pub fn r(&self) -> u32 {
        self.counts.len() as u32 + 1
    }

    /// `Σ α_i = (r+1)n + (2g−1−α) − r(d+1)`.
    pub fn satisfies_selection(&self) -> bool {
        let r = self.r() as i64;
        let n = self.n() as i64;
        let lhs: i64 = self.labels().iter().map(|a| *a as i64).sum();
        lhs == (r + 1) * n + (2 * self.g as i64 - 1 - self.alpha as i64) - r * (self.d as i64 + 1)
    }
}

/// All profiles with `n ≥ 2` satisfying the degree selection rule, sorted by genus then counts.
pub fn enumerate_profiles(r: u32, alpha: u32, d: u32) -> Result<Vec<Profile>, Error> {
    if r < 2 || alpha == 0 || alpha >= r {
        return Err(Error::Precondition(format!("need r ≥ 2 and 1 ≤ α ≤ r−1, got r={}, α={}", r, alpha)));
    }
    let bound = (alpha + 1 + r * (d + 1)) as i64;
    let mut out = Vec::new();
    let mut g = 0i64;
    while 2 * 2 + 2 * g <= bound {
        let mut n = 2i64;
        while 2 * n + 2 * g <= bound {
            let target = (r as i64 + 1) * n + (2 * g - 1 - alpha as i64) - r as i64 * (d as i64 + 1);
            let mut counts = alloc::vec![0u32; r as usize - 1];
            compositions(&mut counts, 0, n, target, &mut |c| {
                out.push(Profile { g: g as u32, counts: c.to_vec(), alpha, d })
            });
            n += 1;
        }
        g += 1;
    }
    out.sort();
    Ok(out)
}

/// Distributes `left` markings over labels `k+1..` so that labels sum to `target`.
fn compositions(counts: &mut Vec<u32>, k: usize, left: i64, target: i64, emit: &mut impl FnMut(&[u32])) {
    let label = k as i64 + 1;
    if k == counts.len() - 1 {
        if left * label == target {
            counts[k] = left as u32;
            emit(counts);
            counts[k] = 0;
        }
        return;
    }
    for c in 0..=left {
        if c * label > target {
            break;
        }
        counts[k] = c as u32;
        compositions(counts, k + 1, left - c, target - c * label, emit);
    }
    counts[k] = 0;
}

/// `Σ ε^{2g}/(Π n_k!) Σ_b P^b u^{α_1}_{b_1} ⋯ u^{α_n}_{b_n}` summed over contributions.
///
/// In Fourier modes `u_b ↔ (ia)^b p_a`, so `a^b = i^{−b}(ia)^b`; with `Σb = 2g` the
/// factor `i^{−2g} = (−1)^g` cancels the sign of `(−ε²)^g`. Summing over orderings
/// of repeated labels turns `1/n!` into `1/Π n_k!`.
pub fn assemble_hamiltonian(r: u32, contributions: &[(Profile, DRPolynomial)]) -> Result<LocalFunctional, Error> {
    let nf = r as usize - 1;
    let mut out = DiffPoly::zero(nf);
    for (prof, poly) in contributions {
        let labels = prof.labels();
        if poly.n != labels.len() {
            return Err(Error::ContextMismatch(format!(
                "polynomial in {} weights for a profile with {} markings",
                poly.n,
                labels.len()
            )));
        }
        match poly.homogeneous_degree() {
            Some(None) => continue,
            Some(Some(deg)) if deg == 2 * prof.g => {}
            _ => return Err(Error::Precondition(format!("polynomial is not homogeneous of degree {}", 2 * prof.g))),
        }
        let sym: Rational = prof.counts.iter().map(|c| Rational::factorial(*c)).product();
        let pre = sym.recip();
        for (e, c) in &poly.terms {
            let vars = labels
                .iter()
                .zip(e)
                .map(|(a, b)| (JetVar { field: (*a - 1) as u16, order: *b as u16 }, 1u16));
            let m = Monomial::from_vars(2 * prof.g as u16, vars);
            out.add_term(m, AlgScalar::rational(c * &pre));
        }
    }
    Ok(LocalFunctional::new(out))
}

const G11_3: &str = "1/2*u1^2*u2 + 1/36*u2^4 + eps^2*(1/48*u2^2*u2_2 + 1/12*u1*u1_2) + 1/432*eps^4*u2*u2_4";

const G11_4: &str = "1/2*u1^2*u3 + 1/2*u1*u2^2 + 1/8*u2^2*u3^2 + 1/320*u3^5 \
    + eps^2*(1/8*u1*u1_2 + 1/64*u3_2*u2^2 + 1/16*u3*u2*u2_2 + 1/64*u1_2*u3^2 + 1/192*u3^3*u3_2) \
    + eps^4*(1/160*u2*u2_4 + 5/4096*u3^2*u3_4 + 3/640*u1*u3_4) + 1/8192*eps^6*u3*u3_6";

const G11_5: &str = "1/2*u1^2*u4 + u1*u2*u3 + 1/6*u2^3 + 1/30*u3^4 + 1/5*u2*u3^2*u4 + 1/10*u2^2*u4^2 \
    + 1/50*u3^2*u4^3 + 1/3750*u4^6 \
    + eps^2*(1/6*u1*u1_2 + 3/20*u2*u3*u3_2 + 1/10*u2*u3_1^2 + 1/20*u1_2*u3*u4 + 1/10*u2*u2_2*u4 \
    + 1/40*u2_1^2*u4 + 1/50*u2*u4*u4_1^2 + 1/75*u2*u4^2*u4_2 + 1/75*u3^2*u4*u4_2 + 1/50*u3*u3_2*u4^2 \
    + 1/1200*u4^4*u4_2) \
    + eps^4*(7/600*u2*u2_4 + 11/900*u1*u3_4 + 7/1200*u2*u4*u4_4 + 17/1200*u2*u4_1*u4_3 \
    + 71/7200*u2*u4_2^2 + 31/3600*u3*u3_4*u4 + 7/450*u3_1*u3_3*u4 + 91/7200*u3_2^2*u4 \
    + 13/12000*u4_2^2*u4^2 + 3/4000*u4_2*u4_1^2*u4) \
    + eps^6*(53/108000*u3*u3_6 + 11/18000*u2*u4_6 + 1397/6480000*u4_3^2*u4 + 617/1620000*u4_4*u4_2*u4) \
    + 107/10800000*eps^8*u4*u4_8";

/// Text form of the reference `ḡ_{1,1}` for `r ∈ {3, 4, 5}`.
pub fn builtin_g11_text(r: u32) -> Result<&'static str, Error> {
    match r {
        3 => Ok(G11_3),
        4 => Ok(G11_4),
        5 => Ok(G11_5),
        _ => Err(Error::Unsupported(format!("no built-in ḡ_1,1 for r = {}", r))),
    }
}

/// The reference `ḡ_{1,1}` of the r-spin double ramification hierarchy, `r ∈ {3, 4, 5}`.
pub fn builtin_g11(r: u32) -> Result<LocalFunctional, Error> {
    let text = builtin_g11_text(r)?;
    Ok(LocalFunctional::new(parse_diffpoly(text, &VarNames::u(r as usize - 1))?))
}

/// Whether every monomial of a density with `ε^{2g}` and labels `α_i` obeys the
/// selection rule for `(α, d)`.
pub fn respects_selection(h: &DiffPoly, r: u32, alpha: u32, d: u32) -> bool {
    h.terms().all(|(m, _)| {
        if m.eps % 2 == 1 {
            return false;
        }
        let mut counts = alloc::vec![0u32; r as usize - 1];
        for (v, p) in m.vars() {
            counts[v.field as usize] += *p as u32;
        }
        Profile { g: m.eps as u32 / 2, counts, alpha, d }.satisfies_selection()
    })
}
