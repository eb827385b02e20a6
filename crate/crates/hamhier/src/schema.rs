//! JSON representations of core objects and conversions in both directions.
//!
//! Field indices in JSON are 1-based (`u^1` is field 1); jets are `[field, order, power]`.

use std::collections::BTreeMap;

use hamhier_core::diffpoly::{PMonomial, PSeries};
use hamhier_core::drspin::{APoly, IntegralTable, Profile, TautMonomial};
use hamhier_core::hamops::{DiffOperator, HamiltonianOperator};
use hamhier_core::quantize::WeylElement;
use hamhier_core::reconstruct::{Bounds, MainVerdict, SpecialSolution};
use hamhier_core::{AlgScalar, DiffPoly, JetVar, LocalFunctional, Monomial, Rational};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Components `[a, b, c, e]` of `a + b·i + (c + e·i)·√d`.
pub type ScalarJson = [String; 4];

fn scalar_to_json(c: &AlgScalar) -> ScalarJson {
    let [a, b, cc, e] = c.components();
    [a.to_string(), b.to_string(), cc.to_string(), e.to_string()]
}

fn scalar_from_json(s: &ScalarJson, d: u32) -> Result<AlgScalar, CliError> {
    let q = |x: &str| x.trim().parse::<Rational>().map_err(|e| CliError::Input(format!("bad rational {:?}: {}", x, e)));
    if d == 0 {
        return Err(CliError::Input("radicand d must be positive".into()));
    }
    Ok(AlgScalar::new(q(&s[0])?, q(&s[1])?, q(&s[2])?, q(&s[3])?, d))
}

/// The single radicand shared by a collection of scalars (1 when all are Gaussian rationals).
fn common_radicand<'a>(cs: impl IntoIterator<Item = &'a AlgScalar>) -> Result<u32, CliError> {
    let mut d = 1;
    for c in cs {
        let dc = c.radicand();
        if dc != 1 {
            if d != 1 && d != dc {
                return Err(CliError::Input(format!("mixed radicands {} and {}", d, dc)));
            }
            d = dc;
        }
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: ScalarJson,
    pub eps: u16,
    pub jets: Vec<[u32; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffPolyJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub d: u32,
    pub terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrated: Option<bool>,
}

impl DiffPolyJson {
    pub fn from_poly(p: &DiffPoly) -> Result<Self, CliError> {
        let d = common_radicand(p.terms().map(|(_, c)| c))?;
        let terms = p
            .terms()
            .map(|(m, c)| TermJson {
                coeff: scalar_to_json(c),
                eps: m.eps,
                jets: m.vars().iter().map(|(v, k)| [v.field as u32 + 1, v.order as u32, *k as u32]).collect(),
            })
            .collect();
        Ok(DiffPolyJson { n: p.n_fields(), d, terms, integrated: None })
    }

    pub fn from_functional(h: &LocalFunctional) -> Result<Self, CliError> {
        let mut j = Self::from_poly(h.density())?;
        j.integrated = Some(true);
        Ok(j)
    }

    pub fn to_poly(&self) -> Result<DiffPoly, CliError> {
        let mut out = DiffPoly::zero(self.n);
        for t in &self.terms {
            let mut vars = Vec::with_capacity(t.jets.len());
            for &[a, o, k] in &t.jets {
                if a == 0 || a as usize > self.n {
                    return Err(CliError::Input(format!("field {} outside 1..={}", a, self.n)));
                }
                let (Ok(order), Ok(pow)) = (u16::try_from(o), u16::try_from(k)) else {
                    return Err(CliError::Input("jet order or power too large".into()));
                };
                vars.push((JetVar::new(a as u16 - 1, order), pow));
            }
            out.add_term(Monomial::from_vars(t.eps, vars), scalar_from_json(&t.coeff, self.d)?);
        }
        Ok(out)
    }

    pub fn is_integrated(&self) -> bool {
        self.integrated.unwrap_or(false)
    }
}

/// `N×N` entries, each a map from the power of `∂_x` to its coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub entries: Vec<Vec<BTreeMap<u16, DiffPolyJson>>>,
}

impl OperatorJson {
    pub fn from_operator(k: &HamiltonianOperator) -> Result<Self, CliError> {
        let n = k.n_fields();
        let mut entries = Vec::with_capacity(n);
        for a in 0..n {
            let mut row = Vec::with_capacity(n);
            for b in 0..n {
                let mut m = BTreeMap::new();
                for (p, c) in k.get(a, b).coeffs() {
                    m.insert(p, DiffPolyJson::from_poly(c)?);
                }
                row.push(m);
            }
            entries.push(row);
        }
        Ok(OperatorJson { n, entries })
    }

    pub fn to_operator(&self) -> Result<HamiltonianOperator, CliError> {
        if self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.n) {
            return Err(CliError::Input(format!("operator entries are not {}x{}", self.n, self.n)));
        }
        let mut ops = Vec::with_capacity(self.n * self.n);
        for row in &self.entries {
            for m in row {
                let coeffs = m
                    .iter()
                    .map(|(p, c)| Ok((*p, c.to_poly()?.with_n(self.n))))
                    .collect::<Result<Vec<_>, CliError>>()?;
                ops.push(DiffOperator::from_coeffs(self.n, coeffs));
            }
        }
        Ok(HamiltonianOperator::from_entries(self.n, ops)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntryJson {
    pub psi: Vec<u32>,
    #[serde(default)]
    pub boundary: Vec<(u32, Vec<u32>)>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub g: u32,
    pub n: usize,
    pub labels: Vec<u32>,
    pub entries: Vec<TableEntryJson>,
    #[serde(default)]
    pub default_zero: bool,
}

impl TableJson {
    pub fn from_table(t: &IntegralTable) -> Self {
        TableJson {
            g: t.g,
            n: t.n(),
            labels: t.labels.clone(),
            entries: t
                .entries()
                .map(|(m, v)| TableEntryJson { psi: m.psi.clone(), boundary: m.boundary.clone(), value: v.to_string() })
                .collect(),
            default_zero: t.default_zero,
        }
    }

    pub fn to_table(&self) -> Result<IntegralTable, CliError> {
        if self.labels.len() != self.n {
            return Err(CliError::Input(format!("{} labels for n = {}", self.labels.len(), self.n)));
        }
        let mut t = IntegralTable::new(self.g, self.labels.clone(), self.default_zero);
        for e in &self.entries {
            let v: Rational =
                e.value.trim().parse().map_err(|err| CliError::Input(format!("bad value {:?}: {}", e.value, err)))?;
            let mut boundary = e.boundary.clone();
            for (_, j) in boundary.iter_mut() {
                j.sort_unstable();
            }
            boundary.sort();
            t.insert(TautMonomial { psi: e.psi.clone(), boundary }, v)?;
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileJson {
    pub g: u32,
    pub counts: Vec<u32>,
    pub alpha: u32,
    pub d: u32,
}

impl From<&Profile> for ProfileJson {
    fn from(p: &Profile) -> Self {
        ProfileJson { g: p.g, counts: p.counts.clone(), alpha: p.alpha, d: p.d }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct APolyTermJson {
    pub a: Vec<u32>,
    pub value: String,
}

/// A polynomial in the weights `a_1..a_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct APolyJson {
    pub n: usize,
    pub terms: Vec<APolyTermJson>,
}

impl From<&APoly> for APolyJson {
    fn from(p: &APoly) -> Self {
        APolyJson {
            n: p.n,
            terms: p.terms.iter().map(|(e, v)| APolyTermJson { a: e.clone(), value: v.to_string() }).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledDiff {
    pub label: String,
    #[serde(flatten)]
    pub poly: DiffPolyJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictBounds {
    pub r: u32,
    pub eps_order: u16,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub conditions: [bool; 3],
    pub diffs: Vec<LabelledDiff>,
    pub bounds: VerdictBounds,
}

impl VerdictJson {
    pub fn from_verdict(v: &MainVerdict) -> Result<Self, CliError> {
        let mut diffs = Vec::new();
        for (a, p) in v.derivative_diffs.iter().enumerate() {
            if !p.is_zero() {
                diffs.push(LabelledDiff { label: format!("dh/du{}", a + 1), poly: DiffPolyJson::from_poly(p)? });
            }
        }
        for (a, b, op) in &v.operator_diffs {
            for (k, c) in op.coeffs() {
                diffs.push(LabelledDiff { label: format!("K[{},{}] dx^{}", a + 1, b + 1, k), poly: DiffPolyJson::from_poly(c)? });
            }
        }
        if !v.hamiltonian_diff.is_zero() {
            let mut poly = DiffPolyJson::from_poly(&v.hamiltonian_diff)?;
            poly.integrated = Some(true);
            diffs.push(LabelledDiff { label: "h11".into(), poly });
        }
        Ok(VerdictJson { conditions: v.conditions, diffs, bounds: VerdictBounds { r: v.r, eps_order: v.eps_order } })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PTermJson {
    pub coeff: ScalarJson,
    pub eps: u16,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<u16>,
    pub modes: Vec<(u32, i32, u32)>,
}

/// Mode-space series; Weyl elements add `hbar` per term and a `rule` tag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PSeriesJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub window: i32,
    pub d: u32,
    pub terms: Vec<PTermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
}

fn pmono_json(m: &PMonomial) -> Vec<(u32, i32, u32)> {
    m.vars().iter().map(|(a, k, p)| (*a as u32 + 1, *k, *p as u32)).collect()
}

impl PSeriesJson {
    pub fn from_pseries(p: &PSeries) -> Result<Self, CliError> {
        let d = common_radicand(p.terms().map(|(_, c)| c))?;
        let terms = p
            .terms()
            .map(|(m, c)| PTermJson { coeff: scalar_to_json(c), eps: m.eps, hbar: None, modes: pmono_json(m) })
            .collect();
        Ok(PSeriesJson { n: p.n, window: p.window, d, terms, rule: None })
    }

    pub fn from_weyl(w: &WeylElement, rule: &str) -> Result<Self, CliError> {
        let d = common_radicand(w.terms().map(|(_, c)| c))?;
        let terms = w
            .terms()
            .map(|(k, c)| PTermJson {
                coeff: scalar_to_json(c),
                eps: k.mono.eps,
                hbar: Some(k.hbar),
                modes: pmono_json(&k.mono),
            })
            .collect();
        Ok(PSeriesJson { n: w.n, window: w.window, d, terms, rule: Some(rule.into()) })
    }

    fn monomial(&self, t: &PTermJson) -> Result<PMonomial, CliError> {
        let mut vars = Vec::with_capacity(t.modes.len());
        for &(a, k, p) in &t.modes {
            if a == 0 || a as usize > self.n || k.abs() > self.window {
                return Err(CliError::Input(format!("mode p{}_{} outside the window", a, k)));
            }
            vars.push((a as u16 - 1, k, u16::try_from(p).map_err(|_| CliError::Input("power too large".into()))?));
        }
        Ok(PMonomial::new(t.eps, vars))
    }

    pub fn to_pseries(&self) -> Result<PSeries, CliError> {
        let mut out = PSeries::zero(self.n, self.window);
        for t in &self.terms {
            out.add_term(self.monomial(t)?, scalar_from_json(&t.coeff, self.d)?);
        }
        Ok(out)
    }

    pub fn to_weyl(&self) -> Result<WeylElement, CliError> {
        let mut out = WeylElement::zero(self.n, self.window);
        for t in &self.terms {
            out.add_term(self.monomial(t)?, t.hbar.unwrap_or(0), scalar_from_json(&t.coeff, self.d)?)?;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsJson {
    pub t_max: u16,
    pub degree: u16,
    pub eps: u16,
}

impl From<Bounds> for BoundsJson {
    fn from(b: Bounds) -> Self {
        BoundsJson { t_max: b.t_max, degree: b.degree, eps: b.eps }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TTermJson {
    pub coeff: ScalarJson,
    pub eps: u16,
    /// `[γ, n, power]` for the factor `(t^γ_n)^power`.
    pub t: Vec<[u32; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub bounds: BoundsJson,
    pub d: u32,
    pub components: Vec<Vec<TTermJson>>,
}

impl SolutionJson {
    pub fn from_solution(sol: &SpecialSolution) -> Result<Self, CliError> {
        let d = common_radicand(sol.u.iter().flat_map(|s| s.terms().map(|(_, c)| c)))?;
        let components = sol
            .u
            .iter()
            .map(|s| {
                s.terms()
                    .map(|(k, c)| {
                        let t = k
                            .exps(s.n_vars())
                            .iter()
                            .enumerate()
                            .filter(|(_, e)| **e > 0)
                            .map(|(i, e)| {
                                let (g, n) = s.var_of(i);
                                [g as u32 + 1, n as u32, *e as u32]
                            })
                            .collect();
                        TTermJson { coeff: scalar_to_json(c), eps: k.eps, t }
                    })
                    .collect()
            })
            .collect();
        Ok(SolutionJson { n: sol.n, bounds: sol.bounds.into(), d, components })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_components() {
        let c = AlgScalar::new(Rational::new(1, 3), Rational::new(0, 1), Rational::new(-2, 5), Rational::new(1, 1), 7);
        let j = scalar_to_json(&c);
        assert_eq!(j, ["1/3".to_string(), "0".into(), "-2/5".into(), "1".into()]);
        assert_eq!(scalar_from_json(&j, 7).unwrap(), c);
        assert!(scalar_from_json(&j, 0).is_err());
    }

    #[test]
    fn json_field_names() {
        let p = DiffPoly::var(2, 1, 3);
        let v = serde_json::to_value(DiffPolyJson::from_poly(&p).unwrap()).unwrap();
        assert_eq!(v["N"], 2);
        assert_eq!(v["terms"][0]["jets"][0], serde_json::json!([2, 3, 1]));
        assert!(v.get("integrated").is_none());
    }
}
