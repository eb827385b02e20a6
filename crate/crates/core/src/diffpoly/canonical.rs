//! Normal form of densities modulo constants and total derivatives.
//!
//! Each homogeneous component (fixed ε power, field content and jet weight)
//! is reduced against the image of `∂_x` from the component one weight lower.
//! Pivots are taken at monomials with the highest derivative orders, so the
//! normal form spreads derivatives as evenly as the class allows.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::Zero;

use super::{DiffPoly, JetVar, Monomial};
use crate::scalars::AlgScalar;

type Key = (u16, Vec<u32>, u32);

/// Orders monomials from "most concentrated" derivative weight to least.
fn badness_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    let orders = |m: &Monomial| {
        let mut v: Vec<u16> = m.vars().iter().flat_map(|(j, p)| core::iter::repeat(j.order).take(*p as usize)).collect();
        v.sort_unstable_by(|x, y| y.cmp(x));
        v
    };
    orders(b).cmp(&orders(a)).then_with(|| b.cmp(a))
}

/// All monomials with the given per-field degrees, ε power and jet weight.
fn enumerate(field_deg: &[u32], eps: u16, weight: u32) -> Vec<Monomial> {
    let mut slots: Vec<u16> = Vec::new();
    for (f, d) in field_deg.iter().enumerate() {
        for _ in 0..*d {
            slots.push(f as u16);
        }
    }
    let mut out = Vec::new();
    let mut orders = alloc::vec![0u16; slots.len()];
    fn rec(slots: &[u16], k: usize, left: u32, orders: &mut Vec<u16>, eps: u16, out: &mut Vec<Monomial>) {
        if k == slots.len() {
            if left == 0 {
                out.push(Monomial::from_vars(
                    eps,
                    slots.iter().zip(orders.iter()).map(|(f, o)| (JetVar::new(*f, *o), 1)),
                ));
            }
            return;
        }
        // Within a run of equal fields keep orders non-decreasing to avoid duplicates.
        let lo = if k > 0 && slots[k - 1] == slots[k] { orders[k - 1] as u32 } else { 0 };
        for o in lo..=left {
            orders[k] = o as u16;
            rec(slots, k + 1, left - o, orders, eps, out);
        }
    }
    if !slots.is_empty() {
        rec(&slots, 0, weight, &mut orders, eps, &mut out);
    }
    out
}

/// Canonical representative of `∫ p dx`.
pub fn canonical_density(p: &DiffPoly) -> DiffPoly {
    let n = p.n_fields();
    let mut groups: BTreeMap<Key, Vec<(Monomial, AlgScalar)>> = BTreeMap::new();
    for (m, c) in p.terms() {
        if m.is_constant() {
            continue;
        }
        groups
            .entry((m.eps, m.field_degrees(n), m.jet_weight()))
            .or_default()
            .push((m.clone(), c.clone()));
    }
    let mut out = DiffPoly::zero(n);
    for ((eps, fdeg, w), terms) in groups {
        if w == 0 {
            for (m, c) in terms {
                out.add_term(m, c);
            }
            continue;
        }
        let mut cols = enumerate(&fdeg, eps, w);
        cols.sort_by(badness_cmp);
        let index: BTreeMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let as_row = |q: &DiffPoly| -> BTreeMap<usize, AlgScalar> {
            q.terms().map(|(m, c)| (index[m], c.clone())).collect()
        };
        // Echelon basis of the image of ∂, keyed by pivot column.
        let mut basis: BTreeMap<usize, BTreeMap<usize, AlgScalar>> = BTreeMap::new();
        for g in enumerate(&fdeg, eps, w - 1) {
            let mut row = as_row(&DiffPoly::term(n, g, AlgScalar::from_int(1)).dx());
            reduce(&mut row, &basis);
            if let Some((&piv, lead)) = row.iter().next() {
                let inv = lead.inverse().unwrap();
                for v in row.values_mut() {
                    *v = &*v * &inv;
                }
                basis.insert(piv, row);
            }
        }
        let mut target: BTreeMap<usize, AlgScalar> = BTreeMap::new();
        for (m, c) in terms {
            target.insert(index[&m], c);
        }
        reduce(&mut target, &basis);
        for (i, c) in target {
            out.add_term(cols[i].clone(), c);
        }
    }
    out
}

fn reduce(row: &mut BTreeMap<usize, AlgScalar>, basis: &BTreeMap<usize, BTreeMap<usize, AlgScalar>>) {
    let mut cursor = 0usize;
    loop {
        let next = row.range(cursor..).find(|(k, _)| basis.contains_key(k)).map(|(k, v)| (*k, v.clone()));
        let Some((piv, coeff)) = next else { return };
        for (k, v) in &basis[&piv] {
            let e = row.entry(*k).or_insert_with(AlgScalar::zero);
            *e -= &(&coeff * v);
            if e.is_zero() {
                row.remove(k);
            }
        }
        cursor = piv + 1;
    }
}
