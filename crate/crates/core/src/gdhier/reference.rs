//! Closed forms for small `r`, kept as exact reference data.

use alloc::vec::Vec;

use crate::diffpoly::{parse_diffpoly, DiffPoly, LocalFunctional, VarNames};
use crate::error::Error;
use crate::hamops::{DiffOperator, HamiltonianOperator};

/// `res L^{5/2}` for `r = 2`, in `f0`.
pub const RES_L_5_2: &str = "5/16*f0^3 + 5/32*f0_1^2 + 5/16*f0*f0_2 + 1/32*f0_4";

/// `h̄^GD_3` density for `r = 2`.
pub const H_GD_2_3: &str = "-1/8*f0^3 - 1/16*f0*f0_2";

/// `h̄^GD_4` density for `r = 3`.
pub const H_GD_3_4: &str = "-2/9*f0^2*f1 + 1/81*f1^4 - 1/9*f0*f0_2 + 2/9*f0*f1*f1_1 + 1/18*f1^2*f1_2 \
    + 1/9*f0*f1_3 + 1/27*f1*f1_4";

/// `w^1, w^2` in terms of `f0, f1` for `r = 3`.
pub const W_OF_F_3: [&str; 2] = ["(1/(2*i*sqrt(3)))*(2/3*f0 - 1/3*f1_1)", "1/3*f1"];

/// `h̄^{r-spin}_{1,1}` densities for `r = 2..5`.
pub const H11: [&str; 4] = [
    "1/6*w^3 + 1/24*eps^2*w*w_2",
    "1/36*w2^4 + 1/2*w2*w1^2 + eps^2*(1/48*w2^2*w2_2 + 1/12*w1*w1_2) + 1/432*eps^4*w2*w2_4",
    "1/2*w1*w2^2 + 1/2*w1^2*w3 + 1/8*w2^2*w3^2 + 1/320*w3^5 \
     + eps^2*(1/8*w1*w1_2 + 1/48*w1*w3*w3_2 + 1/32*w1*w3_1^2 + 1/12*w2*w3*w2_2 + 1/48*w3*w2_1^2 \
     + 1/64*w3^3*w3_2 + 1/32*w3^2*w3_1^2) \
     + eps^4*(1/160*w2*w2_4 + 1/480*w1*w3_4 + 5/4608*w3^2*w3_4) + 1/11520*eps^6*w3*w3_6",
    H11_5,
];

const H11_5: &str = "1/2*w1^2*w4 + w1*w2*w3 + 1/6*w2^3 + 1/10*w2^2*w4^2 + 1/5*w2*w3^2*w4 + 1/30*w3^4 \
     + 1/50*w3^2*w4^3 + 1/3750*w4^6 \
     + eps^2*(1/1200*w4_2*w4^4 + 1/100*w4_2*w2*w4^2 + 1/50*w3_2*w3*w4^2 + 1/120*w2_1^2*w4 \
     + 1/100*w4_2*w3^2*w4 + 1/50*w4_1^2*w2*w4 + 1/12*w2_2*w2*w4 + 1/30*w1_2*w3*w4 + 1/6*w1_2*w1 \
     + 1/30*w3_1*w4_1*w1 + 1/10*w3_1^2*w2 + 2/15*w3_2*w2*w3) \
     + eps^4*(1/14400*w4_4*w4^3 + 49/72000*w4_2^2*w4^2 + 13/1800*w3_2^2*w4 + 7/900*w3_1*w3_3*w4 \
     + 1/300*w4_4*w2*w4 + 1/180*w3_4*w3*w4 + 1/150*w3_4*w1 + 1/120*w4_2^2*w2 + 7/600*w2_4*w2 \
     + 7/600*w4_1*w4_3*w2) \
     + eps^6*(178/10125*w4*w4_3^2 - 589/135000*w4_6*w4^2 + 1/4500*w4_6*w2 + 1/3000*w3_6*w3 \
     + 1069/40500*w4_2*w4_4*w4) \
     + 1/337500*eps^8*w4_8*w4";

/// The single `ε^6` term of the `r = 5` table whose tabulated sign looks suspect.
pub const SUSPECT_R5: &str = "-589/135000*eps^6*w4_6*w4^2";

/// Parses a density in `w^1..w^{r−1}`.
pub fn parse_w(r: u32, s: &str) -> Result<DiffPoly, Error> {
    parse_diffpoly(s, &VarNames::w(r as usize - 1))
}

/// Parses a density in `f_0..f_{r−2}`.
pub fn parse_f(r: u32, s: &str) -> Result<DiffPoly, Error> {
    parse_diffpoly(s, &VarNames::f(r as usize - 1))
}

/// Tabulated `h̄^{r-spin}_{1,1}` for `r ∈ 2..=5`.
pub fn h11(r: u32) -> Result<LocalFunctional, Error> {
    match r {
        2..=5 => Ok(LocalFunctional::new(parse_w(r, H11[r as usize - 2])?)),
        _ => Err(Error::Unsupported(alloc::format!("no table for r = {}", r))),
    }
}

/// Tabulated `K^{r-spin}` for `r ∈ 2..=5`: `∂` on the anti-diagonal plus `c ε^2 ∂^3` entries.
pub fn k_rspin(r: u32) -> Result<HamiltonianOperator, Error> {
    let n = r as usize - 1;
    let (third, c): (&[(usize, usize)], &str) = match r {
        2 | 3 => (&[], "0"),
        4 => (&[(0, 0)], "1/48"),
        5 => (&[(0, 1), (1, 0)], "1/30"),
        _ => return Err(Error::Unsupported(alloc::format!("no table for r = {}", r))),
    };
    let mut entries: Vec<DiffOperator> = (0..n * n).map(|_| DiffOperator::zero(n)).collect();
    for a in 0..n {
        entries[a * n + (n - 1 - a)].add_coeff(1, DiffPoly::one(n));
    }
    let coeff = parse_diffpoly(&alloc::format!("{}*eps^2", c), &VarNames::w(n))?;
    for &(a, b) in third {
        entries[a * n + b].add_coeff(3, coeff.clone());
    }
    HamiltonianOperator::from_entries(n, entries)
}

/// Reference Miura maps `w = w(u)` relating the two normalizations, for `r ∈ 3..=5`.
pub fn theorem_miura(r: u32) -> Result<crate::hamops::MiuraMap, Error> {
    let images: &[&str] = match r {
        3 => &["w1", "w2"],
        4 => &["w1 + 1/96*eps^2*w3_2", "w2", "w3"],
        5 => &["w1 + 1/60*eps^2*w3_2", "w2 + 1/60*eps^2*w4_2", "w3", "w4"],
        _ => return Err(Error::Unsupported(alloc::format!("no map for r = {}", r))),
    };
    let polys = images.iter().map(|s| parse_w(r, s)).collect::<Result<Vec<_>, _>>()?;
    crate::hamops::MiuraMap::new(polys)
}
