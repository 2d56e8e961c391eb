//! Frobenius powers of the maximal ideal: nu-invariants, Fedder's test and
//! F-pure threshold bounds.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::field::Prime;
use crate::poly::{bracket_power, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrobError {
    #[error("polynomial has a nonzero constant term, so it does not lie in the maximal ideal")]
    NotInMaximalIdeal,
    #[error("e must be positive")]
    ZeroExponent,
    #[error("p^{0} does not fit in 64 bits")]
    ExponentTooLarge(u32),
    #[error("internal invariant failure: {0}")]
    Invariant(String),
}

/// nu_f(p^e) for the exponents computed so far.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NuTable {
    p: u32,
    values: BTreeMap<u32, u64>,
}

impl NuTable {
    pub fn new(p: Prime) -> Self {
        NuTable { p: p.get(), values: BTreeMap::new() }
    }

    pub fn get(&self, e: u32) -> Option<u64> {
        self.values.get(&e).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.values.iter().map(|(e, v)| (*e, *v))
    }

    pub fn max_e(&self) -> u32 {
        self.values.keys().next_back().copied().unwrap_or(0)
    }

    fn insert(&mut self, e: u32, v: u64) -> Result<(), FrobError> {
        let q = q_of(self.p, e)?;
        if v >= q {
            return Err(FrobError::Invariant(format!("nu(p^{e}) = {v} exceeds p^{e} - 1")));
        }
        if let Some(prev) = e.checked_sub(1).and_then(|d| self.get(d)) {
            if v < prev * self.p as u64 {
                return Err(FrobError::Invariant(format!("nu(p^{e}) = {v} below p * nu(p^{})", e - 1)));
            }
        }
        self.values.insert(e, v);
        Ok(())
    }
}

fn q_of(p: u32, e: u32) -> Result<u64, FrobError> {
    (p as u64).checked_pow(e).filter(|q| *q < 1 << 62).ok_or(FrobError::ExponentTooLarge(e))
}

fn check_in_m(f: &Polynomial) -> Result<(), FrobError> {
    if f.constant_term() != 0 {
        return Err(FrobError::NotInMaximalIdeal);
    }
    Ok(())
}

/// Largest N with f^N outside m^[p^e].
pub fn nu(f: &Polynomial, e: u32) -> Result<u64, FrobError> {
    Ok(nu_table(f, e)?.get(e).expect("computed"))
}

/// nu_f(p^e) for e = 1..=e_max, each search starting from p times the
/// previous value.
pub fn nu_table(f: &Polynomial, e_max: u32) -> Result<NuTable, FrobError> {
    check_in_m(f)?;
    if e_max == 0 {
        return Err(FrobError::ZeroExponent);
    }
    let p = f.prime();
    let mut table = NuTable::new(p);
    let mut prev = 0u64;
    for e in 1..=e_max {
        let q = q_of(p.get(), e)?;
        let v = match nu_diagonal_q(f, q) {
            Some(v) => v,
            None => nu_search(f, q, prev * p.as_u64())?,
        };
        table.insert(e, v)?;
        prev = v;
    }
    Ok(table)
}

fn nu_search(f: &Polynomial, q: u64, start: u64) -> Result<u64, FrobError> {
    let mut acc = bracket_power(f, start, q);
    if acc.is_zero() {
        return Err(FrobError::Invariant(format!("f^{start} lies in m^[{q}] but should not")));
    }
    let mut n = start;
    loop {
        acc.mul_assign(f);
        if acc.is_zero() {
            return Ok(n);
        }
        n += 1;
        if n >= q {
            return Err(FrobError::Invariant("f^q outside m^[q]".into()));
        }
    }
}

/// Fast nu for diagonal f = sum c_j x_j^(d_j) (each variable in at most one
/// term, each term a pure power). f^N avoids m^[q] exactly when some
/// composition k of N with d_j k_j < q adds without carries in base p.
pub fn nu_diagonal(f: &Polynomial, e: u32) -> Option<u64> {
    nu_diagonal_q(f, q_of(f.prime().get(), e).ok()?)
}

fn nu_diagonal_q(f: &Polynomial, q: u64) -> Option<u64> {
    if f.is_zero() || f.constant_term() != 0 {
        return None;
    }
    let n = f.nvars();
    let mut seen = vec![false; n];
    let mut bounds = Vec::new();
    for (m, _) in f.terms() {
        let vars: Vec<usize> = (0..n).filter(|&i| m.exp(i) > 0).collect();
        if vars.len() != 1 || std::mem::replace(&mut seen[vars[0]], true) {
            return None;
        }
        bounds.push((q - 1) / m.exp(vars[0]) as u64);
    }
    let p = f.prime().as_u64();
    let mut positions = 0usize;
    while p.pow(positions as u32) < q {
        positions += 1;
    }
    let k = bounds.len();
    let digit = |b: u64, i: usize| (b / p.pow(i as u32)) % p;
    let full = (1usize << k) - 1;
    let mut best: Vec<Option<u64>> = vec![None; 1 << k];
    best[full] = Some(0);
    for i in (0..positions).rev() {
        let mut next: Vec<Option<u64>> = vec![None; 1 << k];
        let weight = p.pow(i as u32);
        for (mask, val) in best.iter().enumerate() {
            let Some(val) = *val else { continue };
            let mut stay = mask;
            loop {
                // `stay` remains tight; mask \ stay is loosened
                let mut forced = 0u64;
                let mut cap = 0u64;
                let mut ok = true;
                for (j, &b) in bounds.iter().enumerate() {
                    let bit = 1 << j;
                    let dj = digit(b, i);
                    if stay & bit != 0 {
                        forced += dj;
                    } else if mask & bit != 0 {
                        if dj == 0 {
                            ok = false;
                            break;
                        }
                        cap += dj - 1;
                    } else {
                        cap += p - 1;
                    }
                }
                if ok && forced < p {
                    let sum = forced + cap.min(p - 1 - forced);
                    let v = val + sum * weight;
                    if next[stay].is_none_or(|old| old < v) {
                        next[stay] = Some(v);
                    }
                }
                if stay == 0 {
                    break;
                }
                stay = (stay - 1) & mask;
            }
        }
        best = next;
    }
    best.into_iter().flatten().max()
}

/// Fedder's test for A/(f): f^(p-1) not in m^[p].
pub fn fedder_f_pure(f: &Polynomial) -> Result<bool, FrobError> {
    Ok(nu(f, 1)? == f.prime().as_u64() - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FptMethod {
    /// Only the nu-bounds were computed.
    Bounds,
    /// F-pure, so the threshold is 1.
    FPure,
    /// Exact value 1 - h/p confirmed by nu(p^2) = p^2 - h p - 1.
    DenominatorP,
    /// Hypotheses hold but the exactness check failed.
    Unresolved,
    /// Some hypothesis flag failed; bounds only.
    HypothesesFailed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub struct FptFlags {
    pub homogeneous: bool,
    pub isolated_singularity: bool,
    pub p_odd: bool,
    pub p_gt_n_minus_2: bool,
    pub degree_le_n: bool,
    pub f_pure: bool,
}

impl FptFlags {
    /// The flags gating an exact 1 - h/p answer; the isolated-singularity
    /// flag is reported only.
    pub fn all_hold(&self) -> bool {
        self.homogeneous && self.p_odd && self.p_gt_n_minus_2 && self.degree_le_n
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FptReport {
    #[serde(serialize_with = "ser_ratio")]
    pub lower: Ratio<u64>,
    #[serde(serialize_with = "ser_ratio")]
    pub upper: Ratio<u64>,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub exact: Option<Ratio<u64>>,
    pub method: FptMethod,
    pub flags: FptFlags,
    pub nu: NuTable,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_opt_ratio<S: serde::Serializer>(r: &Option<Ratio<u64>>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// Interval [max nu/p^e, min (nu+1)/p^e] from a nu table; nesting is checked.
pub fn bounds_from_table(table: &NuTable) -> Result<(Ratio<u64>, Ratio<u64>), FrobError> {
    let mut lower = Ratio::from_integer(0);
    let mut upper = Ratio::from_integer(1);
    for (e, v) in table.iter() {
        let q = q_of(table.p, e)?;
        let lo = Ratio::new(v, q);
        let hi = Ratio::new(v + 1, q);
        if lo < lower || hi > upper {
            return Err(FrobError::Invariant(format!("fpt interval at e = {e} does not nest")));
        }
        lower = lo;
        upper = hi;
    }
    Ok((lower, upper))
}

pub fn fpt_bounds(f: &Polynomial, e_max: u32) -> Result<FptReport, FrobError> {
    let nu = nu_table(f, e_max)?;
    let (lower, upper) = bounds_from_table(&nu)?;
    let p = f.prime().as_u64();
    let flags = FptFlags { f_pure: nu.get(1) == Some(p - 1), ..FptFlags::default() };
    Ok(FptReport { lower, upper, exact: None, method: FptMethod::Bounds, flags, nu })
}

pub fn fpt_flags(f: &Polynomial, f_pure: bool) -> FptFlags {
    let p = f.prime().as_u64();
    let n = f.nvars() as u64;
    let homogeneous = f.is_homogeneous() && !f.is_zero();
    FptFlags {
        homogeneous,
        isolated_singularity: !f.is_zero() && crate::classify::isolated_singularity(f),
        p_odd: p != 2,
        p_gt_n_minus_2: p + 2 > n,
        degree_le_n: f.degree().is_some_and(|d| d as u64 <= n),
        f_pure,
    }
}

/// Exact threshold when F-pure, or when the hypotheses hold and the
/// threshold has the form 1 - h/p (confirmed through nu(p^2)).
pub fn fpt_resolve(f: &Polynomial) -> Result<FptReport, FrobError> {
    let p = f.prime().as_u64();
    let nu1 = nu(f, 1)?;
    let f_pure = nu1 == p - 1;
    let flags = fpt_flags(f, f_pure);
    if f_pure {
        let nu = nu_table(f, 1)?;
        let one = Ratio::from_integer(1);
        let (lower, upper) = bounds_from_table(&nu)?;
        return Ok(FptReport { lower: lower.max(one), upper, exact: Some(one), method: FptMethod::FPure, flags, nu });
    }
    let nu = nu_table(f, 2)?;
    let (lower, upper) = bounds_from_table(&nu)?;
    let mut report = FptReport { lower, upper, exact: None, method: FptMethod::HypothesesFailed, flags, nu };
    if !flags.all_hold() {
        return Ok(report);
    }
    let h = p - 1 - nu1;
    let nu2 = report.nu.get(2).expect("computed");
    if h < p && nu2 + h * p + 1 == p * p {
        let exact = Ratio::new(p - h, p);
        if exact < report.lower || exact > report.upper {
            return Err(FrobError::Invariant("resolved threshold outside the nu-bounds".into()));
        }
        report.exact = Some(exact);
        report.method = FptMethod::DenominatorP;
    } else {
        report.method = FptMethod::Unresolved;
    }
    Ok(report)
}
