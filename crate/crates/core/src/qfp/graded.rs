//! Degree-by-degree iteration for quasi-homogeneous f.
//!
//! With weights w, K0 = (p-1)|w| and c = p (p-1) deg_w(f) - K0, theta sends
//! weighted degree p k - c to k, so
//! V_(m+1)(k) = theta(V_m(p k - c) and ker u) + (f^(p-1))_k.
//! Containment in m^[p] only involves degrees 0..=K0, which fixes the
//! degrees needed at every level.

use std::collections::{BTreeMap, BTreeSet};

use crate::poly::{Grading, Monomial, Polynomial};

use super::delta::{u_map, Delta1Context};
use super::{Certificate, HeightOutcome, TraceStep};

/// Monomials of weighted degree `d`, or None past `limit`.
pub fn monomials_of_weighted_degree(weights: &[u32], d: u64, limit: usize) -> Option<Vec<Monomial>> {
    fn walk(i: usize, left: u64, w: &[u32], cur: &mut Monomial, out: &mut Vec<Monomial>, limit: usize) -> bool {
        if i + 1 == w.len() {
            if left.is_multiple_of(w[i] as u64) {
                let e = left / w[i] as u64;
                if e > u16::MAX as u64 {
                    return false;
                }
                cur.set_exp(i, e as u32);
                out.push(*cur);
                cur.set_exp(i, 0);
            }
            return out.len() <= limit;
        }
        let mut e = 0u64;
        while e * w[i] as u64 <= left {
            if e > u16::MAX as u64 {
                return false;
            }
            cur.set_exp(i, e as u32);
            if !walk(i + 1, left - e * w[i] as u64, w, cur, out, limit) {
                return false;
            }
            e += 1;
        }
        cur.set_exp(i, 0);
        true
    }
    let mut out = Vec::new();
    let mut cur = Monomial::one();
    if weights.is_empty() {
        return (d == 0).then(|| vec![cur]);
    }
    walk(0, d, weights, &mut cur, &mut out, limit).then_some(out)
}

/// Row echelon form keyed by leading monomial; rows are monic.
#[derive(Debug, Default, Clone)]
struct Echelon {
    rows: BTreeMap<Monomial, Polynomial>,
}

impl Echelon {
    fn reduce(&self, mut v: Polynomial) -> Polynomial {
        while let Some((lm, lc)) = v.leading() {
            match self.rows.get(&lm) {
                Some(row) => v = &v - &row.scale(lc),
                None => break,
            }
        }
        v
    }

    /// Adds v if independent; returns the new row.
    fn insert(&mut self, v: Polynomial) -> Option<Polynomial> {
        let v = self.reduce(v);
        let (lm, lc) = v.leading()?;
        let row = v.scale(v.ring().inv(lc).expect("field"));
        self.rows.insert(lm, row.clone());
        Some(row)
    }

    fn len(&self) -> usize {
        self.rows.len()
    }
}

/// Kernel of u on a growing space: echelon over u-parts carrying theta-parts.
#[derive(Debug, Default, Clone)]
struct KernelState {
    rows: BTreeMap<Monomial, (Polynomial, Polynomial)>,
}

impl KernelState {
    /// Returns theta of a new kernel vector, if feeding (u, t) produced one.
    fn feed(&mut self, mut u: Polynomial, mut t: Polynomial) -> Option<Polynomial> {
        while let Some((lm, lc)) = u.leading() {
            match self.rows.get(&lm) {
                Some((ru, rt)) => {
                    u = &u - &ru.scale(lc);
                    t = &t - &rt.scale(lc);
                }
                None => {
                    let inv = u.ring().inv(lc).expect("field");
                    self.rows.insert(lm, (u.scale(inv), t.scale(inv)));
                    return None;
                }
            }
        }
        (!t.is_zero()).then_some(t)
    }
}

#[derive(Debug, Default, Clone)]
struct DegreeState {
    basis: Echelon,
    pending: Vec<Polynomial>,
    kernel: KernelState,
}

#[derive(Debug, Clone)]
pub struct GradedConfig {
    pub cutoff: u32,
    pub max_degree: Option<u64>,
    pub dim_limit: usize,
}

#[derive(Debug, Clone)]
pub struct GradedRun {
    pub outcome: HeightOutcome,
    pub trace: Vec<TraceStep>,
    pub heuristic: bool,
    pub notes: Vec<String>,
}

fn in_box(v: &Polynomial, p: u32) -> bool {
    v.terms().iter().any(|t| !t.0.in_bracket(p as u64))
}

pub fn graded_height(ctx: &Delta1Context, grading: &Grading, cfg: &GradedConfig) -> GradedRun {
    let f = ctx.f();
    let p = f.prime().get();
    let pw = p as i64;
    let w = &grading.weights;
    let k0 = (p as u64 - 1) * grading.weight_sum();
    let dg = grading.degree * (p as u64 - 1);
    let c = pw * dg as i64 - k0 as i64;
    let closed = pw * k0 as i64 - c <= k0 as i64;
    let cutoff = cfg.cutoff.max(1) as usize;
    let mut notes = Vec::new();
    let mut heuristic = false;

    // needed[j] for j = 1..=cutoff (index j - 1)
    let mut needed: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); cutoff];
    needed[cutoff - 1] = (0..=k0).collect();
    for j in (0..cutoff - 1).rev() {
        let mut s: BTreeSet<u64> = (0..=k0).collect();
        for &k in &needed[j + 1] {
            let d = pw * k as i64 - c;
            if d >= 0 {
                s.insert(d as u64);
            }
        }
        needed[j] = s;
    }

    let mut skipped: BTreeSet<u64> = BTreeSet::new();
    let mut states: BTreeMap<u64, DegreeState> = BTreeMap::new();
    for &d in &needed[0] {
        if cfg.max_degree.is_some_and(|m| d > m) {
            skipped.insert(d);
            continue;
        }
        let mut st = DegreeState::default();
        if d >= dg {
            match monomials_of_weighted_degree(w, d - dg, cfg.dim_limit) {
                Some(ms) => {
                    for m in ms {
                        if let Some(row) = st.basis.insert(ctx.g().mul_monomial(&m, 1)) {
                            st.pending.push(row);
                        }
                    }
                }
                None => {
                    skipped.insert(d);
                    continue;
                }
            }
        }
        states.insert(d, st);
    }
    if !skipped.is_empty() {
        heuristic = true;
        notes.push(format!(
            "degree window truncated: {} needed degrees skipped (largest {})",
            skipped.len(),
            skipped.iter().next_back().expect("nonempty")
        ));
    }
    if !closed {
        notes.push("degree window is not closed under the theta recursion; stabilization cannot be certified".into());
    }

    let dims = |states: &BTreeMap<u64, DegreeState>, level: usize| -> TraceStep {
        let live: Vec<u64> =
            needed[level].iter().copied().filter(|d| states.get(d).is_some_and(|s| s.basis.len() > 0)).collect();
        TraceStep {
            m: level as u32 + 1,
            generators: needed[level].iter().filter_map(|d| states.get(d)).map(|s| s.basis.len()).sum(),
            min_degree: live.first().copied(),
            max_degree: live.last().copied(),
            step: None,
        }
    };
    let has_box = |states: &BTreeMap<u64, DegreeState>| {
        states.range(0..=k0).any(|(_, s)| s.basis.rows.values().any(|r| in_box(r, p)))
    };

    let mut trace = vec![dims(&states, 0)];
    if has_box(&states) {
        return GradedRun { outcome: HeightOutcome::Finite(1), trace, heuristic: false, notes };
    }
    for level in 1..cutoff {
        let mut images: Vec<(u64, Polynomial)> = Vec::new();
        for &k in &needed[level] {
            let d = pw * k as i64 - c;
            if d < 0 {
                continue;
            }
            let Some(st) = states.get_mut(&(d as u64)) else { continue };
            for v in std::mem::take(&mut st.pending) {
                if let Some(t) = st.kernel.feed(u_map(&v), ctx.theta(&v)) {
                    debug_assert!(t.weighted_degree(w) == Some(k));
                    images.push((k, t));
                }
            }
        }
        let mut added = 0usize;
        for (k, t) in images {
            if let Some(st) = states.get_mut(&k) {
                if let Some(row) = st.basis.insert(t) {
                    st.pending.push(row);
                    added += 1;
                }
            }
        }
        trace.push(dims(&states, level));
        if has_box(&states) {
            // level 1 is exact, so a truncated escape at level 2 is still exact
            let heuristic = heuristic && level > 1;
            if heuristic {
                notes.push(format!("height at most {} (earlier levels may be undercounted)", level + 1));
            }
            return GradedRun { outcome: HeightOutcome::Finite(level as u32 + 1), trace, heuristic, notes };
        }
        if added == 0 && closed && !heuristic {
            return GradedRun {
                outcome: HeightOutcome::Infinite(Certificate::Stabilized(level as u32)),
                trace,
                heuristic,
                notes,
            };
        }
    }
    GradedRun { outcome: HeightOutcome::UnknownBeyond(cfg.cutoff), trace, heuristic, notes }
}
