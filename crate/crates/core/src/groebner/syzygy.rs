//! Generators of the syzygy module of a sequence of polynomials, via a
//! tracked Groebner basis and Schreyer's S-pair syzygies.

use std::collections::BTreeMap;

use super::engine::{Engine, OPoly, Rep};
use super::order::MonomialOrder;
use crate::poly::{Monomial, Polynomial};

/// A coefficient vector (c_1, .., c_N) with sum c_j h_j = 0, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SyzygyVector {
    len: usize,
    entries: BTreeMap<usize, Polynomial>,
}

impl SyzygyVector {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Nonzero coordinates.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &Polynomial)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn get(&self, j: usize) -> Option<&Polynomial> {
        self.entries.get(&j)
    }

    /// Dense coordinate list, zeros filled in.
    pub fn coordinates(&self, zero: &Polynomial) -> Vec<Polynomial> {
        (0..self.len).map(|j| self.entries.get(&j).cloned().unwrap_or_else(|| zero.clone())).collect()
    }

    /// sum c_j h_j.
    pub fn apply(&self, h: &[Polynomial]) -> Polynomial {
        let zero = Polynomial::zero(h[0].ring(), h[0].nvars());
        self.entries.iter().fold(zero, |acc, (&j, c)| &acc + &(c * &h[j]))
    }

    pub fn unit(len: usize, j: usize, one: Polynomial) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(j, one);
        SyzygyVector { len, entries }
    }

    pub fn from_entries(len: usize, entries: impl IntoIterator<Item = (usize, Polynomial)>) -> Self {
        SyzygyVector { len, entries: entries.into_iter().filter(|(_, p)| !p.is_zero()).collect() }
    }
}

/// Generating set of {(c_j) : sum c_j h_j = 0}. Zero entries give unit
/// vectors; entries that are scalar multiples of earlier ones give the
/// obvious two-term relation; the rest come from S-pair syzygies of a
/// tracked Groebner basis pulled back to the inputs, together with the
/// relations expressing each input through the basis.
pub fn syzygy_generators(h: &[Polynomial]) -> Vec<SyzygyVector> {
    let n_in = h.len();
    assert!(n_in >= 1, "need at least one polynomial");
    let ring = h[0].ring();
    let nvars = h[0].nvars();
    let one = Polynomial::one(ring, nvars);
    let mut out: Vec<SyzygyVector> = Vec::new();

    // normalized representatives up to scalars
    let mut reps: Vec<(usize, Polynomial, u32)> = Vec::new();
    let mut distinct: Vec<usize> = Vec::new();
    for (j, hj) in h.iter().enumerate() {
        if hj.is_zero() {
            out.push(SyzygyVector::unit(n_in, j, one.clone()));
            continue;
        }
        let lc = hj.leading().expect("nonzero").1;
        let monic = hj.scale(ring.inv(lc).expect("field"));
        if let Some((i, _, lci)) = reps.iter().find(|(_, m, _)| *m == monic) {
            // h_j = (lc_j / lc_i) h_i
            let c = ring.mul(lc, ring.inv(*lci).expect("field"));
            let e = SyzygyVector::from_entries(
                n_in,
                [(j, one.clone()), (*i, Polynomial::constant(ring, nvars, ring.neg(c) as u64))],
            );
            out.push(e);
            continue;
        }
        reps.push((j, monic, lc));
        distinct.push(j);
    }

    if !distinct.is_empty() {
        let eng = Engine::new(ring, nvars, MonomialOrder::grevlex(nvars));
        let inputs: Vec<OPoly> = distinct.iter().map(|&j| eng.to_opoly(&h[j])).collect();
        let basis = eng.groebner(&inputs, true);
        let t: Vec<&Rep> = basis.iter().map(|e| e.rep.as_ref().expect("tracked")).collect();
        let m1 = ring.neg(1);

        let pull_back = |coeffs: &BTreeMap<usize, OPoly>| -> Rep {
            let mut acc = Rep::new();
            for (k, c) in coeffs {
                eng.rep_add(&mut acc, t[*k], None, Some(c));
            }
            acc
        };
        let to_vector = |rep: &Rep| -> SyzygyVector {
            SyzygyVector::from_entries(n_in, rep.iter().map(|(&k, v)| (distinct[k], eng.to_poly(v))))
        };

        // inputs through the basis: e_j - sum_k q_jk T_k
        for (idx, inp) in inputs.iter().enumerate() {
            let (rem, quots) = eng.normal_form(inp, &basis, None, true);
            debug_assert!(rem.is_zero());
            let q: BTreeMap<usize, OPoly> = quots.into_iter().collect();
            let mut v = pull_back(&q);
            v = v.into_iter().map(|(k, p)| (k, eng.neg(&p))).collect();
            let unit = OPoly { terms: vec![(eng.order.key(&Monomial::one()), Monomial::one(), 1)] };
            let mut e = Rep::new();
            e.insert(idx, unit);
            eng.rep_add(&mut v, &e, None, None);
            if !v.is_empty() {
                out.push(to_vector(&v));
            }
        }

        // S-pair syzygies of the basis, pruned to a Schreyer-minimal set
        let lms: Vec<Monomial> = basis.iter().map(|e| *e.poly.lm()).collect();
        let s = basis.len();
        for i in 0..s {
            let mij: Vec<Monomial> = (0..s).map(|j| lms[i].lcm(&lms[j]).div(&lms[i]).expect("lcm")).collect();
            for j in i + 1..s {
                let redundant = (i + 1..s).any(|k| {
                    k != j && mij[k].divides(&mij[j]) && (mij[k] != mij[j] || k < j)
                });
                if redundant {
                    continue;
                }
                let mut coeffs: BTreeMap<usize, OPoly> = BTreeMap::new();
                if lms[i].is_coprime(&lms[j]) {
                    // Koszul relation g_j e_i - g_i e_j
                    coeffs.insert(i, basis[j].poly.clone());
                    coeffs.insert(j, eng.neg(&basis[i].poly));
                } else {
                    let l = lms[i].lcm(&lms[j]);
                    let (mi, mj) = (l.div(&lms[i]).expect("lcm"), l.div(&lms[j]).expect("lcm"));
                    let sp = eng.add(&eng.mul_term(&basis[i].poly, &mi, 1), &eng.mul_term(&basis[j].poly, &mj, m1));
                    let (rem, quots) = eng.normal_form(&sp, &basis, None, true);
                    debug_assert!(rem.is_zero(), "S-polynomial of a Groebner basis reduces to zero");
                    let unit = |m: &Monomial, c: u32| OPoly { terms: vec![(eng.order.key(m), *m, c)] };
                    coeffs.insert(i, unit(&mi, 1));
                    coeffs.insert(j, unit(&mj, m1));
                    for (k, q) in quots {
                        let entry = coeffs.entry(k).or_default();
                        *entry = eng.add(entry, &eng.neg(&q));
                    }
                    coeffs.retain(|_, v| !v.is_zero());
                }
                let v = pull_back(&coeffs);
                if !v.is_empty() {
                    out.push(to_vector(&v));
                }
            }
        }
    }

    let mut seen = rustc_hash::FxHashSet::default();
    out.retain(|v| !v.is_empty() && seen.insert(v.clone()));
    for v in &out {
        assert!(v.apply(h).is_zero(), "syzygy check failed");
    }
    out
}
