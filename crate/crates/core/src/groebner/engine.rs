//! Buchberger's algorithm over F_p with the sugar strategy, Gebauer-Moller
//! pair elimination and optional cofactor tracking.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use super::order::MonomialOrder;
use crate::field::CoeffRing;
use crate::poly::{Monomial, Polynomial, MAX_VARS};

/// Term list sorted descending by order key.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct OPoly {
    pub terms: Vec<(u128, Monomial, u32)>,
}

impl OPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].1
    }

    pub fn lc(&self) -> u32 {
        self.terms[0].2
    }
}

/// Sparse cofactor vector: index -> polynomial.
pub(crate) type Rep = BTreeMap<usize, OPoly>;

fn divmask(m: &Monomial) -> u64 {
    let mut mask = 0u64;
    for (i, &e) in m.exps().iter().enumerate().take(MAX_VARS) {
        let mut t = 1u16;
        for b in 0..8 {
            if e >= t {
                mask |= 1 << (i * 8 + b);
            }
            t = t.saturating_mul(2);
        }
    }
    mask
}

#[derive(Clone, Debug)]
pub(crate) struct Elem {
    pub poly: OPoly,
    pub mask: u64,
    pub sugar: u32,
    pub rep: Option<Rep>,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    key: u128,
    sugar: u32,
}

pub(crate) struct Engine {
    pub ring: CoeffRing,
    pub n: usize,
    pub order: MonomialOrder,
}

impl Engine {
    pub fn new(ring: CoeffRing, n: usize, order: MonomialOrder) -> Self {
        assert!(ring.is_field(), "Groebner bases need coefficients mod p");
        Engine { ring, n, order }
    }

    pub fn to_opoly(&self, f: &Polynomial) -> OPoly {
        let mut terms: Vec<_> = f.terms().iter().map(|&(m, c)| (self.order.key(&m), m, c)).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        OPoly { terms }
    }

    pub fn to_poly(&self, f: &OPoly) -> Polynomial {
        Polynomial::from_terms(self.ring, self.n, f.terms.iter().map(|&(_, m, c)| (m, c as u64)))
    }

    fn from_map(&self, map: FxHashMap<Monomial, u32>) -> OPoly {
        let mut terms: Vec<_> =
            map.into_iter().filter(|&(_, c)| c != 0).map(|(m, c)| (self.order.key(&m), m, c)).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        OPoly { terms }
    }

    pub fn scale(&self, f: &OPoly, c: u32) -> OPoly {
        if c == 0 {
            return OPoly::default();
        }
        OPoly { terms: f.terms.iter().map(|&(k, m, a)| (k, m, self.ring.mul(a, c))).collect() }
    }

    /// c * m * f.
    pub fn mul_term(&self, f: &OPoly, m: &Monomial, c: u32) -> OPoly {
        if c == 0 {
            return OPoly::default();
        }
        OPoly {
            terms: f
                .terms
                .iter()
                .map(|&(_, x, a)| {
                    let y = x.mul(m);
                    (self.order.key(&y), y, self.ring.mul(a, c))
                })
                .collect(),
        }
    }

    pub fn add(&self, a: &OPoly, b: &OPoly) -> OPoly {
        let r = self.ring;
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            let (x, y) = (a.terms[i], b.terms[j]);
            if x.0 > y.0 {
                out.push(x);
                i += 1;
            } else if x.0 < y.0 {
                out.push(y);
                j += 1;
            } else {
                let c = r.add(x.2, y.2);
                if c != 0 {
                    out.push((x.0, x.1, c));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&a.terms[i..]);
        out.extend_from_slice(&b.terms[j..]);
        OPoly { terms: out }
    }

    pub fn neg(&self, a: &OPoly) -> OPoly {
        OPoly { terms: a.terms.iter().map(|&(k, m, c)| (k, m, self.ring.neg(c))).collect() }
    }

    pub fn mul(&self, a: &OPoly, b: &OPoly) -> OPoly {
        if a.is_zero() || b.is_zero() {
            return OPoly::default();
        }
        if b.terms.len() == 1 {
            return self.mul_term(a, &b.terms[0].1, b.terms[0].2);
        }
        if a.terms.len() == 1 {
            return self.mul_term(b, &a.terms[0].1, a.terms[0].2);
        }
        let mut map: FxHashMap<Monomial, u32> = FxHashMap::default();
        for &(_, x, cx) in &a.terms {
            for &(_, y, cy) in &b.terms {
                let e = map.entry(x.mul(&y)).or_insert(0);
                *e = self.ring.add(*e, self.ring.mul(cx, cy));
            }
        }
        self.from_map(map)
    }

    pub fn rep_add(&self, a: &mut Rep, b: &Rep, factor: Option<(&Monomial, u32)>, other: Option<&OPoly>) {
        for (&k, v) in b {
            let scaled = match (factor, other) {
                (Some((m, c)), None) => self.mul_term(v, m, c),
                (None, Some(q)) => self.mul(v, q),
                (None, None) => v.clone(),
                (Some(_), Some(_)) => unreachable!("one multiplier at a time"),
            };
            let entry = a.entry(k).or_default();
            *entry = self.add(entry, &scaled);
            if entry.is_zero() {
                a.remove(&k);
            }
        }
    }

    /// Index of the first basis element whose leading monomial divides `m`.
    fn find_divisor(&self, m: &Monomial, basis: &[Elem], active: Option<&[bool]>) -> Option<usize> {
        let mask = divmask(m);
        basis.iter().enumerate().position(|(k, g)| {
            active.is_none_or(|a| a[k]) && !g.poly.is_zero() && g.mask & !mask == 0 && g.poly.lm().divides(m)
        })
    }

    /// Full normal form. With `quotients`, also returns the multipliers q_k
    /// with f = sum q_k g_k + remainder.
    pub fn normal_form(
        &self,
        f: &OPoly,
        basis: &[Elem],
        active: Option<&[bool]>,
        quotients: bool,
    ) -> (OPoly, Vec<(usize, OPoly)>) {
        let r = self.ring;
        let mut work: BTreeMap<u128, (Monomial, u32)> = f.terms.iter().map(|&(k, m, c)| (k, (m, c))).collect();
        let mut rem = Vec::new();
        let mut quot: BTreeMap<usize, Vec<(u128, Monomial, u32)>> = BTreeMap::new();
        while let Some((k, (m, c))) = work.pop_last() {
            match self.find_divisor(&m, basis, active) {
                None => rem.push((k, m, c)),
                Some(idx) => {
                    let g = &basis[idx].poly;
                    let mult = m.div(g.lm()).expect("divisor");
                    let coeff = r.mul(c, r.inv(g.lc()).expect("nonzero leading coefficient"));
                    if quotients {
                        quot.entry(idx).or_default().push((self.order.key(&mult), mult, coeff));
                    }
                    for &(_, x, a) in &g.terms[1..] {
                        let y = x.mul(&mult);
                        let ky = self.order.key(&y);
                        let sub = r.neg(r.mul(a, coeff));
                        match work.entry(ky) {
                            std::collections::btree_map::Entry::Occupied(mut e) => {
                                let v = r.add(e.get().1, sub);
                                if v == 0 {
                                    e.remove();
                                } else {
                                    e.get_mut().1 = v;
                                }
                            }
                            std::collections::btree_map::Entry::Vacant(e) => {
                                e.insert((y, sub));
                            }
                        }
                    }
                }
            }
        }
        let q = quot
            .into_iter()
            .map(|(k, mut t)| {
                t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                (k, OPoly { terms: t })
            })
            .collect();
        (OPoly { terms: rem }, q)
    }

    fn make_elem(&self, poly: OPoly, sugar: u32, rep: Option<Rep>) -> Elem {
        let inv = self.ring.inv(poly.lc()).expect("nonzero");
        let poly = self.scale(&poly, inv);
        let rep = rep.map(|r| r.into_iter().map(|(k, v)| (k, self.scale(&v, inv))).collect());
        let mask = divmask(poly.lm());
        Elem { poly, mask, sugar, rep }
    }

    /// Reduces `f` (with cofactors `rep`) against the basis.
    fn reduce_tracked(&self, f: &OPoly, rep: Option<Rep>, basis: &[Elem], active: &[bool]) -> (OPoly, Option<Rep>) {
        let track = rep.is_some();
        let (rem, quots) = self.normal_form(f, basis, Some(active), track);
        let rep = rep.map(|mut r| {
            for (k, q) in &quots {
                let neg_q = self.neg(q);
                let src = basis[*k].rep.as_ref().expect("tracked basis");
                self.rep_add(&mut r, src, None, Some(&neg_q));
            }
            r
        });
        (rem, rep)
    }

    fn update(&self, elems: &[Elem], active: &mut [bool], pairs: &mut Vec<Pair>, h: usize) {
        let lm_h = *elems[h].poly.lm();
        let mut c: Vec<(usize, Monomial)> = (0..h)
            .filter(|&g| active[g])
            .map(|g| (g, lm_h.lcm(elems[g].poly.lm())))
            .collect();
        let mut d: Vec<(usize, Monomial)> = Vec::new();
        while let Some((g1, l1)) = c.pop() {
            let coprime = lm_h.is_coprime(elems[g1].poly.lm());
            let dominated = c.iter().any(|(_, l2)| l2.divides(&l1)) || d.iter().any(|(_, l2)| l2.divides(&l1));
            if coprime || !dominated {
                d.push((g1, l1));
            }
        }
        let e: Vec<(usize, Monomial)> =
            d.into_iter().filter(|(g, _)| !lm_h.is_coprime(elems[*g].poly.lm())).collect();
        pairs.retain(|pr| {
            let l1 = lm_h.lcm(elems[pr.i].poly.lm());
            let l2 = lm_h.lcm(elems[pr.j].poly.lm());
            !(lm_h.divides(&pr.lcm) && l1 != pr.lcm && l2 != pr.lcm)
        });
        for (g, l) in e {
            let sugar = (elems[g].sugar + l.degree() - elems[g].poly.lm().degree())
                .max(elems[h].sugar + l.degree() - lm_h.degree());
            pairs.push(Pair { i: g, j: h, lcm: l, key: self.order.key(&l), sugar });
        }
        for g in 0..h {
            if active[g] && lm_h.divides(elems[g].poly.lm()) {
                active[g] = false;
            }
        }
    }

    /// Reduced Groebner basis of the inputs, sorted by leading monomial
    /// descending. With `track`, every element carries cofactors over the
    /// input indices.
    pub fn groebner(&self, inputs: &[OPoly], track: bool) -> Vec<Elem> {
        let mut elems: Vec<Elem> = Vec::new();
        let mut active: Vec<bool> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut order: Vec<usize> = (0..inputs.len()).filter(|&i| !inputs[i].is_zero()).collect();
        order.sort_by(|&a, &b| inputs[a].terms[0].0.cmp(&inputs[b].terms[0].0));
        for i in order {
            let rep = track.then(|| {
                let mut r = Rep::new();
                r.insert(i, OPoly { terms: vec![(self.order.key(&Monomial::one()), Monomial::one(), 1)] });
                r
            });
            let (h, rep) = self.reduce_tracked(&inputs[i], rep, &elems, &active);
            if h.is_zero() {
                continue;
            }
            let sugar = inputs[i].terms.iter().map(|t| t.1.degree()).max().unwrap_or(0);
            elems.push(self.make_elem(h, sugar, rep));
            active.push(true);
            let hi = elems.len() - 1;
            self.update(&elems, &mut active, &mut pairs, hi);
        }
        while !pairs.is_empty() {
            let best = (0..pairs.len())
                .min_by(|&a, &b| (pairs[a].sugar, pairs[a].key).cmp(&(pairs[b].sugar, pairs[b].key)))
                .expect("nonempty");
            let pr = pairs.swap_remove(best);
            let (gi, gj) = (&elems[pr.i], &elems[pr.j]);
            let mi = pr.lcm.div(gi.poly.lm()).expect("lcm");
            let mj = pr.lcm.div(gj.poly.lm()).expect("lcm");
            let minus1 = self.ring.neg(1);
            let s = self.add(&self.mul_term(&gi.poly, &mi, 1), &self.mul_term(&gj.poly, &mj, minus1));
            let rep = track.then(|| {
                let mut r = Rep::new();
                self.rep_add(&mut r, gi.rep.as_ref().expect("tracked"), Some((&mi, 1)), None);
                self.rep_add(&mut r, gj.rep.as_ref().expect("tracked"), Some((&mj, minus1)), None);
                r
            });
            let (h, rep) = self.reduce_tracked(&s, rep, &elems, &active);
            if h.is_zero() {
                continue;
            }
            elems.push(self.make_elem(h, pr.sugar, rep));
            active.push(true);
            let hi = elems.len() - 1;
            self.update(&elems, &mut active, &mut pairs, hi);
        }
        self.interreduce(elems, active)
    }

    fn interreduce(&self, elems: Vec<Elem>, active: Vec<bool>) -> Vec<Elem> {
        let mut basis: Vec<Elem> = elems.into_iter().zip(active).filter(|(_, a)| *a).map(|(e, _)| e).collect();
        basis.sort_by(|a, b| b.poly.terms[0].0.cmp(&a.poly.terms[0].0));
        for k in 0..basis.len() {
            let mut flags = vec![true; basis.len()];
            flags[k] = false;
            let head = OPoly { terms: vec![basis[k].poly.terms[0]] };
            let tail = OPoly { terms: basis[k].poly.terms[1..].to_vec() };
            let rep = basis[k].rep.clone();
            let (rem, rep) = self.reduce_tracked(&tail, rep, &basis, &flags);
            basis[k].poly = self.add(&head, &rem);
            basis[k].rep = rep;
        }
        basis
    }
}
