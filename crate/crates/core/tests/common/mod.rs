#![allow(dead_code)]

use proptest::prelude::*;
use qfedder::field::{CoeffRing, Prime};
use qfedder::poly::{parse_poly, Monomial, Polynomial, Variables};

pub fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

pub fn field(p: u64) -> CoeffRing {
    CoeffRing::mod_p(prime(p))
}

pub fn parse(s: &str, p: u64, n: usize) -> Polynomial {
    parse_poly(s, field(p), &Variables::standard(n)).unwrap()
}

pub fn fermat(n: usize, d: u32, p: u64) -> Polynomial {
    let ring = field(p);
    Polynomial::from_terms(ring, n, (0..n).map(|i| (Monomial::var_power(i, d), 1)))
}

/// Random polynomial over F_p with n variables, up to `terms` terms of total degree <= `deg`.
pub fn arb_poly(p: u64, n: usize, terms: usize, deg: u32) -> impl Strategy<Value = Polynomial> {
    let term = (proptest::collection::vec(0..=deg, n), 1..p);
    proptest::collection::vec(term, 1..=terms).prop_map(move |ts| {
        let ts = ts.into_iter().map(|(mut e, c)| {
            while e.iter().sum::<u32>() > deg {
                let i = e.iter().position(|&x| x > 0).unwrap();
                e[i] -= 1;
            }
            (Monomial::from_exponents(&e).unwrap(), c)
        });
        Polynomial::from_terms(field(p), n, ts)
    })
}

/// Random homogeneous polynomial of degree d.
pub fn arb_homogeneous(p: u64, n: usize, terms: usize, d: u32) -> impl Strategy<Value = Polynomial> {
    let term = (proptest::collection::vec(0..=d, n), 1..p);
    proptest::collection::vec(term, 1..=terms).prop_map(move |ts| {
        let ts = ts.into_iter().map(|(mut e, c)| {
            let mut s: u32 = e.iter().sum();
            let mut i = 0;
            while s != d {
                if s > d && e[i] > 0 {
                    e[i] -= 1;
                    s -= 1;
                } else if s < d {
                    e[i] += 1;
                    s += 1;
                }
                i = (i + 1) % e.len();
            }
            (Monomial::from_exponents(&e).unwrap(), c)
        });
        Polynomial::from_terms(field(p), n, ts)
    })
}

pub fn arb_prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(2u64), Just(3), Just(5), Just(7)]
}

/// Row echelon form over F_p on sparse vectors keyed by K, for span membership.
pub struct Span<K: Ord + Clone> {
    p: u64,
    rows: std::collections::BTreeMap<K, std::collections::BTreeMap<K, u64>>,
}

impl<K: Ord + Clone> Span<K> {
    pub fn new(p: u64) -> Self {
        Span { p, rows: Default::default() }
    }

    fn inv(&self, a: u64) -> u64 {
        (1..self.p).find(|&x| x * a % self.p == 1).unwrap()
    }

    /// Reduces v against the rows; returns the remainder.
    pub fn reduce(&self, mut v: std::collections::BTreeMap<K, u64>) -> std::collections::BTreeMap<K, u64> {
        let p = self.p;
        loop {
            v.retain(|_, c| *c % p != 0);
            let Some(key) = v.keys().rev().find(|k| self.rows.contains_key(*k)).cloned() else { return v };
            let c = v[&key];
            for (k, &r) in &self.rows[&key] {
                let e = v.entry(k.clone()).or_insert(0);
                *e = (*e + p * p - c * r % p) % p;
            }
        }
    }

    /// Inserts v; false if it was already in the span.
    pub fn insert(&mut self, v: std::collections::BTreeMap<K, u64>) -> bool {
        let v = self.reduce(v);
        let Some((lead, &c)) = v.iter().next_back() else { return false };
        let lead = lead.clone();
        let ic = self.inv(c);
        let v: std::collections::BTreeMap<K, u64> = v.into_iter().map(|(k, x)| (k, x * ic % self.p)).collect();
        self.rows.insert(lead, v);
        true
    }

    pub fn contains(&self, v: std::collections::BTreeMap<K, u64>) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = &std::collections::BTreeMap<K, u64>> {
        self.rows.values()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
}

pub fn poly_vec(f: &Polynomial) -> std::collections::BTreeMap<Monomial, u64> {
    f.terms().iter().map(|&(m, c)| (m, c as u64)).collect()
}

/// All monomials of total degree d in n variables.
pub fn monomials(n: usize, d: u32) -> Vec<Monomial> {
    qfedder::qfp::monomials_of_weighted_degree(&vec![1; n], d as u64, usize::MAX).unwrap()
}

/// Small instances: (text, p, n).
pub const SMALL_CORPUS: &[(&str, u64, usize)] = &[
    ("x1^3+x2^3+x3^3", 2, 3),
    ("x1^3+x2^3+x3^3", 5, 3),
    ("x1^3+x2^3+x3^3", 7, 3),
    ("x1^3+x2^3+x3^3", 11, 3),
    ("x1^3+x2^3", 2, 2),
    ("x1^2+x2^2+x3^2", 3, 3),
    ("x1^2*x2+x2^2*x3+x3^2*x1", 5, 3),
    ("x1^3+x2^3+x3^3+x1*x2*x3", 5, 3),
    ("x1^2*x3+x2^3+x3^3", 5, 3),
    ("x1^2+x2^3", 5, 2),
    ("x1^2+x2^3", 7, 2),
    ("x1^2+x2^3+x3^5", 7, 3),
    ("x1^2+x2^3+x3^7", 5, 3),
    ("x1^4+x2^4", 3, 2),
    ("x1^5+x2^5+x3^5", 2, 3),
    ("x1^2+x2^2", 2, 2),
    ("x1*x2+x3^3", 3, 3),
    ("x1^3+x2^3+x3^3+x4^3", 2, 4),
    ("x1^4+x2^4+x3^4", 5, 3),
    ("x1^3+x2^4+x3^5", 3, 3),
];

pub fn corpus() -> Vec<Polynomial> {
    SMALL_CORPUS.iter().map(|&(s, p, n)| parse(s, p, n)).collect()
}

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}
