//! Groebner bases, normal forms, syzygies and ideal predicates over F_p.

mod engine;
mod order;
mod syzygy;

use std::sync::OnceLock;

use crate::field::CoeffRing;
use crate::poly::{Monomial, Polynomial};
use engine::Engine;

pub use order::{MonomialOrder, OrderKind};
pub use syzygy::{syzygy_generators, SyzygyVector};

/// Reduced Groebner basis, monic, sorted by leading monomial descending.
pub fn groebner_basis(gens: &[Polynomial], order: &MonomialOrder) -> Vec<Polynomial> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let eng = Engine::new(first.ring(), first.nvars(), order.clone());
    let inputs: Vec<_> = gens.iter().map(|g| eng.to_opoly(g)).collect();
    eng.groebner(&inputs, false).iter().map(|e| eng.to_poly(&e.poly)).collect()
}

/// Normal form of `f` modulo a Groebner basis for `order`.
pub fn reduce(f: &Polynomial, basis: &[Polynomial], order: &MonomialOrder) -> Polynomial {
    let eng = Engine::new(f.ring(), f.nvars(), order.clone());
    let elems: Vec<_> = basis
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| {
            let poly = eng.to_opoly(b);
            engine::Elem { mask: 0, sugar: 0, rep: None, poly }
        })
        .collect();
    let (rem, _) = eng.normal_form(&eng.to_opoly(f), &elems, None, false);
    eng.to_poly(&rem)
}

/// Leading monomial of `f` under `order`.
pub fn leading_monomial(f: &Polynomial, order: &MonomialOrder) -> Option<Monomial> {
    f.terms().iter().map(|t| t.0).max_by_key(|m| order.key(m))
}

/// Ideal given by generators, with a lazily computed grevlex basis.
#[derive(Debug)]
pub struct Ideal {
    ring: CoeffRing,
    nvars: usize,
    gens: Vec<Polynomial>,
    gb: OnceLock<Vec<Polynomial>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(b) = self.gb.get() {
            let _ = gb.set(b.clone());
        }
        Ideal { ring: self.ring, nvars: self.nvars, gens: self.gens.clone(), gb }
    }
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(ring: CoeffRing, nvars: usize, gens: Vec<Polynomial>) -> Self {
        assert!(gens.iter().all(|g| g.ring() == ring && g.nvars() == nvars), "generator ring mismatch");
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { ring, nvars, gens, gb: OnceLock::new() }
    }

    pub fn principal(f: &Polynomial) -> Self {
        Ideal::new(f.ring(), f.nvars(), vec![f.clone()])
    }

    /// The ideal generated by its own reduced basis, with the basis cached.
    pub fn interreduced(&self) -> Self {
        let gb = self.groebner_basis().to_vec();
        let cell = OnceLock::new();
        let _ = cell.set(gb.clone());
        Ideal { ring: self.ring, nvars: self.nvars, gens: gb, gb: cell }
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn order(&self) -> MonomialOrder {
        MonomialOrder::grevlex(self.nvars)
    }

    pub fn groebner_basis(&self) -> &[Polynomial] {
        self.gb.get_or_init(|| groebner_basis(&self.gens, &self.order()))
    }

    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        reduce(f, self.groebner_basis(), &self.order())
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.groebner_basis().iter().any(|g| g.len() == 1 && g.terms()[0].0.is_one())
    }
}

/// Same ideal, decided by comparing reduced grevlex bases.
pub fn ideal_equal(a: &Ideal, b: &Ideal) -> bool {
    assert_eq!((a.ring, a.nvars), (b.ring, b.nvars), "ideals live in different rings");
    a.groebner_basis() == b.groebner_basis()
}

/// A/I is finite dimensional: every variable has a pure power among the
/// leading monomials.
pub fn zero_dimensional(i: &Ideal) -> bool {
    let order = i.order();
    let lms: Vec<Monomial> = i.groebner_basis().iter().filter_map(|g| leading_monomial(g, &order)).collect();
    if lms.iter().any(|m| m.is_one()) {
        return true;
    }
    (0..i.nvars).all(|v| lms.iter().any(|m| m.exp(v) > 0 && m.degree() == m.exp(v)))
}

/// Every generator lies in m^[q] (term-wise, since m^[q] is monomial).
pub fn contained_in_monomial_ideal(i: &Ideal, q: u64) -> bool {
    i.gens.iter().all(|g| g.terms().iter().all(|t| t.0.in_bracket(q)))
}
