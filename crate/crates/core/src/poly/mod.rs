//! Multivariate polynomials over Z/p and Z/p^2.

mod bracket;
mod grading;
mod monomial;
mod parse;
mod slab;

use std::fmt;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::field::{CoeffRing, Prime};

pub use bracket::{pow_mod_bracket, truncate_bracket, BracketBox, BracketPower};
pub(crate) use bracket::bracket_power;
pub use grading::{find_grading, Grading};
pub use monomial::{Monomial, MAX_VARS};
pub use parse::{infer_variables, parse_poly, ParseError, Variables};
pub use slab::{binomial, multiply_slab_by_terms, DenseSlab, SlabShape};

/// Products whose slab exceeds this many entries use the sparse kernel.
const SLAB_LIMIT: u64 = 1 << 25;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("coefficient rings differ (mod {0} vs mod {1})")]
    RingMismatch(u32, u32),
    #[error("variable counts differ ({0} vs {1})")]
    ArityMismatch(usize, usize),
    #[error("at most {MAX_VARS} variables are supported, got {0}")]
    TooManyVars(usize),
    #[error("operation needs coefficients mod p")]
    NotField,
    #[error("coefficients are not all divisible by p")]
    NotDivisible,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Sparse polynomial: nonzero terms sorted descending in grevlex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: CoeffRing,
    nvars: usize,
    terms: Vec<(Monomial, u32)>,
}

impl Polynomial {
    pub fn zero(ring: CoeffRing, nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        Polynomial { ring, nvars, terms: Vec::new() }
    }

    pub fn constant(ring: CoeffRing, nvars: usize, c: u64) -> Self {
        Self::monomial(ring, nvars, Monomial::one(), c)
    }

    pub fn one(ring: CoeffRing, nvars: usize) -> Self {
        Self::constant(ring, nvars, 1)
    }

    pub fn monomial(ring: CoeffRing, nvars: usize, m: Monomial, c: u64) -> Self {
        let mut p = Self::zero(ring, nvars);
        let c = ring.reduce(c);
        if c != 0 {
            p.terms.push((m, c));
        }
        p
    }

    pub fn var(ring: CoeffRing, nvars: usize, i: usize) -> Self {
        Self::monomial(ring, nvars, Monomial::var(i), 1)
    }

    /// Builds from arbitrary terms, combining duplicates and reducing coefficients.
    pub fn from_terms(ring: CoeffRing, nvars: usize, terms: impl IntoIterator<Item = (Monomial, u64)>) -> Self {
        let mut map: FxHashMap<Monomial, u64> = FxHashMap::default();
        let m = ring.modulus() as u64;
        for (mono, c) in terms {
            let e = map.entry(mono).or_insert(0);
            *e = (*e + c % m) % m;
        }
        Self::from_map(ring, nvars, map)
    }

    fn from_map(ring: CoeffRing, nvars: usize, map: FxHashMap<Monomial, u64>) -> Self {
        let m = ring.modulus() as u64;
        let mut terms: Vec<(Monomial, u32)> =
            map.into_iter().filter_map(|(k, v)| (v % m != 0).then_some((k, (v % m) as u32))).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { ring, nvars, terms }
    }

    pub fn from_slab(ring: CoeffRing, slab: &DenseSlab) -> Self {
        let mut terms = slab.terms();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { ring, nvars: slab.shape.nvars(), terms }
    }

    /// Dense view of a homogeneous polynomial of the given degree.
    pub fn to_slab(&self, degree: u32) -> DenseSlab {
        assert!(self.terms.iter().all(|t| t.0.degree() == degree), "slab needs a homogeneous polynomial");
        DenseSlab::from_terms(self.nvars, degree, &self.terms)
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    #[inline]
    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.ring.prime()
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(Monomial, u32)> {
        self.terms.first().copied()
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms
            .binary_search_by(|t| m.cmp(&t.0))
            .map_or(0, |i| self.terms[i].1)
    }

    pub fn constant_term(&self) -> u32 {
        self.coefficient(&Monomial::one())
    }

    /// Maximum total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).min()
    }

    /// Common total degree of all terms; zero counts as homogeneous of every
    /// degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.terms.first()?.0.degree();
        self.terms.iter().all(|t| t.0.degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Common weighted degree of all terms.
    pub fn weighted_degree(&self, w: &[u32]) -> Option<u64> {
        let d = self.terms.first()?.0.weighted_degree(w);
        self.terms.iter().all(|t| t.0.weighted_degree(w) == d).then_some(d)
    }

    fn check(&self, o: &Polynomial) -> Result<(), PolyError> {
        if self.ring != o.ring {
            return Err(PolyError::RingMismatch(self.ring.modulus(), o.ring.modulus()));
        }
        if self.nvars != o.nvars {
            return Err(PolyError::ArityMismatch(self.nvars, o.nvars));
        }
        Ok(())
    }

    fn merge(&self, o: &Polynomial, negate_other: bool) -> Polynomial {
        let r = self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let oc = |c: u32| if negate_other { r.neg(c) } else { c };
        while i < self.terms.len() && j < o.terms.len() {
            let (a, b) = (&self.terms[i], &o.terms[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Greater => {
                    out.push(*a);
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((b.0, oc(b.1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = r.add(a.1, oc(b.1));
                    if c != 0 {
                        out.push((a.0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend(o.terms[j..].iter().map(|b| (b.0, oc(b.1))));
        Polynomial { ring: r, nvars: self.nvars, terms: out }
    }

    pub fn checked_add(&self, o: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(o)?;
        Ok(self.merge(o, false))
    }

    pub fn checked_sub(&self, o: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(o)?;
        Ok(self.merge(o, true))
    }

    pub fn neg(&self) -> Polynomial {
        let r = self.ring;
        Polynomial { ring: r, nvars: self.nvars, terms: self.terms.iter().map(|&(m, c)| (m, r.neg(c))).collect() }
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let r = self.ring;
        let c = c % r.modulus();
        let terms = self.terms.iter().filter_map(|&(m, a)| {
            let v = r.mul(a, c);
            (v != 0).then_some((m, v))
        });
        Polynomial { ring: r, nvars: self.nvars, terms: terms.collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u32) -> Polynomial {
        let mut p = self.scale(c);
        for t in &mut p.terms {
            t.0 = t.0.mul(m);
        }
        p
    }

    pub fn checked_mul(&self, o: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(o)?;
        Ok(self.mul_unchecked(o))
    }

    fn mul_unchecked(&self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero(self.ring, self.nvars);
        }
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        if let (Some(db), Some(ds)) = (big.homogeneous_degree(), small.homogeneous_degree()) {
            if self.nvars >= 2 {
                let slab_len = SlabShape::count(self.nvars, db + ds);
                let work = big.len() as u64 * small.len() as u64;
                if slab_len <= SLAB_LIMIT && slab_len <= 8 * work {
                    let slab = big.to_slab(db);
                    let prod = multiply_slab_by_terms(&slab, &small.terms, self.ring.modulus());
                    return Polynomial::from_slab(self.ring, &prod);
                }
            }
        }
        self.mul_sparse(o)
    }

    pub(crate) fn mul_sparse(&self, o: &Polynomial) -> Polynomial {
        let m = self.ring.modulus() as u64;
        let mut map: FxHashMap<Monomial, u64> = FxHashMap::default();
        map.reserve(self.len().saturating_mul(o.len()).min(1 << 22));
        for &(a, ca) in &self.terms {
            for &(b, cb) in &o.terms {
                let e = map.entry(a.mul(&b)).or_insert(0);
                *e = (*e + ca as u64 * cb as u64) % m;
            }
        }
        Self::from_map(self.ring, self.nvars, map)
    }

    /// f^(p^e): exponents scaled, coefficients fixed (valid over F_p).
    pub fn frobenius_power(&self, e: u32) -> Result<Polynomial, PolyError> {
        if !self.ring.is_field() {
            return Err(PolyError::NotField);
        }
        let q = u32::try_from(self.prime().power(e)).expect("Frobenius exponent overflow");
        let terms = self.terms.iter().map(|&(m, c)| (m.scale(q), c)).collect();
        Ok(Polynomial { ring: self.ring, nvars: self.nvars, terms })
    }

    /// f^k by repeated multiplication by f.
    pub fn pow_small(&self, k: u64) -> Polynomial {
        let mut acc = Polynomial::one(self.ring, self.nvars);
        for _ in 0..k {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// f^k by square-and-multiply.
    pub fn pow_binary(&self, mut k: u64) -> Polynomial {
        let mut acc = Polynomial::one(self.ring, self.nvars);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// f^N. Over F_p uses N = sum n_i p^i and f^N = prod (f^[p^i])^(n_i).
    pub fn power(&self, n: u64) -> Polynomial {
        if !self.ring.is_field() {
            return self.pow_binary(n);
        }
        let p = self.prime().as_u64();
        let mut acc = Polynomial::one(self.ring, self.nvars);
        let mut rest = n;
        let mut i = 0u32;
        while rest > 0 {
            let digit = rest % p;
            if digit > 0 {
                let fi = self.frobenius_power(i).expect("field checked");
                acc = acc.mul_unchecked(&fi.pow_small(digit));
            }
            rest /= p;
            i += 1;
        }
        acc
    }

    /// Coefficients reinterpreted in Z/p^2 (lift to [0, p)).
    pub fn lift_to_p2(&self) -> Polynomial {
        assert!(self.ring.is_field());
        Polynomial { ring: CoeffRing::mod_p2(self.prime()), nvars: self.nvars, terms: self.terms.clone() }
    }

    /// Image in Z/p.
    pub fn reduce_mod_p(&self) -> Polynomial {
        let ring = CoeffRing::mod_p(self.prime());
        let p = ring.modulus();
        let terms = self.terms.iter().filter_map(|&(m, c)| (c % p != 0).then_some((m, c % p))).collect();
        Polynomial { ring, nvars: self.nvars, terms }
    }

    /// For a polynomial over Z/p^2 with all coefficients divisible by p,
    /// returns the quotient over Z/p.
    pub fn divide_by_p(&self) -> Result<Polynomial, PolyError> {
        let p = self.prime().get();
        if self.ring.is_field() {
            return Err(PolyError::NotDivisible);
        }
        if self.terms.iter().any(|t| t.1 % p != 0) {
            return Err(PolyError::NotDivisible);
        }
        let terms = self.terms.iter().map(|&(m, c)| (m, c / p)).collect();
        Ok(Polynomial { ring: CoeffRing::mod_p(self.prime()), nvars: self.nvars, terms })
    }

    pub fn partial_derivative(&self, i: usize) -> Polynomial {
        let r = self.ring;
        let terms = self.terms.iter().filter_map(|&(m, c)| {
            let e = m.exp(i);
            if e == 0 {
                return None;
            }
            let v = r.mul(c, r.reduce(e as u64));
            let mut nm = m;
            nm.set_exp(i, e - 1);
            (v != 0).then_some((nm, v as u64))
        });
        Polynomial::from_terms(r, self.nvars, terms)
    }

    /// Keeps terms satisfying the predicate.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Polynomial {
        let terms = self.terms.iter().filter(|t| keep(&t.0)).copied().collect();
        Polynomial { ring: self.ring, nvars: self.nvars, terms }
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            let mut factors = Vec::new();
            for i in 0..self.nvars {
                match m.exp(i) {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    e => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            if factors.is_empty() {
                out.push_str(&c.to_string());
            } else {
                if *c != 1 {
                    out.push_str(&format!("{c}*"));
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = Variables::standard(self.nvars);
        f.write_str(&self.to_string_with(names.names()))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[mod {}]({})", self.ring.modulus(), self)
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        self.checked_add(o).expect("polynomial ring mismatch")
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self.checked_sub(o).expect("polynomial ring mismatch")
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        self.checked_mul(o).expect("polynomial ring mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64) -> CoeffRing {
        CoeffRing::mod_p(Prime::new(p).unwrap())
    }

    fn parse(s: &str, p: u64, n: usize) -> Polynomial {
        parse_poly(s, ring(p), &Variables::standard(n)).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let vars = Variables::new(vec!["x".into(), "y".into()]).unwrap();
        let r5 = ring(5);
        let a = parse_poly("x+y", r5, &vars).unwrap();
        let b = parse_poly("x-y", r5, &vars).unwrap();
        assert_eq!(&a * &b, parse_poly("x^2 + 4*y^2", r5, &vars).unwrap());
        assert!((&a * &Polynomial::zero(r5, 2)).is_zero());
        let r2 = ring(2);
        let c = parse_poly("x+y", r2, &vars).unwrap();
        assert_eq!(&c * &c, parse_poly("x^2+y^2", r2, &vars).unwrap());
        let r7 = ring(7);
        assert!(matches!(a.checked_mul(&parse_poly("x", r7, &vars).unwrap()), Err(PolyError::RingMismatch(5, 7))));
    }

    #[test]
    fn frobenius_examples() {
        let f = parse("x1+x2", 3, 2);
        assert_eq!(f.frobenius_power(1).unwrap(), parse("x1^3+x2^3", 3, 2));
        assert_eq!(f.frobenius_power(0).unwrap(), f);
        let g = parse("2*x1+x2", 5, 2);
        assert_eq!(g.frobenius_power(2).unwrap(), parse("2*x1^25+x2^25", 5, 2));
        assert_eq!(g.frobenius_power(2).unwrap(), g.pow_binary(25));
    }

    #[test]
    fn power_examples() {
        let f = parse("x1+x2", 3, 2);
        assert_eq!(f.power(3), parse("x1^3+x2^3", 3, 2));
        assert_eq!(f.power(0), Polynomial::one(ring(3), 2));
        let g = parse("x1+x2+x3", 7, 3);
        let m = Monomial::from_exponents(&[2, 2, 2]).unwrap();
        assert_eq!(g.power(6).coefficient(&m), 6);
    }

    #[test]
    fn lift_and_divide() {
        let f = parse("x1+x2", 3, 2);
        let l = f.lift_to_p2().pow_binary(3);
        let sub = &l - &parse("x1^3+x2^3", 3, 2).lift_to_p2();
        assert_eq!(sub.divide_by_p().unwrap(), parse("x1^2*x2 + x1*x2^2", 3, 2));
        assert_eq!(f.lift_to_p2().divide_by_p(), Err(PolyError::NotDivisible));
    }

    #[test]
    fn derivative_and_degrees() {
        let f = parse("x1^3 + 2*x1*x2", 5, 2);
        assert_eq!(f.partial_derivative(0), parse("3*x1^2 + 2*x2", 5, 2));
        assert_eq!(f.degree(), Some(3));
        assert!(!f.is_homogeneous());
        assert_eq!(parse("x1^5", 5, 2).partial_derivative(0), Polynomial::zero(ring(5), 2));
    }
}
