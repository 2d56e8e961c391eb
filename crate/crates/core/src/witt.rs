//! Truncated p-typical Witt vectors over F_p[x_1..x_n], computed through
//! ghost components over exact integer lifts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::field::{CoeffRing, Prime};
use crate::poly::{Monomial, Polynomial};

/// Longest supported truncation.
pub const MAX_LENGTH: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WittError {
    #[error("Witt vector lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("length {0} outside 1..={MAX_LENGTH}")]
    BadLength(usize),
    #[error("ambient rings differ")]
    RingMismatch,
    #[error("internal invariant failure: ghost inversion hit a non-exact division")]
    InexactDivision,
}

/// Polynomial with arbitrary-precision integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = IntPoly::zero();
        p.add_term(Monomial::one(), BigInt::from(c));
        p
    }

    /// Lift with coefficients in [0, p).
    pub fn lift(f: &Polynomial) -> Self {
        assert!(f.ring().is_field(), "lift expects coefficients mod p");
        let mut p = IntPoly::zero();
        for (m, c) in f.terms() {
            p.add_term(*m, BigInt::from(*c));
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c.clone());
        }
        r
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        if k.is_zero() {
            return IntPoly::zero();
        }
        IntPoly { terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect() }
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        let mut r = IntPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                r.add_term(a.mul(b), ca * cb);
            }
        }
        r
    }

    pub fn pow(&self, mut e: u64) -> IntPoly {
        let mut acc = IntPoly::constant(1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn div_exact(&self, k: &BigInt) -> Option<IntPoly> {
        let mut r = IntPoly::zero();
        for (m, c) in &self.terms {
            let (q, rem) = c.div_rem(k);
            if !rem.is_zero() {
                return None;
            }
            r.add_term(*m, q);
        }
        Some(r)
    }

    /// Coefficients reduced into [0, p).
    pub fn reduce(&self, p: u32) -> IntPoly {
        let pb = BigInt::from(p);
        let mut r = IntPoly::zero();
        for (m, c) in &self.terms {
            r.add_term(*m, c.mod_floor(&pb));
        }
        r
    }

    pub fn to_poly(&self, ring: CoeffRing, nvars: usize) -> Polynomial {
        let m = BigInt::from(ring.modulus());
        Polynomial::from_terms(
            ring,
            nvars,
            self.terms.iter().map(|(mono, c)| (*mono, c.mod_floor(&m).to_u64().expect("reduced coefficient"))),
        )
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }
}

/// Ghost components w_i = sum_{j<=i} p^j a_j^(p^(i-j)) over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhostVector {
    pub comps: Vec<IntPoly>,
}

/// Element of W_n(F_p[x_1..x_nvars]); components stored as lifts in [0, p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittVector {
    p: Prime,
    nvars: usize,
    comps: Vec<IntPoly>,
}

impl WittVector {
    pub fn new(p: Prime, nvars: usize, comps: Vec<IntPoly>) -> Result<Self, WittError> {
        if comps.is_empty() || comps.len() > MAX_LENGTH {
            return Err(WittError::BadLength(comps.len()));
        }
        let comps = comps.iter().map(|c| c.reduce(p.get())).collect();
        Ok(WittVector { p, nvars, comps })
    }

    pub fn from_polys(comps: &[Polynomial]) -> Result<Self, WittError> {
        let first = comps.first().ok_or(WittError::BadLength(0))?;
        Self::new(first.prime(), first.nvars(), comps.iter().map(IntPoly::lift).collect())
    }

    pub fn zero(p: Prime, nvars: usize, len: usize) -> Result<Self, WittError> {
        Self::new(p, nvars, vec![IntPoly::zero(); len])
    }

    /// [r] = (r, 0, .., 0).
    pub fn teichmuller(r: &Polynomial, len: usize) -> Result<Self, WittError> {
        let mut comps = vec![IntPoly::zero(); len];
        if len == 0 {
            return Err(WittError::BadLength(0));
        }
        comps[0] = IntPoly::lift(r);
        Self::new(r.prime(), r.nvars(), comps)
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn component(&self, i: usize) -> Polynomial {
        self.comps[i].to_poly(CoeffRing::mod_p(self.p), self.nvars)
    }

    pub fn components(&self) -> Vec<Polynomial> {
        (0..self.len()).map(|i| self.component(i)).collect()
    }

    pub fn ghost(&self) -> GhostVector {
        ghost_of(&self.comps, self.p)
    }

    fn check(&self, o: &WittVector) -> Result<(), WittError> {
        if self.len() != o.len() {
            return Err(WittError::LengthMismatch(self.len(), o.len()));
        }
        if self.p != o.p || self.nvars != o.nvars {
            return Err(WittError::RingMismatch);
        }
        Ok(())
    }

    fn from_ghost(&self, g: &GhostVector) -> Result<WittVector, WittError> {
        let comps = invert_ghost(g, self.p)?;
        WittVector::new(self.p, self.nvars, comps)
    }

    pub fn witt_add(&self, o: &WittVector) -> Result<WittVector, WittError> {
        self.check(o)?;
        let (a, b) = (self.ghost(), o.ghost());
        let sum = GhostVector { comps: a.comps.iter().zip(&b.comps).map(|(x, y)| x.add(y)).collect() };
        self.from_ghost(&sum)
    }

    pub fn witt_neg(&self) -> Result<WittVector, WittError> {
        let g = self.ghost();
        self.from_ghost(&GhostVector { comps: g.comps.iter().map(IntPoly::neg).collect() })
    }

    pub fn witt_sub(&self, o: &WittVector) -> Result<WittVector, WittError> {
        self.witt_add(&o.witt_neg()?)
    }

    pub fn witt_mul(&self, o: &WittVector) -> Result<WittVector, WittError> {
        self.check(o)?;
        let (a, b) = (self.ghost(), o.ghost());
        let prod = GhostVector { comps: a.comps.iter().zip(&b.comps).map(|(x, y)| x.mul(y)).collect() };
        self.from_ghost(&prod)
    }

    /// Componentwise p-th power (the coefficient ring has characteristic p).
    pub fn frobenius(&self) -> WittVector {
        let p = self.p.get();
        let comps = self.comps.iter().map(|c| c.pow(p as u64).reduce(p)).collect();
        WittVector { p: self.p, nvars: self.nvars, comps }
    }

    /// (a_0, a_1, ..) -> (0, a_0, a_1, ..), truncated.
    pub fn verschiebung(&self) -> WittVector {
        let mut comps = vec![IntPoly::zero()];
        comps.extend(self.comps[..self.len() - 1].iter().cloned());
        WittVector { p: self.p, nvars: self.nvars, comps }
    }

    /// W_n -> W_(n-1).
    pub fn restriction(&self) -> Result<WittVector, WittError> {
        if self.len() < 2 {
            return Err(WittError::BadLength(self.len() - 1));
        }
        Ok(WittVector { p: self.p, nvars: self.nvars, comps: self.comps[..self.len() - 1].to_vec() })
    }

    /// The integer p as a Witt vector of this length.
    pub fn p_element(p: Prime, nvars: usize, len: usize) -> Result<WittVector, WittError> {
        let one = WittVector::new(p, nvars, {
            let mut c = vec![IntPoly::zero(); len];
            c[0] = IntPoly::constant(1);
            c
        })?;
        let mut acc = WittVector::zero(p, nvars, len)?;
        for _ in 0..p.get() {
            acc = acc.witt_add(&one)?;
        }
        Ok(acc)
    }
}

fn ghost_of(comps: &[IntPoly], p: Prime) -> GhostVector {
    let pb = BigInt::from(p.get());
    let mut out = Vec::with_capacity(comps.len());
    for i in 0..comps.len() {
        let mut w = IntPoly::zero();
        let mut pj = BigInt::one();
        for (j, a) in comps.iter().enumerate().take(i + 1) {
            let e = (p.get() as u64).pow((i - j) as u32);
            w = w.add(&a.pow(e).scale(&pj));
            pj *= &pb;
        }
        out.push(w);
    }
    GhostVector { comps: out }
}

fn invert_ghost(g: &GhostVector, p: Prime) -> Result<Vec<IntPoly>, WittError> {
    let pb = BigInt::from(p.get());
    let mut comps: Vec<IntPoly> = Vec::with_capacity(g.comps.len());
    for i in 0..g.comps.len() {
        let mut rest = g.comps[i].clone();
        let mut pj = BigInt::one();
        for (j, a) in comps.iter().enumerate() {
            let e = (p.get() as u64).pow((i - j) as u32);
            rest = rest.sub(&a.pow(e).scale(&pj));
            pj *= &pb;
        }
        comps.push(rest.div_exact(&pj).ok_or(WittError::InexactDivision)?);
    }
    Ok(comps)
}

/// Second component of (a, 0) - sum_i (a_i M_i, 0) in W_2, where
/// a = sum a_i M_i is the canonical term decomposition.
pub fn delta1_witt_oracle(a: &Polynomial) -> Result<Polynomial, WittError> {
    let zero = Polynomial::zero(a.ring(), a.nvars());
    let whole = WittVector::from_polys(&[a.clone(), zero.clone()])?;
    let mut sum = WittVector::zero(a.prime(), a.nvars(), 2)?;
    for (m, c) in a.terms() {
        let t = Polynomial::monomial(a.ring(), a.nvars(), *m, *c as u64);
        sum = sum.witt_add(&WittVector::from_polys(&[t, zero.clone()])?)?;
    }
    Ok(whole.witt_sub(&sum)?.component(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Variables};

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn consts(p: u64, v: &[i64]) -> WittVector {
        WittVector::new(prime(p), 1, v.iter().map(|&c| IntPoly::constant(c)).collect()).unwrap()
    }

    fn parse(s: &str, p: u64, vars: &str) -> Polynomial {
        parse_poly(s, CoeffRing::mod_p(prime(p)), &Variables::parse_list(vars).unwrap()).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(consts(3, &[1, 0]).witt_add(&consts(3, &[1, 0])).unwrap(), consts(3, &[2, 1]));
        let a = consts(5, &[3, 4]);
        assert_eq!(a.witt_add(&consts(5, &[0, 0])).unwrap(), a);
        assert_eq!(consts(5, &[2, 0]).witt_add(&consts(5, &[0, 3])).unwrap(), consts(5, &[2, 3]));
    }

    #[test]
    fn mul_examples() {
        let r = parse("x+2", 5, "x");
        let s = parse("3*x", 5, "x");
        let tr = WittVector::teichmuller(&r, 2).unwrap();
        let ts = WittVector::teichmuller(&s, 2).unwrap();
        assert_eq!(tr.witt_mul(&ts).unwrap(), WittVector::teichmuller(&(&r * &s), 2).unwrap());
        let a = WittVector::from_polys(&[parse("x+1", 5, "x"), parse("x^2", 5, "x")]).unwrap();
        let pe = WittVector::p_element(prime(5), 1, 2).unwrap();
        assert_eq!(pe, WittVector::from_polys(&[parse("0", 5, "x"), parse("1", 5, "x")]).unwrap());
        let pa = pe.witt_mul(&a).unwrap();
        assert_eq!(pa.component(0), parse("0", 5, "x"));
        assert_eq!(pa.component(1), parse("x+1", 5, "x").power(5));
        let one = WittVector::from_polys(&[parse("1", 5, "x"), parse("0", 5, "x")]).unwrap();
        assert_eq!(one.witt_mul(&a).unwrap(), a);
    }

    #[test]
    fn frobenius_and_verschiebung() {
        let a = WittVector::from_polys(&[parse("x", 2, "x,y"), parse("y", 2, "x,y")]).unwrap();
        assert_eq!(a.frobenius().components(), vec![parse("x^2", 2, "x,y"), parse("y^2", 2, "x,y")]);
        let one = WittVector::from_polys(&[parse("1", 3, "x"), parse("0", 3, "x")]).unwrap();
        assert_eq!(one.verschiebung(), WittVector::p_element(prime(3), 1, 2).unwrap());
        let z = WittVector::zero(prime(3), 1, 2).unwrap();
        assert_eq!(z.verschiebung(), z);
    }

    #[test]
    fn delta_oracle_examples() {
        let m = parse("3*x^2*y", 5, "x,y");
        assert!(delta1_witt_oracle(&m).unwrap().is_zero());
        assert_eq!(delta1_witt_oracle(&parse("x+y", 3, "x,y")).unwrap(), parse("x^2*y + x*y^2", 3, "x,y"));
        assert_eq!(delta1_witt_oracle(&parse("x^3+y^3", 2, "x,y")).unwrap(), parse("x^3*y^3", 2, "x,y"));
    }

    #[test]
    fn lengths_are_checked() {
        assert_eq!(WittVector::new(prime(2), 1, vec![]), Err(WittError::BadLength(0)));
        assert!(WittVector::new(prime(2), 1, vec![IntPoly::zero(); 5]).is_err());
        let a = consts(3, &[1, 0]);
        let b = consts(3, &[1, 0, 0]);
        assert_eq!(a.witt_add(&b), Err(WittError::LengthMismatch(2, 3)));
    }
}
