//! Arithmetic in Z/p and Z/p^2, plus the multinomial coefficients used by
//! the Witt carry and by Frobenius-power expansions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Largest supported prime. Keeps p^2 inside a `u32`.
pub const MAX_PRIME: u64 = 65521;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported bound {MAX_PRIME}")]
    TooLarge(u64),
    #[error("parts sum to {sum}, expected {expected}")]
    PartsSum { sum: u64, expected: u64 },
    #[error("composition {0:?} is not a valid Witt-carry exponent (parts in [0, p-1], sum p, two nonzero parts)")]
    BadComposition(Vec<u64>),
}

/// A prime characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p > MAX_PRIME {
            return Err(FieldError::TooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_u64(self) -> u64 {
        self.0 as u64
    }

    /// p^e as u64, panicking on overflow.
    pub fn power(self, e: u32) -> u64 {
        (self.0 as u64).checked_pow(e).expect("prime power overflows u64")
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Coefficient ring Z/p or Z/p^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoeffRing {
    p: Prime,
    modulus: u32,
}

impl CoeffRing {
    pub fn mod_p(p: Prime) -> Self {
        CoeffRing { p, modulus: p.get() }
    }

    pub fn mod_p2(p: Prime) -> Self {
        CoeffRing { p, modulus: p.get() * p.get() }
    }

    #[inline]
    pub fn prime(self) -> Prime {
        self.p
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn is_field(self) -> bool {
        self.modulus == self.p.get()
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u32 {
        (x % self.modulus as u64) as u32
    }

    pub fn from_i64(self, x: i64) -> u32 {
        x.rem_euclid(self.modulus as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.modulus as u64) as u32
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.modulus;
        let mut acc = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a unit, `None` for non-units.
    pub fn inv(self, a: u32) -> Option<u32> {
        mod_inverse(a as u64, self.modulus as u64).map(|x| x as u32)
    }

    pub fn residue(self, value: u64) -> Residue {
        Residue { value: self.reduce(value), ring: self }
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = ((a % m) as i64, m as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i64) as u64)
}

/// An element of Z/p or Z/p^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u32,
    ring: CoeffRing,
}

impl Residue {
    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn ring(self) -> CoeffRing {
        self.ring
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inverse(self) -> Option<Residue> {
        self.ring.inv(self.value).map(|value| Residue { value, ring: self.ring })
    }

    pub fn pow(self, e: u64) -> Residue {
        Residue { value: self.ring.pow(self.value, e), ring: self.ring }
    }

    fn check(self, other: Residue) {
        assert_eq!(self.ring, other.ring, "residue modulus mismatch");
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, o: Residue) -> Residue {
        self.check(o);
        Residue { value: self.ring.add(self.value, o.value), ring: self.ring }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, o: Residue) -> Residue {
        self.check(o);
        Residue { value: self.ring.sub(self.value, o.value), ring: self.ring }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, o: Residue) -> Residue {
        self.check(o);
        Residue { value: self.ring.mul(self.value, o.value), ring: self.ring }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue { value: self.ring.neg(self.value), ring: self.ring }
    }
}

/// p-adic valuation of n! (Legendre).
fn factorial_valuation(n: u64, p: u64) -> u64 {
    let mut v = 0;
    let mut q = n;
    while q > 0 {
        q /= p;
        v += q;
    }
    v
}

/// n! with every factor of p removed, reduced mod m.
fn factorial_unit(n: u64, p: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    for mut k in 2..=n {
        while k % p == 0 {
            k /= p;
        }
        acc = acc * (k % m) % m;
    }
    acc
}

/// N! / prod(parts_i!) reduced mod `ring.modulus()`, exact via valuation bookkeeping.
pub fn multinomial_mod(n: u64, parts: &[u64], ring: CoeffRing) -> Result<Residue, FieldError> {
    let sum: u64 = parts.iter().sum();
    if sum != n {
        return Err(FieldError::PartsSum { sum, expected: n });
    }
    let p = ring.prime().as_u64();
    let m = ring.modulus() as u64;
    let mut val = factorial_valuation(n, p);
    let mut unit = factorial_unit(n, p, m);
    for &k in parts {
        val -= factorial_valuation(k, p);
        let inv = mod_inverse(factorial_unit(k, p, m), m).expect("p-free factorial is a unit");
        unit = unit * inv % m;
    }
    let mut value = unit;
    for _ in 0..val {
        value = value * p % m;
        if value == 0 {
            break;
        }
    }
    Ok(ring.residue(value))
}

/// (1/p) * multinomial(p; alpha) mod p.
pub fn delta_coefficient(alpha: &[u64], p: Prime) -> Result<Residue, FieldError> {
    let pu = p.as_u64();
    let nonzero = alpha.iter().filter(|&&a| a > 0).count();
    if alpha.iter().sum::<u64>() != pu || alpha.iter().any(|&a| a >= pu) || nonzero < 2 {
        return Err(FieldError::BadComposition(alpha.to_vec()));
    }
    let full = multinomial_mod(pu, alpha, CoeffRing::mod_p2(p))?;
    debug_assert_eq!(full.value() as u64 % pu, 0);
    Ok(CoeffRing::mod_p(p).residue(full.value() as u64 / pu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::{One, ToPrimitive};

    fn big_factorial(n: u64) -> BigUint {
        (1..=n).fold(BigUint::one(), |acc, k| acc * k)
    }

    fn big_multinomial(parts: &[u64]) -> BigUint {
        let n: u64 = parts.iter().sum();
        parts.iter().fold(big_factorial(n), |acc, &k| acc / big_factorial(k))
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(7).is_ok());
        assert_eq!(Prime::new(9), Err(FieldError::NotPrime(9)));
        assert_eq!(Prime::new(1), Err(FieldError::NotPrime(1)));
        assert!(matches!(Prime::new(65537), Err(FieldError::TooLarge(_))));
    }

    #[test]
    fn multinomial_examples() {
        let p7 = CoeffRing::mod_p(Prime::new(7).unwrap());
        assert_eq!(multinomial_mod(6, &[2, 2, 2], p7).unwrap().value(), 6);
        let p2 = CoeffRing::mod_p(Prime::new(2).unwrap());
        assert_eq!(multinomial_mod(2, &[1, 1], p2).unwrap().value(), 0);
        let p25 = CoeffRing::mod_p2(Prime::new(5).unwrap());
        assert_eq!(multinomial_mod(5, &[3, 2], p25).unwrap().value(), 10);
        assert!(matches!(multinomial_mod(5, &[3, 1], p25), Err(FieldError::PartsSum { .. })));
    }

    #[test]
    fn delta_coefficient_examples() {
        let c = |a: &[u64], p| delta_coefficient(a, Prime::new(p).unwrap()).unwrap().value();
        assert_eq!(c(&[1, 1], 2), 1);
        assert_eq!(c(&[2, 1], 3), 1);
        assert_eq!(c(&[3, 2], 5), 2);
        assert!(delta_coefficient(&[5, 0], Prime::new(5).unwrap()).is_err());
    }

    #[test]
    fn multinomial_matches_bigint_up_to_30() {
        for &p in &[2u64, 3, 5, 7] {
            let prime = Prime::new(p).unwrap();
            for ring in [CoeffRing::mod_p(prime), CoeffRing::mod_p2(prime)] {
                let m = ring.modulus() as u64;
                for n in 0..=30u64 {
                    for a in 0..=n {
                        for b in 0..=(n - a) {
                            let parts = [a, b, n - a - b];
                            let exact = (big_multinomial(&parts) % m).to_u64().unwrap();
                            assert_eq!(multinomial_mod(n, &parts, ring).unwrap().value() as u64, exact);
                        }
                    }
                }
            }
        }
    }

    fn compositions(total: u64, parts: usize, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if parts == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..=total.min(max) {
            cur.push(k);
            compositions(total - k, parts - 1, max, cur, out);
            cur.pop();
        }
    }

    #[test]
    fn delta_coefficient_matches_wilson_reduction() {
        for &p in &[2u64, 3, 5, 7] {
            let prime = Prime::new(p).unwrap();
            let ring = CoeffRing::mod_p(prime);
            for len in 2..=5 {
                let mut all = Vec::new();
                compositions(p, len, p - 1, &mut Vec::new(), &mut all);
                for alpha in all {
                    if alpha.iter().filter(|&&a| a > 0).count() < 2 {
                        continue;
                    }
                    let prod = alpha.iter().fold(1u32, |acc, &a| {
                        ring.mul(acc, (1..=a).fold(1u32, |f, k| ring.mul(f, k as u32)))
                    });
                    let wilson = ring.neg(ring.inv(prod).unwrap());
                    assert_eq!(delta_coefficient(&alpha, prime).unwrap().value(), wilson, "{alpha:?} p={p}");
                    let exact = big_multinomial(&alpha) / p % p;
                    assert_eq!(wilson as u64, exact.to_u64().unwrap());
                }
            }
        }
    }

    #[test]
    fn inverses() {
        for &p in &[2u64, 3, 5, 7, 11, 13, 65521] {
            let ring = CoeffRing::mod_p(Prime::new(p).unwrap());
            for a in 1..p.min(2000) {
                let r = ring.residue(a);
                assert_eq!((r * r.inverse().unwrap()).value(), 1);
            }
        }
        let r25 = CoeffRing::mod_p2(Prime::new(5).unwrap());
        assert!(r25.residue(10).inverse().is_none());
        assert_eq!(r25.residue(7).inverse().unwrap().value(), 18);
    }
}
