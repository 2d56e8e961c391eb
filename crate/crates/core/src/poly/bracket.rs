//! Arithmetic in A / m^[q], where m^[q] = (x_1^q, .., x_n^q).

use rustc_hash::FxHashMap;

use super::monomial::{Monomial, MAX_VARS};
use super::Polynomial;
use crate::field::CoeffRing;

/// Boxes with more cells than this fall back to the sparse representation.
const BOX_LIMIT: u64 = 1 << 25;

/// Drops every term lying in m^[q].
pub fn truncate_bracket(f: &Polynomial, q: u64) -> Polynomial {
    f.filter_terms(|m| !m.in_bracket(q))
}

/// Dense coefficient array over the box [0, q)^n, last variable contiguous.
#[derive(Clone, Debug)]
pub struct BracketBox {
    ring: CoeffRing,
    n: usize,
    q: usize,
    data: Vec<u32>,
}

impl BracketBox {
    pub fn fits(n: usize, q: u64) -> bool {
        q.checked_pow(n as u32).is_some_and(|c| c <= BOX_LIMIT)
    }

    pub fn one(ring: CoeffRing, n: usize, q: u64) -> Self {
        let q = q as usize;
        let mut data = vec![0; q.pow(n as u32)];
        data[0] = 1 % ring.modulus();
        BracketBox { ring, n, q, data }
    }

    fn index(&self, m: &Monomial) -> usize {
        (0..self.n).fold(0, |acc, i| acc * self.q + m.exp(i) as usize)
    }

    pub fn from_poly(f: &Polynomial, q: u64) -> Self {
        let mut b = BracketBox::one(f.ring(), f.nvars(), q);
        b.data[0] = 0;
        for (m, c) in f.terms() {
            if !m.in_bracket(q) {
                let i = b.index(m);
                b.data[i] = *c;
            }
        }
        b
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&c| c == 0)
    }

    pub fn to_poly(&self) -> Polynomial {
        let mut terms = Vec::new();
        for (idx, &c) in self.data.iter().enumerate() {
            if c != 0 {
                let mut e = [0u32; MAX_VARS];
                let mut r = idx;
                for i in (0..self.n).rev() {
                    e[i] = (r % self.q) as u32;
                    r /= self.q;
                }
                terms.push((Monomial::from_exponents(&e[..self.n]).expect("box exponent"), c as u64));
            }
        }
        Polynomial::from_terms(self.ring, self.n, terms)
    }

    /// Product with a sparse polynomial, truncated to the box.
    pub fn mul_poly(&self, g: &Polynomial) -> BracketBox {
        let q = self.q;
        let n = self.n;
        let modulus = self.ring.modulus() as u64;
        let mut out = vec![0u64; self.data.len()];
        if n == 1 {
            for (m, c) in g.terms() {
                let v = m.exp(0) as usize;
                if v >= q {
                    continue;
                }
                for j in 0..q - v {
                    out[j + v] += *c as u64 * self.data[j] as u64;
                }
            }
        } else {
            let rows = self.data.len() / q;
            let live: Vec<usize> = (0..rows).filter(|&r| self.data[r * q..(r + 1) * q].iter().any(|&c| c != 0)).collect();
            for (m, c) in g.terms() {
                if m.in_bracket(q as u64) {
                    continue;
                }
                let c = *c as u64;
                let vlast = m.exp(n - 1) as usize;
                let mut row_shift = 0usize;
                for i in 0..n - 1 {
                    row_shift = row_shift * q + m.exp(i) as usize;
                }
                for &r in &live {
                    let mut rem = r;
                    let mut ok = true;
                    for i in (0..n - 1).rev() {
                        if rem % q + m.exp(i) as usize >= q {
                            ok = false;
                            break;
                        }
                        rem /= q;
                    }
                    if !ok {
                        continue;
                    }
                    let dst = (r + row_shift) * q + vlast;
                    let src = &self.data[r * q..r * q + q - vlast];
                    for (o, &s) in out[dst..dst + q - vlast].iter_mut().zip(src) {
                        *o += c * s as u64;
                    }
                }
            }
        }
        let data = out.into_iter().map(|x| (x % modulus) as u32).collect();
        BracketBox { ring: self.ring, n, q, data }
    }
}

/// An element of A / m^[q], dense when the box is small enough.
#[derive(Clone, Debug)]
pub enum BracketPower {
    Dense(BracketBox),
    Sparse { poly: Polynomial, q: u64 },
}

impl BracketPower {
    pub fn one(ring: CoeffRing, n: usize, q: u64) -> Self {
        if BracketBox::fits(n, q) {
            BracketPower::Dense(BracketBox::one(ring, n, q))
        } else {
            let poly = if q > 0 { Polynomial::one(ring, n) } else { Polynomial::zero(ring, n) };
            BracketPower::Sparse { poly, q }
        }
    }

    pub fn mul_assign(&mut self, g: &Polynomial) {
        match self {
            BracketPower::Dense(b) => *b = b.mul_poly(g),
            BracketPower::Sparse { poly, q } => *poly = mul_truncated(poly, g, *q),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            BracketPower::Dense(b) => b.is_zero(),
            BracketPower::Sparse { poly, .. } => poly.is_zero(),
        }
    }

    pub fn to_poly(&self) -> Polynomial {
        match self {
            BracketPower::Dense(b) => b.to_poly(),
            BracketPower::Sparse { poly, .. } => poly.clone(),
        }
    }
}

/// Sparse product with every monomial in m^[q] discarded.
pub(crate) fn mul_truncated(a: &Polynomial, b: &Polynomial, q: u64) -> Polynomial {
    let m = a.ring().modulus() as u64;
    let mut map: FxHashMap<Monomial, u64> = FxHashMap::default();
    for (x, cx) in a.terms() {
        for (y, cy) in b.terms() {
            let ok = (0..a.nvars()).all(|i| ((x.exp(i) + y.exp(i)) as u64) < q);
            if ok {
                let e = map.entry(x.mul(y)).or_insert(0);
                *e = (*e + *cx as u64 * *cy as u64) % m;
            }
        }
    }
    Polynomial::from_terms(a.ring(), a.nvars(), map)
}

/// f^[pi] with every term in m^[q] dropped, without forming large exponents.
fn frobenius_truncated(f: &Polynomial, pi: u64, q: u64) -> Polynomial {
    assert!(f.ring().is_field(), "bracket powers need coefficients mod p");
    let terms = f.terms().iter().filter_map(|&(m, c)| {
        let fits = (0..f.nvars()).all(|i| (m.exp(i) as u64) * pi < q);
        fits.then(|| (m.scale(pi as u32), c as u64))
    });
    Polynomial::from_terms(f.ring(), f.nvars(), terms)
}

/// f^N in A / m^[q] via N = sum n_i p^i, truncating after every product.
pub fn pow_mod_bracket(f: &Polynomial, n: u64, q: u64) -> Polynomial {
    bracket_power(f, n, q).to_poly()
}

pub(crate) fn bracket_power(f: &Polynomial, n: u64, q: u64) -> BracketPower {
    let p = f.prime().as_u64();
    let mut acc = BracketPower::one(f.ring(), f.nvars(), q);
    let mut rest = n;
    let mut pi = 1u64;
    while rest > 0 {
        let digit = rest % p;
        if digit > 0 {
            let fi = frobenius_truncated(f, pi, q);
            for _ in 0..digit {
                acc.mul_assign(&fi);
                if acc.is_zero() {
                    return acc;
                }
            }
        }
        rest /= p;
        pi = pi.saturating_mul(p);
    }
    acc
}
