//! Delta_1, the trace u, and theta(a) = u(Delta_1(f^(p-1)) a).

use rustc_hash::FxHashMap;

use crate::field::{delta_coefficient, CoeffRing};
use crate::poly::{Monomial, Polynomial};

use super::QfpError;

/// Delta_1(a) = ((lift a)^p - sum (lift a_i M_i)^p) / p over Z/p^2, reduced mod p.
pub fn delta1(a: &Polynomial) -> Result<Polynomial, QfpError> {
    if !a.ring().is_field() {
        return Err(QfpError::NotField);
    }
    let lifted = a.lift_to_p2();
    let pth = lifted.pow_binary(a.prime().as_u64());
    let diff = &pth - &frobenius_of_lift(&lifted);
    diff.divide_by_p().map_err(|_| QfpError::Invariant("Delta_1 lift is not divisible by p".into()))
}

/// sum lift(c)^p M^p for a polynomial already over Z/p^2.
fn frobenius_of_lift(lifted: &Polynomial) -> Polynomial {
    let ring = lifted.ring();
    let p = ring.prime();
    Polynomial::from_terms(
        ring,
        lifted.nvars(),
        lifted.terms().iter().map(|&(m, c)| (m.scale(p.get()), ring.pow(c, p.as_u64()) as u64)),
    )
}

/// Small-input oracle: sum over mixed compositions alpha of p of
/// (1/p) multinomial(p; alpha) prod (a_i M_i)^alpha_i.
pub fn delta1_multinomial(a: &Polynomial) -> Result<Polynomial, QfpError> {
    let p = a.prime();
    let ring = a.ring();
    let terms: Vec<Polynomial> =
        a.terms().iter().map(|&(m, c)| Polynomial::monomial(ring, a.nvars(), m, c as u64)).collect();
    let k = terms.len();
    let mut acc = Polynomial::zero(ring, a.nvars());
    if k < 2 {
        return Ok(acc);
    }
    let mut alpha = vec![0u64; k];
    fn walk(
        i: usize,
        left: u64,
        alpha: &mut Vec<u64>,
        terms: &[Polynomial],
        p: crate::field::Prime,
        acc: &mut Polynomial,
    ) -> Result<(), QfpError> {
        if i + 1 == alpha.len() {
            alpha[i] = left;
            if alpha.iter().filter(|&&x| x > 0).count() >= 2 {
                let c = delta_coefficient(alpha, p).map_err(|e| QfpError::Invariant(e.to_string()))?;
                let mut t = Polynomial::constant(terms[0].ring(), terms[0].nvars(), c.value() as u64);
                for (tj, &e) in terms.iter().zip(alpha.iter()) {
                    if e > 0 {
                        t = &t * &tj.pow_binary(e);
                    }
                }
                *acc = &*acc + &t;
            }
            return Ok(());
        }
        for x in 0..=left {
            alpha[i] = x;
            walk(i + 1, left - x, alpha, terms, p, acc)?;
        }
        Ok(())
    }
    walk(0, p.as_u64(), &mut alpha, &terms, p, &mut acc)?;
    Ok(acc)
}

/// Keeps c x^(p w + (p-1, .., p-1)) as c x^w; drops every other term.
pub fn u_map(b: &Polynomial) -> Polynomial {
    let p = b.prime().get();
    let n = b.nvars();
    let terms = b.terms().iter().filter_map(|&(m, c)| {
        let (r, q) = m.split_digits(p, n);
        (0..n).all(|i| r.exp(i) == p - 1).then_some((q, c as u64))
    });
    Polynomial::from_terms(b.ring(), n, terms)
}

/// Frobenius components: b = sum_rho x^rho (B_rho)^[p], keyed by the
/// residue index of rho.
pub fn frobenius_components(b: &Polynomial) -> FxHashMap<usize, Polynomial> {
    let p = b.prime().get();
    let n = b.nvars();
    let mut buckets: FxHashMap<usize, Vec<(Monomial, u64)>> = FxHashMap::default();
    for &(m, c) in b.terms() {
        let (r, q) = m.split_digits(p, n);
        buckets.entry(r.residue_index(p, n)).or_default().push((q, c as u64));
    }
    buckets.into_iter().map(|(k, v)| (k, Polynomial::from_terms(b.ring(), n, v))).collect()
}

/// Reassembles sum_rho x^rho (B_rho)^[p].
pub fn from_components(ring: CoeffRing, n: usize, comps: &FxHashMap<usize, Polynomial>) -> Polynomial {
    let p = ring.prime().get();
    let mut terms = Vec::new();
    for (&idx, b) in comps {
        let rho = Monomial::from_residue_index(idx, p, n);
        terms.extend(b.terms().iter().map(|&(m, c)| (m.scale(p).mul(&rho), c as u64)));
    }
    Polynomial::from_terms(ring, n, terms)
}

/// Delta_1(f^k) = A^[p] + k (f^(k-1))^[p] Delta_1(f) with
/// A = (Phi^k - Psi_k) / p, where Phi lifts f with coefficients c^p and
/// Psi_k lifts f^k with coefficients b^p (all over Z/p^2). Returned as
/// Frobenius components.
fn delta1_power_components(f: &Polynomial, k: u64) -> Result<FxHashMap<usize, Polynomial>, QfpError> {
    let ring = f.ring();
    let p = f.prime().as_u64();
    let n = f.nvars();
    let fk = f.power(k);
    let ring2 = CoeffRing::mod_p2(f.prime());
    let pow_coeffs = |g: &Polynomial| {
        Polynomial::from_terms(ring2, n, g.terms().iter().map(|&(m, c)| (m, ring2.pow(c, p) as u64)))
    };
    let phi_k = pow_coeffs(f).pow_binary(k);
    let a = (&phi_k - &pow_coeffs(&fk))
        .divide_by_p()
        .map_err(|_| QfpError::Invariant("Phi^k - Psi_k not divisible by p".into()))?;
    let scale = ring.reduce(k);
    let fk1 = f.power(k - 1).scale(scale);
    let mut comps = FxHashMap::default();
    for (idx, e) in frobenius_components(&delta1(f)?) {
        let d = &fk1 * &e;
        if !d.is_zero() {
            comps.insert(idx, d);
        }
    }
    if !a.is_zero() {
        let c0 = comps.remove(&0).unwrap_or_else(|| Polynomial::zero(ring, n));
        let sum = &c0 + &a;
        if !sum.is_zero() {
            comps.insert(0, sum);
        }
    }
    Ok(comps)
}

/// f, g = f^(p-1) and the Frobenius components D_rho of Delta = Delta_1(g).
#[derive(Debug, Clone)]
pub struct Delta1Context {
    f: Polynomial,
    g: Polynomial,
    delta_f: Polynomial,
    comps: FxHashMap<usize, Polynomial>,
}

impl Delta1Context {
    pub fn new(f: &Polynomial) -> Result<Self, QfpError> {
        if !f.ring().is_field() {
            return Err(QfpError::NotField);
        }
        let p = f.prime().as_u64();
        let g = f.power(p - 1);
        let comps = if p == 2 { frobenius_components(&delta1(f)?) } else { delta1_power_components(f, p - 1)? };
        Ok(Delta1Context { f: f.clone(), delta_f: delta1(f)?, g, comps })
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    /// f^(p-1).
    pub fn g(&self) -> &Polynomial {
        &self.g
    }

    /// Delta_1(f) on the canonical decomposition of f.
    pub fn delta_f(&self) -> &Polynomial {
        &self.delta_f
    }

    /// Delta_1(f^(p-1)) as a polynomial.
    pub fn delta(&self) -> Polynomial {
        from_components(self.f.ring(), self.f.nvars(), &self.comps)
    }

    pub fn is_delta_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn component(&self, rho: &Monomial) -> Option<&Polynomial> {
        let p = self.f.prime().get();
        self.comps.get(&rho.residue_index(p, self.f.nvars()))
    }

    /// theta(a) = sum over terms c x^v of a, v = p w + r, of c x^w D_(p-1-r).
    pub fn theta(&self, a: &Polynomial) -> Polynomial {
        let ring = self.f.ring();
        let n = self.f.nvars();
        let p = ring.prime().get();
        let m = ring.modulus() as u64;
        let mut acc: FxHashMap<Monomial, u64> = FxHashMap::default();
        for &(mono, c) in a.terms() {
            let (r, w) = mono.split_digits(p, n);
            let mut rho = Monomial::one();
            for i in 0..n {
                rho.set_exp(i, p - 1 - r.exp(i));
            }
            if let Some(d) = self.comps.get(&rho.residue_index(p, n)) {
                for &(dm, dc) in d.terms() {
                    let e = acc.entry(dm.mul(&w)).or_insert(0);
                    *e = (*e + c as u64 * dc as u64) % m;
                }
            }
        }
        Polynomial::from_terms(ring, n, acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Prime;
    use crate::poly::{parse_poly, Variables};

    fn parse(s: &str, p: u64, vars: &str) -> Polynomial {
        parse_poly(s, CoeffRing::mod_p(Prime::new(p).unwrap()), &Variables::parse_list(vars).unwrap()).unwrap()
    }

    #[test]
    fn delta1_examples() {
        assert!(delta1(&parse("3*x^2*y", 5, "x,y")).unwrap().is_zero());
        assert_eq!(delta1(&parse("x+y", 3, "x,y")).unwrap(), parse("x^2*y+x*y^2", 3, "x,y"));
        let f = parse("x^3+y^3+z^3+w^3", 2, "x,y,z,w");
        let expect = parse("x^3*y^3+x^3*z^3+x^3*w^3+y^3*z^3+y^3*w^3+z^3*w^3", 2, "x,y,z,w");
        assert_eq!(delta1(&f).unwrap(), expect);
        assert_eq!(delta1_multinomial(&f).unwrap(), expect);
    }

    #[test]
    fn u_map_examples() {
        let vars = "x,y,z";
        assert_eq!(u_map(&parse("x^4*y^4*z^4", 5, vars)), parse("1", 5, vars));
        assert_eq!(u_map(&parse("x^5*y^2", 3, "x,y")), parse("x", 3, "x,y"));
        assert!(u_map(&parse("x^4*y^2", 3, "x,y")).is_zero());
    }

    #[test]
    fn theta_examples() {
        let ctx = Delta1Context::new(&parse("x", 5, "x")).unwrap();
        assert!(ctx.is_delta_zero());
        let f = parse("x^3+y^3", 2, "x,y");
        let ctx = Delta1Context::new(&f).unwrap();
        assert_eq!(ctx.delta(), parse("x^3*y^3", 2, "x,y"));
        assert_eq!(ctx.theta(&f.power(2)), parse("x^4*y+x*y^4", 2, "x,y"));
        assert!(ctx.theta(&f).is_zero());
    }

    #[test]
    fn power_formula_matches_lift() {
        let cases = [
            ("x^3+y^3+z^3", 5, "x,y,z"),
            ("x^3+y^3+z^3", 7, "x,y,z"),
            ("x^2*y+3*y^2*z+z^3+2*x*y*z", 5, "x,y,z"),
            ("x^4+y^4+x*y^3+2*z^4", 3, "x,y,z"),
            ("x+y^2", 7, "x,y"),
        ];
        for (s, p, v) in cases {
            let f = parse(s, p, v);
            let ctx = Delta1Context::new(&f).unwrap();
            let direct = delta1(&f.power(p - 1)).unwrap();
            assert_eq!(ctx.delta(), direct, "{s} mod {p}");
            let a = parse("x^3*y+2*x+y^7", p, v);
            assert_eq!(ctx.theta(&a), u_map(&(&direct * &a)), "{s} mod {p}");
        }
    }
}
