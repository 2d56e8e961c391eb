mod common;

use common::*;
use proptest::prelude::*;
use qfedder::poly::{multiply_slab_by_terms, parse_poly, pow_mod_bracket, truncate_bracket, DenseSlab, Polynomial, Variables};

fn naive_mul(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let m = a.ring().modulus() as u64;
    let terms = a
        .terms()
        .iter()
        .flat_map(|&(ma, ca)| b.terms().iter().map(move |&(mb, cb)| (ma.mul(&mb), ca as u64 * cb as u64 % m)));
    Polynomial::from_terms(a.ring(), a.nvars(), terms.collect::<Vec<_>>())
}

fn case() -> impl Strategy<Value = (u64, Polynomial)> {
    (arb_prime(), 1usize..=4).prop_flat_map(|(p, n)| (Just(p), arb_poly(p, n, 4, 3)))
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn frobenius_power_is_power((p, f) in case(), e in 1u32..=2) {
        let q = p.pow(e);
        prop_assert_eq!(f.frobenius_power(e).unwrap(), f.pow_binary(q));
        prop_assert_eq!(f.power(q), f.pow_binary(q));
    }

    #[test]
    fn bracket_power_is_truncated_power((p, f) in case(), n in 0u64..20, e in 1u32..=2) {
        let q = p.pow(e);
        prop_assert_eq!(pow_mod_bracket(&f, n, q), truncate_bracket(&f.pow_binary(n), q));
    }

    #[test]
    fn power_is_multiplicative((_p, f) in case(), a in 0u64..6, b in 0u64..6) {
        prop_assert_eq!(&f.power(a) * &f.power(b), f.power(a + b));
        prop_assert_eq!(f.power(a), f.pow_small(a));
    }

    #[test]
    fn parse_print_roundtrip((p, f) in case()) {
        let vars = Variables::standard(f.nvars());
        let g = parse_poly(&f.to_string(), field(p), &vars).unwrap();
        prop_assert_eq!(g, f);
    }

    #[test]
    fn dense_multiply_matches_sparse(
        (p, n, a, b) in (arb_prime(), 1usize..=5, 0u32..=6, 0u32..=6).prop_flat_map(|(p, n, da, db)| {
            (Just(p), Just(n), arb_homogeneous(p, n, 12, da), arb_homogeneous(p, n, 12, db))
        })
    ) {
        let _ = p;
        prop_assume!(!a.is_zero() && !b.is_zero());
        let expect = naive_mul(&a, &b);
        prop_assert_eq!(&a * &b, expect.clone());
        let (da, db) = (a.homogeneous_degree().unwrap(), b.homogeneous_degree().unwrap());
        let slab = DenseSlab::from_terms(n, da, a.terms());
        let prod = multiply_slab_by_terms(&slab, b.terms(), a.ring().modulus());
        prop_assert_eq!(prod.shape.degree(), da + db);
        prop_assert_eq!(Polynomial::from_slab(a.ring(), &prod), expect);
    }
}
