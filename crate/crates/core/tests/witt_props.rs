mod common;

use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use qfedder::field::Prime;
use qfedder::poly::Polynomial;
use qfedder::qfp::{delta1, delta1_multinomial};
use qfedder::witt::{delta1_witt_oracle, GhostVector, IntPoly, WittVector};

/// Ghost component i is determined mod p^(i+1) by the components mod p.
fn ghost_congruent(a: &GhostVector, b: &GhostVector, p: u32) -> bool {
    a.comps.iter().zip(&b.comps).enumerate().all(|(i, (x, y))| {
        x.sub(y).div_exact(&BigInt::from(p).pow(i as u32 + 1)).is_some()
    })
}

fn ghost_sum(a: &GhostVector, b: &GhostVector) -> GhostVector {
    GhostVector { comps: a.comps.iter().zip(&b.comps).map(|(x, y)| x.add(y)).collect() }
}

fn ghost_prod(a: &GhostVector, b: &GhostVector) -> GhostVector {
    GhostVector { comps: a.comps.iter().zip(&b.comps).map(|(x, y)| x.mul(y)).collect() }
}

fn check_ring_hom(a: &WittVector, b: &WittVector) {
    let p = a.prime().get();
    let (ga, gb) = (a.ghost(), b.ghost());
    assert!(ghost_congruent(&a.witt_add(b).unwrap().ghost(), &ghost_sum(&ga, &gb), p));
    assert!(ghost_congruent(&a.witt_mul(b).unwrap().ghost(), &ghost_prod(&ga, &gb), p));
}

#[test]
fn ghost_homomorphism_on_w2_constants() {
    for p in [3u64, 5] {
        let pr = Prime::new(p).unwrap();
        let all: Vec<WittVector> = (0..p * p)
            .map(|k| {
                let comps = vec![IntPoly::constant((k % p) as i64), IntPoly::constant((k / p) as i64)];
                WittVector::new(pr, 1, comps).unwrap()
            })
            .collect();
        for a in &all {
            for b in &all {
                check_ring_hom(a, b);
            }
        }
        // W_2(F_p) is Z/p^2: (1, 0) added p times is p = (0, 1)
        let p_elt = WittVector::p_element(pr, 1, 2).unwrap();
        assert_eq!(p_elt, all[p as usize]);
    }
}

fn witt_sample(len: usize) -> impl Strategy<Value = WittVector> {
    prop_oneof![Just(2u64), Just(3), Just(5)].prop_flat_map(move |p| {
        proptest::collection::vec(arb_poly(p, 2, 3, 2), len).prop_map(|c| WittVector::from_polys(&c).unwrap())
    })
}

fn witt_pair(len: usize) -> impl Strategy<Value = (WittVector, WittVector)> {
    prop_oneof![Just(2u64), Just(3), Just(5)].prop_flat_map(move |p| {
        let v = move || proptest::collection::vec(arb_poly(p, 2, 3, 2), len).prop_map(|c| WittVector::from_polys(&c).unwrap());
        (v(), v())
    })
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn ghost_homomorphism_on_w3((a, b) in witt_pair(3)) {
        check_ring_hom(&a, &b);
    }

    #[test]
    fn fv_vf_is_p(a in witt_sample(3)) {
        let p = WittVector::p_element(a.prime(), 2, 3).unwrap();
        let pa = p.witt_mul(&a).unwrap();
        prop_assert_eq!(a.verschiebung().frobenius(), pa.clone());
        prop_assert_eq!(a.frobenius().verschiebung(), pa);
    }

    #[test]
    fn restriction_is_a_ring_hom((a, b) in witt_pair(3)) {
        let r = |x: &WittVector| x.restriction().unwrap();
        prop_assert_eq!(r(&a.witt_add(&b).unwrap()), r(&a).witt_add(&r(&b)).unwrap());
        prop_assert_eq!(r(&a.witt_mul(&b).unwrap()), r(&a).witt_mul(&r(&b)).unwrap());
    }

    #[test]
    fn delta1_three_ways(
        f in (arb_prime(), 1usize..=3).prop_flat_map(|(p, n)| arb_poly(p, n, 5, 6))
    ) {
        let lift = delta1(&f).unwrap();
        prop_assert_eq!(delta1_witt_oracle(&f).unwrap(), lift.clone());
        prop_assert_eq!(delta1_multinomial(&f).unwrap(), lift);
    }
}

#[test]
fn teichmuller_is_multiplicative() {
    let f = parse("x1+2*x2", 5, 2);
    let g = parse("x1^2+x2", 5, 2);
    let tf = WittVector::teichmuller(&f, 3).unwrap();
    let tg = WittVector::teichmuller(&g, 3).unwrap();
    let prod: Polynomial = &f * &g;
    assert_eq!(tf.witt_mul(&tg).unwrap(), WittVector::teichmuller(&prod, 3).unwrap());
}
