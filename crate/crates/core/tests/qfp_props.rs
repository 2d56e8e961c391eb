mod common;

use common::*;
use proptest::prelude::*;
use qfedder::classify::{classify_fermat, consistent};
use qfedder::groebner::{contained_in_monomial_ideal, ideal_equal};
use qfedder::poly::{Monomial, Polynomial};
use qfedder::qfp::{
    delta1, ideal_sequence, not_qfp_certificate, qfp_height, u_map, Delta1Context, HeightOptions, HeightOutcome,
    Method,
};

fn small_in_m() -> impl Strategy<Value = Polynomial> {
    (prop_oneof![Just(2u64), Just(3)], 1usize..=2)
        .prop_flat_map(|(p, n)| arb_poly(p, n, 4, 4))
        .prop_map(|f| f.filter_terms(|m| !m.is_one()))
        .prop_filter("nonzero", |f| !f.is_zero())
}

fn small_homogeneous() -> impl Strategy<Value = Polynomial> {
    (prop_oneof![Just(2u64), Just(3), Just(5)], 2usize..=3, 2u32..=4)
        .prop_flat_map(|(p, n, d)| arb_homogeneous(p, n, 5, d))
        .prop_filter("nonzero", |f| !f.is_zero())
}

fn multiplier(n: usize) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0u32..3, n).prop_map(|e| Monomial::from_exponents(&e).unwrap())
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn delta1_degree_law(f in small_homogeneous()) {
        let p = f.prime().as_u64();
        let d = f.homogeneous_degree().unwrap() as u64;
        let ctx = Delta1Context::new(&f).unwrap();
        let delta = ctx.delta();
        prop_assert_eq!(delta.clone(), delta1(&f.power(p - 1)).unwrap());
        if !delta.is_zero() {
            prop_assert_eq!(delta.homogeneous_degree().map(u64::from), Some(p * d * (p - 1)));
        }
    }

    #[test]
    fn u_and_theta_are_semilinear(
        (f, b, w, c) in small_homogeneous().prop_flat_map(|f| {
            let (p, n) = (f.prime().as_u64(), f.nvars());
            (Just(f), arb_poly(p, n, 5, 8), multiplier(n), 1..p)
        })
    ) {
        let p = f.prime().get();
        let c = c as u32;
        let shifted = b.mul_monomial(&w.scale(p), c);
        let cw = |g: &Polynomial| g.mul_monomial(&w, c);
        prop_assert_eq!(u_map(&shifted), cw(&u_map(&b)));
        let ctx = Delta1Context::new(&f).unwrap();
        prop_assert_eq!(ctx.theta(&shifted), cw(&ctx.theta(&b)));
        prop_assert_eq!(ctx.theta(&b), u_map(&(&ctx.delta() * &b)));
    }

    #[test]
    fn chain_and_certificate_soundness(f in small_in_m()) {
        let p = f.prime().as_u64();
        let seq = ideal_sequence(&f, 4).unwrap();
        for w in seq.windows(2) {
            prop_assert!(w[1].contains_ideal(&w[0]));
        }
        if not_qfp_certificate(&f).unwrap().is_some() {
            for i in &seq {
                prop_assert!(contained_in_monomial_ideal(i, p));
            }
        }
    }

    #[test]
    fn exact_and_graded_agree(f in small_homogeneous()) {
        let run = |method| qfp_height(&f, &HeightOptions { cutoff: 3, method, ..Default::default() }).unwrap();
        let (e, g) = (run(Method::Exact), run(Method::Graded));
        let done = |o: &HeightOutcome| !matches!(o, HeightOutcome::UnknownBeyond(_));
        if done(&e.outcome) && done(&g.outcome) && !g.heuristic {
            prop_assert_eq!(e.outcome.finite(), g.outcome.finite());
            prop_assert_eq!(e.outcome.is_infinite(), g.outcome.is_infinite());
        }
        if let Some(m) = g.outcome.finite() {
            // a graded escape is always a genuine upper bound
            prop_assert!(e.outcome.finite().is_none_or(|k| k <= m) || !done(&e.outcome));
        }
    }
}

#[test]
fn exact_and_graded_agree_on_corpus() {
    for f in corpus() {
        let p = f.prime().as_u64();
        if p.pow(f.nvars() as u32) > 1000 {
            continue;
        }
        let run = |method| qfp_height(&f, &HeightOptions { cutoff: 4, method, ..Default::default() }).unwrap();
        let (e, g) = (run(Method::Exact), run(Method::Graded));
        if !matches!(e.outcome, HeightOutcome::UnknownBeyond(_)) && !matches!(g.outcome, HeightOutcome::UnknownBeyond(_)) {
            assert_eq!(e.outcome.finite(), g.outcome.finite(), "{f:?}");
        }
    }
}

#[test]
fn certificates_are_sound_on_corpus() {
    for f in corpus() {
        let p = f.prime().as_u64();
        if not_qfp_certificate(&f).unwrap().is_none() || p.pow(f.nvars() as u32) > 400 {
            continue;
        }
        for i in ideal_sequence(&f, 4).unwrap() {
            assert!(contained_in_monomial_ideal(&i, p), "{f:?}");
        }
    }
}

#[test]
fn elliptic_heights() {
    let opts = HeightOptions { cutoff: 3, ..Default::default() };
    let expect = [(2u64, HeightOutcome::Finite(2)), (5, HeightOutcome::Finite(2)), (7, HeightOutcome::Finite(1))];
    for (p, h) in expect {
        let f = fermat(3, 3, p);
        assert_eq!(qfp_height(&f, &opts).unwrap().outcome, h, "p = {p}");
    }
}

#[test]
fn fermat_grid_matches_classifier() {
    for p in [2u64, 3, 5, 7] {
        for n in [3usize, 4] {
            for d in 1..=8u32 {
                let f = fermat(n, d, p);
                let class = classify_fermat(n as u32, d, prime(p));
                let opts = HeightOptions { cutoff: 3, method: Method::Auto, ..Default::default() };
                let h = qfp_height(&f, &opts).unwrap();
                assert_ne!(consistent(&class, &h.outcome), Some(false), "p={p} n={n} d={d}: {class:?} vs {:?}", h.outcome);
            }
        }
    }
}

#[test]
fn fermat_quartic_fivefold_height_two() {
    let f = fermat(5, 4, 7);
    let opts = HeightOptions { cutoff: 2, method: Method::Graded, ..Default::default() };
    let h = qfp_height(&f, &opts).unwrap();
    assert_eq!(h.outcome, HeightOutcome::Finite(2));
    assert!(!h.heuristic);
}

#[test]
fn char_two_cubic_stabilizes() {
    let f = parse("x1^3+x2^3", 2, 2);
    let seq = ideal_sequence(&f, 2).unwrap();
    assert!(ideal_equal(&seq[0], &seq[1]));
    assert!(contained_in_monomial_ideal(&seq[1], 2));
    let h = qfp_height(&f, &HeightOptions::default()).unwrap();
    assert!(matches!(h.outcome, HeightOutcome::Infinite(qfedder::qfp::Certificate::Stabilized(_))));
}
