use qfedder::classify::{moduli_dimension, unlikely_intersection, wics_count};
use qfedder::field::Prime;

fn enumerate(n: u64, total: u64, k: u64) -> u128 {
    if n == 0 {
        return (total == 0) as u128;
    }
    (0..k.min(total + 1)).map(|a| enumerate(n - 1, total - a, k)).sum()
}

#[test]
fn wics_symmetry_and_enumeration() {
    for n in 1..=6u64 {
        for p in [2u64, 3, 5, 7] {
            let top = n * (p - 1);
            for d in 0..=top {
                assert_eq!(wics_count(n, d, p), wics_count(n, top - d, p), "n={n} D={d} p={p}");
                if n <= 4 {
                    assert_eq!(wics_count(n, d, p), enumerate(n, d, p), "n={n} D={d} p={p}");
                }
            }
            assert_eq!(wics_count(n, top + 1, p), 0);
        }
    }
}

#[test]
fn quartic_threefold_counts() {
    assert_eq!(moduli_dimension(5, 4), 46);
    let counts: Vec<u128> = [2u64, 3, 5, 7].iter().map(|&p| unlikely_intersection(5, 4, Prime::new(p).unwrap()).wics_count).collect();
    assert_eq!(counts, vec![5, 15, 70, 210]);
}
