//! Counter-based sampling of dense homogeneous polynomials over F_p.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::isolated_singularity;
use crate::field::{CoeffRing, Prime};
use crate::poly::Polynomial;
use crate::qfp::monomials_of_weighted_degree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SampleFilters {
    /// Keep only f whose singular locus is zero-dimensional.
    pub smooth_origin: bool,
    /// Keep only homogeneous f (always true for this sampler; kept for the record).
    pub homogeneous_only: bool,
}

/// The degree-d polynomial drawn from stream `index` of `seed`.
pub fn draw(p: Prime, n: usize, d: u32, seed: u64, index: u64) -> Polynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let ring = CoeffRing::mod_p(p);
    let monos = monomials_of_weighted_degree(&vec![1; n], d as u64, usize::MAX).expect("no limit");
    let terms: Vec<_> = monos.into_iter().map(|m| (m, rng.gen_range(0..p.as_u64()))).collect();
    Polynomial::from_terms(ring, n, terms)
}

/// Draws streams 0, 1, 2, .. and yields (stream index, f) for nonzero f
/// passing the filters.
pub fn samples(p: Prime, n: usize, d: u32, seed: u64, filters: SampleFilters) -> impl Iterator<Item = (u64, Polynomial)> {
    (0u64..).filter_map(move |i| {
        let f = draw(p, n, d, seed, i);
        let keep = !f.is_zero() && (!filters.smooth_origin || isolated_singularity(&f));
        keep.then_some((i, f))
    })
}
