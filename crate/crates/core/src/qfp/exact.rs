//! One step I -> theta(F_*I intersected with ker u) + (f^(p-1)), by syzygies.

use serde::Serialize;

use crate::groebner::{syzygy_generators, Ideal};
use crate::poly::{Monomial, Polynomial};

use super::delta::{frobenius_components, Delta1Context};

/// Intermediate data of one step.
#[derive(Debug, Clone, Default, Serialize)]
pub struct StepTrace {
    /// Number of module generators x^alpha g_i.
    pub module_generators: usize,
    pub nonzero_h: usize,
    pub syzygies: usize,
    /// Nonzero theta-images before interreduction.
    pub images: usize,
}

/// h_(i, alpha) = u(x^alpha g_i) and t_(i, alpha) = theta(x^alpha g_i),
/// alpha running over [0, p)^n with the first variable varying fastest.
pub fn h_and_t(ctx: &Delta1Context, gens: &[Polynomial]) -> (Vec<Polynomial>, Vec<Polynomial>) {
    let f = ctx.f();
    let p = f.prime().get();
    let n = f.nvars();
    let box_len = (p as usize).pow(n as u32);
    let zero = Polynomial::zero(f.ring(), n);
    let mut h = Vec::with_capacity(gens.len() * box_len);
    let mut t = Vec::with_capacity(gens.len() * box_len);
    for g in gens {
        let comps = frobenius_components(g);
        for idx in 0..box_len {
            let alpha = alpha_of(idx, p, n);
            let mut rho = Monomial::one();
            for i in 0..n {
                rho.set_exp(i, p - 1 - alpha.exp(i));
            }
            h.push(comps.get(&rho.residue_index(p, n)).cloned().unwrap_or_else(|| zero.clone()));
            t.push(ctx.theta(&g.mul_monomial(&alpha, 1)));
        }
    }
    (h, t)
}

/// The idx-th exponent vector of [0, p)^n, first variable fastest.
pub fn alpha_of(mut idx: usize, p: u32, n: usize) -> Monomial {
    let mut m = Monomial::one();
    for i in 0..n {
        m.set_exp(i, (idx % p as usize) as u32);
        idx /= p as usize;
    }
    m
}

/// Raw new generators sum_alpha c_(i,alpha) t_(i,alpha), one per syzygy of h.
pub fn next_generators(ctx: &Delta1Context, gens: &[Polynomial]) -> (Vec<Polynomial>, StepTrace) {
    let f = ctx.f();
    let zero = Polynomial::zero(f.ring(), f.nvars());
    let mut trace = StepTrace::default();
    if gens.is_empty() {
        return (Vec::new(), trace);
    }
    let (h, t) = h_and_t(ctx, gens);
    trace.module_generators = h.len();
    trace.nonzero_h = h.iter().filter(|x| !x.is_zero()).count();
    let mut out = Vec::new();
    // zero entries give unit syzygies; only t matters there
    let live: Vec<usize> = (0..h.len()).filter(|&j| !h[j].is_zero() && !t[j].is_zero()).collect();
    for j in 0..h.len() {
        if h[j].is_zero() {
            trace.syzygies += 1;
            if !t[j].is_zero() {
                out.push(t[j].clone());
            }
        }
    }
    if !live.is_empty() {
        // indices with zero t still constrain which combinations are syzygies
        let nz: Vec<usize> = (0..h.len()).filter(|&j| !h[j].is_zero()).collect();
        let sub: Vec<Polynomial> = nz.iter().map(|&j| h[j].clone()).collect();
        let syz = syzygy_generators(&sub);
        trace.syzygies += syz.len();
        for s in &syz {
            let img = s.entries().fold(zero.clone(), |acc, (k, c)| &acc + &(c * &t[nz[k]]));
            if !img.is_zero() {
                out.push(img);
            }
        }
    }
    trace.images = out.len();
    (out, trace)
}

/// I_(m+1) from I_m, interreduced.
pub fn next_ideal(ctx: &Delta1Context, ideal: &Ideal) -> Ideal {
    let (mut gens, _) = next_generators(ctx, ideal.groebner_basis());
    gens.push(ctx.g().clone());
    Ideal::new(ideal.ring(), ideal.nvars(), gens).interreduced()
}
