//! Dense coefficient arrays for homogeneous polynomials.
//!
//! Degree-D exponent vectors in n variables are ranked with the first
//! variable outermost, so for a fixed prefix `(v_0, .., v_{n-3})` the
//! entries for `v_{n-2} = 0, 1, ..` are contiguous (a "run").

use super::monomial::{Monomial, MAX_VARS};

/// Binomial table and ranking for one (n, D) pair.
#[derive(Clone, Debug)]
pub struct SlabShape {
    n: usize,
    deg: u32,
    len: usize,
    // binom[a][b] = C(a, b) for b <= n
    binom: Vec<[u64; MAX_VARS + 1]>,
}

pub fn binomial(a: u64, b: u64) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut r: u128 = 1;
    for i in 0..b {
        r = r * (a - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(r).expect("binomial overflow")
}

impl SlabShape {
    pub fn new(n: usize, deg: u32) -> Self {
        assert!((1..=MAX_VARS).contains(&n));
        let top = deg as usize + n + 1;
        let mut binom = vec![[0u64; MAX_VARS + 1]; top + 1];
        for (a, row) in binom.iter_mut().enumerate() {
            for (b, slot) in row.iter_mut().enumerate() {
                *slot = binomial(a as u64, b as u64);
            }
        }
        let len = binomial(deg as u64 + n as u64 - 1, n as u64 - 1) as usize;
        SlabShape { n, deg, len, binom }
    }

    /// Number of degree-D monomials in n variables, without building a table.
    pub fn count(n: usize, deg: u32) -> u64 {
        binomial(deg as u64 + n as u64 - 1, n as u64 - 1)
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    fn c(&self, a: u32, b: usize) -> u64 {
        self.binom[a as usize][b]
    }

    /// Rank of a degree-D monomial.
    #[inline]
    pub fn rank(&self, m: &Monomial) -> usize {
        debug_assert_eq!(m.degree(), self.deg);
        if self.n == 1 {
            return 0;
        }
        self.rank_prefix(m.exps(), m.exp(self.n - 2))
    }

    /// Rank of the monomial with prefix `e[0..n-2]` and `v_{n-2} = last`.
    #[inline]
    fn rank_prefix(&self, e: &[u16; MAX_VARS], last: u32) -> usize {
        let mut r = 0u64;
        let mut rem = self.deg;
        for i in 0..self.n - 2 {
            let k = self.n - 1 - i;
            let v = e[i] as u32;
            r += self.c(rem + k as u32, k) - self.c(rem - v + k as u32, k);
            rem -= v;
        }
        (r + last as u64) as usize
    }

    /// Calls `f(prefix, base, run_len)` for every run in rank order.
    pub fn for_each_run(&self, mut f: impl FnMut(&[u16; MAX_VARS], usize, usize)) {
        if self.n == 1 {
            f(&[0; MAX_VARS], 0, 1);
            return;
        }
        let mut prefix = [0u16; MAX_VARS];
        let mut base = 0usize;
        self.runs_rec(0, self.deg, &mut prefix, &mut base, &mut f);
    }

    fn runs_rec(
        &self,
        depth: usize,
        rem: u32,
        prefix: &mut [u16; MAX_VARS],
        base: &mut usize,
        f: &mut impl FnMut(&[u16; MAX_VARS], usize, usize),
    ) {
        if depth == self.n - 2 {
            let len = rem as usize + 1;
            f(prefix, *base, len);
            *base += len;
            return;
        }
        for v in 0..=rem {
            prefix[depth] = v as u16;
            self.runs_rec(depth + 1, rem - v, prefix, base, f);
        }
        prefix[depth] = 0;
    }

    /// Calls `f(rank, monomial)` for every monomial in rank order.
    pub fn for_each_monomial(&self, mut f: impl FnMut(usize, Monomial)) {
        let n = self.n;
        let deg = self.deg;
        self.for_each_run(|prefix, base, len| {
            let used: u32 = prefix[..n.saturating_sub(2)].iter().map(|&e| e as u32).sum();
            for j in 0..len {
                let mut e = [0u32; MAX_VARS];
                for (i, slot) in e.iter_mut().enumerate().take(n.saturating_sub(2)) {
                    *slot = prefix[i] as u32;
                }
                if n == 1 {
                    e[0] = deg;
                } else {
                    e[n - 2] = j as u32;
                    e[n - 1] = deg - used - j as u32;
                }
                f(base + j, Monomial::from_exponents(&e[..n]).expect("slab exponent fits"));
            }
        });
    }

    /// Adds `c * shift * src` into `acc`, where `src` is a slab of `src_shape`
    /// and `acc` has this shape (degree = src degree + shift degree).
    pub fn add_shifted(&self, acc: &mut [u64], src_shape: &SlabShape, src: &[u32], shift: &Monomial, c: u64) {
        debug_assert_eq!(src_shape.deg + shift.degree(), self.deg);
        debug_assert_eq!(acc.len(), self.len);
        let n = self.n;
        if n == 1 {
            acc[0] += c * src[0] as u64;
            return;
        }
        let sh = shift.exps();
        let last_shift = sh[n - 2] as u32;
        src_shape.for_each_run(|prefix, base, len| {
            let mut t = [0u16; MAX_VARS];
            for i in 0..n - 2 {
                t[i] = prefix[i] + sh[i];
            }
            let tbase = self.rank_prefix(&t, last_shift);
            let dst = &mut acc[tbase..tbase + len];
            let s = &src[base..base + len];
            for (d, &v) in dst.iter_mut().zip(s) {
                *d += c * v as u64;
            }
        });
    }
}

/// A homogeneous polynomial stored densely.
#[derive(Clone, Debug)]
pub struct DenseSlab {
    pub shape: SlabShape,
    pub data: Vec<u32>,
}

impl DenseSlab {
    pub fn zeros(n: usize, deg: u32) -> Self {
        let shape = SlabShape::new(n, deg);
        let data = vec![0; shape.len()];
        DenseSlab { shape, data }
    }

    pub fn from_terms(n: usize, deg: u32, terms: &[(Monomial, u32)]) -> Self {
        let mut s = DenseSlab::zeros(n, deg);
        for (m, c) in terms {
            let r = s.shape.rank(m);
            s.data[r] = *c;
        }
        s
    }

    /// Nonzero terms in rank order.
    pub fn terms(&self) -> Vec<(Monomial, u32)> {
        let mut out = Vec::new();
        self.shape.for_each_monomial(|r, m| {
            if self.data[r] != 0 {
                out.push((m, self.data[r]));
            }
        });
        out
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|&&c| c != 0).count()
    }
}

/// Accumulates `sum c_i * m_i * src` into a fresh slab, reducing mod `modulus`.
/// `terms` must all share one degree.
pub fn multiply_slab_by_terms(src: &DenseSlab, terms: &[(Monomial, u32)], modulus: u32) -> DenseSlab {
    let n = src.shape.nvars();
    let tdeg = terms.first().map_or(0, |t| t.0.degree());
    let shape = SlabShape::new(n, src.shape.degree() + tdeg);
    let mut acc = vec![0u64; shape.len()];
    let m1 = (modulus as u64 - 1).max(1);
    let batch = (u64::MAX / (m1 * m1 + 1)).max(1) as usize;
    for (k, (m, c)) in terms.iter().enumerate() {
        if k > 0 && k % batch == 0 {
            acc.iter_mut().for_each(|a| *a %= modulus as u64);
        }
        shape.add_shifted(&mut acc, &src.shape, &src.data, m, *c as u64);
    }
    let data = acc.into_iter().map(|a| (a % modulus as u64) as u32).collect();
    DenseSlab { shape, data }
}
