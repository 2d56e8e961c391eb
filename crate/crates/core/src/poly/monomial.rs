use std::cmp::Ordering;
use std::fmt;

/// Maximum number of variables.
pub const MAX_VARS: usize = 8;

/// Exponent vector with cached total degree. Unused slots stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    deg: u32,
}

impl Monomial {
    pub const fn one() -> Self {
        Monomial { exps: [0; MAX_VARS], deg: 0 }
    }

    /// Fails when there are too many slots or an exponent does not fit in 16 bits.
    pub fn from_exponents(exps: &[u32]) -> Option<Self> {
        if exps.len() > MAX_VARS {
            return None;
        }
        let mut m = Monomial::one();
        for (i, &e) in exps.iter().enumerate() {
            m.exps[i] = u16::try_from(e).ok()?;
            m.deg += e;
        }
        Some(m)
    }

    pub fn var(i: usize) -> Self {
        let mut m = Monomial::one();
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn var_power(i: usize, e: u32) -> Self {
        let mut m = Monomial::one();
        m.exps[i] = u16::try_from(e).expect("exponent overflow");
        m.deg = e;
        m
    }

    #[inline]
    pub fn exps(&self) -> &[u16; MAX_VARS] {
        &self.exps
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    /// Product. Panics on exponent overflow.
    #[inline]
    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].checked_add(o.exps[i]).expect("exponent overflow");
        }
        m.deg = self.deg + o.deg;
        m
    }

    #[inline]
    pub fn divides(&self, o: &Monomial) -> bool {
        self.deg <= o.deg && (0..MAX_VARS).all(|i| self.exps[i] <= o.exps[i])
    }

    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        if !o.divides(self) {
            return None;
        }
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exps[i] -= o.exps[i];
        }
        m.deg -= o.deg;
        Some(m)
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        let mut m = Monomial::one();
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].max(o.exps[i]);
            m.deg += m.exps[i] as u32;
        }
        m
    }

    pub fn is_coprime(&self, o: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exps[i] == 0 || o.exps[i] == 0)
    }

    /// Every exponent multiplied by `k`. Panics on overflow.
    pub fn scale(&self, k: u32) -> Monomial {
        let mut m = Monomial::one();
        for i in 0..MAX_VARS {
            let e = self.exps[i] as u32 * k;
            m.exps[i] = u16::try_from(e).expect("exponent overflow");
            m.deg += e;
        }
        m
    }

    /// True when some exponent is at least `q`.
    #[inline]
    pub fn in_bracket(&self, q: u64) -> bool {
        self.exps.iter().any(|&e| e as u64 >= q)
    }

    pub fn weighted_degree(&self, w: &[u32]) -> u64 {
        w.iter().enumerate().map(|(i, &wi)| wi as u64 * self.exps[i] as u64).sum()
    }

    /// Componentwise `e mod p` and `e / p` over the first `n` slots.
    pub fn split_digits(&self, p: u32, n: usize) -> (Monomial, Monomial) {
        let mut r = Monomial::one();
        let mut q = Monomial::one();
        for i in 0..n {
            let e = self.exps[i] as u32;
            r.exps[i] = (e % p) as u16;
            q.exps[i] = (e / p) as u16;
            r.deg += e % p;
            q.deg += e / p;
        }
        (r, q)
    }

    /// Mixed-radix index of a residue vector in [0, p)^n.
    pub fn residue_index(&self, p: u32, n: usize) -> usize {
        let mut idx = 0usize;
        for i in 0..n {
            idx = idx * p as usize + self.exps[i] as usize;
        }
        idx
    }

    pub fn from_residue_index(mut idx: usize, p: u32, n: usize) -> Monomial {
        let mut m = Monomial::one();
        for i in (0..n).rev() {
            let d = (idx % p as usize) as u16;
            idx /= p as usize;
            m.exps[i] = d;
            m.deg += d as u32;
        }
        m
    }

    pub fn set_exp(&mut self, i: usize, e: u32) {
        let e16 = u16::try_from(e).expect("exponent overflow");
        self.deg = self.deg - self.exps[i] as u32 + e;
        self.exps[i] = e16;
    }

    /// Graded reverse lexicographic comparison.
    #[inline]
    pub fn grevlex_cmp(&self, o: &Monomial) -> Ordering {
        match self.deg.cmp(&o.deg) {
            Ordering::Equal => {}
            c => return c,
        }
        for i in (0..MAX_VARS).rev() {
            if self.exps[i] != o.exps[i] {
                return o.exps[i].cmp(&self.exps[i]);
            }
        }
        Ordering::Equal
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.grevlex_cmp(o)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}
