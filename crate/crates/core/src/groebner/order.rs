use std::cmp::Ordering;

use crate::poly::{Monomial, MAX_VARS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Grevlex,
    Lex,
}

/// A monomial order: grevlex or lex over a permutation of the variables.
/// `perm[i]` is the variable placed at position i (position 0 is largest).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    perm: Vec<usize>,
}

impl MonomialOrder {
    pub fn grevlex(n: usize) -> Self {
        MonomialOrder { kind: OrderKind::Grevlex, perm: (0..n).collect() }
    }

    pub fn lex(n: usize) -> Self {
        MonomialOrder { kind: OrderKind::Lex, perm: (0..n).collect() }
    }

    /// `None` unless `perm` is a permutation of 0..n.
    pub fn with_permutation(kind: OrderKind, perm: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; perm.len()];
        for &v in &perm {
            if v >= perm.len() || std::mem::replace(&mut seen[v], true) {
                return None;
            }
        }
        (perm.len() <= MAX_VARS).then_some(MonomialOrder { kind, perm })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn nvars(&self) -> usize {
        self.perm.len()
    }

    /// Order-preserving packing into a u128 (degree below 2^16 assumed).
    #[inline]
    pub fn key(&self, m: &Monomial) -> u128 {
        let e = m.exps();
        let n = self.perm.len();
        match self.kind {
            OrderKind::Grevlex => {
                assert!(m.degree() <= 0xFFFF, "degree too large for the order key");
                let mut k = (m.degree() as u128) << 112;
                let mut shift = 112;
                for pos in (1..n).rev() {
                    shift -= 16;
                    k |= ((0xFFFF - e[self.perm[pos]] as u128) & 0xFFFF) << shift;
                }
                k
            }
            OrderKind::Lex => {
                let mut k = 0u128;
                let mut shift = 128;
                for pos in 0..n {
                    shift -= 16;
                    k |= (e[self.perm[pos]] as u128) << shift;
                }
                k
            }
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }
}
