//! Positive weight vectors making a polynomial quasi-homogeneous.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Polynomial;

/// Positive integer weights with the common weighted degree of f.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grading {
    pub weights: Vec<u32>,
    pub degree: u64,
}

impl Grading {
    pub fn standard(n: usize, degree: u64) -> Self {
        Grading { weights: vec![1; n], degree }
    }

    pub fn is_standard(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }

    pub fn weight_sum(&self) -> u64 {
        self.weights.iter().map(|&w| w as u64).sum()
    }
}

type Row = Vec<BigRational>;

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Basis of the rational kernel of `rows` (each of length n).
fn kernel(mut rows: Vec<Row>, n: usize) -> Vec<Row> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(k) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, k);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for k in 0..rows.len() {
            if k != r && !rows[k][c].is_zero() {
                let factor = rows[k][c].clone();
                for j in 0..n {
                    let t = &rows[r][j] * &factor;
                    rows[k][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigRational::zero(); n];
            v[fc] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[i][fc].clone();
            }
            v
        })
        .collect()
}

/// Constraint sum_j a_j y_j >= b.
#[derive(Clone, PartialEq)]
struct Ineq {
    a: Row,
    b: BigRational,
}

/// Finds y with every constraint satisfied, by Fourier-Motzkin elimination.
fn fourier_motzkin(cons: Vec<Ineq>, k: usize) -> Option<Vec<BigRational>> {
    let mut stages = vec![cons];
    for t in (0..k).rev() {
        let cur = stages.last().expect("stage");
        let (mut pos, mut neg, mut keep) = (Vec::new(), Vec::new(), Vec::new());
        for c in cur {
            if c.a[t].is_positive() {
                pos.push(c);
            } else if c.a[t].is_negative() {
                neg.push(c);
            } else {
                keep.push(c.clone());
            }
        }
        for p in &pos {
            for nn in &neg {
                let (lp, ln) = (-nn.a[t].clone(), p.a[t].clone());
                let a: Row = (0..k).map(|j| &p.a[j] * &lp + &nn.a[j] * &ln).collect();
                let b = &p.b * &lp + &nn.b * &ln;
                let c = Ineq { a, b };
                if !keep.contains(&c) {
                    keep.push(c);
                }
            }
        }
        stages.push(keep);
    }
    if stages.last().expect("final stage").iter().any(|c| c.b.is_positive()) {
        return None;
    }
    let mut y = vec![BigRational::zero(); k];
    for t in 0..k {
        // constraints involving only y_0..=y_t
        let cons = &stages[k - 1 - t];
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for c in cons {
            let rest: BigRational = (0..t).map(|j| &c.a[j] * &y[j]).sum();
            let rhs = &c.b - rest;
            if c.a[t].is_positive() {
                let v = rhs / &c.a[t];
                lo = Some(lo.map_or(v.clone(), |l| l.max(v)));
            } else if c.a[t].is_negative() {
                let v = rhs / &c.a[t];
                hi = Some(hi.map_or(v.clone(), |h| h.min(v)));
            }
        }
        y[t] = match (lo, hi) {
            (Some(l), _) => l,
            (None, Some(h)) => h.min(BigRational::zero()),
            (None, None) => BigRational::zero(),
        };
    }
    Some(y)
}

/// Positive integer weights w with <w, v> constant over the exponent vectors
/// of f. When the solutions form a single ray the primitive generator is
/// returned; otherwise a deterministic interior point of the cone.
pub fn find_grading(f: &Polynomial) -> Option<Grading> {
    let n = f.nvars();
    let (v0, _) = f.leading()?;
    let rows: Vec<Row> = f.terms()[1..]
        .iter()
        .map(|(m, _)| (0..n).map(|i| q(m.exp(i) as i64 - v0.exp(i) as i64)).collect())
        .collect();
    let basis = kernel(rows, n);
    let k = basis.len();
    if k == 0 {
        return None;
    }
    let cons = (0..n).map(|i| Ineq { a: (0..k).map(|t| basis[t][i].clone()).collect(), b: BigRational::one() }).collect();
    let y = fourier_motzkin(cons, k)?;
    let w: Vec<BigRational> = (0..n).map(|i| (0..k).map(|t| &basis[t][i] * &y[t]).sum()).collect();
    let denom = w.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = w.iter().map(|x| (x * BigRational::from_integer(denom.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let weights: Option<Vec<u32>> = ints.iter().map(|x| (x / &g).to_u32()).collect();
    let weights = weights?;
    if weights.contains(&0) {
        return None;
    }
    let degree = v0.weighted_degree(&weights);
    Some(Grading { weights, degree })
}
