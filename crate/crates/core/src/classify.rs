//! Hypothesis checks, the Fermat classification, the Main Theorem verifier
//! and the moduli/wics counts.

use num_rational::Ratio;
use serde::Serialize;

use crate::field::Prime;
use crate::frob::{fpt_resolve, nu_table, FptReport, FrobError};
use crate::groebner::{zero_dimensional, Ideal};
use crate::poly::{binomial, find_grading, Grading, Polynomial};
use crate::qfp::{qfp_height, HeightOptions, HeightOutcome, HeightResult, QfpError};

/// Positive weights making f quasi-homogeneous, if any.
pub fn quasi_homogeneous(f: &Polynomial) -> Option<Grading> {
    find_grading(f)
}

/// Which generators were used for the singular-locus ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JacobianKind {
    /// Partials only: f is quasi-homogeneous of weighted degree prime to p.
    Partials,
    /// f together with its partials.
    WithF,
}

/// Ideal cutting out the singular locus of V(f).
pub fn jacobian_ideal(f: &Polynomial) -> (Ideal, JacobianKind) {
    let p = f.prime().as_u64();
    let partials: Vec<Polynomial> = (0..f.nvars()).map(|i| f.partial_derivative(i)).collect();
    let euler = quasi_homogeneous(f).is_some_and(|g| g.degree % p != 0);
    if euler {
        (Ideal::new(f.ring(), f.nvars(), partials), JacobianKind::Partials)
    } else {
        let mut gens = vec![f.clone()];
        gens.extend(partials);
        (Ideal::new(f.ring(), f.nvars(), gens), JacobianKind::WithF)
    }
}

/// The singular locus of V(f) is zero-dimensional.
pub fn isolated_singularity(f: &Polynomial) -> bool {
    zero_dimensional(&jacobian_ideal(f).0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FermatOutcome {
    #[serde(rename = "HEIGHT_1_F_PURE")]
    Height1FPure,
    #[serde(rename = "HEIGHT_2")]
    Height2,
    Infinite,
    #[serde(rename = "NOT_F_PURE_CASE_1B")]
    NotFPureCase1b,
    OutOfTheoremScope,
}

/// What is known inside case (1b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubAnswer {
    Height2,
    Infinite,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FermatClass {
    pub outcome: FermatOutcome,
    pub rule: String,
    /// The a with ceil(p/(a+1)) <= d < ceil(p/a), odd p and d < p.
    pub a: Option<u64>,
    pub sub_answer: Option<SubAnswer>,
    pub necessary_condition: Option<String>,
}

impl FermatClass {
    fn new(outcome: FermatOutcome, rule: &str) -> Self {
        FermatClass { outcome, rule: rule.into(), a: None, sub_answer: None, necessary_condition: None }
    }

    /// The height this classification pins down, when it does.
    pub fn expected_height(&self) -> Option<HeightOutcomeKind> {
        match (self.outcome, self.sub_answer) {
            (FermatOutcome::Height1FPure, _) => Some(HeightOutcomeKind::Finite(1)),
            (FermatOutcome::Height2, _) | (_, Some(SubAnswer::Height2)) => Some(HeightOutcomeKind::Finite(2)),
            (FermatOutcome::Infinite, _) | (_, Some(SubAnswer::Infinite)) => Some(HeightOutcomeKind::Infinite),
            _ => None,
        }
    }
}

/// Height shape without certificate detail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HeightOutcomeKind {
    Finite(u32),
    Infinite,
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// Case (1b) Fermat hypersurfaces (n, d, p) with d < n known to have height 2.
const KNOWN_HEIGHT_2: [(u64, u64, u64); 1] = [(5, 4, 7)];

/// Classification of x_1^d + .. + x_n^d over F_p.
pub fn classify_fermat(n: u32, d: u32, p: Prime) -> FermatClass {
    let (n, d, pu) = (n as u64, d as u64, p.as_u64());
    if pu == 2 {
        return match (d, n >= 3) {
            (1, _) => FermatClass::new(FermatOutcome::Height1FPure, "char 2: d = 1"),
            (3, true) => FermatClass::new(FermatOutcome::Height2, "char 2: d = 3 and n >= 3"),
            _ => FermatClass::new(FermatOutcome::Infinite, "char 2: all other (n, d)"),
        };
    }
    if n < 3 {
        return FermatClass::new(FermatOutcome::OutOfTheoremScope, "odd p with n < 3");
    }
    if d >= pu {
        return FermatClass::new(FermatOutcome::Infinite, "case (2): d >= p");
    }
    let a = ceil_div(pu, d) - 1;
    debug_assert!(ceil_div(pu, a + 1) <= d && d < ceil_div(pu, a));
    let mut c = if n * a < pu - 2 {
        FermatClass::new(FermatOutcome::Infinite, "case (1a): n < (p-2)/a")
    } else if n * a < pu - 1 {
        let mut c = FermatClass::new(FermatOutcome::NotFPureCase1b, "case (1b): (p-2)/a <= n < (p-1)/a");
        c.necessary_condition = Some("quasi-F-pure only if d < n or d = n = 3".into());
        c.sub_answer = Some(if (d == 3 && n == 3) || KNOWN_HEIGHT_2.contains(&(n, d, pu)) {
            SubAnswer::Height2
        } else if d >= n {
            SubAnswer::Infinite
        } else {
            SubAnswer::Unknown
        });
        c
    } else {
        FermatClass::new(FermatOutcome::Height1FPure, "case (1c): n >= (p-1)/a")
    };
    c.a = Some(a);
    c
}

/// #{(a_1..a_n) >= 0 : sum = total, every a_i < k}.
pub fn wics_count(n: u64, total: u64, k: u64) -> u128 {
    if n == 0 {
        return (total == 0) as u128;
    }
    let mut acc: i128 = 0;
    for j in 0..=n {
        let Some(rest) = total.checked_sub(j * k) else { break };
        let term = binom128(n, j) as i128 * binom128(rest + n - 1, n - 1) as i128;
        acc += if j % 2 == 0 { term } else { -term };
    }
    acc as u128
}

fn binom128(a: u64, b: u64) -> u128 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    (0..b).fold(1u128, |acc, i| acc * (a - i) as u128 / (i + 1) as u128)
}

/// binom(d+n-1, n-1) - n^2 + 1.
pub fn moduli_dimension(n: u64, d: u64) -> i64 {
    binomial(d + n - 1, n - 1) as i64 - (n * n) as i64 + 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuliReport {
    pub n: u64,
    pub d: u64,
    pub p: u64,
    pub moduli_dimension: i64,
    pub wics_count: u128,
    /// moduli dimension < number of equations cutting out the non-F-split locus.
    pub unlikely_intersection: bool,
}

pub fn unlikely_intersection(n: u64, d: u64, p: Prime) -> ModuliReport {
    let dim = moduli_dimension(n, d);
    let count = wics_count(n, d * (p.as_u64() - 1), p.as_u64());
    ModuliReport {
        n,
        d,
        p: p.as_u64(),
        moduli_dimension: dim,
        wics_count: count,
        unlikely_intersection: (dim as i128) < count as i128,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ImplicationStatus {
    Pass,
    Fail,
    Vacuous,
}

#[derive(Debug, Clone, Serialize)]
pub struct Implication {
    pub name: String,
    pub status: ImplicationStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MainTheoremFlags {
    pub quasi_homogeneous: bool,
    pub isolated_singularity: bool,
    pub p_odd: bool,
    pub p_gt_n_minus_2: bool,
}

impl MainTheoremFlags {
    pub fn all(&self) -> bool {
        self.quasi_homogeneous && self.isolated_singularity && self.p_odd && self.p_gt_n_minus_2
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MainTheoremReport {
    pub flags: MainTheoremFlags,
    pub jacobian: JacobianKind,
    pub height: HeightResult,
    pub fpt: FptReport,
    pub implications: Vec<Implication>,
}

impl MainTheoremReport {
    pub fn passed(&self) -> bool {
        self.implications.iter().all(|i| i.status != ImplicationStatus::Fail)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Qfp(#[from] QfpError),
    #[error(transparent)]
    Frob(#[from] FrobError),
}

/// Checks, at the assertable level: finite height gives nu_f(p) >= p - 2,
/// and height in (1, infinity) gives fpt = 1 - 1/p, under the hypotheses.
pub fn verify_main_theorem(f: &Polynomial, opts: &HeightOptions) -> Result<MainTheoremReport, VerifyError> {
    let p = f.prime().as_u64();
    let n = f.nvars() as u64;
    let (jac, jacobian) = jacobian_ideal(f);
    let flags = MainTheoremFlags {
        quasi_homogeneous: quasi_homogeneous(f).is_some(),
        isolated_singularity: zero_dimensional(&jac),
        p_odd: p != 2,
        p_gt_n_minus_2: p + 2 > n,
    };
    let height = qfp_height(f, opts)?;
    let fpt = fpt_resolve(f)?;
    let nu = if fpt.nu.get(2).is_some() { fpt.nu.clone() } else { nu_table(f, 2)? };
    let nu1 = nu.get(1).expect("computed");
    let nu2 = nu.get(2).expect("computed");
    let mut implications = Vec::new();

    let finite = height.outcome.finite();
    let (status, detail) = match finite {
        _ if !flags.all() => (ImplicationStatus::Vacuous, "hypotheses not met".to_string()),
        None => (ImplicationStatus::Vacuous, "height not finite within the cutoff".to_string()),
        Some(_) if nu1 + 2 >= p => (ImplicationStatus::Pass, format!("nu(p) = {nu1} >= p - 2")),
        Some(_) => (ImplicationStatus::Fail, format!("nu(p) = {nu1} < p - 2")),
    };
    implications.push(Implication { name: "finite height => nu(p) >= p - 2".into(), status, detail });

    let target = Ratio::new(p - 1, p);
    let (status, detail) = match finite {
        _ if !flags.all() => (ImplicationStatus::Vacuous, "hypotheses not met".to_string()),
        Some(m) if m > 1 => match fpt.exact {
            Some(x) if x == target => (ImplicationStatus::Pass, format!("fpt = {x}")),
            Some(x) => (ImplicationStatus::Fail, format!("fpt = {x}, expected {target}")),
            None if nu1 + 2 == p && nu2 + p + 1 == p * p => {
                (ImplicationStatus::Pass, format!("nu = ({nu1}, {nu2}) consistent with fpt = {target}"))
            }
            None => (ImplicationStatus::Fail, format!("nu = ({nu1}, {nu2}) inconsistent with fpt = {target}")),
        },
        _ => (ImplicationStatus::Vacuous, "height not in (1, infinity)".to_string()),
    };
    implications.push(Implication { name: "height in (1, infinity) => fpt = 1 - 1/p".into(), status, detail });

    Ok(MainTheoremReport { flags, jacobian, height, fpt, implications })
}

/// Whether an engine outcome is consistent with a classification.
pub fn consistent(class: &FermatClass, outcome: &HeightOutcome) -> Option<bool> {
    class.expected_height().map(|e| match e {
        HeightOutcomeKind::Finite(m) => *outcome == HeightOutcome::Finite(m),
        HeightOutcomeKind::Infinite => outcome.is_infinite(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CoeffRing;
    use crate::poly::{parse_poly, Variables};

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn parse(s: &str, p: u64, vars: &str) -> Polynomial {
        parse_poly(s, CoeffRing::mod_p(prime(p)), &Variables::parse_list(vars).unwrap()).unwrap()
    }

    #[test]
    fn fermat_examples() {
        let c = classify_fermat(3, 3, prime(7));
        assert_eq!((c.outcome, c.a), (FermatOutcome::Height1FPure, Some(2)));
        assert_eq!(classify_fermat(3, 4, prime(7)).outcome, FermatOutcome::Infinite);
        let c = classify_fermat(5, 4, prime(7));
        assert_eq!(c.outcome, FermatOutcome::NotFPureCase1b);
        assert_eq!(c.sub_answer, Some(SubAnswer::Height2));
        assert_eq!(classify_fermat(6, 4, prime(11)).sub_answer, None);
        assert_eq!(classify_fermat(9, 6, prime(11)).outcome, FermatOutcome::NotFPureCase1b);
        assert_eq!(classify_fermat(9, 6, prime(11)).sub_answer, Some(SubAnswer::Unknown));
        let c = classify_fermat(3, 3, prime(5));
        assert_eq!(c.sub_answer, Some(SubAnswer::Height2));
        assert_eq!(classify_fermat(2, 3, prime(5)).outcome, FermatOutcome::OutOfTheoremScope);
        assert_eq!(classify_fermat(3, 3, prime(2)).outcome, FermatOutcome::Height2);
        assert_eq!(classify_fermat(2, 3, prime(2)).outcome, FermatOutcome::Infinite);
    }

    #[test]
    fn case_one_intervals_partition() {
        for p in (3..=31u64).filter(|&p| crate::field::is_prime(p)) {
            for d in 1..p {
                let hits: Vec<u64> = (1..p).filter(|&a| p.div_ceil(a + 1) <= d && d < p.div_ceil(a)).collect();
                assert_eq!(hits, vec![p.div_ceil(d) - 1], "p = {p}, d = {d}");
            }
        }
    }

    #[test]
    fn case_1b_needs_p_two_mod_n() {
        for p in (3..=61u64).filter(|&p| crate::field::is_prime(p)) {
            for n in 3..=12u32 {
                for d in 1..p as u32 {
                    let c = classify_fermat(n, d, prime(p));
                    if p % n as u64 != 2 {
                        assert_ne!(c.outcome, FermatOutcome::NotFPureCase1b, "p = {p}, n = {n}, d = {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn hypotheses() {
        let f = parse("x^3+y^3+z^3", 5, "x,y,z");
        assert!(quasi_homogeneous(&f).unwrap().is_standard());
        assert!(isolated_singularity(&f));
        let g = parse("x^2*y", 5, "x,y");
        assert!(quasi_homogeneous(&g).is_some());
        assert!(!isolated_singularity(&g));
        assert!(quasi_homogeneous(&parse("x^3+x", 5, "x")).is_none());
    }

    #[test]
    fn counts() {
        assert_eq!(wics_count(5, 4, 2), 5);
        assert_eq!(wics_count(5, 24, 7), 210);
        assert_eq!(wics_count(1, 0, 1), 1);
        assert_eq!(moduli_dimension(5, 4), 46);
        let r = unlikely_intersection(5, 4, prime(7));
        assert_eq!((r.wics_count, r.unlikely_intersection), (210, true));
        let r = unlikely_intersection(5, 4, prime(2));
        assert_eq!((r.wics_count, r.unlikely_intersection), (5, false));
    }

    #[test]
    fn main_theorem_examples() {
        let opts = HeightOptions::default();
        let r = verify_main_theorem(&parse("x^3+y^3+z^3", 5, "x,y,z"), &opts).unwrap();
        assert_eq!(r.height.outcome, HeightOutcome::Finite(2));
        assert_eq!(r.fpt.exact, Some(Ratio::new(4, 5)));
        assert!(r.implications.iter().all(|i| i.status == ImplicationStatus::Pass));
        let r = verify_main_theorem(&parse("x", 5, "x"), &opts).unwrap();
        assert!(r.passed());
        assert_eq!(r.implications[1].status, ImplicationStatus::Vacuous);
    }
}
