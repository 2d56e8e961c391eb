//! The example corpus and its verifier.

use std::collections::HashSet;

use qfedder::classify::{classify_fermat, moduli_dimension, unlikely_intersection, wics_count, FermatOutcome, SubAnswer};
use qfedder::field::{CoeffRing, Prime};
use qfedder::frob::{fedder_f_pure, FptReport};
use qfedder::poly::{infer_variables, parse_poly, Polynomial, Variables};
use qfedder::qfp::HeightResult;
use serde::{Deserialize, Serialize};

use crate::record::{fpt_report, height, height_value, parse_method, AnalysisOptions};
use crate::CliError;

pub const BUILTIN: &str = include_str!("../corpus/corpus.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Fast,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Stated in the reference literature.
    Reference,
    /// Produced by this engine and pinned.
    Computed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Fact {
    Nu { e: u32, value: u64 },
    Fpt { value: String },
    FPure { value: bool },
    /// "1", "2", .. or "infinity".
    Height { value: String },
    /// Height is not found finite within the entry's cutoff.
    HeightNotFinite,
    FermatClass { n: u32, d: u32, p: u64, outcome: String, sub_answer: Option<String> },
    Wics { n: u64, total: u64, less_than: u64, value: u64 },
    Moduli { n: u64, d: u64, value: i64 },
    Unlikely { n: u64, d: u64, p: u64, value: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactEntry {
    #[serde(flatten)]
    pub fact: Fact,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub id: String,
    pub tier: Tier,
    /// Where the expected facts come from.
    pub locus: String,
    pub poly: Option<String>,
    pub p: Option<u64>,
    /// Number of variables; inferred from the text when absent.
    pub n: Option<usize>,
    pub method: Option<String>,
    pub cutoff: Option<u32>,
    pub facts: Vec<FactEntry>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Corpus {
    pub entry: Vec<CorpusEntry>,
}

impl Corpus {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("corpus: {e}")))
    }

    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("builtin corpus parses")
    }

    pub fn get(&self, id: &str) -> Option<&CorpusEntry> {
        self.entry.iter().find(|e| e.id == id)
    }
}

impl CorpusEntry {
    pub fn polynomial(&self) -> Result<Option<Polynomial>, CliError> {
        let (Some(text), Some(p)) = (&self.poly, self.p) else { return Ok(None) };
        let prime = Prime::new(p).map_err(|e| CliError::Usage(e.to_string()))?;
        let vars = match self.n {
            Some(n) => Variables::standard(n),
            None => infer_variables(text)?,
        };
        Ok(Some(parse_poly(text, CoeffRing::mod_p(prime), &vars)?))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FactResult {
    pub id: String,
    pub locus: String,
    pub fact: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
    pub provenance: Provenance,
}

/// Lazily computed analyses of one polynomial entry.
struct Subject<'a> {
    f: &'a Polynomial,
    opts: AnalysisOptions,
    fpt: Option<FptReport>,
    height: Option<HeightResult>,
}

impl Subject<'_> {
    fn fpt(&mut self, emax: u32) -> Result<&FptReport, CliError> {
        if self.fpt.as_ref().is_none_or(|r| r.nu.max_e() < emax) {
            self.fpt = Some(fpt_report(self.f, emax.max(2))?);
        }
        Ok(self.fpt.as_ref().expect("set"))
    }

    fn height(&mut self) -> Result<&HeightResult, CliError> {
        if self.height.is_none() {
            self.height = Some(height(self.f, &self.opts)?);
        }
        Ok(self.height.as_ref().expect("set"))
    }
}

fn outcome_name(o: FermatOutcome) -> &'static str {
    match o {
        FermatOutcome::Height1FPure => "HEIGHT_1_F_PURE",
        FermatOutcome::Height2 => "HEIGHT_2",
        FermatOutcome::Infinite => "INFINITE",
        FermatOutcome::NotFPureCase1b => "NOT_F_PURE_CASE_1B",
        FermatOutcome::OutOfTheoremScope => "OUT_OF_THEOREM_SCOPE",
    }
}

fn sub_answer_name(s: SubAnswer) -> &'static str {
    match s {
        SubAnswer::Height2 => "HEIGHT_2",
        SubAnswer::Infinite => "INFINITE",
        SubAnswer::Unknown => "UNKNOWN",
    }
}

fn prime(p: u64) -> Result<Prime, CliError> {
    Prime::new(p).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn fermat_class_label(n: u32, d: u32, p: Prime) -> String {
    let c = classify_fermat(n, d, p);
    match c.sub_answer {
        Some(s) => format!("{} ({})", outcome_name(c.outcome), sub_answer_name(s)),
        None => outcome_name(c.outcome).to_string(),
    }
}

fn need<'a, 'b>(s: &'a mut Option<Subject<'b>>) -> Result<&'a mut Subject<'b>, CliError> {
    s.as_mut().ok_or_else(|| CliError::Usage("fact needs a polynomial".into()))
}

fn evaluate(fact: &Fact, subject: &mut Option<Subject>) -> Result<(String, String, String), CliError> {
    Ok(match fact {
        Fact::Nu { e, value } => {
            let s = need(subject)?;
            let got = s.fpt(*e)?.nu.get(*e).map_or("-".into(), |v| v.to_string());
            (format!("nu(p^{e})"), value.to_string(), got)
        }
        Fact::Fpt { value } => {
            let s = need(subject)?;
            let got = s.fpt(2)?.exact.map_or("unresolved".into(), |x| x.to_string());
            ("fpt".into(), value.clone(), got)
        }
        Fact::FPure { value } => {
            let s = need(subject)?;
            let got = fedder_f_pure(s.f)?;
            ("f_pure".into(), value.to_string(), got.to_string())
        }
        Fact::Height { value } => {
            let s = need(subject)?;
            let v = height_value(&s.height()?.outcome);
            let got = v.as_str().map_or_else(|| v.to_string(), str::to_string);
            ("height".into(), value.clone(), got)
        }
        Fact::HeightNotFinite => {
            let s = need(subject)?;
            let o = s.height()?.outcome;
            let got = if o.is_finite() { height_value(&o).to_string() } else { "not finite".into() };
            ("height".into(), "not finite".into(), got)
        }
        Fact::FermatClass { n, d, p, outcome, sub_answer } => {
            let expected = match sub_answer {
                Some(s) => format!("{outcome} ({s})"),
                None => outcome.clone(),
            };
            (format!("class(n={n}, d={d}, p={p})"), expected, fermat_class_label(*n, *d, prime(*p)?))
        }
        Fact::Wics { n, total, less_than, value } => {
            (format!("wics({n}, {total})_<{less_than}"), value.to_string(), wics_count(*n, *total, *less_than).to_string())
        }
        Fact::Moduli { n, d, value } => {
            (format!("moduli_dim({n}, {d})"), value.to_string(), moduli_dimension(*n, *d).to_string())
        }
        Fact::Unlikely { n, d, p, value } => (
            format!("unlikely({n}, {d}, {p})"),
            value.to_string(),
            unlikely_intersection(*n, *d, prime(*p)?).unlikely_intersection.to_string(),
        ),
    })
}

/// Runs every entry of the tier (full includes fast).
pub fn verify(corpus: &Corpus, tier: Tier) -> Result<Vec<FactResult>, CliError> {
    let mut out = Vec::new();
    let mut seen: HashSet<&str> = HashSet::new();
    for entry in corpus.entry.iter().filter(|e| tier == Tier::Full || e.tier == Tier::Fast) {
        if !seen.insert(&entry.id) {
            return Err(CliError::Usage(format!("duplicate corpus id {}", entry.id)));
        }
        let f = entry.polynomial()?;
        let method = match &entry.method {
            Some(m) => parse_method(m).ok_or_else(|| CliError::Usage(format!("unknown method {m}")))?,
            None => qfedder::qfp::Method::Auto,
        };
        let opts = AnalysisOptions { cutoff: entry.cutoff.unwrap_or(3), emax: 2, method, timings: false };
        let mut subject = f.as_ref().map(|f| Subject { f, opts, fpt: None, height: None });
        for fe in &entry.facts {
            let (fact, expected, got) = evaluate(&fe.fact, &mut subject)?;
            let pass = expected == got;
            out.push(FactResult {
                id: entry.id.clone(),
                locus: entry.locus.clone(),
                fact,
                expected,
                got,
                pass,
                provenance: fe.provenance,
            });
        }
    }
    Ok(out)
}
