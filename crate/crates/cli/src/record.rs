//! Analysis records and their JSON form.

use std::time::Instant;

use qfedder::classify::isolated_singularity;
use qfedder::frob::{fedder_f_pure, fpt_bounds, fpt_resolve, FptMethod, FptReport};
use qfedder::poly::Polynomial;
use qfedder::qfp::{qfp_height, Certificate, HeightOptions, HeightOutcome, HeightResult, Method};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// Integer, "infinity" or ">cutoff".
pub fn height_value(o: &HeightOutcome) -> Value {
    match o {
        HeightOutcome::Finite(m) => Value::from(*m),
        HeightOutcome::Infinite(_) => Value::from("infinity"),
        HeightOutcome::UnknownBeyond(c) => Value::from(format!(">{c}")),
    }
}

pub fn certificate_name(o: &HeightOutcome) -> Option<String> {
    match o {
        HeightOutcome::Infinite(Certificate::CertA) => Some("cert_a".into()),
        HeightOutcome::Infinite(Certificate::CertB) => Some("cert_b".into()),
        HeightOutcome::Infinite(Certificate::Stabilized(_)) => Some("stabilized".into()),
        _ => None,
    }
}

pub fn stabilized_at(o: &HeightOutcome) -> Option<u32> {
    match o {
        HeightOutcome::Infinite(Certificate::Stabilized(m)) => Some(*m),
        _ => None,
    }
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::Exact => "exact",
        Method::Graded => "graded",
        Method::Auto => "auto",
    }
}

pub fn parse_method(s: &str) -> Option<Method> {
    match s {
        "exact" => Some(Method::Exact),
        "graded" => Some(Method::Graded),
        "auto" => Some(Method::Auto),
        _ => None,
    }
}

fn fpt_method_name(m: FptMethod) -> &'static str {
    match m {
        FptMethod::Bounds => "bounds",
        FptMethod::FPure => "f_pure",
        FptMethod::DenominatorP => "denominator_p",
        FptMethod::Unresolved => "unresolved",
        FptMethod::HypothesesFailed => "hypotheses_failed",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FptJson {
    pub lower: String,
    pub upper: String,
    pub exact: Option<String>,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub fpt_ms: u64,
    pub height_ms: u64,
}

/// One analysed polynomial; re-runnable from its own fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub input: String,
    pub p: u64,
    pub n: usize,
    pub d: Option<u32>,
    pub seed: Option<u64>,
    pub index: Option<u64>,
    pub cutoff: u32,
    pub emax: u32,
    pub method: String,
    pub nu: Vec<u64>,
    pub fpt: FptJson,
    pub f_pure: bool,
    pub isolated_singularity: bool,
    pub height: Value,
    pub certificate: Option<String>,
    pub stabilized_at: Option<u32>,
    pub height_method: String,
    pub heuristic: bool,
    pub timings: Option<Timings>,
}

impl SampleRecord {
    /// "infinity" appears only together with a certificate.
    pub fn is_consistent(&self) -> bool {
        (self.height == "infinity") == self.certificate.is_some()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AnalysisOptions {
    pub cutoff: u32,
    pub emax: u32,
    pub method: Method,
    pub timings: bool,
}

/// fpt_resolve, with the nu table extended to `emax` when that is larger.
pub fn fpt_report(f: &Polynomial, emax: u32) -> Result<FptReport, CliError> {
    let mut report = fpt_resolve(f)?;
    if emax > report.nu.max_e() {
        let wide = fpt_bounds(f, emax)?;
        report.lower = wide.lower;
        report.upper = wide.upper;
        report.nu = wide.nu;
    }
    Ok(report)
}

pub fn fpt_json(r: &FptReport) -> FptJson {
    FptJson {
        lower: r.lower.to_string(),
        upper: r.upper.to_string(),
        exact: r.exact.map(|x| x.to_string()),
        method: fpt_method_name(r.method).into(),
    }
}

pub fn height(f: &Polynomial, opts: &AnalysisOptions) -> Result<HeightResult, CliError> {
    let h = HeightOptions { cutoff: opts.cutoff, method: opts.method, ..Default::default() };
    Ok(qfp_height(f, &h)?)
}

pub fn analyze(f: &Polynomial, opts: &AnalysisOptions) -> Result<SampleRecord, CliError> {
    let t = Instant::now();
    let fpt = fpt_report(f, opts.emax)?;
    let fpt_ms = t.elapsed().as_millis() as u64;
    let t = Instant::now();
    let h = height(f, opts)?;
    let height_ms = t.elapsed().as_millis() as u64;
    let nu: Vec<u64> = fpt.nu.iter().filter(|&(e, _)| e <= opts.emax).map(|(_, v)| v).collect();
    Ok(SampleRecord {
        input: f.to_string(),
        p: f.prime().as_u64(),
        n: f.nvars(),
        d: f.homogeneous_degree(),
        seed: None,
        index: None,
        cutoff: opts.cutoff,
        emax: opts.emax,
        method: method_name(opts.method).into(),
        nu,
        fpt: fpt_json(&fpt),
        f_pure: fedder_f_pure(f)?,
        isolated_singularity: isolated_singularity(f),
        height: height_value(&h.outcome),
        certificate: certificate_name(&h.outcome),
        stabilized_at: stabilized_at(&h.outcome),
        height_method: method_name(h.method).into(),
        heuristic: h.heuristic,
        timings: opts.timings.then_some(Timings { fpt_ms, height_ms }),
    })
}
