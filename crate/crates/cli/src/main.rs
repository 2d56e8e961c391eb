use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qfedder::classify::{classify_fermat, moduli_dimension, unlikely_intersection, wics_count};
use qfedder::field::{CoeffRing, Prime};
use qfedder::frob::{fedder_f_pure, nu_table};
use qfedder::poly::{infer_variables, parse_poly, Polynomial, Variables};
use qfedder::qfp::{delta1, not_qfp_certificate, qfp_height, HeightOptions, Method};
use qfedder::sample::{samples, SampleFilters};
use qfedder_cli::corpus::{fermat_class_label, verify, Corpus, Tier};
use qfedder_cli::record::{
    analyze, certificate_name, fpt_json, fpt_report, height_value, method_name, AnalysisOptions, SampleRecord,
};
use qfedder_cli::CliError;
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "qfedder", version, about = "F-purity, F-pure thresholds and quasi-F-pure heights over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct PolyArgs {
    /// Polynomial, e.g. "x^3+y^3+z^3" or "x1^2*x2 + 3x3^3".
    poly: String,
    /// Characteristic.
    #[arg(short = 'p', long = "prime")]
    p: u64,
    /// Comma-separated variable names (default: inferred).
    #[arg(long)]
    vars: Option<String>,
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Print JSON instead of a table.
    #[arg(long)]
    json: bool,
    /// Also write the JSON result(s) to this file, one per line.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Graded,
    Auto,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Exact => Method::Exact,
            MethodArg::Graded => Method::Graded,
            MethodArg::Auto => Method::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TierArg {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// F-pure threshold: nu table, bounds and the exact value when resolvable.
    Fpt {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, default_value_t = 2)]
        emax: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// nu_f(p^e) for e = 1..=emax.
    Nu {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, default_value_t = 2)]
        emax: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Fedder's criterion: is f^(p-1) outside m^[p].
    Fedder {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Quasi-F-pure height.
    Height {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, default_value_t = 4)]
        cutoff: u32,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        /// Largest weighted degree for the graded method.
        #[arg(long)]
        max_degree: Option<u64>,
        /// Print the per-level trace.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Delta_1(f).
    Delta1 {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sufficient conditions for infinite height.
    Certify {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Classification of x_1^d + .. + x_n^d over F_p.
    ClassifyFermat {
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'd')]
        d: u32,
        #[arg(short = 'p', long = "prime")]
        p: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Weak compositions of d into n parts, each part < less_than.
    Wics {
        #[arg(short = 'n')]
        n: u64,
        #[arg(short = 'd')]
        d: u64,
        #[arg(long)]
        less_than: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Moduli dimension of degree-d hypersurfaces in P^(n-1), with the unlikely-intersection flag when p is given.
    Moduli {
        #[arg(short = 'n')]
        n: u64,
        #[arg(short = 'd')]
        d: u64,
        #[arg(short = 'p', long = "prime")]
        p: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Seeded sample of dense degree-d forms, analysed and written as JSON lines.
    Sample {
        #[arg(short = 'p', long = "prime")]
        p: u64,
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'd')]
        d: u32,
        #[arg(long, default_value_t = 10)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keep only isolated singularities.
        #[arg(long)]
        smooth_origin: bool,
        /// Keep only homogeneous polynomials.
        #[arg(long)]
        homogeneous_only: bool,
        #[arg(long, default_value_t = 3)]
        cutoff: u32,
        #[arg(long, default_value_t = 2)]
        emax: u32,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        /// Record wall-clock timings (makes output nondeterministic).
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Runs the example corpus and compares against its expected facts.
    VerifyPaper {
        #[arg(long, value_enum, default_value = "fast")]
        tier: TierArg,
        /// Corpus file (default: the built-in corpus).
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn prime(p: u64) -> Result<Prime, CliError> {
    Prime::new(p).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse(args: &PolyArgs) -> Result<Polynomial, CliError> {
    let vars = match &args.vars {
        Some(v) => Variables::parse_list(v)?,
        None => infer_variables(&args.poly)?,
    };
    Ok(parse_poly(&args.poly, CoeffRing::mod_p(prime(args.p)?), &vars)?)
}

/// Writes JSON lines to --out and, with --json, to stdout.
struct Sink {
    json: bool,
    file: Option<BufWriter<File>>,
}

impl Sink {
    fn new(out: &OutArgs) -> Result<Self, CliError> {
        let file = out.out.as_ref().map(File::create).transpose()?.map(BufWriter::new);
        Ok(Sink { json: out.json, file })
    }

    fn emit<T: Serialize>(&mut self, value: &T, human: impl FnOnce() -> String) -> Result<(), CliError> {
        let line = serde_json::to_string(value).expect("serializable");
        if let Some(f) = &mut self.file {
            writeln!(f, "{line}")?;
            f.flush()?;
        }
        if self.json {
            println!("{line}");
        } else {
            println!("{}", human());
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Fpt { poly, emax, out } => {
            let f = parse(&poly)?;
            let r = fpt_report(&f, emax)?;
            let nu: Vec<(u32, u64)> = r.nu.iter().filter(|&(e, _)| e <= emax.max(1)).collect();
            let value = json!({ "input": f.to_string(), "p": poly.p, "nu": nu.iter().map(|x| x.1).collect::<Vec<_>>(), "fpt": fpt_json(&r), "flags": r.flags });
            Sink::new(&out)?.emit(&value, || {
                let mut s = String::new();
                for (e, v) in &nu {
                    s += &format!("nu({}^{e}) = {v}\n", poly.p);
                }
                s += &format!("fpt in [{}, {}]\n", r.lower, r.upper);
                match r.exact {
                    Some(x) => s += &format!("fpt = {x} ({})", fpt_json(&r).method),
                    None => s += &format!("fpt not resolved ({})", fpt_json(&r).method),
                }
                s
            })?;
        }
        Command::Nu { poly, emax, out } => {
            let f = parse(&poly)?;
            let t = nu_table(&f, emax)?;
            let nu: Vec<u64> = t.iter().map(|x| x.1).collect();
            Sink::new(&out)?.emit(&json!({ "input": f.to_string(), "p": poly.p, "nu": nu }), || {
                t.iter().map(|(e, v)| format!("nu({}^{e}) = {v}", poly.p)).collect::<Vec<_>>().join("\n")
            })?;
        }
        Command::Fedder { poly, out } => {
            let f = parse(&poly)?;
            let pure = fedder_f_pure(&f)?;
            Sink::new(&out)?.emit(&json!({ "input": f.to_string(), "p": poly.p, "f_pure": pure }), || {
                format!("F-pure: {pure}")
            })?;
        }
        Command::Height { poly, cutoff, method, max_degree, trace, out } => {
            let f = parse(&poly)?;
            let opts = HeightOptions { cutoff, method: method.into(), max_degree, ..Default::default() };
            let h = qfp_height(&f, &opts)?;
            let value = json!({
                "input": f.to_string(), "p": poly.p, "cutoff": cutoff,
                "height": height_value(&h.outcome), "certificate": certificate_name(&h.outcome),
                "outcome": h.outcome, "method": method_name(h.method), "heuristic": h.heuristic,
                "notes": h.notes, "trace": h.trace,
            });
            Sink::new(&out)?.emit(&value, || {
                let mut s = format!("height: {:?} (method {})", h.outcome, method_name(h.method));
                if h.heuristic {
                    s += " [heuristic]";
                }
                for n in &h.notes {
                    s += &format!("\nnote: {n}");
                }
                if trace {
                    for t in &h.trace {
                        s += &format!(
                            "\nI_{}: size {}, degrees {:?}..{:?}",
                            t.m, t.generators, t.min_degree, t.max_degree
                        );
                        if let Some(st) = &t.step {
                            s += &format!(
                                ", module generators {}, nonzero h {}, syzygies {}, images {}",
                                st.module_generators, st.nonzero_h, st.syzygies, st.images
                            );
                        }
                    }
                }
                s
            })?;
        }
        Command::Delta1 { poly, out } => {
            let f = parse(&poly)?;
            let d = delta1(&f)?;
            let names = match &poly.vars {
                Some(v) => Variables::parse_list(v)?,
                None => infer_variables(&poly.poly)?,
            };
            let text = d.to_string_with(names.names());
            Sink::new(&out)?.emit(&json!({ "input": f.to_string(), "p": poly.p, "delta1": text }), || text.clone())?;
        }
        Command::Certify { poly, out } => {
            let f = parse(&poly)?;
            let c = not_qfp_certificate(&f)?;
            Sink::new(&out)?.emit(&json!({ "input": f.to_string(), "p": poly.p, "certificate": c }), || match c {
                Some(c) => format!("not quasi-F-pure: {c:?}"),
                None => "no certificate".into(),
            })?;
        }
        Command::ClassifyFermat { n, d, p, out } => {
            if n < 2 || d < 1 {
                return Err(CliError::Usage("need n >= 2 and d >= 1".into()));
            }
            let c = classify_fermat(n, d, prime(p)?);
            let label = fermat_class_label(n, d, prime(p)?);
            let value = json!({ "n": n, "d": d, "p": p, "class": c });
            Sink::new(&out)?.emit(&value, || {
                let mut s = format!("{label}\nrule: {}", c.rule);
                if let Some(a) = c.a {
                    s += &format!("\na = {a}");
                }
                if let Some(nc) = &c.necessary_condition {
                    s += &format!("\nnecessary condition: {nc}");
                }
                s
            })?;
        }
        Command::Wics { n, d, less_than, out } => {
            let w = wics_count(n, d, less_than);
            Sink::new(&out)?.emit(&json!({ "n": n, "d": d, "less_than": less_than, "wics": w }), || w.to_string())?;
        }
        Command::Moduli { n, d, p, out } => {
            let mut sink = Sink::new(&out)?;
            match p {
                Some(p) => {
                    let r = unlikely_intersection(n, d, prime(p)?);
                    sink.emit(&r, || {
                        format!(
                            "moduli dimension {}\nwics({n}, {})_<{p} = {}\nunlikely intersection: {}",
                            r.moduli_dimension,
                            d * (p - 1),
                            r.wics_count,
                            r.unlikely_intersection
                        )
                    })?;
                }
                None => {
                    let m = moduli_dimension(n, d);
                    sink.emit(&json!({ "n": n, "d": d, "moduli_dimension": m }), || m.to_string())?;
                }
            }
        }
        Command::Sample {
            p,
            n,
            d,
            count,
            seed,
            smooth_origin,
            homogeneous_only,
            cutoff,
            emax,
            method,
            timings,
            out,
        } => {
            if count == 0 {
                return Err(CliError::Usage("count must be at least 1".into()));
            }
            if n == 0 || n > qfedder::poly::MAX_VARS {
                return Err(CliError::Usage(format!("n must be in 1..={}", qfedder::poly::MAX_VARS)));
            }
            let opts = AnalysisOptions { cutoff, emax, method: method.into(), timings };
            let filters = SampleFilters { smooth_origin, homogeneous_only };
            let mut sink = Sink::new(&out)?;
            for (index, f) in samples(prime(p)?, n, d, seed, filters).take(count as usize) {
                let mut r: SampleRecord = analyze(&f, &opts)?;
                r.seed = Some(seed);
                r.index = Some(index);
                sink.emit(&r, || {
                    format!(
                        "#{index}: height {} fpt {} nu {:?} isolated {}  {}",
                        r.height,
                        r.fpt.exact.clone().unwrap_or_else(|| format!("[{}, {}]", r.fpt.lower, r.fpt.upper)),
                        r.nu,
                        r.isolated_singularity,
                        r.input
                    )
                })?;
            }
        }
        Command::VerifyPaper { tier, corpus, out } => {
            let corpus = match corpus {
                Some(path) => Corpus::parse(&std::fs::read_to_string(path)?)?,
                None => Corpus::builtin(),
            };
            let tier = match tier {
                TierArg::Fast => Tier::Fast,
                TierArg::Full => Tier::Full,
            };
            let results = verify(&corpus, tier)?;
            let mut sink = Sink::new(&out)?;
            for r in &results {
                sink.emit(r, || {
                    format!(
                        "{:<4} {:<28} {:<24} expected {:<28} got {:<28} [{:?}] {}",
                        if r.pass { "PASS" } else { "FAIL" },
                        r.id,
                        r.fact,
                        r.expected,
                        r.got,
                        r.provenance,
                        r.locus
                    )
                })?;
            }
            let failed = results.iter().filter(|r| !r.pass).count();
            if !sink.json {
                println!("{} facts, {} failed", results.len(), failed);
            }
            if failed > 0 {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
