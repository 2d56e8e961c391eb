use std::process::{Command, Output};

use qfedder::field::{CoeffRing, Prime};
use qfedder::poly::{parse_poly, Variables};
use qfedder::qfp::Method;
use qfedder_cli::record::{analyze, parse_method, AnalysisOptions, SampleRecord};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfedder")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn records(path: &std::path::Path) -> Vec<SampleRecord> {
    std::fs::read_to_string(path).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn fpt_example() {
    let o = run(&["fpt", "x^3+y^3+z^3", "-p", "5", "--emax", "2"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("nu(5^1) = 3") && s.contains("nu(5^2) = 19") && s.contains("fpt = 4/5"), "{s}");
}

#[test]
fn height_example() {
    let o = run(&["height", "x1^3+x2^3+x3^3", "-p", "2", "--cutoff", "3", "--method", "exact", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["height"], 2);
    assert_eq!(v["outcome"], serde_json::json!({ "finite": 2 }));
}

#[test]
fn counting_examples() {
    assert_eq!(stdout(&run(&["wics", "-n", "5", "-d", "24", "--less-than", "7"])).trim(), "210");
    assert_eq!(stdout(&run(&["moduli", "-n", "5", "-d", "4"])).trim(), "46");
    let s = stdout(&run(&["classify-fermat", "-n", "3", "-d", "4", "-p", "7"]));
    assert!(s.starts_with("INFINITE"), "{s}");
}

#[test]
fn small_commands() {
    assert_eq!(stdout(&run(&["delta1", "x+y", "-p", "3", "--vars", "x,y"])).trim(), "x^2*y + x*y^2");
    assert_eq!(stdout(&run(&["fedder", "x^2+y^2", "-p", "3"])).trim(), "F-pure: true");
    assert_eq!(stdout(&run(&["certify", "x^4+y^4+z^4", "-p", "3"])).trim(), "not quasi-F-pure: CertA");
    assert_eq!(stdout(&run(&["nu", "x^2+y^3", "-p", "5", "--emax", "1"])).trim(), "nu(5^1) = 3");
}

#[test]
fn usage_errors_exit_two() {
    let o = run(&["height", "x^3+y^", "-p", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position"));
    assert_eq!(run(&["height", "x", "-p", "4"]).status.code(), Some(2));
    assert_eq!(run(&["height", "x", "-p", "5", "--method", "magic"]).status.code(), Some(2));
    assert_eq!(run(&["sample", "-p", "5", "-n", "3", "-d", "3", "--count", "0"]).status.code(), Some(2));
    assert_eq!(run(&["height", "1+x", "-p", "5"]).status.code(), Some(2));
}

#[test]
fn verify_paper_fast_passes() {
    let o = run(&["verify-paper"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains(", 0 failed"));
}

#[test]
fn verify_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(
        &path,
        "[[entry]]\nid = \"wrong\"\ntier = \"fast\"\nlocus = \"deliberately wrong\"\npoly = \"x1^3+x2^3+x3^3\"\np = 7\n\
         facts = [ { kind = \"height\", value = \"2\", provenance = \"computed\" } ]\n",
    )
    .unwrap();
    let o = run(&["verify-paper", "--corpus", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn sample_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
    for path in [&a, &b] {
        let o = run(&["sample", "-p", "7", "-n", "4", "-d", "4", "--count", "2", "--seed", "42", "--out", path.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert_eq!(records(&a).len(), 2);
}

#[test]
fn sample_records_are_self_contained() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.jsonl");
    let o = run(&[
        "sample", "-p", "5", "-n", "3", "-d", "3", "--count", "100", "--seed", "1", "--smooth-origin", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let rs = records(&path);
    assert_eq!(rs.len(), 100);
    assert!(rs.iter().all(|r| r.isolated_singularity && r.is_consistent() && r.timings.is_none()));
    assert!(rs.iter().any(|r| r.height == 2 && r.fpt.exact.as_deref() == Some("4/5")));
    for r in &rs {
        let h = &r.height;
        assert!(h.is_u64() || h == "infinity" || h.as_str().is_some_and(|s| s == format!(">{}", r.cutoff)));
    }
    for r in rs.iter().step_by(10) {
        let ring = CoeffRing::mod_p(Prime::new(r.p).unwrap());
        let f = parse_poly(&r.input, ring, &Variables::standard(r.n)).unwrap();
        let method: Method = parse_method(&r.method).unwrap();
        let opts = AnalysisOptions { cutoff: r.cutoff, emax: r.emax, method, timings: false };
        let mut again = analyze(&f, &opts).unwrap();
        again.seed = r.seed;
        again.index = r.index;
        assert_eq!(&again, r);
    }
}
