use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

const AUSLANDER: &str = "field Q
vertices U L Sigma
arrow x1 : U -> L
arrow x2 : L -> U
arrow x3 : L -> Sigma
arrow x4 : Sigma -> L
rel x1.x2
rel x3.x4 - x2.x1
";

const SIGMA: &str = "field Q\nvertices 1\narrow x : 1 -> 1\nrel x.x.x\n";
const DUAL_NUMBERS: &str = "field Q\nvertices 1\narrow x : 1 -> 1\nrel x.x\n";
const KRONECKER: &str = "field Q\nvertices 1 2\narrow a1 : 1 -> 2\narrow a2 : 1 -> 2\n";
const B2: &str = "field Q\nvertices 1\narrow x1 : 1 -> 1\narrow x2 : 1 -> 1\nmode graded cap 8\nrel x1.x1 + x2.x2\n";
const SEMISIMPLE: &str = "field F 5\nvertices 1 2\n";

struct Run {
    code: i32,
    report: Option<Value>,
    stdout: String,
    stderr: String,
}

fn asreg(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_asreg")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    Run {
        code: out.status.code().unwrap(),
        report: serde_json::from_str(&stdout).ok(),
        stdout,
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn file(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn results(r: &Run) -> &Value {
    &r.report.as_ref().expect("a report")["results"]
}

#[test]
fn resolve_reports_betti_tables() {
    let dir = tempfile::tempdir().unwrap();
    let aus = file(dir.path(), "a.pres", AUSLANDER);
    let r = asreg(&["resolve", &aus, "--module", "simple:U"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let betti: Vec<Vec<&str>> = results(&r)["betti"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_object().unwrap().keys().map(String::as_str).collect())
        .collect();
    assert_eq!(betti, [["U"], ["L"], ["U"]]);

    let b2 = file(dir.path(), "b2.pres", B2);
    let r = asreg(&["resolve", &b2, "--module", "simple:1", "--degcap", "8"]);
    assert_eq!(r.code, 0);
    assert_eq!(results(&r)["betti"], serde_json::json!([{ "1@0": 1 }, { "1@1": 2 }, { "1@2": 1 }]));
    assert_eq!(results(&r)["linear"], true);
    assert_eq!(r.report.as_ref().unwrap()["caps"]["degcap"], 8);

    let r = asreg(&["resolve", &aus, "--module", "projective:L"]);
    assert_eq!((r.code, &results(&r)["length"]), (0, &Value::from(0)));
    let r = asreg(&["resolve", &aus, "--module", "loewy:Sigma:2"]);
    assert_eq!(r.code, 0);
    assert_eq!(results(&r)["module_dims"], serde_json::json!({ "L": 1, "Sigma": 1 }));
}

#[test]
fn resolve_reads_representation_files() {
    let dir = tempfile::tempdir().unwrap();
    let sigma = file(dir.path(), "s.pres", SIGMA);
    // K[x]/(x^2) as a module over K[x]/(x^3)
    let rep = file(dir.path(), "l.rep", "rep\ndim 1 2\nmap x : 0 0 ; 1 0\n");
    let r = asreg(&["resolve", &sigma, "--module", &format!("rep:{rep}"), "--homcap", "3"]);
    assert_eq!(r.code, 3, "periodic resolutions stay inconclusive");
    assert_eq!(results(&r)["completeness"]["kind"], "truncated");
    let bad = file(dir.path(), "bad.rep", "rep\ndim 1 2\nmap x : 0 1 ; 1 0\n");
    let r = asreg(&["resolve", &sigma, "--module", &format!("rep:{bad}")]);
    assert_eq!(r.code, 2);
}

#[test]
fn certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let r = asreg(&["certify", &file(dir.path(), "a.pres", AUSLANDER)]);
    assert_eq!(r.code, 0);
    assert_eq!(results(&r)["certificate"]["verdict"], "regular");
    assert_eq!(results(&r)["certificate"]["n"], 2);
    assert!(r.stderr.contains("regular, n=2"));

    let r = asreg(&["certify", &file(dir.path(), "k.pres", KRONECKER)]);
    assert_eq!(r.code, 1);
    assert!(results(&r)["certificate"]["witness"].as_str().unwrap().contains("tr^1"));

    let r = asreg(&["certify", &file(dir.path(), "d.pres", DUAL_NUMBERS)]);
    assert_eq!(r.code, 3);
    assert_eq!(results(&r)["certificate"]["verdict"], "inconclusive_at_cap");
    assert_eq!(results(&r)["certificate"]["left"]["simples"][0]["periodicity"], serde_json::json!([0, 1]));

    let r = asreg(&["certify", &file(dir.path(), "s.pres", SEMISIMPLE)]);
    assert_eq!(r.code, 0);
    assert_eq!(results(&r)["certificate"]["verdict"], "degenerate: semisimple");

    let r = asreg(&["certify", &file(dir.path(), "b.pres", B2), "--homcap", "4", "--degcap", "8"]);
    assert_eq!(r.code, 0);
    assert_eq!(results(&r)["certificate"]["verdict"], "regular-within-cap");
}

#[test]
fn yoneda_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let aus = file(dir.path(), "a.pres", AUSLANDER);
    let r = asreg(&["yoneda", &aus, "--simples", "U,L", "--cap", "4", "--frobenius"]);
    assert_eq!(r.code, 0);
    assert_eq!(results(&r)["graded_dims"], serde_json::json!([2, 2, 2, 0, 0]));
    assert_eq!(results(&r)["frobenius"]["nakayama"], serde_json::json!(["U", "L"]));

    let r = asreg(&["yoneda", &file(dir.path(), "k.pres", KRONECKER), "--simples", "1,2", "--frobenius"]);
    assert_eq!(r.code, 1);
    assert_eq!(results(&r)["frobenius"]["frobenius"], false);

    let r = asreg(&["yoneda", &file(dir.path(), "d.pres", DUAL_NUMBERS), "--simples", "1", "--cap", "3"]);
    assert_eq!(r.code, 3);
    assert_eq!(results(&r)["certified"], false);

    let r = asreg(&["yoneda", &aus, "--simples", "U,Nowhere"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("Nowhere"));
}

#[test]
fn hilbert_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let b2 = file(dir.path(), "b.pres", B2);
    let r = asreg(&["hilbert", &b2, "--upto", "8", "--classify"]);
    assert_eq!(r.code, 0);
    assert_eq!(results(&r)["hilbert"], serde_json::json!([1, 2, 3, 4, 5, 6, 7, 8, 9]));
    assert_eq!(results(&r)["growth"], "polynomial(1)");
    assert!(results(&r)["growth_method"].as_str().unwrap().starts_with("heuristic"));
    assert_eq!(asreg(&["hilbert", &b2, "--upto", "9"]).code, 3);

    let r = asreg(&["hilbert", &file(dir.path(), "s.pres", SIGMA), "--upto", "5", "--classify"]);
    assert_eq!((r.code, &results(&r)["growth"]), (0, &Value::from("finite")));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = file(dir.path(), "bad.pres", "field Q\nvertices 1\narrow x : 1 -> 1\nrel x.y\n");
    let r = asreg(&["hilbert", &bad]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 4, column 7"), "{}", r.stderr);
    assert!(r.stdout.is_empty());
    assert_eq!(asreg(&["hilbert", "/nonexistent/x.pres"]).code, 2);
    assert_eq!(asreg(&["frobnicate"]).code, 2);
    assert_eq!(asreg(&["resolve", &file(dir.path(), "a.pres", AUSLANDER), "--module", "simple"]).code, 2);
    let quad = file(dir.path(), "s.pres", SIGMA);
    assert_eq!(asreg(&["construct", "dual", &quad, "--out", "x"]).code, 2);
}

fn out(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

#[test]
fn construct_chain_reaches_b2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let kr = file(d, "k.pres", KRONECKER);
    let p = |n: &str| out(d, n).to_string_lossy().into_owned();
    let r = asreg(&["construct", "trivial-ext", &kr, "--out", &p("t")]);
    assert_eq!(r.code, 0);
    assert_eq!(results(&r)["algebra"]["graded_dims"], serde_json::json!([2, 4, 2]));
    let r = asreg(&["construct", "skew", &p("t.sca"), "--action", "swap", "--order", "2", "--out", &p("s")]);
    assert_eq!(r.code, 0);
    assert_eq!(results(&r)["algebra"]["dim"], 16);
    assert_eq!(results(&r)["degree_zero"]["simple_matrix_size"], 2);
    let r = asreg(&["construct", "truncate", &p("s.sca"), "--idempotent", "1", "--out", &p("e")]);
    assert_eq!(r.code, 0);
    assert_eq!(results(&r)["algebra"]["graded_dims"], serde_json::json!([1, 2, 1]));
    let r = asreg(&["construct", "dual", &p("e.pres"), "--mode", "graded", "--degcap", "8", "--out", &p("b")]);
    assert_eq!(r.code, 0);
    let h = asreg(&["hilbert", &p("b.pres"), "--upto", "8", "--classify"]);
    assert_eq!(results(&h)["hilbert"], serde_json::json!([1, 2, 3, 4, 5, 6, 7, 8, 9]));

    // dual twice is the identity
    let r = asreg(&["construct", "dual", &p("b.pres"), "--mode", "finite", "--out", &p("bb")]);
    assert_eq!(r.code, 0);
    let again = std::fs::read_to_string(p("bb.pres")).unwrap();
    let first = std::fs::read_to_string(p("e.pres")).unwrap();
    let a = asreg::format::parse_presentation(&again).unwrap();
    let b = asreg::format::parse_presentation(&first).unwrap();
    assert!(asreg_core::sca::same_ideal(&a, &b).unwrap());
}

#[test]
fn construct_auslander_and_action_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let p = |n: &str| out(d, n).to_string_lossy().into_owned();
    let sigma = file(d, "sigma.pres", SIGMA);
    let r = asreg(&[
        "construct", "auslander", &sigma, "--module", "U=simple:1", "--module", "L=loewy:1:2", "--module",
        "Sigma=projective:1", "--out", &p("aus"),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(results(&r)["algebra"]["dim"], 14);
    assert_eq!(results(&r)["frobenius"]["frobenius"], false);
    let got = asreg::format::parse_presentation(&std::fs::read_to_string(p("aus.pres")).unwrap()).unwrap();
    let want = asreg::format::parse_presentation(AUSLANDER).unwrap();
    assert!(asreg_core::sca::same_ideal(&got, &want).unwrap());
    // the written structure constants read back to the same algebra
    let sca = asreg::format::parse_sca(&std::fs::read_to_string(p("aus.sca")).unwrap()).unwrap();
    assert_eq!(sca.dim(), 14);
    assert_eq!(asreg::format::write_sca(&sca), std::fs::read_to_string(p("aus.sca")).unwrap());

    // the identity action of order 1 on dual numbers
    let dn = file(d, "dn.pres", DUAL_NUMBERS);
    assert_eq!(asreg(&["construct", "trivial-ext", &dn, "--out", &p("tdn")]).code, 0);
    let n = asreg::format::parse_sca(&std::fs::read_to_string(p("tdn.sca")).unwrap()).unwrap().dim();
    let action: String = (0..n).map(|i| format!("{i} : 1*{i}\n")).collect();
    let act = file(d, "id.act", &action);
    let r = asreg(&["construct", "skew", &p("tdn.sca"), "--action-file", &act, "--order", "1", "--out", &p("sk")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(results(&r)["algebra"]["dim"], n);
    // an action that is not of order 2
    let r = asreg(&["construct", "skew", &p("tdn.sca"), "--action-file", &act, "--order", "2", "--out", &p("sk2")]);
    assert_eq!(r.code, 0, "the identity has order dividing 2");
    let half: String = (0..n).map(|i| format!("{i} : 2*{i}\n")).collect();
    let r = asreg(&["construct", "skew", &p("tdn.sca"), "--action-file", &file(d, "h.act", &half), "--order", "2", "--out", &p("x")]);
    assert_eq!(r.code, 2);
    let r = asreg(&["construct", "truncate", &p("tdn.sca"), "--idempotent", "nope", "--out", &p("x")]);
    assert_eq!(r.code, 2);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let aus = file(dir.path(), "a.pres", AUSLANDER);
    let strip = |s: &str| s.lines().filter(|l| !l.contains("\"timing_ms\"")).collect::<Vec<_>>().join("\n");
    for args in [
        vec!["certify", aus.as_str()],
        vec!["resolve", aus.as_str(), "--module", "simple:L"],
        vec!["yoneda", aus.as_str(), "--simples", "U,L", "--frobenius"],
        vec!["hilbert", aus.as_str(), "--upto", "4"],
    ] {
        let a = asreg(&args);
        let b = asreg(&args);
        assert_eq!(strip(&a.stdout), strip(&b.stdout));
        let v = a.report.unwrap();
        assert_eq!(v["version"], 1);
        assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
    }
}
