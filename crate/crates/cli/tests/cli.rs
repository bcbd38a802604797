use std::path::{Path, PathBuf};
use std::process::Command;

use probsec_cli::{export_dot, load, run_file, run_source, Report, Variant, EXIT_ERROR, EXIT_FAILS, EXIT_HOLDS, EXIT_UNKNOWN};
use probsec_core::security::CheckOptions;

fn model(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models").join(name)
}

fn probsec(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_probsec")).args(args).output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

fn without_millis(json: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(json).unwrap();
    for d in v["directives"].as_array_mut().unwrap() {
        d.as_object_mut().unwrap().remove("millis");
    }
    v
}

#[test]
fn fig2_holds() {
    let r = run_file(&model("fig2.pproc"), &CheckOptions::default());
    assert_eq!(r.to_text(), "BSNNI[pb] E1 = HOLDS\nBSNNI[pw] E1 = HOLDS\n");
    assert_eq!(r.exit_code(), EXIT_HOLDS);
    assert_eq!(r.states["E1"], 11);
}

#[test]
fn lottery_fails() {
    let r = run_file(&model("lottery.pproc"), &CheckOptions::default());
    assert_eq!(r.directives[0].line(), "BSNNI[pw] Lottery = FAILS (Lottery)");
    assert_eq!(r.exit_code(), EXIT_FAILS);
}

#[test]
fn empty_file_is_an_empty_report() {
    let r = run_source("", &CheckOptions::default());
    assert_eq!(r, Report::default());
    assert_eq!(r.exit_code(), EXIT_HOLDS);
    assert_eq!(r.to_text(), "");
}

#[test]
fn unknown_only_exits_two() {
    let src = "high h; low l; B := l.h.l.0 + l.0 + l.l.0; check BNDC[pw] B;";
    let r = run_source(src, &CheckOptions::default());
    assert_eq!(r.directives[0].status, "UNKNOWN", "{}", r.to_text());
    assert_eq!(r.exit_code(), EXIT_UNKNOWN);
}

#[test]
fn errors_exit_three() {
    for src in [
        "low a; A := a.;",
        "low a; A := <1/2: a.0>;",
        "low a; check BSNNI[pb] Missing;",
        "low a; A := a.A |[]| a.A; check BSNNI[pb] A;",
    ] {
        let r = run_source(src, &CheckOptions { max_states: 50, ..CheckOptions::default() });
        assert_eq!(r.exit_code(), EXIT_ERROR, "{src}: {}", r.to_text());
        assert!(r.to_text().starts_with("error: "));
    }
    let r = run_file(Path::new("/nonexistent/file.pproc"), &CheckOptions::default());
    assert_eq!(r.exit_code(), EXIT_ERROR);
}

#[test]
fn json_and_text_agree() {
    for name in ["fig1.pproc", "fig2.pproc", "bndc.pproc", "fig3.pproc", "parallel.pproc", "strictness.pproc", "guarded.pproc", "lottery.pproc"] {
        let r = run_file(&model(name), &CheckOptions::default());
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_text(), r.to_text(), "{name}");
    }
}

#[test]
fn reports_are_deterministic() {
    let path = model("strictness.pproc");
    let path = path.to_str().unwrap();
    let (a, ca) = probsec(&["check", path]);
    let (b, cb) = probsec(&["check", path]);
    assert_eq!((a, ca), (b, cb));
    let (a, _) = probsec(&["--json", "check", path]);
    let (b, _) = probsec(&["check", "--json", path]);
    assert_eq!(without_millis(&a), without_millis(&b));
}

#[test]
fn json_field_names() {
    let path = model("bndc.pproc");
    let (out, code) = probsec(&["check", "--json", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAILS as i32);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let d = &v["directives"][2];
    for key in ["kind", "property", "relation", "subject", "status", "witness", "millis"] {
        assert!(d.get(key).is_some(), "missing {key}");
    }
    assert_eq!(d["witness"], "F = h1.0, L = {h1, h2}");
    assert_eq!(v["states"]["E2"], 11);
}

#[test]
fn subcommands() {
    let fig1 = model("fig1.pproc");
    let fig1 = fig1.to_str().unwrap();
    assert_eq!(probsec(&["equiv", fig1, "--rel", "pw", "S1", "S2"]), ("EQUIV[pw] S1 S2 = TRUE\n".into(), 0));
    assert_eq!(probsec(&["equiv", fig1, "--rel", "pb", "S1", "S2"]).1, 1);
    assert_eq!(probsec(&["equiv", fig1, "--rel", "p", "<1: a.0>", "<1/2: a.0, 1/2: a.0>"]).1, 0);
    assert_eq!(probsec(&["equiv", fig1, "--rel", "pq", "S1", "S2"]).1, 2, "clap usage errors exit 2");

    let strict = model("strictness.pproc");
    let strict = strict.to_str().unwrap();
    let (out, code) = probsec(&["secure", strict, "--prop", "SBSNNI", "--rel", "pb", "B"]);
    assert_eq!((out.as_str(), code), ("SBSNNI[pb] B = FAILS (h.l.0)\n", 1));
    let (out, code) = probsec(&["--bndc-depth", "1", "secure", strict, "--prop", "BNDC", "--rel", "pw", "C"]);
    assert_eq!((out.as_str(), code), ("BNDC[pw] C = FAILS (F = h.0, L = {h})\n", 1));

    let (out, code) = probsec(&["oracle", fig1, "--rel", "pw", "S1", "S2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("pw: engine and enumeration agree"));

    let (out, code) = probsec(&["graph", model("fig2.pproc").to_str().unwrap(), "E1", "--restrict-high"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph \"E1 restricted\""));
    assert_eq!(probsec(&["graph", fig1, "Nope"]).1, EXIT_ERROR as i32);
}

#[test]
fn dot_export() {
    let spec = load(&std::fs::read_to_string(model("fig3.pproc")).unwrap()).unwrap();
    let nodes = |v| export_dot(&spec, "C", v, 1000).unwrap().matches("shape=").count();
    assert_eq!(nodes(Variant::Raw), 7);
    assert_eq!(nodes(Variant::Hidden), 7);
    let nil = export_dot(&spec, "0", Variant::Raw, 10).unwrap();
    assert_eq!(nil.matches("shape=circle").count(), 1);
    assert_eq!(nil.matches("->").count(), 0);
    assert_eq!(export_dot(&spec, "C", Variant::Hidden, 1000).unwrap(), export_dot(&spec, "C", Variant::Hidden, 1000).unwrap());
    let fig2 = load(&std::fs::read_to_string(model("fig2.pproc")).unwrap()).unwrap();
    let dot = export_dot(&fig2, "E1", Variant::Restricted, 1000).unwrap();
    assert_eq!(dot.matches("shape=").count(), 9);
    assert!(dot.contains("label=\"1/2\""));
    assert!(export_dot(&spec, "Undefined", Variant::Raw, 10).is_err());
}
