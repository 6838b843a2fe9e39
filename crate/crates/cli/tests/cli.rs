use std::path::PathBuf;
use std::process::Command;

use charrig_cli::{resolve_complex, run, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};
use serde_json::Value;
use sha2::{Digest, Sha256};

fn charrig(args: &[&str]) -> charrig_cli::Outcome {
    run(std::iter::once("charrig").chain(args.iter().copied()))
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn tmp(name: &str, contents: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn data(out: &charrig_cli::Outcome) -> Value {
    serde_json::from_str::<Value>(&out.stdout).unwrap()["data"].clone()
}

#[test]
fn inspect_reports_groups() {
    let out = charrig(&["inspect", "rp2"]);
    assert_eq!(out.code, EXIT_PASS);
    let d = data(&out);
    assert_eq!(d["cohomology"]["2"]["H^j(Z)"], "Z/2");
    assert_eq!(d["cohomology"]["1"]["H^j(Q/Z)"], "Z/2");

    let d = data(&charrig(&["inspect", "t2"]));
    assert_eq!(d["cohomology"]["1"]["H^j(Z)"], "Z^2");
    assert_eq!(d["cohomology"]["2"]["H^j(Z)"], "Z");

    let d = data(&charrig(&["inspect", "point"]));
    for (j, groups) in d["cohomology"].as_object().unwrap() {
        if j != "0" {
            assert!(groups.as_object().unwrap().values().all(|g| g == "0"), "{j}: {groups}");
        }
    }
}

#[test]
fn complexes_resolve_by_path_and_name() {
    let rp2 = corpus_dir().join("rp2.json");
    for arg in [rp2.to_str().unwrap(), rp2.with_extension("").to_str().unwrap(), "rp2", "corpus/rp2", "rp2.json"] {
        assert_eq!(resolve_complex(arg).unwrap().name(), "rp2", "{arg}");
    }
    assert!(resolve_complex("no_such_complex").is_err());
    let bad = tmp("bad_complex.json", r#"{"name":"bad","dimension":3,"simplices":[[0,1]]}"#);
    assert!(resolve_complex(bad.to_str().unwrap()).is_err());
}

#[test]
fn corpus_directory_can_be_overridden() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("alt_corpus");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("circle4.json"), r#"{"name":"circle4","dimension":1,"simplices":[[0,1],[1,2],[2,3],[0,3]]}"#).unwrap();
    let bin = env!("CARGO_BIN_EXE_charrig");
    let out = Command::new(bin).args(["inspect", "circle4"]).env("CHARRIG_CORPUS", &dir).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    assert!(String::from_utf8_lossy(&out.stdout).contains(r#""complex":"circle4""#));
    // the override replaces the built-in corpus
    let out = Command::new(bin).args(["inspect", "s1"]).env("CHARRIG_CORPUS", &dir).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}

#[test]
fn exit_codes() {
    assert_eq!(charrig(&["diagram", "s1", "--degree", "1"]).code, EXIT_PASS);
    assert_eq!(charrig(&["diagram", "s1", "--degree", "0"]).code, EXIT_INPUT);
    assert_eq!(charrig(&["diagram", "nowhere"]).code, EXIT_INPUT);
    assert_eq!(charrig(&["phi", "s1", "--max-subdiv", "3"]).code, EXIT_INPUT);
    assert_eq!(charrig(&["ring", "s1", "--degrees", "1"]).code, EXIT_INPUT);
    assert_eq!(charrig(&["frobnicate"]).code, EXIT_INPUT);
    assert_eq!(charrig(&["--help"]).code, EXIT_PASS);
    // products of circle classes do not commute at class level
    assert_eq!(charrig(&["ring", "s1", "--degrees", "1,1"]).code, EXIT_FAIL);

    let out = Command::new(env!("CARGO_BIN_EXE_charrig")).args(["inspect", "nowhere"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nowhere"));
}

#[test]
fn beyond_the_top_degree_is_vacuous() {
    let out = charrig(&["diagram", "s1", "--degree", "5"]);
    assert_eq!(out.code, EXIT_PASS);
    let out = charrig(&["phi", "s1", "--degree", "4"]);
    assert_eq!(out.code, EXIT_PASS);
    let out = charrig(&["ring", "s1", "--degrees", "3,3"]);
    assert_eq!(out.code, EXIT_PASS);
}

#[test]
fn pretty_output_carries_the_canonical_hash() {
    let canonical = charrig(&["diagram", "rp2", "--degree", "2"]);
    let pretty = charrig(&["diagram", "rp2", "--degree", "2", "--format", "pretty"]);
    let hash: String = Sha256::digest(canonical.stdout.trim_end().as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    assert!(pretty.stdout.contains(&format!("canonical sha256 {hash}")));
    assert!(pretty.stdout.contains("timings:"));
    assert!(!canonical.stdout.contains("timings"));
    assert!(pretty.stdout.lines().filter(|l| l.trim_start().starts_with("PASS")).count() >= 10);
}

#[test]
fn seed_is_recorded() {
    let a = charrig(&["phi", "t2", "--degree", "2", "--seed", "1"]);
    let b = charrig(&["phi", "t2", "--degree", "2", "--seed", "2"]);
    assert_eq!(a.code, EXIT_PASS);
    assert_eq!(a.report.as_ref().unwrap().seed, 1);
    assert_eq!(b.code, EXIT_PASS);
}

#[test]
fn cycle_files() {
    let equator = tmp("s2_equator.json", r#"{"degree":1,"chain":{"0,1":1,"1,2":1,"2,0":1}}"#);
    let out = charrig(&["pseudo", "s2", "--cycle", equator.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_PASS, "{}", out.stdout);
    let d = data(&out);
    // a triangle is already a pseudomanifold: nothing to split or resolve
    assert_eq!(d["cycles"]["normalization"]["bounding_nonzero"], 0);
    assert!(d["cycles"]["bounding"]["neighborhood_vanishes"].as_bool().unwrap());

    let not_a_cycle = tmp("s2_path.json", r#"{"degree":1,"chain":{"0,1":1}}"#);
    assert_eq!(charrig(&["pseudo", "s2", "--cycle", not_a_cycle.to_str().unwrap()]).code, EXIT_INPUT);
    let malformed = tmp("s2_junk.json", r#"{"degree":1,"chain":{"0,9":1}}"#);
    assert_eq!(charrig(&["pseudo", "s2", "--cycle", malformed.to_str().unwrap()]).code, EXIT_INPUT);
    let top = tmp("s2_top.json", r#"{"degree":2,"chain":{}}"#);
    assert_eq!(charrig(&["pseudo", "s2", "--cycle", top.to_str().unwrap()]).code, EXIT_INPUT);
    assert_eq!(charrig(&["pseudo", "s2", "--cycle", "/nonexistent/cycle.json"]).code, EXIT_INPUT);
}
