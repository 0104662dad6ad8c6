//! End-to-end tests driving the `mora` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn resource_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../resources")
        .canonicalize()
        .unwrap()
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn mora(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mora"))
        .arg("--config")
        .arg(resource_dir().join("mora.toml"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn compile_reproduces_the_printed_allomorph_block() {
    let dema_vs = fixture("two.dic");
    let out = mora(&["--dema-vs", dema_vs.to_str().unwrap(), "compile"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let expected = "\
andriana,andriana.V+a16v2Jo+gc3+0
andrián,andriana.V+a16v2Jo+gc3+ana
andrián,andriana.V+a16v2Jo+gc3+ina
andrián,andriana.V+a16v2Jo+gc3+a
andrián,andriana.V+a16v2Jo+gc3+imprt
àndro,àndro.V+a1ps20vAy+gc1+0
andró,àndro.V+a1ps20vAy+gc1+ana
andró,àndro.V+a1ps20vAy+gc1+a
andró,àndro.V+a1ps20vAy+gc1+imprt
";
    assert_eq!(stdout(&out), expected);
    assert!(stderr(&out).contains("2 roots -> 9 entries"));
}

#[test]
fn compile_empty_dictionary() {
    let dema_vs = fixture("empty.dic");
    let out = mora(&["--dema-vs", dema_vs.to_str().unwrap(), "compile"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "");
    assert!(stderr(&out).contains("0 roots -> 0 entries"));
}

#[test]
fn compile_names_missing_stem_classes() {
    let dema_vs = fixture("orphan.dic");
    let out = mora(&["--dema-vs", dema_vs.to_str().unwrap(), "compile"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("1az"), "stderr: {}", stderr(&out));
}

#[test]
fn analyze_emits_schema_versioned_records() {
    let out = mora(&["analyze", "nojereny", "--json"]);
    assert!(out.status.success());
    let record: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(record["schema"], "mora.analysis/1");
    assert_eq!(record["token"], "nojereny");
    let segments = &record["analyses"][0]["segments"];
    assert_eq!(segments[0]["role"], "tense");
    assert_eq!(segments[0]["value"], "past");
    assert_eq!(segments[1]["role"], "root");
    assert_eq!(segments[1]["value"], "jèry");
    assert_eq!(segments[2]["text"], "");
    assert_eq!(segments[3]["role"], "pronoun");
    assert_eq!(record["analyses"][0]["features"]["voice"], "obj");
}

#[test]
fn analyze_unknown_token_exits_zero() {
    let out = mora(&["analyze", "xyzzy", "--json"]);
    assert!(out.status.success());
    let record: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(record["analyses"].as_array().unwrap().len(), 0);
}

#[test]
fn analyze_file_matches_per_token_runs() {
    let para = fixture("para.txt");
    let out = mora(&["analyze", "--file", para.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(lines.len(), 6); // nojereny aho mandro izy ary mitahiry

    for line in &lines {
        let record: serde_json::Value = serde_json::from_str(line).unwrap();
        let token = record["token"].as_str().unwrap();
        let single = mora(&["analyze", token, "--json"]);
        assert_eq!(stdout(&single).trim(), line.as_str());
    }
}

#[test]
fn generate_lists_the_paradigm() {
    let out = mora(&["generate", "àndro"]);
    assert!(out.status.success());
    let listing = stdout(&out);
    let forms: Vec<&str> = listing
        .lines()
        .map(|l| l.split('\t').next().unwrap())
        .collect();
    assert_eq!(
        forms,
        vec![
            "androana",
            "androy",
            "handro",
            "handroana",
            "hotafandro",
            "mandro",
            "mandroa",
            "nandro",
            "nandroana",
            "tafandro"
        ]
    );
}

#[test]
fn generate_json_is_schema_versioned() {
    let out = mora(&["generate", "fàfy", "--json"]);
    assert!(out.status.success());
    let record: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(record["schema"], "mora.paradigm/1");
    let forms: Vec<&str> = record["forms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["form"].as_str().unwrap())
        .collect();
    for required in ["mifafy", "mamafy", "mamafaza", "fafazo"] {
        assert!(forms.contains(&required), "{required} missing from {forms:?}");
    }
}

#[test]
fn generate_unknown_lemma_fails() {
    let out = mora(&["generate", "blorp"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("blorp"));
}

#[test]
fn inflect_prints_allomorph_entries() {
    let out = mora(&["inflect", "àndro"]);
    assert!(out.status.success());
    let listing = stdout(&out);
    let lines: Vec<&str> = listing.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "àndro,àndro.V+a1ps20vAy+gc1+0");
}

#[test]
fn evaluate_prints_the_report() {
    let gold = resource_dir().join("eval/gold_synthetic.tsv");
    let out = mora(&["evaluate", gold.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let table = stdout(&out);
    assert!(table.contains("(~65%)"), "table: {table}");
    assert!(table.contains("(~58%)"));

    let out = mora(&["evaluate", gold.to_str().unwrap(), "--json"]);
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["verb_tokens"], 43);
    assert_eq!(report["in_dictionary"], 28);
}

#[test]
fn env_var_provides_the_config() {
    let out = Command::new(env!("CARGO_BIN_EXE_mora"))
        .env("MORA_RESOURCES", resource_dir().join("mora.toml"))
        .args(["analyze", "mandro"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("àndro"));
}

#[test]
fn missing_config_is_an_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_mora"))
        .env("MORA_RESOURCES", "/nonexistent/mora.toml")
        .args(["analyze", "mandro"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(stderr(&out).contains("does not exist"));
}
