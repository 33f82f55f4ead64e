//! End-to-end tests of the command-line interface: exit codes, byte
//! determinism, corpus coverage, and the error channel contract
//! (one JSON object per error on stderr).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf()
}

fn corpus() -> PathBuf {
    workspace_root().join("corpus")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brieskorn"))
        .args(args)
        .current_dir(workspace_root())
        .output()
        .expect("failed to launch the binary")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is not UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is not UTF-8")
}

fn error_json(out: &Output) -> Value {
    let text = stderr(out);
    serde_json::from_str(text.trim()).unwrap_or_else(|e| {
        panic!("stderr is not a single JSON object: {e}\n{text}")
    })
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("bk_cli_{}_{}", std::process::id(), name))
}

#[test]
fn lattice_text_reports_the_rank() {
    let out = run(&["lattice", "--exponents", "3,3", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("rank: 4"), "{text}");
    assert!(text.contains("spectrum oracle"), "{text}");
}

#[test]
fn lattice_rejects_malformed_exponents() {
    let out = run(&["lattice", "--exponents", "3,x"]);
    assert_eq!(out.status.code(), Some(2));
    let err = error_json(&out);
    assert_eq!(err["error"]["kind"], "schema");
    assert!(err["error"]["message"].as_str().unwrap().contains("x"));
}

#[test]
fn build_is_deterministic_and_feeds_invariants() {
    let first = scratch("det_a.json");
    let second = scratch("det_b.json");
    let recipe = corpus().join("t_1_2_0.json");
    let recipe = recipe.to_str().unwrap();

    for path in [&first, &second] {
        let out = run(&["build", recipe, "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    }
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    assert_eq!(a, b, "two builds of the same recipe differ");

    let by_file = run(&["invariants", first.to_str().unwrap()]);
    assert_eq!(by_file.status.code(), Some(0), "stderr: {}", stderr(&by_file));
    let report: Value = serde_json::from_str(&stdout(&by_file)).unwrap();
    assert_eq!(report["schema"], "invariant-report/1");
    let ranks: Vec<i64> = report["hard"]["hf"]
        .as_array()
        .unwrap()
        .iter()
        .map(|h| h["rank"].as_i64().unwrap())
        .collect();
    assert_eq!(ranks, vec![3, 3, 4]);

    // The bare recipe resolves through the corpus directory to the
    // same report.
    let by_name = run(&["invariants", "t_1_2_0"]);
    assert_eq!(by_name.status.code(), Some(0), "stderr: {}", stderr(&by_name));
    assert_eq!(stdout(&by_name), stdout(&by_file));

    std::fs::remove_file(&first).ok();
    std::fs::remove_file(&second).ok();
}

#[test]
fn every_corpus_recipe_builds_reports_and_renders() {
    let mut names: Vec<String> = std::fs::read_dir(corpus())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    assert!(names.len() >= 10, "corpus lost recipes: {names:?}");

    for name in &names {
        let path = corpus().join(name);
        let path = path.to_str().unwrap();

        let built = run(&["build", path]);
        assert_eq!(built.status.code(), Some(0), "{name}: {}", stderr(&built));
        let file: Value = serde_json::from_str(&stdout(&built)).unwrap();
        assert_eq!(file["schema"], "fibered-construction/1", "{name}");

        let report = run(&["invariants", path]);
        assert_eq!(report.status.code(), Some(0), "{name}: {}", stderr(&report));
        let report: Value = serde_json::from_str(&stdout(&report)).unwrap();
        assert_eq!(report["schema"], "invariant-report/1", "{name}");

        let drawing = run(&["render", path]);
        assert_eq!(drawing.status.code(), Some(0), "{name}: {}", stderr(&drawing));
        assert!(stdout(&drawing).starts_with("<svg"), "{name}");
    }

    let gamma = run(&["invariants", "gamma_6"]);
    let report: Value = serde_json::from_str(&stdout(&gamma)).unwrap();
    assert_eq!(report["hard"]["maslov_3d"], 6);
    assert_eq!(report["hard"]["annuli"]["count"], 1);
}

#[test]
fn tampered_construction_files_are_refused() {
    let path = scratch("tampered.json");
    let recipe = corpus().join("t_1_2_0.json");
    let out = run(&[
        "build",
        recipe.to_str().unwrap(),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let mut file: Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    file["geometry"]["pieces"][0]["points"][0][0] = Value::String("999".into());
    std::fs::write(&path, serde_json::to_string_pretty(&file).unwrap()).unwrap();

    let refused = run(&["invariants", path.to_str().unwrap()]);
    assert_eq!(refused.status.code(), Some(2));
    let err = error_json(&refused);
    assert_eq!(err["error"]["kind"], "schema");
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("edited or corrupted"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn family_catalogs_report_and_flag_discrepancies() {
    let clean = run(&["family", "chains", "--list", "0:2;0:4,0:1"]);
    assert_eq!(clean.status.code(), Some(0), "stderr: {}", stderr(&clean));
    let catalog: Value = serde_json::from_str(&stdout(&clean)).unwrap();
    assert_eq!(catalog["schema"], "family-catalog/1");
    assert_eq!(catalog["distinct"], true);

    let clash = run(&["family", "chains", "--list", "0:2;0:2"]);
    assert_eq!(clash.status.code(), Some(5), "stderr: {}", stderr(&clash));
    assert_eq!(error_json(&clash)["error"]["kind"], "discrepancy");

    let malformed = run(&["family", "chains", "--list", "0:2;zz"]);
    assert_eq!(malformed.status.code(), Some(2));
}

#[test]
fn torus_family_catalog_is_clean() {
    let out = run(&["family", "torus", "--c", "1", "--k-max", "3"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let catalog: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(catalog["distinct"], true);
    assert_eq!(catalog["entries"].as_array().unwrap().len(), 4);
}

#[test]
fn a3_reduction_refuses_fourth_label_constructions() {
    let path = corpus().join("splice_1_1.json");
    let out = run(&["invariants", path.to_str().unwrap(), "--a3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = error_json(&out);
    assert!(err["error"]["message"].as_str().unwrap().contains("--a3"));
}

#[test]
fn render_only_speaks_svg() {
    let path = corpus().join("t_1_2_0.json");
    let out = run(&["render", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn toothed_reports_switch_to_local_systems() {
    let out = run(&["invariants", "toothed_1_2_1"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let ls = &report["hard"]["local_system"];
    assert_eq!(ls["rank_generic"], 0);
    assert_eq!(ls["rank_at_1"], 4);
    assert_eq!(ls["rank_at_minus_1"], 4);
    assert_eq!(ls["rank_at_2"], 0);
}

#[test]
fn reports_and_drawings_are_byte_deterministic() {
    for args in [
        vec!["invariants", "gamma_6"],
        vec!["render", "lambda_3"],
        vec!["build", "zeta_5"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr(&first));
        assert_eq!(first.stdout, second.stdout, "{args:?} is not deterministic");
    }
}
