//! Runs the `aspectra` binary and checks output shape, exit codes and
//! reproducibility.

use std::process::{Command, Output};

use serde_json::Value;

fn aspectra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aspectra")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn probe_lists_seven_words_at_rank_two() {
    let out = aspectra(&["probe", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["size"], 7);
    let words: Vec<&str> = v["result"]["words"].as_array().unwrap().iter().map(|w| w.as_str().unwrap()).collect();
    assert_eq!(words, ["a1", "a2", "a1 a2", "g1", "g2", "g1^-1", "g2^-1"]);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn script_probe_starts_with_identity_class() {
    let v = json_of(&aspectra(&["probe", "--n", "2", "--kind", "scriptK"]));
    assert_eq!(v["result"]["words"][0], "1");
    assert_eq!(v["result"]["size"], 7);
}

#[test]
fn rewrite_reports_tilde_form_and_trace() {
    let out = aspectra(&["rewrite", "--n", "2", "--word", "a3 g1 a3", "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let steps = v["result"]["trace"]["steps"].as_array().unwrap();
    assert_eq!(steps.len() as u64, v["result"]["moves"].as_u64().unwrap());
    let last = steps.last().map(|s| s["word"].clone()).unwrap_or(v["result"]["input"].clone());
    assert_eq!(last, v["result"]["word"]);
}

#[test]
fn rewrite_finite_forms() {
    let v = json_of(&aspectra(&["rewrite", "--n", "3", "--word", "a3 a2 a1", "--form", "echelon"]));
    assert_eq!(v["result"]["cycleType"], serde_json::json!([4]));
    assert_eq!(v["result"]["word"], "a1 a2 a3");
    let v = json_of(&aspectra(&["rewrite", "--n", "3", "--word", "a3 a1", "--form", "block"]));
    assert_eq!(v["result"]["blocks"], serde_json::json!([[1, 1], [3, 3]]));
}

#[test]
fn bad_input_exits_with_usage_code() {
    for args in [
        &["rewrite", "--n", "2", "--word", "a7"][..],
        &["rewrite", "--n", "2", "--word", "g1", "--form", "echelon"],
        &["spectrum", "--n", "2", "--rep", "perm:bogus"],
        &["spectrum", "--n", "3", "--rep", "tits"],
        &["compare", "--n", "2", "--rep1", "tits", "--rep2", "tits", "--method", "pit", "--prime", "15"],
        &["verify", "--suite", "nothing"],
        &["frobnicate"],
    ] {
        let out = aspectra(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn raised_limits_admit_rank_three_probe_set() {
    let out = aspectra(&["spectrum", "--n", "3", "--rep", "tits", "--max-vars", "12"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["probeSet"]["size"], 12);
}

#[test]
fn spectrum_of_trivial_rep() {
    let v = json_of(&aspectra(&["spectrum", "--n", "2", "--rep", "perm:trivial"]));
    assert_eq!(v["result"]["display"], "x1 + x2 + x3 + x4 + x5 + x6 + x7 - 1");
    let v = json_of(&aspectra(&["spectrum", "--n", "2", "--rep", "perm:trivial", "--method", "pit"]));
    assert_eq!(v["result"]["evaluations"].as_array().unwrap().len(), 4);
}

#[test]
fn conjugate_comparison_agrees() {
    let out = aspectra(&["compare", "--n", "2", "--rep1", "tits", "--rep2", "conj(tits,seed=5)", "--cross-check"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json_of(&out)["result"];
    assert_eq!(r["divisorEqual"], true);
    assert_eq!(r["charEqual"], true);
    assert_eq!(r["consistent"], true);
    assert_eq!(r["pit"]["equal"], true);
}

#[test]
fn inequivalent_comparison_differs() {
    let out = aspectra(&["compare", "--n", "2", "--rep1", "sum(perm:sign,perm:sign)", "--rep2", "perm:standard"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json_of(&out)["result"];
    assert_eq!(r["divisorEqual"], false);
    assert_eq!(r["charEqual"], false);
}

/// A randomized test with a tiny prime can wrongly report equal divisors
/// for inequivalent representations; the run must then fail loudly.
#[test]
fn false_equal_verdict_is_critical() {
    let out = aspectra(&[
        "--seed",
        "1",
        "compare",
        "--n",
        "2",
        "--rep1",
        "sum(perm:trivial,perm:trivial,perm:trivial)",
        "--rep2",
        "sum(perm:trivial,perm:standard)",
        "--method",
        "pit",
        "--prime",
        "5",
        "--trials",
        "1",
        "--char-budget",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("CRITICAL"));
    let r = &json_of(&out)["result"];
    assert_eq!(r["consistent"], false);
    assert_eq!(r["violations"][0]["severity"], "CRITICAL");
}

#[test]
fn verify_output_is_reproducible_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_aspectra"))
            .args(["--seed", "3", "verify", "--n", "2", "--suite", "echelon"])
            .env("ASPECTRA_THREADS", threads)
            .output()
            .unwrap()
    };
    let (a, b) = (run("1"), run("4"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_of(&a)["result"]["passed"], true);
}

#[test]
fn verify_all_passes_at_rank_two_and_writes_file() {
    let dir = std::env::temp_dir().join(format!("aspectra-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = aspectra(&["verify", "--n", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let names: Vec<&str> =
        v["result"]["suites"].as_array().unwrap().iter().map(|s| s["suite"].as_str().unwrap()).collect();
    assert_eq!(
        names,
        ["relations", "theorem47", "echelon", "lemma21", "theorem52", "theorem32", "oracle", "proofstep"]
    );
    assert!(v["result"]["suites"][0].get("seconds").is_none());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn timings_are_opt_in() {
    let v = json_of(&aspectra(&["--timings", "verify", "--n", "2", "--suite", "relations"]));
    assert!(v["result"]["suites"][0]["seconds"].is_number());
}

#[test]
fn documented_examples() {
    let v = json_of(&aspectra(&["rewrite", "--n", "2", "--word", "a1 a1"]));
    assert_eq!(v["result"]["word"], "1");
    let v = json_of(&aspectra(&["rewrite", "--n", "3", "--word", "a3 g3 g3"]));
    assert_eq!(v["result"]["word"], "a3");
    assert_eq!(v["result"]["form"]["exponents"], serde_json::json!([0, 0, 0]));
    let v = json_of(&aspectra(&["compare", "--n", "2", "--rep1", "perm:standard", "--rep2", "perm:standard"]));
    assert_eq!(v["result"]["divisorEqual"], true);
    let out = aspectra(&["verify", "--n", "4", "--suite", "relations"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["suites"][0]["violations"], serde_json::json!([]));
}

#[test]
fn oversized_symbolic_request_points_to_pit() {
    let out = aspectra(&["spectrum", "--n", "3", "--rep", "tits"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--method pit"));
    let out = aspectra(&["spectrum", "--n", "3", "--rep", "tits", "--method", "pit"]);
    assert_eq!(out.status.code(), Some(0));
}
