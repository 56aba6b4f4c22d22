use std::process::Command;

use lfuzzord::cli::run;
use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn lfuzz(args: &[&str]) -> (i32, String) {
    run(std::iter::once("lfuzz").chain(args.iter().copied()))
}

fn json(out: &str) -> Value {
    serde_json::from_str(out).unwrap_or_else(|e| panic!("{e}: {out}"))
}

#[test]
fn verify_holds_and_exits_zero() {
    let z = fixture("z-cone.json");
    let (code, out) = lfuzz(&["--format", "json", "--window", "8", "verify", "--claims", "prop-4.3", "--group", &z]);
    assert_eq!(code, 0, "{out}");
    let v = json(&out);
    assert_eq!(v["schema"], "lfuzzord/1");
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 7);
    assert!(reports.iter().all(|r| r["verdict"] == "holds"));
}

#[test]
fn verify_output_is_deterministic() {
    let z = fixture("z-cone.json");
    let args = ["--format", "json", "--seed", "0x2a", "verify", "--claims", "thm-cone,rmk-3.4", "--group", &z];
    assert_eq!(lfuzz(&args), lfuzz(&args));
}

#[test]
fn empty_claim_list_is_vacuous() {
    let (code, out) = lfuzz(&["--format", "json", "verify", "--claims", ""]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["reports"].as_array().unwrap().len(), 0);
}

#[test]
fn violated_claim_exits_one() {
    let (code, out) = lfuzz(&["--format", "json", "order", "lattice", &fixture("m-symmetric.json")]);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn input_errors_exit_two() {
    let (code, out) = lfuzz(&["--format", "json", "verify", "--claims", "no-such-claim"]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["error"]["kind"], "UnknownClaim");

    let (code, out) = lfuzz(&["--format", "json", "order", "check", "{\"e\": [[\"1\"]"]);
    assert_eq!(code, 2);
    let err = &json(&out)["error"];
    assert_eq!(err["kind"], "ParseError");
    assert!(err["message"].as_str().unwrap().contains("line 1"));

    let (code, out) = lfuzz(&["--format", "json", "hunt", "thm-quotient", "--drop", "gravity"]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["error"]["kind"], "UnknownWeakening");

    assert_eq!(lfuzz(&["frobnicate"]).0, 2);
}

#[test]
fn guard_overrun_exits_three() {
    let (code, out) = lfuzz(&["--format", "json", "enumerate", "lorder", "--size", "5"]);
    assert_eq!(code, 3, "{out}");
    assert_eq!(json(&out)["error"]["kind"], "GuardExceeded");
}

#[test]
fn guard_env_variable_overrides_flag() {
    let bin = env!("CARGO_BIN_EXE_lfuzz");
    let out = Command::new(bin)
        .args(["--guard", "100000000", "enumerate", "lorder", "--size", "3"])
        .env("LFUZZ_GUARD", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(bin).args(["enumerate", "lorder", "--size", "2"]).env_remove("LFUZZ_GUARD").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn prefix_selects_a_family() {
    let (code, out) = lfuzz(&["--format", "json", "verify", "--claims", "thm-cone"]);
    assert_eq!(code, 0, "{out}");
    let ids: Vec<String> = json(&out)["reports"].as_array().unwrap().iter().map(|r| r["claim"].as_str().unwrap().to_string()).collect();
    assert_eq!(ids, ["thm-cone-converse", "thm-cone-i", "thm-cone-ii", "thm-cone-iii", "thm-cone-iv"]);
}

#[test]
fn hunts_report_witnesses_only_when_weakened() {
    let (code, out) = lfuzz(&["--format", "json", "hunt", "thm-join-meet", "--drop", "E3", "--max-size", "2"]);
    assert_eq!(code, 1, "{out}");
    assert!(json(&out)["witness"].is_string());
    let (code, out) = lfuzz(&["--format", "json", "hunt", "thm-join-meet", "--max-size", "3"]);
    assert_eq!(code, 0, "{out}");
    assert!(json(&out)["witness"].is_null());
}

#[test]
fn quotient_of_parity_has_two_classes() {
    let (code, out) = lfuzz(&["--format", "json", "--window", "8", "quotient", "build", &fixture("z-cone.json"), &fixture("parity.json")]);
    assert_eq!(code, 0, "{out}");
    let r = &json(&out)["result"];
    assert_eq!(r["order"], 2);
    assert_eq!(r["representatives"], serde_json::json!(["0", "1"]));
    assert_eq!(r["s_tilde"], serde_json::json!(["1", "m"]));
}

#[test]
fn text_output_has_one_line_per_claim() {
    let (code, out) = lfuzz(&["verify", "--claims", "frame-heyting,prop-3.2"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.contains("frame-heyting") || l.contains("prop-3.2")).count(), 2);
}

fn result(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out) = lfuzz(&full);
    (code, json(&out))
}

#[test]
fn residuum_table_of_the_three_chain() {
    let (_, v) = result(&["frame", "table", "imp", "chain:3"]);
    // rows are a, columns b, for a -> b over 0 < m < 1
    assert_eq!(v["table"][2][1], "m");
    assert_eq!(v["table"][1][0], "0");
    let (_, v) = result(&["frame", "table", "imp", "bool:2"]);
    assert_eq!(v["table"][1][0], "b");
}

#[test]
fn down_closure_and_image() {
    let (_, v) = result(&["order", "down", &fixture("m-symmetric.json"), "0:m"]);
    assert_eq!(v["result"]["down"], "{0:m, 1:m}");
    let (_, v) = result(&["order", "image", &fixture("chain-3pt.json"), &fixture("chain2.json"), "0,0,1", "0:m,1:1"]);
    assert_eq!(v["result"]["image"], "{0:1}");
}

#[test]
fn adjoints_and_automorphisms() {
    let (code, v) = result(&["order", "adjoint", &fixture("chain2.json"), &fixture("chain2.json"), "0,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["partner"], serde_json::json!([1, 1]));
    let (code, v) = result(&["order", "adjoint", &fixture("antichain2.json"), &fixture("chain2.json"), "1,1"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["preserves_joins"], false);
    let (_, v) = result(&["order", "automorphisms", &fixture("m-symmetric.json")]);
    assert_eq!(v["result"]["order"], 2);
    assert_eq!(v["result"]["e"][0][1], "m");
}

#[test]
fn group_negative_controls_report_witnesses() {
    assert_eq!(result(&["group", "check", &fixture("z-swapped.json")]).0, 1);
    assert_eq!(result(&["group", "check", &fixture("z4-corrupt.json")]).0, 1);
    assert_eq!(result(&["group", "check", &fixture("z-cone.json")]).0, 0);
}

#[test]
fn group_bounds_and_sums() {
    let (code, v) = result(&["group", "join", &fixture("z-cone.json"), "1:1,2:1"]);
    assert_eq!(code, 1);
    assert!(v["result"]["join"].is_null());
    let (_, v) = result(&["group", "sum", &fixture("z-cone.json"), "1:m", "2:m"]);
    assert_eq!(v["result"]["sum"], "{3:m}");
    let (code, v) = result(&["--window", "6", "group", "sum", &fixture("crisp-z2.json"), "(0,0):1,(1,2):1", "(2,0):1,(3,1):1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["join"], "4,3");
}

#[test]
fn riesz_output_matches_the_worked_example() {
    let (code, v) = result(&["group", "riesz", &fixture("crisp-z.json"), "--a", "3", "--b", "2", "--b", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["parts"], serde_json::json!(["1", "2"]));
    assert!(v["result"]["oracle"].is_array());
    let (code, _) = result(&["group", "riesz-meet", &fixture("crisp-z2.json"), "--a", "(2,2)", "--b", "(1,0)", "--c", "(0,1)"]);
    assert_eq!(code, 0);
}

#[test]
fn homomorphism_conditions_agree() {
    let (_, v) = result(&["group", "hom-cone", &fixture("crisp-z.json"), &fixture("double.json")]);
    assert_eq!((v["result"]["cone"].clone(), v["result"]["monotone"].clone()), (Value::Bool(true), Value::Bool(true)));
    let (code, v) = result(&["group", "hom-cone", &fixture("crisp-z.json"), &fixture("negate.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["image"], false);
}

#[test]
fn subgroup_level_and_down_cone() {
    let (_, v) = result(&["--window", "4", "sub", "check", &fixture("z-cone.json"), &fixture("parity.json")]);
    assert_eq!(v["result"]["level"], serde_json::json!(["-4", "-2", "0", "2", "4"]));
    assert_eq!(v["result"]["down_cone_identity"], true);
    let (code, v) = result(&["sub", "check", &fixture("crisp-z.json"), &fixture("evens.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["down_cone_witness"], "a=1");
}

#[test]
fn kernels_of_identity_and_doubling() {
    let (_, v) = result(&["quotient", "kernel", &fixture("z5.json"), "{\"table\": [0, 1, 2, 3, 4]}"]);
    assert_eq!(v["result"]["kernel"][1][1], "m");
    assert_eq!(v["result"]["level"], serde_json::json!(["0"]));
    let (code, v) = result(&["--window", "4", "quotient", "kernel", &fixture("crisp-z.json"), &fixture("double.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["level"], serde_json::json!(["0"]));
}

#[test]
fn from_cone_on_integers() {
    let (code, v) = result(&["--window", "2", "group", "from-cone", &fixture("crisp-z.json")]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["crisp_order"].as_array().unwrap().len(), 10);
    assert_eq!(v["result"]["e"][4][0], "0");

    let (code, v) = result(&["group", "from-cone", &fixture("z-cone.json")]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["crisp_order"], serde_json::json!([]));
    assert_eq!(v["result"]["e"][0][16], "m");
}
