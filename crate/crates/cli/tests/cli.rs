use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arithtop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (v, out.status.code().unwrap())
}

fn link_data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn test_data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn whitehead_ranks() {
    let f = link_data("whitehead.json");
    let (v, code) = json(&["link", &f, "--l", "2", "--d", "4"]);
    assert_eq!(code, 0);
    let e = &v["results"]["cover_ranks"]["e"];
    assert_eq!(e[2], 1);
    assert_eq!(e[3], 0);
    assert_eq!(v["results"]["milnor"]["entries"]["1212"]["mubar"], -2);
    assert_eq!(
        v["results"]["symmetry"]["violations"]
            .as_array()
            .unwrap()
            .len(),
        0
    );
}

#[test]
fn trefoil_alexander() {
    let (v, code) = json(&["link", &link_data("trefoil.pd")]);
    assert_eq!(code, 0);
    let knot = &v["results"]["knot"];
    assert_eq!(knot["alexander"], "t^2 - t + 1");
    assert_eq!(knot["alexander_at_one"], 1);
    assert_eq!(knot["cover_orders"][0], "3");
}

#[test]
fn hopf_linking_matrix() {
    let (v, code) = json(&["link", &link_data("hopf.json"), "--d", "2"]);
    assert_eq!(code, 0);
    assert_eq!(
        v["results"]["linking_matrix"],
        serde_json::json!([[0, 1], [1, 0]])
    );
}

#[test]
fn d_above_degree_is_an_error() {
    let out = run(&["link", &link_data("hopf.json"), "--degree", "3", "--d", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn borromean_primes_verify() {
    let (v, code) = json(&[
        "primes", "13", "61", "937", "--l", "2", "--d", "3", "--verify",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        v["results"]["prediction"]["structure"]["exponents"],
        serde_json::json!([2, 2])
    );
    assert_eq!(v["results"]["verify"]["pass"], true);
    assert_eq!(v["results"]["verify"]["oracle_sylow"], "Z/4 + Z/4");
    assert_eq!(v["results"]["redei"][0]["symbol"], -1);
}

#[test]
fn two_primes_verify() {
    let (v, code) = json(&["primes", "5", "13", "--l", "2", "--d", "2", "--verify"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["e2_from_linking_matrix"], 0);
    assert_eq!(v["results"]["prediction"]["e"][1], 0);
    assert_eq!(v["results"]["verify"]["pass"], true);
}

#[test]
fn primes_three_mod_four_rejected() {
    let out = run(&["primes", "7", "11", "--l", "2"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1 mod 4"));
}

#[test]
fn primes_l_three() {
    let (v, code) = json(&["primes", "7", "13", "--l", "3", "--d", "2"]);
    assert_eq!(code, 0);
    assert!(v["results"].get("redei").is_none());
    assert!(v["results"]["prediction"]["e"].is_array());
}

#[test]
fn verify_needs_l_two() {
    let out = run(&["primes", "7", "13", "--l", "3", "--verify"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn user_supplied_entries_are_noted() {
    let (v, code) = json(&[
        "primes",
        "13",
        "61",
        "937",
        "--d",
        "3",
        "--mu-table",
        &test_data("mu_override.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["notes"].as_array().unwrap().len(), 1);
}

#[test]
fn classgroup_json_shape() {
    let (v, code) = json(&["classgroup", "--disc", "743041"]);
    assert_eq!(code, 0);
    assert_eq!(
        v,
        serde_json::json!({"invariant_factors": [4, 4], "order": 16})
    );
    let (v, _) = json(&["classgroup", "--disc", "-23"]);
    assert_eq!(v, serde_json::json!({"invariant_factors": [3], "order": 3}));
    assert_eq!(run(&["classgroup", "--disc", "7"]).status.code(), Some(2));
}

#[test]
fn covering_action() {
    let (v, code) = json(&["covering", &test_data("z4_action.json")]);
    assert_eq!(code, 0);
    let d = &v["results"]["decomposition"];
    assert_eq!(d["r"], 1);
    assert_eq!(d["orbits"][0]["e"], 2);
    assert_eq!(d["orbits"][0]["f"], 2);
    assert_eq!(v["results"]["galois"]["n_equals_efr"], true);
}

#[test]
fn covering_transfer() {
    let (v, code) = json(&["covering", &test_data("q8_center.json")]);
    assert_eq!(code, 0);
    let t = &v["results"]["transfer"];
    assert_eq!(t["group_order"], 8);
    assert_eq!(t["index"], 4);
    assert_eq!(t["divisible_by_index"], true);
}

#[test]
fn zeta_ranks_links() {
    let (v, code) = json(&["zeta-ranks", "--kind", "link", "--n", "3", "--deg", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["ranks"][0], 3);
}

#[test]
fn selftest_passes() {
    let (v, code) = json(&["selftest"]);
    assert_eq!(code, 0);
    let checks = v["results"]["checks"].as_array().unwrap();
    assert!(checks.len() >= 6);
    assert!(checks.iter().all(|c| c["pass"] == true));
}

#[test]
fn reports_are_byte_stable() {
    let args = [
        "--json", "primes", "13", "61", "937", "--d", "3", "--verify",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let f = link_data("borromean.pd");
    let args = ["--json", "link", f.as_str()];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn missing_file() {
    let out = run(&["link", "/nonexistent/file.pd"]);
    assert_eq!(out.status.code(), Some(2));
}
