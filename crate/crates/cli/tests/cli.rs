use std::process::{Command, Output};

use serde_json::Value;

fn ncclique(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncclique"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn omega_psl27() {
    let out = ncclique(&["omega", "--family", "psl2", "--q", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["status"], "exact");
    assert_eq!(r["omega"], 57);
    assert_eq!(r["formula"]["matched"], true);
    assert_eq!(
        r["certificate"]["witness_clique"].as_array().unwrap().len(),
        57
    );
}

#[test]
fn omega_extraspecial_two_group() {
    let out = ncclique(&["omega", "--family", "extraspecial", "--p", "2", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["omega"], 7);
}

#[test]
fn omega_report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = ncclique(&[
        "omega",
        "--family",
        "named",
        "--name",
        "symmetric-4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(r["omega"], 10);
}

#[test]
fn exit_codes() {
    assert_eq!(
        ncclique(&["omega", "--family", "psl2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ncclique(&["omega", "--family", "psl2", "--q", "6"])
            .status
            .code(),
        Some(2)
    );
    let budget = ncclique(&[
        "omega",
        "--family",
        "psl2",
        "--q",
        "7",
        "--method",
        "solver",
        "--node-limit",
        "1",
    ]);
    assert_eq!(budget.status.code(), Some(3));
    assert_eq!(json(&budget)["status"], "lower_bound");
    assert!(json(&budget).get("omega").is_none());
    let mismatch = ncclique(&["omega", "--family", "extraspecial", "--p", "3", "--n", "2"]);
    assert_eq!(mismatch.status.code(), Some(4));
    assert_eq!(json(&mismatch)["formula"]["matched"], false);
}

#[test]
fn group_info() {
    let out = ncclique(&["group", "--family", "psl3", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["group"]["order"], 5616);
    let nu13 = r["group"]["sylow"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["p"] == 13)
        .unwrap()["count"]
        .clone();
    assert_eq!(nu13, 144);
    assert_eq!(r["group"]["is_ac"], false);
}

#[test]
fn export_collapsed_graph() {
    let out = ncclique(&["export", "--family", "sl2", "--q", "5", "--collapse"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("p edge 59 ")));
    assert!(text.lines().any(|l| l.starts_with("c ")));
}

#[test]
fn export_refuses_uncollapsed_suzuki() {
    let out = ncclique(&["export", "--family", "suzuki", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_mutation_reports_diff() {
    let out = ncclique(&["verify", "--row", "2", "--mutate", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("FAIL 2"));
    assert!(text.contains("-   22") && text.contains("+   21"));
}

#[test]
fn verify_selected_rows() {
    let out = ncclique(&["verify", "--row", "1", "--row", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS 1") && text.contains("PASS 7"));
}
