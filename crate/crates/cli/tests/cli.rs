use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn workbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_workbench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = workbench(&full);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn successor_program() {
    let succ = data("succ.prog");
    let out = workbench(&["eval", &succ, "41", "--budget", "100"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "42\n");
    // the same program by index
    let index = json(&["eval", &succ, "0"])["result"]["index"]
        .as_str()
        .unwrap()
        .to_string();
    assert_eq!(
        stdout(&workbench(&["eval", &index, "41", "--budget", "100"])),
        "42\n"
    );
}

#[test]
fn chain_is_well_founded() {
    let out = workbench(&["wf", "--rel", &data("chain3.rel")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "well-founded, order type 3\n");
    let out = workbench(&["wf", "--rel", &data("cycle.rel")]);
    assert_eq!(stdout(&out), "not well-founded, descent 0 -> 1 -> 0\n");
}

#[test]
fn fgh_omega_follows_the_limit_rule() {
    for x in ["0", "1", "2"] {
        assert_eq!(
            stdout(&workbench(&["fgh", "w", x])),
            stdout(&workbench(&["fgh", x, x]))
        );
    }
    // F_3(3) has more than 2^(10^21) digits
    let r = json(&["fgh", "w", "3", "--budget", "100000"]);
    assert_eq!(r["result"]["outcome"], "out_of_budget");
    assert_eq!(r["result"]["budget"], 100000);
    assert_eq!(
        workbench(&["--strict", "fgh", "w", "3", "--budget", "100000"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn json_is_deterministic_and_carries_a_manifest() {
    let args = [
        "--json",
        "etr",
        "--rel",
        &data("chain3.rel"),
        "--step",
        &data("succ.prog"),
    ];
    let a = workbench(&args);
    let b = workbench(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let m = &v["manifest"];
    assert_eq!(m["command"], "etr");
    assert_eq!(m["parameters"]["budget"], 100000);
    assert_eq!(m["tool_version"], env!("CARGO_PKG_VERSION"));
    let digests = m["input_digests"].as_object().unwrap();
    assert_eq!(digests.len(), 2);
    assert!(digests.values().all(|d| d.as_str().unwrap().len() == 64));
    assert_eq!(v["result"]["values"]["2"], "3");
}

#[test]
fn exit_codes() {
    assert_eq!(workbench(&["ord", "add", "w+", "1"]).status.code(), Some(1));
    assert_eq!(workbench(&["eval"]).status.code(), Some(1));
    assert_eq!(workbench(&["--help"]).status.code(), Some(0));
    assert_eq!(workbench(&["ord", "fseq", "3", "1"]).status.code(), Some(2));
    assert_eq!(workbench(&["notate", "w^w"]).status.code(), Some(2));
    assert_eq!(workbench(&["jump", "9"]).status.code(), Some(2));
    let etr = workbench(&[
        "etr",
        "--rel",
        &data("cycle.rel"),
        "--step",
        &data("succ.prog"),
    ]);
    assert_eq!(etr.status.code(), Some(2));
    assert_eq!(
        workbench(&["eval", "0", "1", "--budget", "0"])
            .status
            .code(),
        Some(0)
    );
    let loops = data("loop.prog");
    assert_eq!(
        workbench(&["eval", &loops, "1", "--budget", "50"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        workbench(&["--strict", "eval", &loops, "1", "--budget", "50"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn fixpoint_of_a_constant_transformer() {
    let r = json(&["fixpoint", "--psi", &data("psi_const.prog")]);
    let e = r["result"]["fixed_point"].as_str().unwrap();
    let image = r["result"]["image"].as_str().unwrap();
    assert_eq!(stdout(&workbench(&["eval", e, "41"])), "42\n");
    assert_eq!(stdout(&workbench(&["eval", image, "41"])), "42\n");
}

#[test]
fn ordinals_and_notations() {
    assert_eq!(stdout(&workbench(&["ord", "cmp", "w^2", "w*5 + 3"])), ">\n");
    assert_eq!(stdout(&workbench(&["ord", "add", "w + 3", "w^2"])), "w^2\n");
    assert_eq!(stdout(&workbench(&["ord", "mul", "w + 1", "w"])), "w^2\n");
    assert_eq!(stdout(&workbench(&["ord", "fseq", "w^w", "3"])), "w^3\n");
    let notation = json(&["notate", "w*2 + 1"])["result"].to_string();
    assert_eq!(stdout(&workbench(&["denote", &notation])), "w*2 + 1\n");
}

#[test]
fn trees_and_traces() {
    let out = stdout(&workbench(&[
        "tree", "levels", "--depth", "3", "--budget", "100",
    ]));
    assert_eq!(out, "1\n  0\n    0\n    1\n2 strings of length 3\n");
    let r = json(&["tree", "leftmost", "--depth", "10"]);
    assert_eq!(r["result"]["leftmost"].as_array().unwrap().len(), 10);
    assert_eq!(
        stdout(&workbench(&["tree", "dead", "0", "--depth", "1"])),
        "dead\n"
    );
    let r = json(&["trace", &data("succ.prog"), "5", "--code"]);
    assert_eq!(r["result"]["configurations"].as_array().unwrap().len(), 2);
    assert!(r["result"]["code"].is_string());
}

#[test]
fn diag_and_jump_report_their_parameters() {
    let r = json(&["diag", "--range", "20", "--budget", "1000"]);
    assert_eq!(r["result"]["report"]["budget"], 1000);
    assert!(r["result"]["report"]["in_a"]
        .as_array()
        .unwrap()
        .contains(&Value::from(0)));
    let r = json(&["jump", "1", "--stage", "50", "--range", "30"]);
    assert_eq!(r["result"]["approximation"]["stage"], 50);
    assert_eq!(r["result"]["approximation"]["level"], 1);
}
