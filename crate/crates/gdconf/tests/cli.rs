//! End-to-end exercises of the binary: exit codes, report shape, and the
//! pinned bracket output.

use std::process::{Command, Output};

fn gdconf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdconf"))
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
        .args(args)
        .output()
        .expect("spawning gdconf")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_passes_on_good_fixture() {
    let o = gdconf(&["check", "fixtures/novikov-2d.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("status: pass"));
}

#[test]
fn check_fails_with_witness_on_mutated_fixture() {
    for bad in [
        "fixtures/bad/virasoro-broken.json",
        "fixtures/bad/novikov-2d-broken.json",
        "fixtures/bad/cur-sl2-broken.json",
    ] {
        let o = gdconf(&["check", bad]);
        assert_eq!(o.status.code(), Some(1), "{bad}: {}", stdout(&o));
        let out = stdout(&o);
        assert!(out.contains("status: fail"), "{bad}: {out}");
        assert!(
            out.contains("fails at") && out.contains("defect"),
            "{bad} names no witness: {out}"
        );
    }
}

#[test]
fn bracket_prints_the_pinned_virasoro_lines() {
    let o = gdconf(&["bracket", "fixtures/virasoro.json", "v", "v"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in [
        "[a λ b] = (T + 2*λ)·v",
        "a (0) b = T·v",
        "a (1) b = 2·v",
        "locality N = 2",
    ] {
        assert!(out.contains(line), "missing {line:?} in {out}");
    }
}

#[test]
fn nprod_accepts_the_element_grammar() {
    let o = gdconf(&["nprod", "fixtures/virasoro.json", "(1/2*T*v + v)", "v", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn parse_errors_exit_2() {
    let o = gdconf(&["nprod", "fixtures/virasoro.json", "v+", "v", "0"]);
    assert_eq!(o.status.code(), Some(2));
    // unknown basis names are usage errors too
    let o = gdconf(&["bracket", "fixtures/virasoro.json", "w", "v"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn envelope_selects_and_certifies() {
    let o = gdconf(&["envelope", "fixtures/virasoro.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = gdconf(&["envelope", "fixtures/cur-sl2.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = gdconf(&[
        "envelope",
        "fixtures/novikov-2d.json",
        "--order-bound",
        "3",
        "--degree-bound",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn weyl_backend_is_virasoro_only() {
    let o = gdconf(&["envelope", "fixtures/virasoro.json", "--backend", "weyl"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = gdconf(&["envelope", "fixtures/cur-sl2.json", "--backend", "weyl"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn truncation_overflow_exits_3() {
    let o = gdconf(&["abelian", "1", "1"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(stdout(&o).contains("raise --order-bound / --degree-bound"));
}

#[test]
fn json_reports_are_structured() {
    let o = gdconf(&["vir", "3", "3", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["seed"], 20260823);
    let o = gdconf(&["check", "fixtures/bad/virasoro-broken.json", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["status"], "fail");
}

#[test]
fn lemma2_defaults_pass() {
    let o = gdconf(&["lemma2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("status: pass"));
}

#[test]
fn unknown_subcommand_exits_2() {
    let o = gdconf(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}
