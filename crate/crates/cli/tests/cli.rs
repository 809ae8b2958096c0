use std::path::Path;
use std::process::{Command, Output};

const FIG: &str = "dim 2\nmatrix\n1/3 0\n0 2/3\ncontrol\nvertices\n-2 -1\n0 -1\n0 1\n2 1\nsource 0 0\n";

fn ltireach(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltireach")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn decide_and_audit(target: &str, expect_code: i32, expect_label: &str) {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "fig.txt", &format!("{FIG}target vertices\n{target}\n"));
    let art = dir.path().join("verdict.json");
    let art = art.to_str().unwrap();
    let out = ltireach(&["decide", "--input", &inst, "--single-worker", "--out", art]);
    assert_eq!(out.status.code(), Some(expect_code), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with(expect_label));
    let audit = ltireach(&["audit", "--input", &inst, "--artifact", art]);
    assert_eq!(audit.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&audit.stdout).starts_with("ok:"));
}

#[test]
fn boundary_point_is_certified() {
    decide_and_audit("0 3", 1, "unreachable");
}

#[test]
fn interior_point_is_reached() {
    decide_and_audit("1 1", 0, "reachable");
}

#[test]
fn audit_rejects_an_artifact_for_another_instance() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", &format!("{FIG}target vertices\n1 1\n"));
    let b = write(dir.path(), "b.txt", &format!("{FIG}target vertices\n1 2\n"));
    let art = dir.path().join("a.json");
    let art = art.to_str().unwrap();
    assert_eq!(ltireach(&["decide", "--input", &a, "--out", art]).status.code(), Some(0));
    let audit = ltireach(&["audit", "--input", &b, "--artifact", art]);
    assert_eq!(audit.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&audit.stdout).starts_with("rejected:"));
}

#[test]
fn skolem_gadget_round_trips_through_decide() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("skolem.txt");
    let inst = inst.to_str().unwrap();
    let out = ltireach(&["gadget", "skolem", "--matrix", "0 1; -1 0", "--out", inst]);
    assert_eq!(out.status.code(), Some(0));
    let out = ltireach(&["forward", "--input", inst, "--max-steps", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("horizon 2"));
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "fig.txt", &format!("{FIG}target vertices\n0 3\n"));
    let svg = dir.path().join("fig.svg");
    let out = ltireach(&["render", "--input", &inst, "--steps", "6", "--out", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains("id=\"reach\"") && text.trim_end().ends_with("</svg>"));
}

#[test]
fn bad_input_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "bad.txt", "dim 2\nmatrix\n1 2 3\n");
    assert_eq!(ltireach(&["decide", "--input", &inst]).status.code(), Some(3));
}
