use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stringqi"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("stringqi-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> bool {
    bin().args(args).output().unwrap().status.success()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_build_verify() {
    let dir = scratch("pipeline");
    let (inst, out, trace) = (dir.join("i.json"), dir.join("r.json"), dir.join("t.jsonl"));
    assert!(run(&["gen", "--kind", "grid_polylines", "--seed", "3", "--size", "25", "--out", p(&inst)]));
    assert!(run(&["build", "--in", p(&inst), "--out", p(&out), "--trace", p(&trace)]));
    assert!(run(&["verify", "--in", p(&out)]));
    let lines = std::fs::read_to_string(&trace).unwrap();
    assert!(lines.lines().count() >= 2);
    assert!(lines.lines().all(|l| serde_json::from_str::<serde_json::Value>(l).is_ok()));

    let mut bad: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    bad["bijection"][0][1] = bad["bijection"][1][1].clone();
    let tampered = dir.join("bad.json");
    std::fs::write(&tampered, bad.to_string()).unwrap();
    assert!(!run(&["verify", "--in", p(&tampered)]));
}

#[test]
fn build_is_deterministic() {
    let dir = scratch("determinism");
    let inst = dir.join("i.json");
    assert!(run(&["gen", "--kind", "random_triangulation_family", "--seed", "9", "--size", "40", "--out", p(&inst)]));
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    assert!(run(&["build", "--in", p(&inst), "--out", p(&a)]));
    assert!(run(&["build", "--in", p(&inst), "--out", p(&b)]));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn metric_round() {
    let dir = scratch("metric");
    let (inst, out) = (dir.join("m.json"), dir.join("r.json"));
    assert!(run(&["gen", "--kind", "metric_random", "--seed", "1", "--size", "10", "--out", p(&inst)]));
    assert!(run(&["metric", "--in", p(&inst), "--out", p(&out)]));
    assert!(run(&["verify", "--in", p(&out)]));
}

#[test]
fn bad_input_fails() {
    let dir = scratch("errors");
    assert!(!run(&["gen", "--kind", "F_ell", "--size", "2", "--out", p(&dir.join("f.json"))]));
    assert!(!run(&["gen", "--kind", "nonsense", "--out", p(&dir.join("n.json"))]));
    assert!(!run(&["verify", "--in", p(&dir.join("missing.json"))]));
}
