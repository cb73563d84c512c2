use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lenscross"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lenscross-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["lenscross"];
    argv.extend_from_slice(args);
    let code = lenscross::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn nested_check_exits_zero() {
    let f = scratch("nested4.json");
    let f = f.to_str().unwrap();
    assert_eq!(run(&["gen", "--family", "nested", "--k", "4", "-o", f]).0, 0);
    let (code, out) = run(&["check", f, "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"]["separated"], true);
}

#[test]
fn semicircle_check_reports_double_crossings() {
    let f = scratch("semi6.json");
    let f = f.to_str().unwrap();
    assert_eq!(run(&["gen", "--family", "semicircle", "--n", "6", "-o", f]).0, 0);
    let (code, out) = run(&["check", f, "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"]["single_crossing"], false);
    assert_eq!(v["bounds"]["verdicts"]["theorem1"], "not_applicable");
}

#[test]
fn errors_are_machine_readable() {
    let (code, out) = run(&["lenses", "/nonexistent/file.json", "--json"]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "IoError");
    assert_eq!(run(&["frobnicate"]).0, 2);

    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"vertices": [[0, 0], [1.5, 0]], "edges": []}"#).unwrap();
    let (code, out) = run(&["validate", bad.to_str().unwrap(), "--json"]);
    assert_eq!(code, 2);
    assert!(out.contains("ParseError"));
}

#[test]
fn replay_json_is_byte_identical_across_processes() {
    let f = scratch("nested6.json");
    let f = f.to_str().unwrap();
    assert!(bin().args(["gen", "--family", "nested", "--k", "6", "-o", f]).status().unwrap().success());
    let once = || bin().args(["replay", f, "--seed", "7", "--trials", "100", "--json"]).output().unwrap();
    let (a, b) = (once(), once());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn render_writes_svg() {
    let f = scratch("nested3.json");
    let svg = scratch("nested3.svg");
    let f = f.to_str().unwrap();
    run(&["gen", "--family", "nested", "--k", "3", "-o", f]);
    assert_eq!(run(&["render", f, "-o", svg.to_str().unwrap(), "--shade-lenses"]).0, 0);
    let text = std::fs::read_to_string(svg).unwrap();
    assert_eq!(text.matches("<polygon").count(), 2);
}
