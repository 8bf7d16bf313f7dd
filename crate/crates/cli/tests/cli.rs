use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopforge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn gen(dir: &Path, family: &str, file: &str) -> String {
    let p = dir.join(file);
    let out = run(&["gen", family, "-o", p.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_table1_laws() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = gen(dir.path(), "table1", "table1.tbl");
    assert_eq!(run(&["check", &t1, "--laws", "cc"]).status.code(), Some(0));
    let pa = run(&["check", &t1, "--laws", "pa"]);
    assert_eq!(pa.status.code(), Some(1));
    assert!(stdout(&pa).contains("[12]"));
    let js = run(&["check", &t1, "--laws", "cc,pa", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&js.stdout).unwrap();
    assert_eq!(v["cc"]["holds"], true);
    assert_eq!(v["pa"]["counterexample"], serde_json::json!([12]));
}

#[test]
fn iso_of_q16_pair() {
    let dir = tempfile::tempdir().unwrap();
    let q00 = gen(dir.path(), "q16:0,0", "q00.tbl");
    let q11 = gen(dir.path(), "q16:1,1", "q11.tbl");
    let q23 = gen(dir.path(), "q16:2,3", "q23.tbl");
    assert_eq!(run(&["iso", &q00, &q11]).status.code(), Some(1));
    let yes = run(&["iso", &q00, &q23]);
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(stdout(&yes).split_whitespace().count(), 16);
}

#[test]
fn shuffled_copy_is_isomorphic_and_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(&["gen", "table1", "--shuffle", "--seed", "3"]);
    let b = run(&["gen", "table1", "--shuffle", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let p = dir.path().join("s.tbl");
    fs::write(&p, &a.stdout).unwrap();
    let t1 = gen(dir.path(), "table1", "t1.tbl");
    assert_eq!(run(&["iso", &t1, p.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn malformed_input_exits_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.tbl");
    fs::write(&p, "# bad\n3\n0 1 2\n1 2\n2 0 1\n").unwrap();
    let out = run(&["check", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
    assert_eq!(run(&["check", "/nonexistent/file.tbl"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "bogus"]).status.code(), Some(2));
}

#[test]
fn written_files_round_trip_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "fam27:1,0,1,0,1", "a.tbl");
    let first = fs::read(&a).unwrap();
    let again = run(&["gen", "fam27:1,0,1,0,1"]);
    assert_eq!(again.stdout, first);
    let j = gen(dir.path(), "fam27:1,0,1,0,1", "a.json");
    assert_eq!(run(&["iso", &a, &j]).status.code(), Some(0));
}

#[test]
fn info_text_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = gen(dir.path(), "table1", "t1.tbl");
    let js = run(&["info", &t1, "--json"]);
    assert!(js.status.success());
    let v: serde_json::Value = serde_json::from_slice(&js.stdout).unwrap();
    assert_eq!(v["structure"]["center"], serde_json::json!([0, 1]));
    assert_eq!(v["elements"]["pa_set"], serde_json::json!((0..12).collect::<Vec<_>>()));
    let txt = stdout(&run(&["info", &t1]));
    assert!(txt.contains("{0,1}"));
    assert!(txt.contains("{0,1,2,3,4,5,6,7,8,9,10,11}"));
}

#[test]
fn audit_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let z = gen(dir.path(), "cyclic:12", "z12.tbl");
    let out = run(&["audit", &z]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 failed"));
    let t1 = gen(dir.path(), "table1", "t1.tbl");
    assert_eq!(run(&["audit", &t1, "--json"]).status.code(), Some(0));
}

#[test]
fn search_and_timeout() {
    let out = run(&["search", "--order", "3", "--laws", "lcc,rcc"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("count: 1"));
    let js = run(&["search", "--order", "5", "--up-to-iso", "--count-only", "--json", "--jobs", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&js.stdout).unwrap();
    assert_eq!(v["count"], 6);
    let slow = run(&["search", "--order", "16", "--laws", "extra", "--nonassociative", "--budget", "0"]);
    assert_eq!(slow.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&slow.stderr).contains("timed out"));
    let bad = run(&["search", "--order", "4", "--laws", "nope"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_loopforge"))
        .args(["search", "--order", "16", "--laws", "moufang", "--count-only"])
        .env("LOOPFORGE_BUDGET", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn classify_27_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["classify", "27", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("classes: 8"));
    assert!(s.contains("with AIP: 4"));
    let tbls = fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "tbl"))
        .count();
    assert_eq!(tbls, 8);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["class_count"], 8);
}

#[test]
fn classify_16_quick_and_bad_order() {
    let out = run(&["classify", "16"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Q_(r,s) classes: 2"));
    assert_eq!(run(&["classify", "12"]).status.code(), Some(2));
}
