use std::path::PathBuf;
use std::process::{Command, Output};

use padic_k1::descent::{ReportBundle, Status, VerificationReport};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-k1")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn group_info_catalog_and_file() {
    let o = run(&["group-info", "Q8"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("order 8"));
    assert!(s.contains("classes 5"));
    assert!(s.contains("abelianization Z/2 x Z/2"));

    let o = run(&["group-info", "C1"]);
    assert!(stdout(&o).contains("order 1"));

    let o = run(&["group-info", "--file", &fixture("heis3.pres")]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("group heis3"));
    assert!(s.contains("order 27"));
    assert!(s.contains("classes 11"));

    let o = run(&["group-info", "NotAGroup"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sk1_of_small_groups() {
    let s = stdout(&run(&["sk1", "C2xC2", "2"]));
    assert!(s.contains("H2 = Z/2"));
    assert!(s.contains("SK1 = 1"));

    let s = stdout(&run(&["sk1", "C4", "2"]));
    assert!(s.contains("H2 = 1"));
    assert!(s.contains("SK1 = 1"));

    let o = run(&["sk1", "S3", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a 3-group"));

    let o = run(&["sk1", "C3", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gamma_values_and_parse_errors() {
    let o = run(&["gamma", "C3", "3", "1", "4", "1+3*g"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("[1]"));
    assert!(s.contains("(mod 3^4)"));

    let s = stdout(&run(&["gamma", "C3", "3", "1", "4", "1"]));
    for line in s.lines().filter(|l| l.trim_start().starts_with('[')) {
        assert!(line.contains(" 0 (mod"), "{line}");
    }

    let o = run(&["gamma", "C3", "3", "1", "4", "1+*g"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("position 3"));

    // 3g is not a unit
    let o = run(&["gamma", "C3", "3", "1", "4", "3*g"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_text_and_json_agree() {
    let text = run(&["verify", "--claim", "gamma-seq", "--group", "C3", "--N", "4"]);
    assert!(text.status.success(), "{}", stderr(&text));
    assert!(stdout(&text).starts_with("pass"));

    let json = run(&["--format", "json", "verify", "--claim", "gamma-seq", "--group", "C3", "--N", "4"]);
    assert!(json.status.success());
    let r: VerificationReport = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(r.claim, "gamma-seq");
    assert_eq!(r.status, Status::Pass);
    assert_eq!(r.scenario.precision, 4);
    assert!(r.runtime_ms.is_none());
    let again = serde_json::to_string_pretty(&r).unwrap() + "\n";
    assert_eq!(again, stdout(&json));
}

#[test]
fn verify_skips_and_usage_errors() {
    let o = run(&["--format", "json", "verify", "--claim", "one-minus-phi", "--nR", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let r: VerificationReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.status, Status::Skipped);
    assert!(r.reason.is_some());

    assert_eq!(run(&["verify", "--claim", "no-such-claim"]).status.code(), Some(2));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--claim", "gamma-seq", "--p", "4"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--claim", "trf-istar", "--nR", "2", "--nS", "3"]).status.code(), Some(2));

    let s = stdout(&run(&["verify", "--list-claims"]));
    assert!(s.lines().any(|l| l == "residue-seq"));
}

#[test]
fn verify_all_on_file_group_writes_bundle() {
    let dir = std::env::temp_dir().join(format!("padic-k1-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("bundle.json");
    let o = run(&[
        "--format",
        "json",
        "verify",
        "--all",
        "--file",
        &fixture("heis3.pres"),
        "--p",
        "3",
        "--N",
        "3",
        "--samples",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let bundle: ReportBundle = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(bundle.reports.iter().all(|r| r.scenario.group == "heis3"));
    assert!(bundle.reports.iter().any(|r| r.claim == "sk1-descent" && r.status == Status::Pass));
    assert!(!bundle.failed());
    std::fs::remove_dir_all(&dir).ok();
}
