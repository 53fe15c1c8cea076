use std::path::PathBuf;
use std::process::{Command, Output};

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("msrom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn msrom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msrom"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn run_prints_csv_without_output_path() {
    let cfg = scratch(
        "e1.json",
        r#"{"mode":"example1","tau":1e-4,"n":10,"N":40,"seed":7}"#,
    );
    let out = msrom(&["run", cfg.to_str().unwrap(), "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), msrom::COLUMNS.join(","));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "example1");
    assert_eq!(row[19], "true");
    assert!(out.stderr.is_empty());
}

#[test]
fn unconverged_solve_exits_with_two() {
    let cfg = scratch(
        "short.json",
        r#"{"mode":"example1","tau":1e-4,"n":10,"N":40,"solver":{"max_iterations":1}}"#,
    );
    let out = msrom(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().contains(",false"));
}

#[test]
fn invalid_config_exits_with_one() {
    let cfg = scratch("bad.json", r#"{"mode":"example2","tau":0.2,"n":16,"N":64}"#);
    let out = msrom(&["validate", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("`tau`"));

    let out = msrom(&["run", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_and_oracle() {
    let cfg = scratch("sweep.json", r#"{"mode":"random-sweep","repetitions":3}"#);
    let out = msrom(&["validate", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let out = msrom(&["oracle", "3", "11"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("max relative deviation"));
    assert_eq!(msrom(&["oracle", "9", "1"]).status.code(), Some(1));
}
