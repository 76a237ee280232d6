use std::path::PathBuf;
use std::process::Command;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn run(args: &[&str]) -> (String, i32) {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nullsolve"));
    cmd.args(args).env_remove("NULLSOLVE_STEP_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

#[test]
fn worked_trace() {
    let (out, code) = run(&["ppa-run", &data("worked.genpoly"), "--trace"]);
    assert_eq!(code, 0);
    assert!(out.contains("TRACE path w → (1,1,1) → (1,1) → (1,1,2) → (1,0)\n"));
    assert!(out.ends_with("RESULT s = 10, f(s) = 1, path length 4\n"));
}

#[test]
fn step_cap_precedence() {
    let file = data("worked.genpoly");
    let (out, code) = run_env(&["ppa-run", &file], &[("NULLSOLVE_STEP_CAP", "2")]);
    assert_eq!(code, 4, "{out}");
    let (_, code) = run_env(&["ppa-run", &file, "--step-cap", "10"], &[("NULLSOLVE_STEP_CAP", "2")]);
    assert_eq!(code, 0);
    let (_, code) = run_env(&["ppa-run", &file], &[("NULLSOLVE_STEP_CAP", "lots")]);
    assert_eq!(code, 2);
}

#[test]
fn olson_exit_codes() {
    let file = data("extremal.olson");
    let (out, code) = run(&["solve-olson", &file]);
    assert_eq!((out.as_str(), code), ("RESULT no solution (extremal instance)\n", 3));
    let (out, code) = run(&["solve-olson", &file, "--engine", "ppa"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("ERROR degree bound violated"));
    let (_, code) = run(&["solve-olson", "/nonexistent/file.olson"]);
    assert_eq!(code, 1);
}

#[test]
fn graph_commands() {
    let (out, code) = run(&["divisible-subgraph", &data("triangle.graph"), "--d", "1", "--engine", "ppa"]);
    assert_eq!(code, 0);
    assert!(out.contains("RESULT F = {1,2,3}\n"));
    let (out, code) = run(&["f-avoiding", &data("star.graph"), "--mod", "2^1", "--forbid", "1:1"]);
    assert_eq!(code, 0);
    assert!(out.contains("RESULT degree v1 = 2\n"), "{out}");
    let (_, code) = run(&["f-avoiding", &data("star.graph"), "--mod", "2^1", "--natural"]);
    assert_eq!(code, 2);
    let (_, code) = run(&["f-avoiding", &data("star.graph"), "--mod", "two"]);
    assert_eq!(code, 2);
}

#[test]
fn kappa_and_oracle() {
    let (out, code) = run(&["kappa", "--p", "2", "--d", "2", "--set", "1,2,3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("RESULT kappa = 3\n"));
    assert!(out.ends_with("RESULT covers = yes\n"));
    let (out, code) = run(&["f-oracle", "--p", "2", "--d", "2,1", "--q", "0;0"]);
    assert_eq!((out.as_str(), code), ("RESULT F = 4\nRESULT kappa bound = 4\n", 0));
    let (_, code) = run(&["kappa", "--p", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn explicit_form() {
    let (out, code) = run(&["explicit-cn", &data("worked.genpoly")]);
    assert_eq!((out.as_str(), code), ("RESULT s = 10, f(s) = 1\n", 0));
}
