use std::path::Path;
use std::process::Command;

use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn simlab(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_simlab"))
        .current_dir(dir)
        .env_remove("SIMLAB_CAP")
        .args(args)
        .output()
        .expect("simlab runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("UTF-8 output"),
        stderr: String::from_utf8(out.stderr).expect("UTF-8 output"),
    }
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn double_dual_is_isomorphic_by_the_identity() {
    let dir = TempDir::new().unwrap();
    let r = simlab(dir.path(), &["check", "iso", "id", "stack1", "dual(dual(stack1))"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("verdict: holds"));
}

#[test]
fn empty_relation_is_a_simulation() {
    let dir = TempDir::new().unwrap();
    let r = simlab(dir.path(), &["check", "sim", "empty", "stack2", "coin"]);
    assert_eq!((r.code, r.stdout.contains("holds")), (0, true));
}

#[test]
fn abort_has_no_safe_states() {
    let dir = TempDir::new().unwrap();
    let r = simlab(dir.path(), &["check", "safety", "{()}", "abort({()})"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("counterexample: state ()"), "{}", r.stdout);
}

#[test]
fn exhausted_cap_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let r = simlab(dir.path(), &["check", "sim", "id", "lollipop(bang(coin), coin)", "lollipop(bang(coin), coin)", "--cap", "10"]);
    assert_eq!(r.code, 2, "{}{}", r.stdout, r.stderr);
    let r = Command::new(env!("CARGO_BIN_EXE_simlab"))
        .current_dir(dir.path())
        .env("SIMLAB_CAP", "10")
        .args(["check", "sim", "id", "lollipop(bang(coin), coin)", "lollipop(bang(coin), coin)"])
        .status()
        .unwrap();
    assert_eq!(r.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_three() {
    let dir = TempDir::new().unwrap();
    assert_eq!(simlab(dir.path(), &["check", "frob"]).code, 3);
    assert_eq!(simlab(dir.path(), &["check", "sim", "empty", "nowhere", "stack1"]).code, 3);
    assert_eq!(simlab(dir.path(), &["eval", "reduce", "(\\x."]).code, 3);
    assert_eq!(simlab(dir.path(), &["--bogus"]).code, 3);
}

#[test]
fn eval_modes() {
    let dir = TempDir::new().unwrap();
    let r = simlab(dir.path(), &["eval", "reduce", "D (\\x. x) . u"]);
    assert_eq!(r.stdout, "\\x. u\n");
    let r = simlab(dir.path(), &["eval", "interp", "\\x. x", "--val", "a=flip"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("2 elements"), "{}", r.stdout);
    let r = simlab(dir.path(), &["eval", "interp", "0"]);
    assert!(r.stdout.ends_with("∅\n"), "{}", r.stdout);
    let r = simlab(dir.path(), &["eval", "reduce", "(\\x. x x) (\\x. x x)", "--fuel", "5"]);
    assert_eq!(r.code, 2);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let args = ["eval", "interp", "\\x. f (f x)", "--ctx", "f : a -> a", "--val", "a=coin", "--bag", "2"];
    let a = simlab(dir.path(), &args);
    let b = simlab(dir.path(), &args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn load_build_and_export_round_trip() {
    let dir = TempDir::new().unwrap();
    let r = simlab(dir.path(), &["export", "stack2"]);
    assert_eq!(r.code, 0);
    let renamed = r.stdout.replace("\"name\": \"stack2\"", "\"name\": \"mine\"");
    let file = write(&dir, "stack.json", &renamed);
    let r = simlab(dir.path(), &["load", &file]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "loaded system mine\n"), "{}", r.stderr);
    let r = simlab(dir.path(), &["check", "iso", "id", "mine", "stack2"]);
    assert_eq!(r.code, 0);
    let again = simlab(dir.path(), &["export", "mine"]);
    assert_eq!(again.stdout, renamed);
    let r = simlab(dir.path(), &["build", "lafont", "=", "bang(oplus(mine,", "I))"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = simlab(dir.path(), &["list"]);
    assert!(r.stdout.contains("system lafont: lafont"), "{}", r.stdout);
    assert_eq!(simlab(dir.path(), &["build", "lafont", "=", "I"]).code, 3);
}

#[test]
fn documents_are_validated() {
    let dir = TempDir::new().unwrap();
    let dangling = write(
        &dir,
        "bad.json",
        r#"{"kind":"system","name":"bad","states":["s"],"reactions":{"s":{"go":["ok"]}},"next":{"s":{"go":{"ok":"t"}}}}"#,
    );
    let r = simlab(dir.path(), &["load", &dangling]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("validation error"), "{}", r.stderr);
    let rel = write(&dir, "rel.json", r#"{"kind":"relation","name":"r","from":"nowhere","to":"stack1","pairs":[]}"#);
    let r = simlab(dir.path(), &["load", &rel]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("unknown name `nowhere`"), "{}", r.stderr);
}

#[test]
fn named_objects_are_used_by_checks() {
    let dir = TempDir::new().unwrap();
    let rel = write(
        &dir,
        "rel.json",
        r#"{"kind":"relation","name":"r","from":"flip","to":"flip","pairs":[["s","t"],["t","s"]]}"#,
    );
    let val = write(&dir, "val.json", r#"{"kind":"valuation","name":"v","atoms":{"a":"coin"}}"#);
    let term = write(&dir, "term.json", r#"{"kind":"term","name":"twice","context":"f : a -> a","term":"\\x. f (f x)"}"#);
    for f in [&rel, &val, &term] {
        assert_eq!(simlab(dir.path(), &["load", f]).code, 0);
    }
    assert_eq!(simlab(dir.path(), &["check", "iso", "r", "flip", "flip"]).code, 0);
    assert_eq!(simlab(dir.path(), &["check", "refine", "r", "flip", "flip"]).code, 0);
    let r = simlab(dir.path(), &["check", "soundness", "twice", "--val", "v", "--bag", "2"]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
}

#[test]
fn laws_suites_run_by_name() {
    let dir = TempDir::new().unwrap();
    let r = simlab(dir.path(), &["laws", "simulation-oracle"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("PASS  1 simulation-oracle"), "{}", r.stdout);
    let r = simlab(dir.path(), &["laws", "trivial-formulas"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("(known:"));
    assert_eq!(simlab(dir.path(), &["laws", "nope"]).code, 3);
}
