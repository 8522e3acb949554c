use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
}

fn divalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divalg"))
        .args(args)
        .output()
        .unwrap()
}

fn run(cfg: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    divalg(&args)
}

fn reports(dir: &Path) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read_to_string(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}

fn walk<'a>(v: &'a Value, f: &mut impl FnMut(&'a str, &'a Value)) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                f(k, x);
                walk(x, f);
            }
        }
        Value::Array(xs) => xs.iter().for_each(|x| walk(x, f)),
        _ => {}
    }
}

fn write_config(dir: &TempDir, text: &str) -> PathBuf {
    let path = dir.path().join("job.cfg");
    fs::write(&path, text).unwrap();
    path
}

const P1: &str = r#"
backend = "toric"
[geometry]
rays = [[1], [-1]]
cones = [[0], [1]]
[divisors]
P = [1, 0]
"#;

#[test]
fn prints_schema_version() {
    let out = divalg(&["--schema-version"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "divalg-report/1"
    );
}

#[test]
fn reports_have_sorted_keys_and_stable_layout() {
    let dir = TempDir::new().unwrap();
    let out = run(&config("p2.cfg"), dir.path(), &[]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let files = reports(dir.path());
    assert_eq!(files.len(), 10);
    assert_eq!(files[0].0, "01-hilbert.json");
    assert!(files
        .iter()
        .any(|(n, _)| n == "07-induct-34-three-lines.json"));
    for (name, text) in &files {
        let v: Value = serde_json::from_str(text).unwrap();
        // serde_json's default map is ordered, so re-rendering only matches if keys were sorted
        assert_eq!(
            &(serde_json::to_string_pretty(&v).unwrap() + "\n"),
            text,
            "{name}"
        );
        assert_eq!(v["schema"], "divalg-report/1");
        assert!(v.get("timing_ms").is_none());
    }
}

#[test]
fn timing_only_with_flag() {
    let dir = TempDir::new().unwrap();
    let out = run(
        &config("p2.cfg"),
        dir.path(),
        &["--task", "hilbert", "--timing"],
    );
    assert!(out.status.success());
    let files = reports(dir.path());
    assert_eq!(files.len(), 1);
    let v: Value = serde_json::from_str(&files[0].1).unwrap();
    assert!(v["timing_ms"].is_u64());
}

#[test]
fn rationals_render_as_fractions() {
    let dir = TempDir::new().unwrap();
    let out = run(&config("p112.cfg"), dir.path(), &["--task", "fg-algebra"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&reports(dir.path())[0].1).unwrap();
    let mut seen = 0;
    walk(&v, &mut |k, x| {
        if k == "coefficient" {
            let s = x.as_str().expect("coefficient is a string");
            let (num, den) = s.split_once('/').expect("p/q");
            assert!(
                num.parse::<i64>().is_ok() && den.parse::<u64>().unwrap() > 0,
                "{s}"
            );
            seen += 1;
        }
    });
    assert!(seen > 0);
}

#[test]
fn task_override_and_flags() {
    let dir = TempDir::new().unwrap();
    let out = run(
        &config("p2.cfg"),
        dir.path(),
        &["--task", "fg-module", "--bound", "5"],
    );
    assert!(out.status.success());
    let files = reports(dir.path());
    assert_eq!(files.len(), 1);
    let v: Value = serde_json::from_str(&files[0].1).unwrap();
    assert_eq!(v["task"]["bound"], 5);
    let mut bounded = 0;
    walk(&v, &mut |_, x| {
        if x.get("kind").and_then(Value::as_str) == Some("bounded-search") {
            assert_eq!(x["bound"], 5);
            bounded += 1;
        }
    });
    assert!(bounded > 0);

    // a task kind absent from the config runs with default parameters
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        &format!("{P1}\n[[task]]\nkind = \"hilbert\"\ndivisor = \"P\"\n"),
    );
    let out = run(
        &cfg,
        &dir.path().join("r"),
        &["--task", "fg-algebra", "--divisor", "P"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let files = reports(&dir.path().join("r"));
    assert_eq!(files.len(), 1);
    assert_eq!(files[0].0, "01-fg-algebra.json");
    let v: Value = serde_json::from_str(&files[0].1).unwrap();
    assert_eq!(v["verdict"], "finitely-generated");
}

#[test]
fn max_degree_flag_changes_the_table() {
    let dir = TempDir::new().unwrap();
    let out = run(
        &config("p2.cfg"),
        dir.path(),
        &["--task", "hilbert", "--max-degree", "4"],
    );
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&reports(dir.path())[0].1).unwrap();
    let dims: Vec<u64> = v["result"]["dimensions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["dimension"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![1, 3, 6, 10, 15]);
}

#[test]
fn strict_mode_fails_on_task_errors() {
    let dir = TempDir::new().unwrap();
    let lenient = run(&config("tabulated.cfg"), &dir.path().join("a"), &[]);
    assert_eq!(lenient.status.code(), Some(0));
    let files = reports(&dir.path().join("a"));
    let v: Value = serde_json::from_str(&files[2].1).unwrap();
    assert_eq!(v["status"], "error");
    assert!(v["error"].is_string());

    let strict = run(
        &config("tabulated.cfg"),
        &dir.path().join("b"),
        &["--strict"],
    );
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn schema_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let undefined = write_config(
        &dir,
        &format!("{P1}\n[[task]]\nkind = \"hilbert\"\ndivisor = \"Q\"\n"),
    );
    let out = run(&undefined, &dir.path().join("r"), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains('Q'));

    let out = run(
        &config("p2.cfg"),
        &dir.path().join("r"),
        &["--task", "no-such-task"],
    );
    assert_eq!(out.status.code(), Some(2));

    let out = run(
        &config("tabulated.cfg"),
        &dir.path().join("r"),
        &["--task", "restrict"],
    );
    assert_eq!(out.status.code(), Some(2));

    let out = run(&dir.path().join("missing.cfg"), &dir.path().join("r"), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("r").exists());
}
