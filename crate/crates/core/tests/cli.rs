use std::path::{Path, PathBuf};
use std::process::Command;

fn subpen() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subpen"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(sub: &str, cfg: &Path, out: &Path, seed: Option<u64>) -> i32 {
    let mut cmd = subpen();
    cmd.arg(sub).arg("--config").arg(cfg).arg("--out").arg(out);
    if let Some(s) = seed {
        cmd.arg("--seed").arg(s.to_string());
    }
    cmd.output().expect("binary runs").status.code().expect("exit code")
}

#[test]
fn exit_codes() {
    let out = tempfile::tempdir().unwrap();
    assert_eq!(run("code-inspect", &config("code-inspect-412.json"), out.path(), None), 0);
    assert_eq!(run("check", &config("check-412-quiet.json"), out.path(), None), 0);
    assert_eq!(run("check-conditions", &config("check-412-logical-x.json"), out.path(), None), 1);
    assert_eq!(run("spectrum", &config("code-inspect-412.json"), out.path(), None), 2);
    assert_eq!(run("run", &out.path().join("missing.json"), out.path(), None), 2);

    let bad = out.path().join("bad.json");
    std::fs::write(&bad, r#"{"kind": "spectrum", "code": {"builtin": "412"}, "colour": "red"}"#).unwrap();
    assert_eq!(run("run", &bad, out.path(), None), 2);
    let empty_matrix = out.path().join("empty.txt");
    std::fs::write(&empty_matrix, "\n").unwrap();
    let cfg = out.path().join("empty.json");
    std::fs::write(&cfg, r#"{"kind": "code-inspect", "code": {"a_matrix": "empty.txt"}}"#).unwrap();
    assert_eq!(run("code-inspect", &cfg, out.path(), None), 2);

    let usage = subpen().arg("sweep").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn every_shipped_config_validates() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let spec = subpen::experiment::ExperimentSpec::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert!(spec.expectations.iter().all(|e| !e.provenance.is_empty()));
            count += 1;
        }
    }
    assert!(count >= 8);
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = config("sweep-412-memory.json");
    assert_eq!(run("sweep", &cfg, a.path(), Some(5)), 0);
    assert_eq!(run("sweep", &cfg, b.path(), Some(5)), 0);
    let read = |d: &Path| std::fs::read(d.join("sweep-412-memory.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));

    let json = |d: &Path| {
        let mut v: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("sweep-412-memory.json")).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("wall_time_seconds");
        assert_eq!(v["seed"], 5);
        v
    };
    assert_eq!(json(a.path()), json(b.path()));
}

#[test]
fn gap_scan_single_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("one.json");
    std::fs::write(&cfg, r#"{"kind": "gap-scan", "name": "one", "chain": {"n_min": 3, "n_max": 3}}"#).unwrap();
    assert_eq!(run("gap-scan", &cfg, dir.path(), None), 0);
    let csv = std::fs::read_to_string(dir.path().join("one.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.starts_with("N,gap,scaled_gap"));
}
