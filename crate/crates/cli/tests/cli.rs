//! CLI surface tests: exit codes, formats, the preset catalog override.

use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_kmlab")
}

#[test]
fn char_demazure_tsv_rows() {
    let out = Command::new(bin())
        .args([
            "char", "demazure", "--preset", "A1", "--lambda", "2", "--w", "1", "--depth", "3",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    // header + three monomials
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0], "m_1\tcoeff");
}

#[test]
fn usage_errors_exit_2() {
    let out = Command::new(bin())
        .args(["roots", "--depth", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "missing GCM source");
    let out = Command::new(bin())
        .args(["roots", "--preset", "XX7", "--depth", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "unknown preset");
    let out = Command::new(bin())
        .args(["char", "l", "--preset", "A2", "--lambda", "-1,0", "--depth", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "non-dominant weight");
}

#[test]
fn preset_catalog_env_override() {
    let dir = std::env::temp_dir().join("kmlab-test-catalog");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("catalog.json");
    std::fs::write(
        &path,
        r#"{"presets": [{"name": "MYA1", "labels": ["1"], "matrix": [[2]]}]}"#,
    )
    .unwrap();
    let out = Command::new(bin())
        .env("KMLAB_PRESETS", &path)
        .args(["gcm", "check", "MYA1", "--no-timestamp"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"symmetrizable\": true"));
    // the builtin names are shadowed by the override
    let out = Command::new(bin())
        .env("KMLAB_PRESETS", &path)
        .args(["gcm", "check", "B2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join("kmlab-test-out");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = Command::new(bin())
        .args([
            "dims",
            "--preset",
            "A2",
            "--lambda",
            "1,1",
            "--depth",
            "3",
            "--no-timestamp",
            "--out",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let file = std::fs::read(&path).unwrap();
    assert_eq!(file, out.stdout);
}
