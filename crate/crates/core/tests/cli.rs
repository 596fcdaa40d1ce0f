use std::path::Path;
use std::process::{Command, Output};

fn qso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qso"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("v0m2.json");
    let out = qso(&[
        "presets",
        "--emit",
        "fqso_v0_m2",
        "--params",
        "0,0.5,0.5",
        "-o",
        path(&good),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = qso(&["validate", path(&good)]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("stochastic"), "{text}");

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"schema_version": "1", "n": 2, "kind": "cubic",
            "payload": {"entries": [[0, 0, 0, 0.5], [0, 1, 0, 1.0], [1, 1, 1, 1.0]]}}"#,
    )
    .unwrap();
    assert_eq!(qso(&["validate", path(&bad)]).status.code(), Some(1));

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{ not json").unwrap();
    assert_eq!(qso(&["validate", path(&broken)]).status.code(), Some(2));
    assert_eq!(qso(&["validate"]).status.code(), Some(2));
}

#[test]
fn trajectory_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let op = dir.path().join("op.json");
    let csv = dir.path().join("t.csv");
    qso(&[
        "presets",
        "--emit",
        "fqso_v0_m2",
        "--params",
        "0.2,0.3,0.5",
        "-o",
        path(&op),
    ]);
    let out = qso(&[
        "trajectory",
        path(&op),
        "--start",
        "0.2,0.3,0.5",
        "--steps",
        "20",
        "-o",
        path(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = qso(&["replay", path(&csv), "--operator", path(&op)]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    // tamper with one coordinate
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut fields: Vec<String> = lines[2].split(',').map(String::from).collect();
    fields[1] = "0.9".into();
    lines[2] = fields.join(",");
    std::fs::write(&csv, lines.join("\n") + "\n").unwrap();
    assert_eq!(
        qso(&["replay", path(&csv), "--operator", path(&op)])
            .status
            .code(),
        Some(1)
    );

    let off = qso(&["trajectory", path(&op), "--start", "0.5,0.5,0.5"]);
    assert_eq!(off.status.code(), Some(1));
    let garbled = qso(&["trajectory", path(&op), "--start", "a,b"]);
    assert_eq!(garbled.status.code(), Some(2));
}

#[test]
fn conjecture_csv_is_reproducible_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = qso(&[
            "conjecture",
            "--m",
            "3",
            "--f-policy",
            "all",
            "--trials",
            "30",
            "--seed",
            "9",
            "--csv",
            path(p),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let out = qso(&["replay", path(&a), "--m", "3"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(qso(&["conjecture", "--m", "1"]).status.code(), Some(2));
}

#[test]
fn fixed_points_and_ergodic() {
    let dir = tempfile::tempdir().unwrap();
    let op = dir.path().join("v0.json");
    qso(&["presets", "--emit", "ganikhodzhaev_v0", "-o", path(&op)]);
    let out = qso(&["fixed-points", path(&op), "--starts", "32"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = dir.path().join("e.csv");
    let out = qso(&[
        "ergodic",
        path(&op),
        "--start",
        "0.5,0.3,0.2",
        "-n",
        "500",
        "-o",
        path(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        qso(&["replay", path(&csv), "--operator", path(&op)])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(qso(&["presets", "--emit", "nope"]).status.code(), Some(2));
}
