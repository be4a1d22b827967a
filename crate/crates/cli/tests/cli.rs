//! End-to-end interface checks on the built binary: exit codes, emitted
//! file shapes, and re-emission from stored reports.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fadingbc"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("run.toml");
    std::fs::write(&path, body).unwrap();
    path
}

const BASE: &str = r#"
version = 1
power = "1.0"

[distribution]
atoms = [["3", "1", "0.5"], ["1", "3", "0.5"]]

[csit]
kind = "degradedness_bit"

[optimizer]
directions = 8
restarts = 2
grid_seed_levels = 3
step_tol = "1e-6"
max_iters = 60
seed = 7

[output]
dir = "out"
formats = ["csv", "json"]
fixed_r0 = "0.0"
"#;

#[test]
fn sumrate_prints_bits() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), BASE);
    let out = bin()
        .args(["sumrate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("2.000000 bits"), "stdout: {stdout}");
}

#[test]
fn bad_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &BASE.replace("version = 1", "version = 9"));
    let status = bin()
        .args(["sumrate", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    let cfg = write_config(
        dir.path(),
        &BASE.replace("power = \"1.0\"", "power = \"1.0\"\nwat = 3"),
    );
    let status = bin()
        .args(["region", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn computation_error_exits_3() {
    // sum-rate capacity needs order-revealing CSIT
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &BASE.replace("degradedness_bit", "none"));
    let status = bin()
        .args(["sumrate", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));

    // capacity is unknown for order-blind CSIT on a mixed-order law
    let status = bin()
        .args(["capacity", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn zero_power_region_csv_is_origin_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &BASE.replace("power = \"1.0\"", "power = \"0\""),
    );
    let out_dir = dir.path().join("out");
    let status = bin()
        .args(["region", "--config"])
        .arg(&cfg)
        .args(["--bound", "inner"])
        .arg("--out")
        .arg(&out_dir)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(out_dir.join("region_inner.csv")).unwrap();
    assert_eq!(csv, "0.000000000,0.000000000,0.000000000\n");
}

#[test]
fn emit_rerenders_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), BASE);
    let out_dir = dir.path().join("out");
    let status = bin()
        .args(["secrecy", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .args(["--format", "csv,json,svg"])
        .status()
        .unwrap();
    assert!(status.success());

    let emitted = dir.path().join("emitted");
    let status = bin()
        .args(["emit", "--report"])
        .arg(out_dir.join("report.json"))
        .args(["--format", "csv,svg"])
        .arg("--out")
        .arg(&emitted)
        .status()
        .unwrap();
    assert!(status.success());
    for name in [
        "secrecy_secrecy_inner.csv",
        "secrecy_secrecy_outer.csv",
        "secrecy_secrecy_outer_nocommon.csv",
        "secrecy_secrecy_outer_nocommon_slice.svg",
    ] {
        let a = std::fs::read(out_dir.join(name)).unwrap();
        let b = std::fs::read(emitted.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs after re-emission");
    }
}

#[test]
fn restriction_flag_reaches_solver() {
    // thm4-monotone needs an i.i.d. flag; without it the solver refuses
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &BASE.replace("degradedness_bit", "none"));
    let status = bin()
        .args(["region", "--config"])
        .arg(&cfg)
        .args(["--bound", "outer", "--restriction", "thm4-monotone"])
        .arg("--out")
        .arg(dir.path().join("o"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));

    // with iid it traces
    let cfg = write_config(
        dir.path(),
        &BASE
            .replace("degradedness_bit", "none")
            .replace("iid = false", "iid = true")
            .replace("atoms = ", "iid = true\natoms = "),
    );
    let status = bin()
        .args(["region", "--config"])
        .arg(&cfg)
        .args(["--bound", "outer", "--restriction", "thm4-monotone"])
        .arg("--out")
        .arg(dir.path().join("o2"))
        .status()
        .unwrap();
    assert!(status.success());
}
