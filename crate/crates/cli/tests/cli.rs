//! End-to-end checks of the `nclab` binary: exit codes, reproducibility, and
//! the documented example invocations.

use std::path::Path;
use std::process::{Command, Output};

fn nclab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nclab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn riemann_example_lists_the_two_shocks() {
    let dir = tempfile::tempdir().unwrap();
    let out = nclab(
        &["riemann", "--flux", "cubic", "--kinetic", "linear:0.75", "--ul", "1", "--ur", "-0.5"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("2 wave(s)"), "{text}");
    assert!(text.contains("nonclassical shock: 1.000000 -> -0.750000, speed 0.812500"), "{text}");
    assert!(text.contains("classical shock: -0.750000 -> -0.500000, speed 1.187500"), "{text}");
    let csv = std::fs::read_to_string(dir.path().join("out/riemann_waves.csv")).unwrap();
    assert!(csv.starts_with("# nclab-artifact v1\n"), "{csv}");
    assert!(csv.contains("# command=riemann"), "{csv}");
    assert!(csv.contains("# columns: wave_index,kind,u_minus,u_plus,speed_lo,speed_hi"), "{csv}");
}

#[test]
fn tw_example_emits_a_ten_row_linear_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = nclab(
        &["tw", "--alpha", "1", "--p", "0.5", "--ugrid", "0.2:2:10"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let table = std::fs::read_to_string(dir.path().join("out/tw_table.txt")).unwrap();
    let mut lines = table.lines();
    assert!(lines.next().unwrap().starts_with("# kinetic-table v1 flux=cubic"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (a, b) = l.split_once('\t').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 10);
    let ratios: Vec<f64> = rows.iter().map(|(u, v)| v / u).collect();
    let spread = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread < 1e-6, "ratio spread {spread}");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let args = ["tw", "--alpha", "1", "--p", "0.5", "--ugrid", "0.3:1.5:5"];
    assert!(nclab(&args, d1.path()).status.success());
    assert!(nclab(&args, d2.path()).status.success());
    let a = std::fs::read(d1.path().join("out/tw_table.txt")).unwrap();
    let b = std::fs::read(d2.path().join("out/tw_table.txt")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn config_file_round_trips_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("exp.cfg");
    std::fs::write(&cfg_path, "command=riemann\nkinetic=linear:0.6\nul=1\nur=-0.4\n").unwrap();
    let out = nclab(
        &["riemann", "--config", cfg_path.to_str().unwrap(), "--ur", "-0.5"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("(1, -0.5)"), "flag must override the file: {text}");
    // The artifact header re-parses to the exact run configuration.
    let csv = std::fs::read_to_string(dir.path().join("out/riemann_waves.csv")).unwrap();
    assert!(csv.contains("# kinetic=linear:0.6"), "{csv}");
    assert!(csv.contains("# ur=-0.5"), "{csv}");
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("bad.cfg");
    std::fs::write(&cfg_path, "command=riemann\nwibble=1\n").unwrap();
    let out = nclab(&["riemann", "--config", cfg_path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("wibble"));
}

#[test]
fn invalid_kinetic_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = nclab(
        &["riemann", "--kinetic", "linear:1.2", "--ul", "1", "--ur", "-0.5"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
}

#[test]
fn numerical_blowup_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // Negative diffusion is anti-dissipative: the run leaves the finite range.
    let out = nclab(
        &[
            "fd", "--order", "3", "--alpha", "0", "--beta", "-5", "--h", "0.1", "--domain",
            "-4:6", "--ul", "1", "--ur", "-0.5", "--t-end", "2",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn validate_single_criterion_passes_and_unknown_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = nclab(&["validate", "--only", "zero-dissipation"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("PASS zero-dissipation:"), "{}", stdout(&out));
    let out = nclab(&["validate", "--only", "no-such"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn worker_count_env_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_nclab"))
        .args(["validate", "--only", "zero-dissipation"])
        .env("NCLAB_WORKERS", "2")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_nclab"))
        .args(["validate", "--only", "zero-dissipation"])
        .env("NCLAB_WORKERS", "zero")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cauchy_emits_diagnostics_with_nonincreasing_v() {
    let dir = tempfile::tempdir().unwrap();
    let out = nclab(
        &[
            "cauchy", "--kinetic", "linear:0.75", "--states", "1,0,-0.5", "--jumps", "-1,0",
            "--domain", "-12:12", "--n-cells", "48", "--t-end", "3",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("out/cauchy_diagnostics.csv")).unwrap();
    let vs: Vec<f64> = csv
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(vs.len() > 1, "expected interactions: {csv}");
    assert!(vs.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{vs:?}");
}

#[test]
fn table_kinetic_spec_round_trips_through_the_solver() {
    let dir = tempfile::tempdir().unwrap();
    // Produce a table, then use it as the kinetic function of a Riemann solve.
    let out = nclab(&["tw", "--alpha", "1", "--p", "0.5", "--ugrid", "0.2:2:10"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let out = nclab(
        &["riemann", "--kinetic", "table:out/tw_table.txt", "--ul", "1", "--ur", "-0.9"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("nonclassical shock"), "{text}");
}
