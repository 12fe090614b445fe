use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fwm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fwm")).args(args).output().expect("spawn fwm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn sweep_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "ent.cfg", "# Q for P = 10\nmode=entanglement\np=10\nr=0.5\ngrid_points=5\n");
    let out = fwm(&["sweep", &cfg]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "sL,Q,entangled_flag"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[2][0], "3.14159265e0");
}

#[test]
fn output_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig2a.csv");
    let out = fwm(&["preset", "fig2a", "--set", "grid_points=5", "-o", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(&csv).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 5);
    // sL = pi/2 sits on the second grid point.
    assert_eq!(rows[1], ["1.57079633e0", "7.22991690e-1", "2.77008310e-1"]);
    assert!(text.contains("# assumption: coherent amplitude alpha = 1"));
}

#[test]
fn preset_runs_are_byte_identical() {
    let a = fwm(&["preset", "fig3b"]);
    let b = fwm(&["preset", "fig3b"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("# assumption: squeezing parameter r = 0.5"));
}

#[test]
fn printed_preset_config_runs_the_same_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let printed = fwm(&["preset", "fig4b", "--print-config"]);
    assert!(printed.status.success());
    let cfg = write(dir.path(), "fig4b.cfg", &stdout(&printed));
    assert_eq!(fwm(&["sweep", &cfg]).stdout, fwm(&["preset", "fig4b"]).stdout);
}

#[test]
fn list_presets() {
    let out = fwm(&["preset", "--list"]);
    let names: Vec<String> = stdout(&out).lines().map(str::to_string).collect();
    assert_eq!(names.len(), 10);
    assert!(names.contains(&"sodium_d1".to_string()));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.cfg", "mode=amplitudes\np=abc\n");
    let out = fwm(&["sweep", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let unknown = write(dir.path(), "unknown.cfg", "mode=amplitudes\np=1\nwat=3\n");
    let out = fwm(&["sweep", &unknown]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3: unknown key `wat`"));

    let empty = write(dir.path(), "empty.cfg", "");
    assert_eq!(fwm(&["sweep", &empty]).status.code(), Some(2));
    assert_eq!(fwm(&["preset", "fig9"]).status.code(), Some(2));
    assert_eq!(fwm(&["preset", "sodium_d1"]).status.code(), Some(2));
    assert_eq!(fwm(&["preset", "fig2a", "--set", "grid_points=1"]).status.code(), Some(2));
}

#[test]
fn unreadable_and_unwritable_paths_exit_1() {
    assert_eq!(fwm(&["sweep", "/nonexistent/x.cfg"]).status.code(), Some(1));
    let out = fwm(&["preset", "fig2a", "-o", "/nonexistent/dir/out.csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_reports_and_gates() {
    let ok = fwm(&["validate", "--preset", "sodium_d1", "--set", "g_mhz=0.5", "--set", "alpha0=10", "--set", "delta_k=4e-9"]);
    assert!(ok.status.success(), "{}", stderr(&ok));
    assert!(stdout(&ok).contains("dispersive regime: PASS"));

    let strong = fwm(&["validate", "--preset", "sodium_d1", "--set", "g_mhz=50", "--set", "alpha0=10", "--set", "delta_k=4e-9"]);
    assert_eq!(strong.status.code(), Some(3));
    assert!(stdout(&strong).contains("dispersive regime: FAIL"));

    let missing = fwm(&["validate", "--preset", "sodium_d1"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("g_mhz"));
}

#[test]
fn physical_sweep_gated_by_dispersive_check() {
    let dir = tempfile::tempdir().unwrap();
    let base = "mode=amplitudes\nomega_mhz=60\ndelta_one_mhz=3000\ndelta_two_mhz=50\nalpha0=10\ndelta_k=4e-9\ngrid_points=3\n";
    let ok = write(dir.path(), "ok.cfg", &format!("{base}g_mhz=0.5\n"));
    assert!(fwm(&["sweep", &ok]).status.success());
    let strong = write(dir.path(), "strong.cfg", &format!("{base}g_mhz=50\n"));
    assert_eq!(fwm(&["sweep", &strong]).status.code(), Some(3));
    let zero_dk = write(dir.path(), "zero.cfg", &format!("{base}g_mhz=0.5\ndelta_k=0\n"));
    assert_eq!(fwm(&["sweep", &zero_dk]).status.code(), Some(2));
}

#[test]
fn transfer_report_summary() {
    let out = fwm(&["transfer-report", "--p-points", "20", "--phase-points", "181"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# maximum efficiency"));
    assert_eq!(data_rows(&text).len(), 20);
    assert_eq!(fwm(&["transfer-report", "-r", "0"]).status.code(), Some(2));
}
