use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn freeprice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freeprice"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value(text: &str, key: &str) -> Option<String> {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .map(|v| v.trim_end_matches('i').to_string())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn spectrum_prints_onset_constants() {
    let dir = tempfile::tempdir().unwrap();
    let o = freeprice(&["spectrum", "--out", path_str(dir.path())]);
    assert!(o.status.success());
    let text = stdout(&o);
    let a0: f64 = value(&text, "a0").unwrap().parse().unwrap();
    let r0: f64 = value(&text, "R0").unwrap().parse().unwrap();
    let l0: f64 = value(&text, "lambda0").unwrap().parse().unwrap();
    assert!((a0 - 3.940733135692915).abs() < 1e-9);
    assert!((r0 - 9.359088829373068).abs() < 1e-9);
    assert!((31.0..=31.2).contains(&l0));
    assert!(value(&text, "a0").unwrap().len() >= 13, "at least 12 significant digits");
    for f in ["crossings.csv", "spectrum_curves.csv", "spectrum.svg"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let svg = fs::read_to_string(dir.path().join("spectrum.svg")).unwrap();
    assert!(svg.contains("asinh(R)"));
}

#[test]
fn short_scan_has_one_crossing_row() {
    let dir = tempfile::tempdir().unwrap();
    let o = freeprice(&["spectrum", "--a_max", "5", "--format", "csv", "--out", path_str(dir.path())]);
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("crossings.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2, "{csv}");
    assert!(!dir.path().join("spectrum.svg").exists());
}

#[test]
fn unwritable_output_fails_without_partial_files() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("plain_file");
    fs::write(&blocker, "x").unwrap();
    let target = blocker.join("out");
    let o = freeprice(&["spectrum", "--out", path_str(&target)]);
    assert!(!o.status.success());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn waves_default_is_the_sign_profile() {
    let dir = tempfile::tempdir().unwrap();
    let o = freeprice(&["waves", "--out", path_str(dir.path())]);
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("wave.csv")).unwrap();
    let w_at = |x: f64| -> f64 {
        csv.lines()
            .skip(1)
            .map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()).collect::<Vec<_>>())
            .find(|r| (r[0] - x).abs() < 1e-12)
            .map(|r| r[1])
            .unwrap()
    };
    assert!((w_at(3.0) + 0.9841631132879322).abs() < 1e-15);
    assert!((w_at(1.0) + 0.1353352832366127).abs() < 1e-15);
    assert_eq!(w_at(-3.0), 1.0);
    assert_eq!(value(&stdout(&o), "required_R").unwrap(), "-1");
}

#[test]
fn waves_existence_map() {
    let dir = tempfile::tempdir().unwrap();
    let out = path_str(dir.path());
    let run = |phi: &str, r: &str| value(&stdout(&freeprice(&["waves", "--phi", phi, "--R", r, "--out", out])), "existence").unwrap();
    let rho: f64 = run("tanh", "-2").parse().unwrap();
    assert!((rho - 2.597088399482468).abs() < 1e-10);
    assert_eq!(run("tanh", "-0.7"), "none");
    assert_eq!(run("linear", "-1"), "ALL_RHO");
    assert_eq!(run("sign", "-10"), "10");
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# wave settings\nc = 0.5\nrho = 3   # amplitude\n").unwrap();
    let out = dir.path().join("o");
    let o = freeprice(&["waves", "--config", path_str(&cfg), "--rho", "2", "--out", path_str(&out)]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(value(&text, "c").unwrap(), "0.5");
    assert_eq!(value(&text, "rho").unwrap(), "2");
}

#[test]
fn invalid_configuration_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "t_end = 3\n").unwrap();
    let missing = dir.path().join("missing.cfg");
    let cases: Vec<Vec<&str>> = vec![
        vec!["waves", "--config", path_str(&bad)],
        vec!["waves", "--config", path_str(&missing)],
        vec!["waves", "--c", "0"],
        vec!["waves", "--t_end", "3"],
        vec!["simulate", "--grid.h", "0.3"],
        vec!["simulate", "--phi", "cubic"],
        vec!["spectrum", "--format", "pdf"],
    ];
    for mut args in cases {
        args.extend(["--out", path_str(&out)]);
        let o = freeprice(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert!(!out.exists());
}

#[test]
fn simulate_defaults_report_period() {
    let dir = tempfile::tempdir().unwrap();
    let o = freeprice(&[
        "simulate",
        "--out",
        path_str(dir.path()),
        "--snapshot_times",
        "1.6,1.6261,1.6522,1.6783",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let period: f64 = value(&text, "period").unwrap().parse().unwrap();
    assert!((period - 0.2088).abs() / 0.2088 < 0.05, "{period}");
    assert_eq!(value(&text, "classification").unwrap(), "PERIODIC");
    let trace = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert_eq!(trace.lines().next().unwrap(), "t,p,p_prime,flux");
    assert_eq!(trace.lines().count(), 20_002);
    assert!(dir.path().join("p.svg").exists());
    let field = fs::read_to_string(dir.path().join("field.svg")).unwrap();
    assert_eq!(field.matches("<polyline").count(), 4);
    let snap = fs::read_to_string(dir.path().join("snapshots/snapshot_t1.626000.csv")).unwrap();
    assert_eq!(snap.lines().next().unwrap(), "x,w");
    assert_eq!(snap.lines().count(), 202);
}

#[test]
fn simulate_without_coupling_decays() {
    let dir = tempfile::tempdir().unwrap();
    let o = freeprice(&["simulate", "--R", "0", "--out", path_str(dir.path())]);
    assert!(o.status.success());
    assert_eq!(value(&stdout(&o), "status").unwrap(), "decayed");
}

#[test]
fn linear_coupling_blows_up_with_partial_trace() {
    let dir = tempfile::tempdir().unwrap();
    let o = freeprice(&["simulate", "--phi", "linear", "--out", path_str(dir.path())]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert_eq!(value(&text, "status").unwrap(), "blowup");
    assert_eq!(value(&text, "classification").unwrap(), "UNBOUNDED");
    let rows = fs::read_to_string(dir.path().join("trace.csv")).unwrap().lines().count();
    assert!(rows > 1000 && rows < 20_002, "{rows}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = freeprice(&["simulate", "--t_end", "0.3", "--format", "csv", "--out", path_str(dir.path())]);
        assert!(o.status.success());
        let o = freeprice(&["waves", "--phi", "tanh", "--c", "-0.5", "--format", "csv", "--out", path_str(dir.path())]);
        assert!(o.status.success());
    }
    for f in ["trace.csv", "wave.csv", "snapshots/snapshot_t0.300000.csv"] {
        let x = fs::read(a.path().join(f)).unwrap();
        let y = fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
}

#[test]
fn sweep_writes_classification_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = freeprice(&["sweep", "--R_values", "12,0,-0.5", "--t_end", "1", "--out", path_str(dir.path())]);
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "R,classification,amplitude,period,dispersion");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("-5.0000000000000000e-1,DECAY"), "{}", lines[1]);
    assert!(lines[2].starts_with("0.0000000000000000e0,DECAY"), "{}", lines[2]);
    assert!(dir.path().join("sweep.svg").exists());
}

#[test]
fn verify_passes_and_catches_corruption() {
    let o = freeprice(&["verify"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.lines().filter(|l| l.starts_with("PASS ")).count() >= 9);
    assert!(!text.contains("FAIL"));

    let o = freeprice(&["verify", "--delta_mass", "1.1"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("FAIL equilibrium_stationarity"));
}

#[test]
fn help_exits_cleanly() {
    let o = freeprice(&["simulate", "--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("--grid.h"));
    assert_eq!(freeprice(&[]).status.code(), Some(2));
}
