//! End-to-end tests of the command-line binary: output format, exit-code
//! contract, config precedence, and file emission.

use std::collections::HashMap;
use std::io::Write;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_phonon-blockade"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn parse_report(stdout: &str) -> HashMap<String, String> {
    stdout
        .lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn value(report: &HashMap<String, String>, key: &str) -> f64 {
    report
        .get(key)
        .unwrap_or_else(|| panic!("missing key `{key}`"))
        .parse()
        .unwrap_or_else(|_| panic!("unparsable value for `{key}`"))
}

#[test]
fn solve_baseline_report() {
    let (code, stdout, _) = run(&["solve"]);
    assert_eq!(code, 0);
    let report = parse_report(&stdout);
    let g2 = value(&report, "g2_numeric");
    assert!(g2 > 0.0 && g2 < 1e-3, "g2 = {g2}");
    assert!(value(&report, "fidelity") > 0.99);
    assert!(value(&report, "residual") <= 1e-10);
    assert!(value(&report, "g2_analytic") > 0.0);
    assert_eq!(report.get("method").unwrap(), "nullspace");
    assert_eq!(report.get("truncation").unwrap(), "(3, 10)");
}

#[test]
fn solve_thermal_oracle() {
    let (code, stdout, _) = run(&[
        "solve", "--g", "0", "--n-th", "0.5", "--epsilon", "0", "--na", "2", "--nb", "24",
    ]);
    assert_eq!(code, 0);
    let report = parse_report(&stdout);
    assert!((value(&report, "g2_numeric") - 2.0).abs() < 1e-6);
    assert!((value(&report, "mean_phonons") - 0.5).abs() < 1e-6);
}

#[test]
fn solve_vacuum_is_numerical_failure() {
    let (code, _, stderr) = run(&["solve", "--epsilon", "0"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("InsufficientOccupation"), "stderr: {stderr}");
}

#[test]
fn usage_errors_exit_one() {
    let (code, _, _) = run(&["solve", "--bogus-flag", "1"]);
    assert_eq!(code, 1);
    let (code, _, stderr) = run(&["solve", "--gamma", "0"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("gamma"));
    let (code, _, _) = run(&["figure", "9"]);
    assert_eq!(code, 1);
}

#[test]
fn help_exits_zero() {
    let (code, stdout, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("solve"));
}

#[test]
fn analytic_report_consistency() {
    let (code, stdout, _) = run(&["analytic"]);
    assert_eq!(code, 0);
    let report = parse_report(&stdout);
    // at zero detuning the general and resonant forms coincide
    let general = value(&report, "g2_analytic");
    let resonant = value(&report, "g2_resonant");
    assert!((general - resonant).abs() <= 1e-12 * resonant);
    assert!((value(&report, "cooperativity") - 1600.0).abs() < 1e-9);
    assert!(value(&report, "g2_two_phonon_resonance") > 1.0);
}

#[test]
fn preset_pipeline_report() {
    let (code, stdout, _) = run(&["solve", "--preset", "membrane"]);
    assert_eq!(code, 0);
    let report = parse_report(&stdout);
    assert!((value(&report, "alpha_abs") - 1e4).abs() < 1.0);
    assert!((value(&report, "g_eff_hz") - 2.45e6).abs() < 1.0);
    assert_eq!(report.get("rwa").unwrap(), "ok");
    let n_th = value(&report, "n_th");
    assert!(n_th > 1e-6 && n_th < 1e-4, "n_th = {n_th}");
    assert!(value(&report, "cooperativity") > 100.0);
}

#[test]
fn config_file_precedence() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "g = 1\ngamma = 0.02").unwrap();
    let path = f.path().to_str().unwrap();

    // file value shows up in the analytic cooperativity: 4*1/(1*0.02) = 200
    let (code, stdout, _) = run(&["analytic", "--config", path]);
    assert_eq!(code, 0);
    let report = parse_report(&stdout);
    assert!((value(&report, "cooperativity") - 200.0).abs() < 1e-9);

    // flag beats file: g = 2 gives 4*4/(1*0.02) = 800
    let (code, stdout, _) = run(&["analytic", "--config", path, "--g", "2"]);
    assert_eq!(code, 0);
    let report = parse_report(&stdout);
    assert!((value(&report, "cooperativity") - 800.0).abs() < 1e-9);

    // unknown config keys are usage errors
    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "coupling = 1").unwrap();
    let (code, _, stderr) = run(&["analytic", "--config", bad.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stderr.contains("coupling"));
}

#[test]
fn figure_four_emits_files() {
    let dir = tempfile::tempdir().unwrap();
    let outdir = dir.path().to_str().unwrap();
    let (code, stdout, _) = run(&["figure", "4", "--outdir", outdir]);
    assert_eq!(code, 0);
    let report = parse_report(&stdout);
    assert_eq!(report.get("failed_rows").unwrap(), "0");

    let csv = std::fs::read_to_string(dir.path().join("fig4.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 102);
    assert_eq!(
        lines[0],
        "delta_p,g2_numeric,g2_analytic,mean_phonons,residual,error"
    );
    // the zero-detuning row shows the blockade dip
    let dip_row: Vec<&str> = lines
        .iter()
        .find(|l| l.starts_with("0e0,"))
        .expect("zero-detuning row")
        .split(',')
        .collect();
    let dip: f64 = dip_row[1].parse().unwrap();
    assert!(dip < 1e-3, "dip = {dip}");

    let svg = std::fs::read_to_string(dir.path().join("fig4.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<polyline"));
}

#[test]
fn sweep_specfile_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec_path = dir.path().join("spec.txt");
    std::fs::write(
        &spec_path,
        "axis = delta_p linear -1 1 3\noutputs = g2_numeric\nna = 2\nnb = 5\n",
    )
    .unwrap();
    let outdir = dir.path().to_str().unwrap();
    let (code, stdout, _) = run(&[
        "sweep",
        spec_path.to_str().unwrap(),
        "--outdir",
        outdir,
    ]);
    assert_eq!(code, 0);
    let report = parse_report(&stdout);
    assert_eq!(report.get("rows").unwrap(), "3");
    assert!(dir.path().join("sweep.csv").exists());
    assert!(dir.path().join("sweep.svg").exists());

    // invalid spec is a usage error
    std::fs::write(&spec_path, "bogus = 1\n").unwrap();
    let (code, _, stderr) = run(&["sweep", spec_path.to_str().unwrap(), "--outdir", outdir]);
    assert_eq!(code, 1);
    assert!(stderr.contains("bogus"));
}

#[test]
fn validate_detects_insufficient_truncation() {
    let (code, stdout, _) = run(&["validate", "--nb", "2"]);
    assert_eq!(code, 3);
    assert!(stdout.contains("truncation_convergence = fail"), "stdout: {stdout}");
}
