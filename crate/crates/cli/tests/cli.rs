use std::path::Path;
use std::process::Command;

use dtqw::series::LoopKernel;
use dtqw_cli::{
    emit_results, fit_peak_times, fit_scaling, run_sweep, run_sweeps, runtime_estimate, table1,
    ClassicalMethod, Emit, Format, QuantumMethod, SweepConfig, SweepResult,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dtqw"))
}

fn compare_cfg() -> SweepConfig {
    SweepConfig {
        quantum: Some(QuantumMethod::Series),
        classical: Some(ClassicalMethod::Dp),
        asymptotic: true,
        kernel: LoopKernel::Walk,
        t_max: Some(200),
    }
}

fn csv_of(results: &[SweepResult]) -> String {
    let mut buf = Vec::new();
    results.write_csv(&mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn csv_round_trip_is_bit_exact() {
    let results = run_sweeps::<f64>(&[4, 9], &compare_cfg()).unwrap();
    let text = csv_of(&results);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    let points: Vec<_> = results.iter().flat_map(|r| r.points.iter()).collect();
    assert_eq!(rows.len(), points.len());
    let parse = |s: &str| (!s.is_empty()).then(|| s.parse::<f64>().unwrap());
    for (row, p) in rows.iter().zip(points) {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f[1].parse::<usize>().unwrap(), p.t);
        assert_eq!(parse(f[2]).map(f64::to_bits), p.quantum.map(f64::to_bits));
        assert_eq!(parse(f[3]).map(f64::to_bits), p.classical.map(f64::to_bits));
        assert_eq!(parse(f[4]).map(f64::to_bits), p.asymptotic.map(f64::to_bits));
    }
}

#[test]
fn json_round_trip_is_bit_exact() {
    let results = run_sweeps::<f64>(&[6], &compare_cfg()).unwrap();
    let mut buf = Vec::new();
    results.write_json(&mut buf).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    for (j, p) in v[0]["points"].as_array().unwrap().iter().zip(&results[0].points) {
        assert_eq!(j["t"].as_u64().unwrap() as usize, p.t);
        assert_eq!(j["prob_quantum"].as_f64().map(f64::to_bits), p.quantum.map(f64::to_bits));
        assert_eq!(j["prob_asymptotic"].as_f64(), p.asymptotic);
    }
    assert_eq!(
        v[0]["quantum_peak"]["t_star"].as_u64().unwrap() as usize,
        results[0].quantum_peak.unwrap().t_star
    );
}

#[test]
fn empty_sweep_emits_header_only() {
    assert_eq!(
        csv_of(&[]),
        "n,t,prob_quantum,prob_classical,prob_asymptotic\n"
    );
}

#[test]
fn sweeps_are_deterministic() {
    let a = csv_of(&run_sweeps::<f64>(&[30, 5, 12], &compare_cfg()).unwrap());
    let b = csv_of(&run_sweeps::<f64>(&[12, 30, 5], &compare_cfg()).unwrap());
    assert_eq!(a, b);
}

#[test]
fn table_has_two_rows_of_six() {
    let t = table1(LoopKernel::Published).unwrap();
    assert_eq!(t.rows.len(), 12);
    for method in ["quantum", "classical"] {
        assert_eq!(t.rows.iter().filter(|r| r.method == method).count(), 6);
    }
    assert_eq!(t.find("classical", 500).unwrap().t_star, 3 * 500 - 8);
    assert_eq!(t.find("quantum", 10).unwrap().t_star, 16);
}

#[test]
fn runtime_near_peak_for_small_n() {
    let r = run_sweep::<f64>(10, &SweepConfig::default()).unwrap();
    let (t_best, _) = runtime_estimate(&r.column(|p| p.quantum)).unwrap();
    let peak = r.quantum_peak.unwrap().t_star;
    assert!(t_best.abs_diff(peak) <= 4, "t_best={t_best} peak={peak}");
}

#[test]
fn synthetic_exponential_fit() {
    let pts: Vec<(usize, f64)> = (20..=100).map(|n| (n, 3.0 * (0.7 * n as f64).exp())).collect();
    let fit = fit_scaling(&pts, 0.25).unwrap();
    assert!((fit.slope - 0.7).abs() < 1e-10);
}

#[test]
fn classical_peak_times_are_affine() {
    let cfg = SweepConfig {
        quantum: None,
        classical: Some(ClassicalMethod::Dp),
        ..SweepConfig::default()
    };
    let ns: Vec<usize> = (10..=200).step_by(10).collect();
    let peaks: Vec<(usize, usize)> = run_sweeps::<f64>(&ns, &cfg)
        .unwrap()
        .iter()
        .map(|r| (r.n, r.classical_peak.unwrap().t_star))
        .collect();
    let fit = fit_peak_times(&peaks).unwrap();
    assert!((fit.affine.0 - 3.0).abs() < 1e-12);
    assert!((fit.affine.1 + 8.0).abs() < 1e-9);
    assert!(fit.max_abs_residual_affine < 1e-9);
}

/// Peak times of the printed-kernel series grow like 1.46n with < 5% scatter.
#[test]
fn quantum_peak_time_trend() {
    let cfg = SweepConfig {
        kernel: LoopKernel::Published,
        ..SweepConfig::default()
    };
    let ns: Vec<usize> = (50..=500).step_by(25).collect();
    let peaks: Vec<(usize, usize)> = run_sweeps::<f64>(&ns, &cfg)
        .unwrap()
        .iter()
        .map(|r| (r.n, r.quantum_peak.unwrap().t_star))
        .collect();
    for &(n, t) in &peaks {
        let r = t as f64 / (1.46 * n as f64) - 1.0;
        assert!(r.abs() < 0.05, "n={n} t*={t}");
    }
    let fit = fit_peak_times(&peaks).unwrap();
    assert!((fit.proportional - 1.46).abs() < 0.05);
}

#[test]
fn emit_reports_the_failing_path() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    let err = emit_results(&Vec::<SweepResult>::new(), Format::Csv, Some(&bad)).unwrap_err();
    assert_eq!(err.kind(), "io");
    assert!(err.to_string().contains("out.csv"));
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn binary_subcommands_run() {
    let s = run_ok(&["series", "--n", "3,5", "--t-max", "30", "--compare"]);
    assert!(s.starts_with("n,t,prob_quantum,prob_classical,prob_asymptotic\n"));
    assert_eq!(s.lines().count(), 1 + 28 + 26);
    let s = run_ok(&["simulate", "--n", "4", "--t-max", "12", "--method", "tree"]);
    let p = run_ok(&["simulate", "--n", "4", "--t-max", "12"]);
    assert_eq!(s.lines().count(), p.lines().count());
    run_ok(&["asympt", "--n", "10", "--t-max", "40", "--format", "json"]);
    run_ok(&["classical", "--n", "10", "--t-max", "60", "--method", "integral"]);
    run_ok(&["series", "--n", "8", "--t-max", "40", "--precision", "f32"]);
    let s = run_ok(&["table1", "--kernel", "published"]);
    assert_eq!(s.lines().count(), 13);
    let s = run_ok(&["fit", "--n-min", "10", "--n-max", "80", "--n-step", "10"]);
    assert!(s.lines().any(|l| l.starts_with("ratio,,")));
    let s = run_ok(&["memchain-demo", "--n", "5", "--t-max", "3"]);
    assert_eq!(s.lines().count(), 1 + 4 * 5);
    let s = run_ok(&["line-demo", "--t-max", "5", "--format", "json"]);
    assert!(serde_json::from_str::<serde_json::Value>(&s).is_ok());
}

#[test]
fn binary_writes_files_identically() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = ["a.csv", "b.csv"].iter().map(|f| dir.path().join(f)).collect();
    for p in &paths {
        run_ok(&["series", "--n", "12,7", "--t-max", "90", "--out", p.to_str().unwrap()]);
    }
    let read = |p: &Path| std::fs::read(p).unwrap();
    assert_eq!(read(&paths[0]), read(&paths[1]));
    assert!(!read(&paths[0]).is_empty());
}

#[test]
fn binary_errors_are_json_lines() {
    for args in [
        vec!["series", "--n", "0"],
        vec!["series", "--n", "5", "--t-max", "2"],
        vec!["fit", "--n", "10,20"],
        vec!["simulate", "--n", "3", "--method", "nonsense"],
        vec!["table1", "--out", "/nonexistent/dir/x.csv"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert!(!out.status.success(), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
        assert!(v["error"].is_string() && v["kind"].is_string(), "{args:?}: {err}");
    }
}
