use std::process::Command as Process;

use charevo::charfunc::square_grid;
use charevo::fock::{chi_from_rho, integrate, state_to_fock};
use charevo::gaussian::StateSpec;
use charevo::linalg::{c, re};
use charevo::metrics::{eof_saturation, eof_symmetric, purity_squeezed_thermal_t};
use charevo::SystemParams;
use charevo_cli::commands::{self, FinalState};
use charevo_cli::config::{Command, RunConfig};
use charevo_cli::execute;

fn config(json: &str) -> RunConfig {
    let cfg: RunConfig = serde_json::from_str(json).unwrap();
    cfg.validate().unwrap();
    cfg
}

fn column(table: &charevo_cli::table::Table, name: &str) -> Vec<f64> {
    let k = table.columns.iter().position(|c| c == name).unwrap();
    table.rows.iter().map(|r| r[k]).collect()
}

fn binary() -> Process {
    Process::new(env!("CARGO_BIN_EXE_charevo"))
}

#[test]
fn evolve_vacuum_stays_pure() {
    let cfg = config(r#"{"params": {"eta": [[0]], "gamma_amp": [1]}, "times": {"start": 0, "stop": 5, "steps": 11}}"#);
    let table = commands::evolve(&cfg).unwrap();
    assert_eq!(table.rows.len(), 11);
    assert!(column(&table, "purity").iter().all(|&p| (p - 1.0).abs() < 1e-14));
}

#[test]
fn evolve_thermal_damps_to_vacuum() {
    let cfg = config(
        r#"{"params": {"eta": [[0]], "gamma_amp": [1], "nbar": [0]},
            "initial": {"family": "thermal", "n": 1}, "times": [0, 20]}"#,
    );
    let purity = column(&commands::evolve(&cfg).unwrap(), "purity");
    assert!((purity[0] - 1.0 / 3.0).abs() < 1e-14);
    assert!((purity[1] - 1.0).abs() < 1e-8);
}

#[test]
fn purity_curve_matches_squeezed_thermal_closed_form() {
    let cfg = config(
        r#"{"params": {"eta": [[0.5]], "gamma_amp": [0.4], "nbar": [0.1]},
            "initial": {"family": "squeezed_thermal", "n": 0.2, "r": 0.3}, "times": [0, 0.5, 1, 2, 4]}"#,
    );
    let table = commands::purity_curve(&cfg).unwrap();
    for row in &table.rows {
        let expected = purity_squeezed_thermal_t(0.2, 0.3, 0.1, 0.5, 0.4, row[0]).unwrap();
        assert!((row[1] - expected).abs() < 1e-10);
    }
}

#[test]
fn eof_curves() {
    let below = config(
        r#"{"params": {"eta1": 0.3, "gamma": 1, "nbar0": 0.4}, "times": {"start": 0, "stop": 10, "steps": 41}}"#,
    );
    assert!(column(&commands::eof_curve(&below).unwrap(), "eof").iter().all(|&e| e == 0.0));

    let supremum = config(r#"{"params": {"eta1": 0.5, "gamma": 1, "nbar0": 0}, "times": [40]}"#);
    let e = column(&commands::eof_curve(&supremum).unwrap(), "eof")[0];
    assert!((e - 0.5662).abs() < 1e-4);

    let strong = config(r#"{"params": {"eta1": 0.8, "gamma": 1, "nbar0": 0.6}, "times": [30]}"#);
    let e = column(&commands::eof_curve(&strong).unwrap(), "eof")[0];
    assert!((e - eof_symmetric(2.2 / 2.6).unwrap().value).abs() < 1e-10);
}

#[test]
fn eof_map_default_grid() {
    let table = commands::eof_map(&RunConfig::default()).unwrap();
    assert_eq!(table.columns, ["eta_ratio", "nbar0", "z", "eof"]);
    assert_eq!(table.rows.len(), 2500);
    for row in &table.rows {
        let (ratio, n0, e) = (row[0], row[1], row[3]);
        assert_eq!(e > 0.0, ratio > n0, "{ratio} {n0}");
        let p = SystemParams::two_mode_symmetric(re(ratio), 1.0, n0).unwrap();
        assert!((e - eof_saturation(&p).unwrap().value).abs() < 1e-12);
    }
    let first_row: Vec<f64> = table.rows.iter().filter(|r| r[1] == 0.0).map(|r| r[3]).collect();
    assert!(first_row.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn sweep_applies_ratio_after_gamma() {
    let cfg = config(
        r#"{"params": {"eta1": 0, "gamma": 1, "nbar0": 0},
            "sweep": [{"name": "eta_ratio", "min": 0.5, "max": 0.5, "steps": 1},
                      {"name": "gamma", "min": 2, "max": 2, "steps": 1}]}"#,
    );
    let p = cfg.params_at(&cfg.grid()[0]).unwrap();
    assert!((p.eta()[(0, 1)] - re(1.0)).norm() < 1e-15);
}

fn final_cm(result: &commands::PipelineResult) -> Vec<Vec<f64>> {
    match &result.final_state {
        FinalState::Gaussian { real_cm, .. } => real_cm.clone(),
        FinalState::Pointwise { .. } => panic!("expected a Gaussian final state"),
    }
}

#[test]
fn pipeline_stages_compose() {
    let stage =
        |t: f64| format!(r#"{{"params": {{"eta": [[0]], "gamma_amp": [0.7], "nbar": [0.3]}}, "duration": {t}}}"#);
    let initial = r#""initial": {"family": "squeezed", "r": 0.4}"#;
    let split = config(&format!(r#"{{{initial}, "stages": [{}, {}]}}"#, stage(0.4), stage(0.9)));
    let whole = config(&format!(r#"{{{initial}, "stages": [{}]}}"#, stage(1.3)));
    let (a, b) = (final_cm(&commands::pipeline(&split).unwrap()), final_cm(&commands::pipeline(&whole).unwrap()));
    for (ra, rb) in a.iter().zip(&b) {
        for (x, y) in ra.iter().zip(rb) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn pipeline_amplify_then_damp_matches_oracle() {
    let cfg = config(
        r#"{"initial": {"family": "fock", "n": 1}, "stages": [
            {"params": {"eta": [[0.3]], "gamma_amp": [0]}, "duration": 0.5},
            {"params": {"eta": [[0]], "gamma_amp": [1], "nbar": [0.2]}, "duration": 1.0}]}"#,
    );
    let result = commands::pipeline(&cfg).unwrap();
    let FinalState::Pointwise { chi } = &result.final_state else { panic!("expected pointwise state") };

    let amp = SystemParams::one_mode(re(0.3), 0.0, 0.0, re(0.0)).unwrap();
    let damp = SystemParams::one_mode(re(0.0), 1.0, 0.2, re(0.0)).unwrap();
    let rho0 = state_to_fock(&StateSpec::Fock { n: 1 }, 30).unwrap();
    let mid = integrate(&rho0, &amp, 0.5, 1e-3).unwrap();
    let end = integrate(&mid.rho, &damp, 1.0, 1e-3).unwrap();
    assert_eq!(chi.len(), 25);
    for row in chi {
        let oracle = chi_from_rho(&end.rho, &[c(row[0], row[1])]).unwrap();
        assert!((c(row[2], row[3]) - oracle).norm() < 1e-5);
    }
    let purity = column(&result.stages, "purity");
    assert!((purity[0] - 1.0).abs() < 1e-8);
}

#[test]
fn empty_pipeline_is_identity() {
    let cfg = config(r#"{"initial": {"family": "coherent", "m": [[0.3, -0.2]]}}"#);
    let result = commands::pipeline(&cfg).unwrap();
    assert_eq!(result.stages.rows.len(), 1);
    assert_eq!(result.stages.rows[0][..3], [0.0, 0.0, 1.0]);
    assert!((result.stages.rows[0][3] - 1.0).abs() < 1e-14);
    match result.final_state {
        FinalState::Gaussian { mean, real_cm } => {
            assert_eq!(mean, vec![[0.3, -0.2]]);
            assert!((real_cm[0][0] - 0.5).abs() < 1e-15 && real_cm[0][1].abs() < 1e-15);
        }
        FinalState::Pointwise { .. } => panic!("expected a Gaussian final state"),
    }
}

#[test]
fn pipeline_phase_stage_goes_pointwise() {
    let cfg = config(
        r#"{"initial": {"family": "coherent", "m": [1.0]}, "quad_order": 128, "stages": [
            {"params": {"eta": [[0]], "gamma_amp": [0], "gamma_phase": [0.5]}, "duration": 1.0}]}"#,
    );
    let result = commands::pipeline(&cfg).unwrap();
    assert_eq!(column(&result.stages, "gaussian"), [1.0, 0.0]);
    // Dephasing keeps the photon distribution, so purity drops below 1.
    let purity = column(&result.stages, "purity")[1];
    assert!(purity < 0.9 && purity > 0.3);

    let mixed = config(
        r#"{"initial": {"family": "vacuum"}, "stages": [
            {"params": {"eta": [[0.2]], "gamma_amp": [1], "gamma_phase": [0.5]}, "duration": 1.0}]}"#,
    );
    let err = execute(Command::Pipeline, &mixed).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn oracle_check_general_case_passes() {
    let cfg = config(
        r#"{"params": {"eta": [[0.3]], "gamma_amp": [1], "nbar": [0.2]},
            "initial": {"family": "coherent", "m": [0.5]}, "times": [0.5, 1, 2]}"#,
    );
    let outcome = commands::oracle_check(&cfg).unwrap();
    assert!(outcome.passed());
    assert!(outcome.report.max_abs_chi_error <= 1e-4);
    assert!(outcome.report.max_purity_error <= 1e-6);
    assert_eq!(outcome.report.cutoff, 30);
}

#[test]
fn oracle_check_number_state_with_phase_damping() {
    let cfg = config(
        r#"{"params": {"eta": [[0]], "gamma_amp": [0.6], "nbar": [0.1], "gamma_phase": [0.4]},
            "initial": {"family": "fock", "n": 2}, "times": [0.5, 1]}"#,
    );
    let outcome = commands::oracle_check(&cfg).unwrap();
    assert!(outcome.passed(), "{:?}", outcome.report);
    assert!(outcome.report.max_purity_error <= 1e-6);
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("oracle.json");
    std::fs::write(
        &path,
        r#"{"mode": "oracle-check", "params": {"eta": [[0.3]], "gamma_amp": [1], "nbar": [0.2]},
            "initial": {"family": "coherent", "m": [0.5]}, "times": [0.5, 1, 2]}"#,
    )
    .unwrap();

    let ok = binary().arg("--config").arg(&path).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let report: charevo::OracleReport = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(report.cutoff, 30);

    let tiny = binary().arg("--config").arg(&path).args(["--oracle-cutoff", "5"]).output().unwrap();
    assert_eq!(tiny.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&tiny.stderr).contains("cutoff 5 too small"));

    let strict = binary().arg("--config").arg(&path).args(["--tol", "1e-12"]).output().unwrap();
    assert_eq!(strict.status.code(), Some(3));

    let missing = binary().arg("evolve").output().unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let bad_sweep = binary().args(["eof-map", "--sweep", "eta=0:1:3"]).output().unwrap();
    assert_eq!(bad_sweep.status.code(), Some(2));

    let no_file = binary().args(["eof-map", "--config"]).arg(dir.path().join("absent.json")).output().unwrap();
    assert_eq!(no_file.status.code(), Some(2));
}

#[test]
fn sweeps_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, format: &str| {
        let out = dir.path().join(name);
        let status = binary()
            .args(["eof-curve", "--format", format, "--out"])
            .arg(&out)
            .args(["--sweep", "eta_ratio=0:1:17", "--sweep", "nbar0=0:0.6:5"])
            .arg("--config")
            .arg(dir.path().join("c.json"))
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    std::fs::write(
        dir.path().join("c.json"),
        r#"{"params": {"eta1": 0, "gamma": 1}, "times": {"start": 0, "stop": 10, "steps": 21}}"#,
    )
    .unwrap();
    let (a, b) = (run("a.csv", "csv"), run("b.csv", "csv"));
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eta_ratio,nbar0,t,z,eof"));
    assert_eq!(text.lines().count(), 1 + 17 * 5 * 21);
    let field = lines.next().unwrap().split(',').nth(3).unwrap();
    assert_eq!(field, "1.00000000000e0");
    assert_eq!(run("a.json", "json"), run("b.json", "json"));
}

#[test]
fn config_mode_and_overrides() {
    let cfg: RunConfig =
        serde_json::from_str(r#"{"mode": "eof-map", "sweep": [{"name": "nbar0", "min": 0, "max": 1, "steps": 0}]}"#)
            .unwrap();
    assert!(cfg.validate().is_err());
    assert!(serde_json::from_str::<RunConfig>(r#"{"unknown": 1}"#).is_err());
    let grid = square_grid(3, 1.0);
    assert_eq!(commands::probe_points(2).len(), grid.len() * grid.len());
}
