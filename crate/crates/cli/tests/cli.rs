use std::process::Command;

use riccati_pade::BigFloat;
use rpm_cli::{emit_convergence_csv, run, write_convergence_csv, CliError, EigenvalueReportFile, RunConfig};

fn hydrogen() -> RunConfig {
    let mut cfg = RunConfig::new("-1/1", "-");
    cfg.nu_max = Some(1);
    cfg.dmax = 12;
    cfg.digits = 12;
    cfg
}

fn rpm(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rpm")).args(args).output().unwrap()
}

#[test]
fn hydrogen_report_round_trips() {
    let report = run(&hydrogen()).unwrap();
    assert!(report.complete());
    let eps: Vec<f64> = report.states.iter().map(|s| s.epsilon.parse().unwrap()).collect();
    assert_eq!(eps, vec![-0.25, -0.0625]);
    for s in &report.states {
        let v = s.value().unwrap();
        assert_eq!(v.to_decimal_full(), s.epsilon);
        assert_eq!(BigFloat::parse(s.precision_bits, &s.epsilon).unwrap(), v);
    }
    let back = EigenvalueReportFile::from_json(&report.to_json().unwrap()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn identical_configs_give_identical_reports() {
    let mut a = run(&hydrogen()).unwrap();
    let mut b = run(&hydrogen()).unwrap();
    for r in [&mut a, &mut b] {
        r.started_unix = 0;
        r.finished_unix = 0;
    }
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
}

#[test]
fn convergence_csv() {
    let report = run(&hydrogen()).unwrap();
    let mut buf = Vec::new();
    write_convergence_csv(&report, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("l,nu,D,L_D"));
    // exact levels: every difference is zero and the cell is blank
    assert!(lines.clone().count() > 0);
    assert!(lines.all(|l| l.ends_with(',')));

    let mut empty = report.clone();
    empty.states.clear();
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(emit_convergence_csv(&empty, &dir.path().join("x.csv")), Err(CliError::EmptyReport)));
    emit_convergence_csv(&report, &dir.path().join("ok.csv")).unwrap();
}

#[test]
fn binary_writes_json_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.json");
    let o = rpm(&[
        "run", "--alpha", "-1/1", "--sign", "-", "--l", "0", "--nu-max", "1", "--dmax", "12", "--digits", "12", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = EigenvalueReportFile::from_json(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(report.states.len(), 2);
    assert_eq!(report.config.alpha, "-1/1");
}

#[test]
fn usage_errors_exit_two() {
    let o = rpm(&["run", "--alpha", "1/2", "--sign", "-"]);
    assert_eq!(o.status.code(), Some(2));
    let o = rpm(&["run", "--alpha", "-3/2", "--sign", "-"]);
    assert_eq!(o.status.code(), Some(2));
    let o = rpm(&["run", "--alpha", "-1/2", "--sign", "-", "--dmax", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unconverged_states_exit_nonzero() {
    let o = rpm(&["run", "--alpha", "-1/2", "--sign", "-", "--nu", "0", "--dmax", "8", "--digits", "25", "--format", "text"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stdout));
}
