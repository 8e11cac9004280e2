use std::time::{SystemTime, UNIX_EPOCH};

use riccati_pade::eigensolve::solve;
use riccati_pade::oracle::oracle_eigenvalue;
use riccati_pade::rpm::ProblemSpec;
use riccati_pade::Real;

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{EigenvalueReportFile, MissingState, StateRecord, REPORT_VERSION};

pub(crate) fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// Attaches the oracle value and relative gap; oracle failures leave the
/// fields empty.
pub(crate) fn oracle_check(spec: &ProblemSpec, state: &mut StateRecord) {
    if let Ok(o) = oracle_eigenvalue(spec, state.nu) {
        let value = state.value().map(|v| v.to_f64()).unwrap_or(f64::NAN);
        state.oracle_value = Some(o.value);
        state.oracle_bound = Some(o.error_bound);
        state.oracle_gap = Some((value - o.value).abs() / o.value.abs());
    }
}

/// Sweeps `D` for every requested `l` and collects the requested states.
pub fn run(config: &RunConfig) -> Result<EigenvalueReportFile> {
    let exponent = config.validate()?;
    let started_unix = unix_now();
    let solve_cfg = config.solve_config();
    let mut states = Vec::new();
    let mut missing = Vec::new();
    for l in config.requested_l() {
        let spec = ProblemSpec::new(exponent, l);
        let solution = solve(&spec, &solve_cfg)?;
        for nu in config.requested_nu() {
            match solution.state(nu) {
                Some(r) => {
                    let mut record = StateRecord::from_report(r);
                    if config.oracle_check {
                        oracle_check(&spec, &mut record);
                    }
                    states.push(record);
                }
                None => missing.push(MissingState {
                    l,
                    nu,
                    reason: format!("no root sequence settled on this level by D = {}", config.dmax),
                }),
            }
        }
    }
    Ok(EigenvalueReportFile {
        version: REPORT_VERSION,
        generator: concat!("riccati-pade-cli ", env!("CARGO_PKG_VERSION")).to_string(),
        config: config.clone(),
        started_unix,
        finished_unix: unix_now(),
        states,
        missing,
    })
}
