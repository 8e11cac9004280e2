use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use riccati_pade::eigensolve::EigenvalueReport;
use riccati_pade::{BigFloat, Real};

use crate::config::RunConfig;
use crate::error::{CliError, Result};

/// Version of the report layout.
pub const REPORT_VERSION: u32 = 1;

/// One point of a convergence series; `l_d` is `None` where consecutive
/// roots coincide exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub d: usize,
    pub l_d: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub l: u32,
    pub nu: u32,
    /// Round-trip decimal representation at `precision_bits`.
    pub epsilon: String,
    pub precision_bits: u32,
    /// Last root difference `Δ_D`, used as the error estimate.
    pub delta_last: String,
    pub trusted_digits: u32,
    pub converged: bool,
    pub collision: bool,
    pub d_start: usize,
    pub d_used: usize,
    /// First and last `D` of the strictly decreasing tail of `L_D`.
    pub onset: usize,
    pub tail_end: usize,
    pub slope: Option<f64>,
    pub oracle_value: Option<f64>,
    pub oracle_bound: Option<f64>,
    /// Relative gap to the oracle value.
    pub oracle_gap: Option<f64>,
    pub series: Vec<SeriesPoint>,
}

impl StateRecord {
    pub fn from_report(r: &EigenvalueReport) -> Self {
        let finite = |x: f64| x.is_finite().then_some(x);
        StateRecord {
            l: r.l,
            nu: r.nu,
            epsilon: r.value.to_decimal_full(),
            precision_bits: r.value.precision(),
            delta_last: r.error.to_decimal(6),
            trusted_digits: r.convergence.trusted_digits,
            converged: r.converged,
            collision: r.collision,
            d_start: r.dim_start,
            d_used: r.dim_end,
            onset: r.convergence.onset,
            tail_end: r.convergence.tail().last().map_or(r.convergence.onset, |p| p.0),
            slope: finite(r.convergence.slope),
            oracle_value: None,
            oracle_bound: None,
            oracle_gap: None,
            series: r.convergence.series.iter().map(|&(d, x)| SeriesPoint { d, l_d: finite(x) }).collect(),
        }
    }

    /// The eigenvalue at its recorded precision.
    pub fn value(&self) -> Result<BigFloat> {
        BigFloat::parse(self.precision_bits, &self.epsilon)
            .map_err(|e| CliError::Usage(format!("bad epsilon {:?}: {e}", self.epsilon)))
    }
}

/// A requested state the run could not deliver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissingState {
    pub l: u32,
    pub nu: u32,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueReportFile {
    pub version: u32,
    pub generator: String,
    pub config: RunConfig,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub states: Vec<StateRecord>,
    pub missing: Vec<MissingState>,
}

impl EigenvalueReportFile {
    /// Every requested state is present with the requested digits.
    pub fn complete(&self) -> bool {
        self.missing.is_empty() && self.states.iter().all(|s| s.converged)
    }

    pub fn state(&self, l: u32, nu: u32) -> Option<&StateRecord> {
        self.states.iter().find(|s| s.l == l && s.nu == nu)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "V(r) = {}r^({}), D <= {}, d = {}", self.config.sign, self.config.alpha, self.config.dmax, self.config.d);
        for st in &self.states {
            let mark = if st.converged { "" } else { "  (short of requested digits)" };
            let _ = writeln!(
                s,
                "l={} nu={} eps={} delta={} digits={} D={}..{}{}",
                st.l, st.nu, st.epsilon, st.delta_last, st.trusted_digits, st.d_start, st.d_used, mark
            );
            if let (Some(o), Some(g)) = (st.oracle_value, st.oracle_gap) {
                let _ = writeln!(s, "    oracle {o:.12e} (relative gap {g:.2e})");
            }
        }
        for m in &self.missing {
            let _ = writeln!(s, "l={} nu={} missing: {}", m.l, m.nu, m.reason);
        }
        s
    }
}

/// Writes `l,nu,D,L_D` rows for every state; exact zeros leave `L_D` blank.
pub fn write_convergence_csv<W: Write>(report: &EigenvalueReportFile, mut w: W) -> Result<()> {
    if report.states.is_empty() {
        return Err(CliError::EmptyReport);
    }
    writeln!(w, "l,nu,D,L_D")?;
    for st in &report.states {
        for p in &st.series {
            match p.l_d {
                Some(x) => writeln!(w, "{},{},{},{}", st.l, st.nu, p.d, x)?,
                None => writeln!(w, "{},{},{},", st.l, st.nu, p.d)?,
            }
        }
    }
    Ok(())
}

pub fn emit_convergence_csv(report: &EigenvalueReportFile, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_convergence_csv(report, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}
