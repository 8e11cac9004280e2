use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use riccati_pade::rpm::ProblemSpec;
use riccati_pade::{BigFloat, Real};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::report::EigenvalueReportFile;
use crate::run::{oracle_check, run, unix_now};

const GOLDEN_TOML: &str = include_str!("../data/tables.toml");

/// Published eigenvalue tables, versioned with per-row notes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenData {
    pub version: u32,
    pub table: Vec<GoldenTable>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenTable {
    pub id: u8,
    pub title: String,
    pub alpha: String,
    pub sign: String,
    pub d_max: usize,
    pub parity_compressed: bool,
    pub row: Vec<GoldenRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenRow {
    pub l: u32,
    /// Printed label.
    pub nu: u32,
    pub value: String,
    /// The level the value belongs to, when the printed label is off.
    pub state_nu: Option<u32>,
    /// `"oracle"`: the printed value is suspect; compare with the oracle.
    pub check: Option<String>,
    pub note: Option<String>,
}

impl GoldenRow {
    pub fn level(&self) -> u32 {
        self.state_nu.unwrap_or(self.nu)
    }

    pub fn oracle_only(&self) -> bool {
        self.check.as_deref() == Some("oracle")
    }
}

pub fn golden() -> Result<GoldenData> {
    Ok(toml::from_str(GOLDEN_TOML)?)
}

pub fn golden_table(id: u8) -> Result<GoldenTable> {
    golden()?.table.into_iter().find(|t| t.id == id).ok_or(CliError::UnknownTable(id))
}

/// Significant digits printed in a decimal string.
pub fn significant_digits(s: &str) -> u32 {
    let digits: String = s.chars().filter(|c| c.is_ascii_digit()).collect();
    digits.trim_start_matches('0').len() as u32
}

/// Decimal exponent of the leading significant digit of a decimal string.
fn leading_exponent(s: &str) -> i32 {
    let s = s.trim().trim_start_matches(['-', '+']);
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let int = int.trim_start_matches('0');
    if !int.is_empty() {
        int.len() as i32 - 1
    } else {
        -(frac.len() as i32 - frac.trim_start_matches('0').len() as i32) - 1
    }
}

/// Leading significant digits of `reference` that `computed` reproduces:
/// the largest `k` (at most the printed digits) with `|computed − reference|`
/// below one unit of the `k`-th digit, so truncated and rounded prints are
/// treated alike.
pub fn matched_digits(computed: &BigFloat, reference: &str) -> Result<u32> {
    let printed = significant_digits(reference);
    let prec = computed.precision().max(4 * printed + 64);
    let r = BigFloat::parse(prec, reference).map_err(|e| CliError::Usage(format!("bad value {reference:?}: {e}")))?;
    let diff = &computed.with_prec(prec) - &r;
    if diff.is_zero() {
        return Ok(printed);
    }
    let k = (f64::from(leading_exponent(reference)) + 1.0 - diff.log2_abs() * std::f64::consts::LOG10_2).floor();
    Ok(k.clamp(0.0, f64::from(printed)) as u32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowComparison {
    pub l: u32,
    pub nu: u32,
    pub state_nu: u32,
    pub paper: String,
    pub paper_digits: u32,
    pub computed: Option<String>,
    pub trusted_digits: Option<u32>,
    pub converged: Option<bool>,
    /// Digits of the printed value reproduced by the computed one.
    pub matched_digits: Option<u32>,
    /// The printed value is suspect; the oracle is the reference.
    pub oracle_only: bool,
    pub oracle_value: Option<f64>,
    pub oracle_bound: Option<f64>,
    pub oracle_gap: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableComparison {
    pub id: u8,
    pub title: String,
    pub digits: u32,
    pub d_max: usize,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub rows: Vec<RowComparison>,
    /// The underlying runs, one per `l`.
    pub runs: Vec<EigenvalueReportFile>,
}

impl TableComparison {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "Table {}: {} (D <= {}, {} digits requested)", self.id, self.title, self.d_max, self.digits);
        for r in &self.rows {
            let label = if r.state_nu != r.nu { format!("({},{})->nu={}", r.l, r.nu, r.state_nu) } else { format!("({},{})", r.l, r.nu) };
            let computed = r.computed.as_deref().unwrap_or("missing");
            let matched = r.matched_digits.map_or("-".to_string(), |m| format!("{m}/{}", r.paper_digits));
            let _ = writeln!(s, "{label:<14} computed {computed}");
            let _ = writeln!(s, "{:<14} paper    {}  matched {matched}", "", r.paper);
            if let (Some(o), Some(g)) = (r.oracle_value, r.oracle_gap) {
                let flag = if r.oracle_only { "  [printed value suspect; oracle is the reference]" } else { "" };
                let _ = writeln!(s, "{:<14} oracle   {o:.12e}  gap {g:.2e}{flag}", "");
            }
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("l,nu,state_nu,paper,computed,matched_digits,paper_digits,oracle_gap,oracle_only\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                r.l,
                r.nu,
                r.state_nu,
                r.paper,
                r.computed.as_deref().unwrap_or(""),
                r.matched_digits.map_or(String::new(), |m| m.to_string()),
                r.paper_digits,
                r.oracle_gap.map_or(String::new(), |g| format!("{g:e}")),
                r.oracle_only
            );
        }
        s
    }
}

/// Recomputes every row of a published table at `digits` and compares.
/// Suspect rows are checked against the oracle; with `oracle_all` every row
/// is.
pub fn reproduce_table(id: u8, digits: u32, oracle_all: bool) -> Result<TableComparison> {
    reproduce(&golden_table(id)?, digits, oracle_all)
}

pub fn reproduce(table: &GoldenTable, digits: u32, oracle_all: bool) -> Result<TableComparison> {
    let started_unix = unix_now();
    let mut ls: Vec<u32> = table.row.iter().map(|r| r.l).collect();
    ls.dedup();
    let mut runs = Vec::new();
    let mut rows = Vec::new();
    for l in ls {
        let block: Vec<&GoldenRow> = table.row.iter().filter(|r| r.l == l).collect();
        let mut cfg = RunConfig::new(&table.alpha, &table.sign);
        cfg.l = vec![l];
        cfg.nu = block.iter().map(|r| r.level()).collect();
        cfg.dmax = table.d_max;
        cfg.digits = digits;
        let exponent = cfg.validate()?;
        let spec = ProblemSpec::new(exponent, l);
        let report = run(&cfg)?;
        for g in block {
            let state = report.state(l, g.level());
            let mut row = RowComparison {
                l,
                nu: g.nu,
                state_nu: g.level(),
                paper: g.value.clone(),
                paper_digits: significant_digits(&g.value),
                computed: state.map(|s| s.epsilon.clone()),
                trusted_digits: state.map(|s| s.trusted_digits),
                converged: state.map(|s| s.converged),
                matched_digits: None,
                oracle_only: g.oracle_only(),
                oracle_value: None,
                oracle_bound: None,
                oracle_gap: None,
                note: g.note.clone(),
            };
            if let Some(s) = state {
                row.matched_digits = Some(matched_digits(&s.value()?, &g.value)?);
                if oracle_all || g.oracle_only() {
                    let mut s = s.clone();
                    oracle_check(&spec, &mut s);
                    (row.oracle_value, row.oracle_bound, row.oracle_gap) = (s.oracle_value, s.oracle_bound, s.oracle_gap);
                }
            }
            rows.push(row);
        }
        runs.push(report);
    }
    Ok(TableComparison {
        id: table.id,
        title: table.title.clone(),
        digits,
        d_max: table.d_max,
        started_unix,
        finished_unix: unix_now(),
        rows,
        runs,
    })
}
