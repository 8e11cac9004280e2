use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use riccati_pade::eigensolve::SolveConfig;
use riccati_pade::rpm::{parse_exponent, ExponentSpec, Sign};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Parameters of one eigenvalue run.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RunConfig {
    /// Exponent of the potential as `p/q` (or an integer).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// Sign of the potential: `+` or `-`.
    #[arg(long, allow_hyphen_values = true)]
    pub sign: String,
    /// Angular momenta, comma separated.
    #[arg(long = "l", value_delimiter = ',', default_value = "0")]
    pub l: Vec<u32>,
    /// Radial quantum numbers, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "nu_max")]
    pub nu: Vec<u32>,
    /// Request every `ν ≤ nu_max` (default 0 when `--nu` is absent).
    #[arg(long)]
    pub nu_max: Option<u32>,
    /// Largest Hankel dimension.
    #[arg(long, default_value_t = 40)]
    pub dmax: usize,
    /// Hankel offset.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Requested significant digits.
    #[arg(long, default_value_t = 20)]
    pub digits: u32,
    /// Starting working precision in bits (raised automatically when needed).
    #[arg(long)]
    pub precision_bits: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Compare every state with the shooting oracle.
    #[arg(long)]
    pub oracle_check: bool,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// A config with the command-line defaults.
    pub fn new(alpha: &str, sign: &str) -> Self {
        RunConfig {
            alpha: alpha.to_string(),
            sign: sign.to_string(),
            l: vec![0],
            nu: Vec::new(),
            nu_max: None,
            dmax: 40,
            d: 2,
            digits: 20,
            precision_bits: None,
            format: Format::Json,
            oracle_check: false,
            out: None,
        }
    }

    pub fn exponent(&self) -> Result<ExponentSpec> {
        let sign: Sign = self.sign.parse().map_err(|e| CliError::Usage(format!("--sign: {e}")))?;
        parse_exponent(&self.alpha, sign).map_err(|e| CliError::Usage(format!("--alpha: {e}")))
    }

    pub fn validate(&self) -> Result<ExponentSpec> {
        if self.digits == 0 {
            return Err(CliError::Usage("--digits must be at least 1".into()));
        }
        if self.dmax < 2 {
            return Err(CliError::Usage("--dmax must be at least 2".into()));
        }
        if self.d == 0 {
            return Err(CliError::Usage("--d must be at least 1".into()));
        }
        if self.l.is_empty() {
            return Err(CliError::Usage("--l needs at least one value".into()));
        }
        self.exponent()
    }

    /// Requested `ν`, ascending and without repeats.
    pub fn requested_nu(&self) -> Vec<u32> {
        if self.nu.is_empty() {
            (0..=self.nu_max.unwrap_or(0)).collect()
        } else {
            let mut v = self.nu.clone();
            v.sort_unstable();
            v.dedup();
            v
        }
    }

    /// Requested `l`, in the given order without repeats.
    pub fn requested_l(&self) -> Vec<u32> {
        let mut seen = Vec::new();
        for &l in &self.l {
            if !seen.contains(&l) {
                seen.push(l);
            }
        }
        seen
    }

    pub fn solve_config(&self) -> SolveConfig {
        SolveConfig {
            d: self.d,
            dim_max: self.dmax,
            digits: self.digits,
            nu_max: self.requested_nu().last().copied(),
            start_bits: self.precision_bits,
            ..SolveConfig::default()
        }
    }
}
