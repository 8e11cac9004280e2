use std::time::{Duration, Instant};

use crate::bigmath::{BigFloat, Real};
use crate::eigensolve::parallel::default_threads;
use crate::eigensolve::roots::find_roots_with;
use crate::eigensolve::{
    assess_convergence, label_states, track_sequences, ConvergenceReport, EigenvalueReport, FindOptions, RootSequence,
    RootSet, Window,
};
use crate::error::{Result, RpmError};
use crate::oracle::upper_window;
use crate::rpm::{CheckedHankel, CoefficientTable, ProblemSpec, Sign};

/// Guard digits added to the refinement target.
pub const GUARD_DIGITS: u32 = 5;

/// Parameters of a sweep over `D` for one `(α, σ, l)`.
#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub d: usize,
    pub dim_min: usize,
    pub dim_max: usize,
    pub digits: u32,
    /// Defaults per sign; a positive potential needs `nu_max` to place the
    /// upper end.
    pub window: Option<Window>,
    pub nu_max: Option<u32>,
    /// Starting precision; default `4 × digits` decimal digits worth of bits.
    pub start_bits: Option<u32>,
    pub max_bits: u32,
    pub threads: usize,
    pub match_tol_factor: f64,
    /// Scan every `D` up to this dimension, then every `scan_stride`.
    pub scan_dense_until: usize,
    pub scan_stride: usize,
    pub grid_per_decade: usize,
    pub grid_points: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            d: 2,
            dim_min: 2,
            dim_max: 40,
            digits: 20,
            window: None,
            nu_max: None,
            start_bits: None,
            max_bits: 1 << 14,
            threads: default_threads(),
            match_tol_factor: 0.5,
            scan_dense_until: 16,
            scan_stride: 4,
            grid_per_decade: 40,
            grid_points: 400,
        }
    }
}

impl SolveConfig {
    pub fn start_bits(&self) -> u32 {
        self.start_bits.unwrap_or_else(|| (4.0 * f64::from(self.digits) * std::f64::consts::LOG2_10).ceil() as u32)
    }

    fn scans_at(&self, dim: usize) -> bool {
        dim <= self.scan_dense_until || (dim - self.dim_min).is_multiple_of(self.scan_stride.max(1)) || dim == self.dim_max
    }
}

/// Everything a sweep produced.
#[derive(Debug, Clone)]
pub struct Solution {
    pub spec: ProblemSpec,
    pub window: Window,
    pub rootsets: Vec<RootSet>,
    pub sequences: Vec<RootSequence>,
    /// Diagnostics of every sequence that survives to `D_max`.
    pub convergence: Vec<ConvergenceReport>,
    /// Converged, labelled states, ascending.
    pub states: Vec<EigenvalueReport>,
    /// Final working precision.
    pub precision: u32,
    pub elapsed: Duration,
}

impl Solution {
    pub fn state(&self, nu: u32) -> Option<&EigenvalueReport> {
        self.states.iter().find(|s| s.nu == nu)
    }
}

/// Default window. The upper end sits between the oracle's levels
/// `nu_max` and `nu_max + 1` (a coarse estimate); without `nu_max` a
/// negative potential is searched up to `−10⁻⁶` and a positive one up to
/// level 5.
pub fn default_window(spec: &ProblemSpec, nu_max: Option<u32>) -> Result<Window> {
    match spec.exponent.sigma() {
        Sign::Minus => match nu_max {
            None => Window::default_for(Sign::Minus, 0.0),
            Some(n) => Window::new(-10.0, upper_window(spec, n)?, Sign::Minus),
        },
        Sign::Plus => {
            let upper = upper_window(spec, nu_max.unwrap_or(5))?;
            Window::default_for(Sign::Plus, upper)
        }
    }
}

/// A root within this relative distance of a root at the previous `D` is
/// settling on a level; only such roots get the sign-change search around
/// them at the next `D`.
const SETTLING: f64 = 1e-6;

/// Relative distance to the nearest previous root, when settling.
fn settling(x: &BigFloat, previous: &[BigFloat]) -> Option<f64> {
    let x = x.to_f64();
    previous
        .iter()
        .map(|p| (x - p.to_f64()).abs() / x.abs())
        .filter(|&r| r <= SETTLING)
        .min_by(|a, b| a.partial_cmp(b).expect("finite"))
}

/// Sweeps `D = dim_min..=dim_max`: finds roots at each `D` (seeded with the
/// previous roots, raising the precision whenever values fall below the
/// floor), tracks sequences, assesses convergence and labels the states.
pub fn solve(spec: &ProblemSpec, cfg: &SolveConfig) -> Result<Solution> {
    let started = Instant::now();
    if cfg.dim_max < cfg.dim_min.max(2) || cfg.digits == 0 {
        return Err(RpmError::Invalid("need D_max >= max(D_min, 2) and digits >= 1".into()));
    }
    let window = match cfg.window {
        Some(w) => w,
        None => default_window(spec, cfg.nu_max)?,
    };
    let table = CoefficientTable::for_hankel(*spec, cfg.dim_max, cfg.d);
    let target_digits = cfg.digits + GUARD_DIGITS;
    let mut bits = cfg.start_bits();
    let mut seeds: Vec<BigFloat> = Vec::new();
    let mut walk: Vec<Option<f64>> = Vec::new();
    let mut rootsets = Vec::with_capacity(cfg.dim_max - cfg.dim_min + 1);

    for dim in cfg.dim_min.max(1)..=cfg.dim_max {
        let opts = FindOptions {
            target_digits,
            scan: cfg.scans_at(dim),
            grid_per_decade: cfg.grid_per_decade,
            grid_points: cfg.grid_points,
            threads: cfg.threads,
        };
        let set = loop {
            let hankel = CheckedHankel::new(&table, dim, cfg.d, bits)?;
            match find_roots_with(&hankel, cfg.d, &window, &seeds, &walk, &opts) {
                Ok(set) => break set,
                Err(RpmError::PrecisionExhausted { .. }) if bits * 2 <= cfg.max_bits => bits *= 2,
                Err(e) => return Err(e),
            }
        };
        let next = set.values();
        walk = next.iter().map(|x| settling(x, &seeds)).collect();
        seeds = next;
        rootsets.push(set);
    }

    let sequences = track_sequences(&rootsets, cfg.match_tol_factor)?;
    let convergence: Vec<ConvergenceReport> = sequences
        .iter()
        .filter(|s| s.end_dim() == cfg.dim_max && s.len() >= crate::eigensolve::MIN_SEQUENCE_LEN)
        .map(|s| assess_convergence(s, cfg.digits))
        .collect::<Result<_>>()?;
    let elapsed = started.elapsed();
    let mut states = label_states(&convergence, spec);
    for s in &mut states {
        s.wall_time = elapsed;
        s.precision = bits;
    }
    Ok(Solution { spec: *spec, window, rootsets, sequences, convergence, states, precision: bits, elapsed })
}
