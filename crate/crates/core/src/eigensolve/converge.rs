use crate::bigmath::{BigFloat, Real};
use crate::eigensolve::RootSequence;
use crate::error::{Result, RpmError};

/// Minimum sequence length for [`assess_convergence`].
pub const MIN_SEQUENCE_LEN: usize = 4;

/// Relative agreement (in digits) at which a sequence counts as settled on
/// an eigenvalue, whatever the requested accuracy.
pub const SETTLE_DIGITS: u32 = 8;
/// Number of trailing differences that must all be below the settling
/// tolerance for a ragged sequence to count as settled.
pub const STEADY_POINTS: usize = 3;

/// Convergence diagnostics of one root sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub sequence: RootSequence,
    /// `(D, L_D)` with `L_D = log10 |ε^[D+1] − ε^[D]|`; `-inf` for exact zeros.
    pub series: Vec<(usize, f64)>,
    /// First `D` of the strictly decreasing tail of `L_D`.
    pub onset: usize,
    /// Least-squares slope of `L_D` against `D` over the tail.
    pub slope: f64,
    pub intercept: f64,
    /// Rate `B` of the model `Δ_D = A e^{−BD}`.
    pub rate: f64,
    /// The last difference is below `10^-digits_wanted`.
    pub converged: bool,
    /// The sequence has settled on an eigenvalue: decreasing tail (or
    /// resolved) with relative last difference below `10^-SETTLE_DIGITS`.
    pub settled: bool,
    pub value: BigFloat,
    /// The last `Δ_D`, floored at the resolution of the roots.
    pub error: BigFloat,
    /// Significant digits implied by `error`, capped by the resolution.
    pub trusted_digits: u32,
}

impl ConvergenceReport {
    /// The strictly decreasing tail of the `L_D` series, excluding
    /// differences below the root resolution.
    pub fn tail(&self) -> &[(usize, f64)] {
        let floor = self.value.log2_abs() * std::f64::consts::LOG10_2 - f64::from(self.sequence.resolution_digits);
        let end = self.series.iter().position(|p| p.1 <= floor).unwrap_or(self.series.len());
        let start = self.series.iter().position(|(d, _)| *d == self.onset).unwrap_or(end).min(end);
        &self.series[start..end]
    }
}

fn fit_line(points: &[(usize, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    if points.len() < 2 {
        return (0.0, points.first().map_or(0.0, |p| p.1));
    }
    let mx = points.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 as f64 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 as f64 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Fits `L_D = a + s·D` over the strictly decreasing tail and decides
/// convergence: the last `Δ_D` must be below `10^-digits_wanted` and the
/// tail must actually decrease, the differences must have reached the
/// resolution of the roots themselves, or the last `STEADY_POINTS`
/// differences must all be below the settling tolerance (clusters of close
/// roots make `L_D` ragged without moving the sequence off its level).
/// A wandering sequence is reported as not converged.
///
/// Differences below the root resolution carry no information: they are
/// kept in the series but excluded from the tail, and the error estimate
/// (otherwise the last `Δ_D`) is never smaller than the resolution.
pub fn assess_convergence(seq: &RootSequence, digits_wanted: u32) -> Result<ConvergenceReport> {
    if seq.len() < MIN_SEQUENCE_LEN {
        return Err(RpmError::SequenceTooShort { len: seq.len(), min: MIN_SEQUENCE_LEN });
    }
    let log10_2 = std::f64::consts::LOG10_2;
    let value = seq.last().clone();
    let deltas = seq.deltas();
    let series: Vec<(usize, f64)> = deltas.iter().map(|(d, x)| (*d, x.log2_abs() * log10_2)).collect();

    let magnitude = value.log2_abs() * log10_2;
    let floor = magnitude - f64::from(seq.resolution_digits);
    let resolved_at = series.iter().position(|p| p.1 <= floor);
    let informative = &series[..resolved_at.unwrap_or(series.len())];

    let mut start = informative.len().saturating_sub(1);
    while start > 0 && informative[start - 1].1 > informative[start].1 {
        start -= 1;
    }
    let tail = &informative[start.min(informative.len())..];
    let (slope, intercept) = fit_line(tail);
    let onset = tail.first().or(series.first()).expect("len >= 4").0;

    let goal = -f64::from(digits_wanted);
    let last_l = series.last().expect("len >= 4").1;
    let resolved = resolved_at.is_some() && series[resolved_at.unwrap_or(0)..].iter().all(|p| p.1 < goal);
    let steady = series.len() >= STEADY_POINTS
        && series[series.len() - STEADY_POINTS..].iter().all(|p| p.1 - magnitude < -f64::from(SETTLE_DIGITS));
    let shape = tail.len() >= 3 || resolved || steady;
    let converged = last_l < goal && shape;
    let settled = last_l - magnitude < -f64::from(SETTLE_DIGITS) && shape;

    let mut error = deltas.last().expect("len >= 4").1.clone();
    let resolution = value.abs().mul_2exp(0) * &BigFloat::from_f64(value.precision(), 10f64.powf(floor - magnitude));
    if error < resolution {
        error = resolution;
    }
    let precision_digits = (f64::from(value.precision()) * log10_2).floor();
    let implied = ((value.log2_abs() - error.log2_abs()) * log10_2).floor().max(0.0);
    let trusted_digits = implied.min(precision_digits).min(f64::from(seq.resolution_digits)) as u32;

    Ok(ConvergenceReport {
        sequence: seq.clone(),
        onset,
        series,
        slope,
        intercept,
        rate: -slope * std::f64::consts::LN_10,
        converged,
        settled,
        value,
        error,
        trusted_digits,
    })
}
