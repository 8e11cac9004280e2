use std::time::Duration;

use crate::bigmath::{BigFloat, Real};
use crate::eigensolve::{ConvergenceReport, SETTLE_DIGITS};
use crate::rpm::ProblemSpec;

/// A labelled eigenvalue `ε_{lν}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueReport {
    pub spec: ProblemSpec,
    pub l: u32,
    pub nu: u32,
    pub value: BigFloat,
    /// Last `Δ_D` of the sequence.
    pub error: BigFloat,
    pub dim_start: usize,
    pub dim_end: usize,
    pub precision: u32,
    pub wall_time: Duration,
    /// Another converged sequence agreed with this one within the combined
    /// error bars; the duplicate was dropped (it signals a spurious root).
    pub collision: bool,
    /// Reached the requested number of digits.
    pub converged: bool,
    pub convergence: ConvergenceReport,
}

/// Sorts settled sequences ascending and assigns `ν = 0, 1, …`; whether
/// each reached the requested accuracy is carried in `converged`, so a state
/// short of digits never shifts the labels above it.
/// Sequences whose values agree within their combined error bars, or within
/// the settling tolerance, are merged into one state (keeping the smaller error) and flagged as a collision.
pub fn label_states(reports: &[ConvergenceReport], spec: &ProblemSpec) -> Vec<EigenvalueReport> {
    let mut sorted: Vec<&ConvergenceReport> = reports.iter().filter(|r| r.settled).collect();
    sorted.sort_by(|a, b| a.value.partial_cmp(&b.value).expect("finite values"));

    let mut states: Vec<(ConvergenceReport, bool)> = Vec::new();
    for r in sorted {
        if let Some((prev, flag)) = states.last_mut() {
            let gap = (&r.value - &prev.value).abs();
            let bars = &r.error + &prev.error;
            let settle = prev.value.abs() * BigFloat::from_f64_like(10f64.powi(-(SETTLE_DIGITS as i32)), &prev.value);
            if gap <= bars || gap <= settle {
                *flag = true;
                if r.error < prev.error {
                    *prev = r.clone();
                }
                continue;
            }
        }
        states.push((r.clone(), false));
    }

    states
        .into_iter()
        .enumerate()
        .map(|(nu, (r, collision))| {
            let mut convergence = r;
            convergence.sequence.label = Some((spec.l, nu as u32));
            EigenvalueReport {
                spec: *spec,
                l: spec.l,
                nu: nu as u32,
                value: convergence.value.clone(),
                error: convergence.error.clone(),
                dim_start: convergence.sequence.start_dim,
                dim_end: convergence.sequence.end_dim(),
                precision: convergence.value.precision(),
                wall_time: Duration::ZERO,
                collision,
                converged: convergence.converged,
                convergence,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::{assess_convergence, RootSequence};
    use crate::rpm::{reduce_exponent, Sign};

    fn report(limit: f64, start: f64) -> ConvergenceReport {
        let mut s = RootSequence::new(2, 2, BigFloat::from_f64(200, limit + start), 40);
        for k in 1..10 {
            s.entries.push(BigFloat::from_f64(200, limit + start * 0.01f64.powi(k)));
        }
        assess_convergence(&s, 10).unwrap()
    }

    #[test]
    fn ascending_labels() {
        let spec = ProblemSpec::new(reduce_exponent(-1, 2, Sign::Minus).unwrap(), 1);
        let states = label_states(&[report(-0.2, 0.01), report(-0.3, 0.01)], &spec);
        assert_eq!(states.len(), 2);
        assert_eq!((states[0].nu, states[1].nu), (0, 1));
        assert!(states[0].value < states[1].value);
        assert_eq!(states[0].convergence.sequence.label, Some((1, 0)));
    }

    #[test]
    fn single_sequence_is_ground_state() {
        let spec = ProblemSpec::new(reduce_exponent(1, 2, Sign::Plus).unwrap(), 0);
        let states = label_states(&[report(1.8, 0.01)], &spec);
        assert_eq!(states[0].nu, 0);
    }

    #[test]
    fn short_of_digits_keeps_its_label() {
        let spec = ProblemSpec::new(reduce_exponent(-1, 2, Sign::Minus).unwrap(), 0);
        let mut s = RootSequence::new(2, 2, BigFloat::from_f64(200, -0.25), 40);
        for k in 1..11 {
            s.entries.push(BigFloat::from_f64(200, -0.25 + 0.1f64.powi(k)));
        }
        let slow = assess_convergence(&s, 10).unwrap();
        let states = label_states(&[report(-0.3, 0.01), slow, report(-0.1, 0.01)], &spec);
        assert_eq!(states.len(), 3);
        assert!(states[0].converged && !states[1].converged && states[2].converged);
        assert_eq!(states[2].nu, 2);
    }

    #[test]
    fn duplicates_collide() {
        let spec = ProblemSpec::new(reduce_exponent(-1, 2, Sign::Minus).unwrap(), 0);
        let states = label_states(&[report(-0.3, 0.01), report(-0.3, -0.01), report(-0.1, 0.01)], &spec);
        assert_eq!(states.len(), 2);
        assert!(states[0].collision);
        assert_eq!(states[1].nu, 1);
    }

    #[test]
    fn restarted_sequence_merges_with_its_level() {
        let spec = ProblemSpec::new(reduce_exponent(-2, 3, Sign::Minus).unwrap(), 1);
        let states = label_states(&[report(-0.3, 0.01), report(-0.3 * (1.0 + 1e-12), 0.01), report(-0.1, 0.01)], &spec);
        assert_eq!(states.len(), 2);
        assert!(states[0].collision);
        assert_eq!(states[1].nu, 1);
    }
}
