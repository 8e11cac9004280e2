use crate::bigmath::{BigFloat, Real};
use crate::eigensolve::RootSet;
use crate::error::{Result, RpmError};

/// Roots `ε^[D,d]` followed over a contiguous range of `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSequence {
    pub d: usize,
    pub start_dim: usize,
    pub entries: Vec<BigFloat>,
    /// `(l, ν)` once labelled.
    pub label: Option<(u32, u32)>,
    /// Set when the sequence ended or started at an ambiguous match.
    pub ambiguous: bool,
    /// Relative resolution of the entries, `10^-resolution_digits`.
    pub resolution_digits: u32,
}

impl RootSequence {
    pub fn new(d: usize, start_dim: usize, first: BigFloat, resolution_digits: u32) -> Self {
        RootSequence { d, start_dim, entries: vec![first], label: None, ambiguous: false, resolution_digits }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn end_dim(&self) -> usize {
        self.start_dim + self.entries.len() - 1
    }

    pub fn dims(&self) -> std::ops::RangeInclusive<usize> {
        self.start_dim..=self.end_dim()
    }

    pub fn at(&self, dim: usize) -> Option<&BigFloat> {
        dim.checked_sub(self.start_dim).and_then(|i| self.entries.get(i))
    }

    pub fn last(&self) -> &BigFloat {
        self.entries.last().expect("sequences are never empty")
    }

    /// `Δ_D = |ε^[D+1] − ε^[D]|` as `(D, Δ_D)`.
    pub fn deltas(&self) -> Vec<(usize, BigFloat)> {
        self.entries
            .windows(2)
            .enumerate()
            .map(|(i, w)| (self.start_dim + i, (&w[1] - &w[0]).abs()))
            .collect()
    }
}

/// Links the roots of consecutive root sets into sequences.
///
/// Each live sequence proposes its nearest root at the next `D`; the
/// proposal is accepted when that gap is below `match_tol_factor` times the
/// distance to the next-nearest root. Two candidates that close make the
/// match ambiguous: the sequence ends there and is flagged. When several
/// sequences claim the same root, the one with the smoothest continuation
/// (smallest `|second difference|`, then smallest `|Δ|`) wins. Roots left
/// over start new sequences.
pub fn track_sequences(rootsets: &[RootSet], match_tol_factor: f64) -> Result<Vec<RootSequence>> {
    let first = match rootsets.first() {
        Some(f) => f,
        None => return Ok(Vec::new()),
    };
    for w in rootsets.windows(2) {
        if w[1].dim != w[0].dim + 1 {
            return Err(RpmError::Invalid(format!("root sets must have consecutive D, got {} then {}", w[0].dim, w[1].dim)));
        }
        if w[1].d != first.d {
            return Err(RpmError::Invalid("root sets must share d".into()));
        }
    }

    let mut seqs: Vec<RootSequence> =
        first.roots.iter().map(|r| RootSequence::new(first.d, first.dim, r.value.clone(), first.target_digits)).collect();
    for set in &rootsets[1..] {
        let prev_dim = set.dim - 1;
        let roots = &set.roots;
        // (sequence index, root index, gap) for clear proposals
        let mut proposals: Vec<(usize, usize, BigFloat)> = Vec::new();
        for (si, seq) in seqs.iter_mut().enumerate() {
            if seq.end_dim() != prev_dim || roots.is_empty() {
                continue;
            }
            let last = seq.last();
            let mut gaps: Vec<(usize, BigFloat)> =
                roots.iter().enumerate().map(|(ri, r)| (ri, (&r.value - last).abs())).collect();
            gaps.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"));
            let clear = match gaps.get(1) {
                None => true,
                Some((_, g2)) => gaps[0].1.to_f64() < match_tol_factor * g2.to_f64() || gaps[0].1.is_zero(),
            };
            if clear {
                proposals.push((si, gaps[0].0, gaps[0].1.clone()));
            } else {
                seq.ambiguous = true;
            }
        }

        let mut claimed: Vec<Option<(usize, (f64, f64))>> = vec![None; roots.len()];
        for (si, ri, gap) in proposals {
            let seq = &seqs[si];
            let curvature = if seq.len() >= 2 {
                let e = &seq.entries;
                let n = e.len();
                // ε_new − 2ε_last + ε_prev
                let second = &(&roots[ri].value - &e[n - 1]) - &(&e[n - 1] - &e[n - 2]);
                second.abs().to_f64()
            } else {
                f64::INFINITY
            };
            let key = (curvature, gap.to_f64());
            match &claimed[ri] {
                Some((_, best)) if best.partial_cmp(&key) != Some(std::cmp::Ordering::Greater) => {}
                _ => claimed[ri] = Some((si, key)),
            }
        }
        let mut new_seqs = Vec::new();
        for (ri, claim) in claimed.iter().enumerate() {
            match claim {
                Some((si, _)) => {
                    let seq = &mut seqs[*si];
                    seq.entries.push(roots[ri].value.clone());
                    seq.resolution_digits = seq.resolution_digits.min(set.target_digits);
                }
                None => new_seqs.push(RootSequence::new(set.d, set.dim, roots[ri].value.clone(), set.target_digits)),
            }
        }
        seqs.extend(new_seqs);
    }
    Ok(seqs)
}
