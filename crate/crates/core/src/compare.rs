//! Pairing closed-form lines with oracle energies.

use crate::model::SpectrumLine;
use crate::shoot::BoundState;

#[derive(Debug, Clone, PartialEq)]
pub struct MatchedPair {
    pub line: SpectrumLine,
    pub oracle_energy: f64,
    pub relative_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComparisonReport {
    /// Matched pairs, ordered by closed-form energy.
    pub pairs: Vec<MatchedPair>,
    pub max_relative_deviation: f64,
    pub unmatched_closed: Vec<SpectrumLine>,
    pub unmatched_oracle: Vec<f64>,
}

impl ComparisonReport {
    /// Closed-form lines that pass the physical filter but found no partner.
    pub fn missing_physical(&self) -> impl Iterator<Item = &SpectrumLine> {
        self.unmatched_closed.iter().filter(|l| l.physical)
    }

    /// Oracle states matched by lines the physical filter rejects.
    pub fn matched_unphysical(&self) -> impl Iterator<Item = &MatchedPair> {
        self.pairs.iter().filter(|p| !p.line.physical)
    }
}

pub fn relative_deviation(closed: f64, oracle: f64) -> f64 {
    let scale = closed.abs().max(oracle.abs());
    if scale == 0.0 {
        0.0
    } else {
        (closed - oracle).abs() / scale
    }
}

/// Pair every oracle state with the nearest closed-form line whose relative
/// deviation is within `tol`; each side is used at most once. Pairs are
/// chosen greedily in order of increasing deviation, so the outcome does not
/// depend on list order.
pub fn compare_report(closed: &[SpectrumLine], oracle: &[BoundState], tol: f64) -> ComparisonReport {
    let energies: Vec<f64> = oracle.iter().map(|s| s.energy).collect();
    compare_energies(closed, &energies, tol)
}

/// [`compare_report`] on bare oracle energies.
pub fn compare_energies(closed: &[SpectrumLine], oracle: &[f64], tol: f64) -> ComparisonReport {
    let mut candidates: Vec<(f64, usize, usize)> = closed
        .iter()
        .enumerate()
        .flat_map(|(i, line)| oracle.iter().enumerate().map(move |(j, &e)| (relative_deviation(line.energy, e), i, j)))
        .filter(|(d, _, _)| *d <= tol)
        .collect();
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let mut closed_used = vec![false; closed.len()];
    let mut oracle_used = vec![false; oracle.len()];
    let mut pairs = Vec::new();
    for (d, i, j) in candidates {
        if closed_used[i] || oracle_used[j] {
            continue;
        }
        closed_used[i] = true;
        oracle_used[j] = true;
        pairs.push(MatchedPair { line: closed[i].clone(), oracle_energy: oracle[j], relative_deviation: d });
    }
    pairs.sort_by(|x, y| x.line.energy.total_cmp(&y.line.energy));

    ComparisonReport {
        max_relative_deviation: pairs.iter().map(|p| p.relative_deviation).fold(0.0, f64::max),
        pairs,
        unmatched_closed: closed.iter().zip(&closed_used).filter(|(_, used)| !**used).map(|(l, _)| l.clone()).collect(),
        unmatched_oracle: oracle.iter().zip(&oracle_used).filter(|(_, used)| !**used).map(|(e, _)| *e).collect(),
    }
}
