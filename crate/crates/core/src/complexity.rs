//! Operation accounting for the proposed spreading method and the
//! candidate-search baselines.

use num_complex::Complex64;

use crate::error::Result;
use crate::metrics::papr_db;
use crate::spreading::{SpreadingKind, Transmitter};
use crate::waveforms::WaveformKind;

/// Work counted while running one method on one symbol vector.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub spreading_evaluations: usize,
    pub modulations: usize,
    pub papr_evaluations: usize,
}

/// PAPR of every spreading candidate for one symbol vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadingSurvey {
    pub paprs_db: Vec<(SpreadingKind, f64)>,
    pub counts: OpCounts,
}

impl SpreadingSurvey {
    pub fn best(&self) -> (SpreadingKind, f64) {
        // lowest index wins ties
        self.paprs_db
            .iter()
            .copied()
            .fold(None, |acc: Option<(SpreadingKind, f64)>, cur| match acc {
                Some(a) if a.1 <= cur.1 => Some(a),
                _ => Some(cur),
            })
            .expect("non-empty survey")
    }
}

/// Runs each of `kinds` through spreading and modulation and measures the
/// PAPR, counting the work done.
pub fn survey_spreadings(
    x: &[Complex64],
    waveform: WaveformKind,
    kinds: &[SpreadingKind],
) -> Result<SpreadingSurvey> {
    let mut counts = OpCounts::default();
    let mut paprs_db = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        let tx = Transmitter::new(kind, waveform, x.len())?;
        let y = tx.spreader().spread(x)?;
        counts.spreading_evaluations += 1;
        let s = tx.modulator().modulate(&y)?;
        counts.modulations += 1;
        paprs_db.push((kind, papr_db(&s)?));
        counts.papr_evaluations += 1;
    }
    Ok(SpreadingSurvey { paprs_db, counts })
}

/// Asymptotic per-symbol cost expressions for each method,
/// evaluated with `log₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CostModel {
    /// `4·N·log N + M·log M + 4·M`
    ProposedSpreading { n: usize, m: usize },
    /// `4·N·log N`
    ChirpSelection { n: usize },
    /// `L·N·log N`
    ClippingChirpOpt { n: usize, iterations: usize },
    /// `L^G·N·log N`
    GroupedPrechirp {
        n: usize,
        candidates: usize,
        groups: usize,
    },
    /// `B^V·N`
    Pts {
        n: usize,
        phases: usize,
        exponent: usize,
    },
}

impl CostModel {
    pub fn evaluate(&self) -> f64 {
        let nlogn = |n: usize| n as f64 * (n as f64).log2();
        match *self {
            CostModel::ProposedSpreading { n, m } => 4.0 * nlogn(n) + nlogn(m) + 4.0 * m as f64,
            CostModel::ChirpSelection { n } => 4.0 * nlogn(n),
            CostModel::ClippingChirpOpt { n, iterations } => iterations as f64 * nlogn(n),
            CostModel::GroupedPrechirp {
                n,
                candidates,
                groups,
            } => (candidates as f64).powi(groups as i32) * nlogn(n),
            CostModel::Pts {
                n,
                phases,
                exponent,
            } => (phases as f64).powi(exponent as i32) * n as f64,
        }
    }

    /// Number of candidate signals implied by the expression.
    pub fn candidates(&self) -> usize {
        match *self {
            CostModel::ProposedSpreading { .. } => 4,
            CostModel::ChirpSelection { .. } => 2,
            CostModel::ClippingChirpOpt { iterations, .. } => iterations,
            CostModel::GroupedPrechirp {
                candidates, groups, ..
            } => candidates.pow(groups as u32),
            CostModel::Pts {
                phases, exponent, ..
            } => phases.pow(exponent as u32),
        }
    }
}
