//! Conventional PAPR-reduction comparators.
//!
//! The selection methods (PTS, SLM, chirp selection, grouped pre-chirp)
//! search a finite candidate set exhaustively and keep the minimum-PAPR
//! candidate; ties go to the lowest candidate index. Every search space
//! contains the unmodified signal, so none of them can raise the PAPR.
//! Each outcome reports how many candidates were evaluated.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::metrics::{papr_db, RandomSource};
use crate::spreading::{SpreadingKind, Transmitter};
use crate::transforms::{check_len, chirp, Dft};
use crate::waveforms::{AfdmParams, ChirpDirection, Modulator, WaveformKind};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

// ---------------------------------------------------------------------------
// Clipping and filtering
// ---------------------------------------------------------------------------

/// Brick-wall low-pass: keeps DFT bins whose signed frequency index is at
/// most `cutoff·N/2`. `cutoff = 1` keeps the whole band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowPass {
    pub cutoff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClipConfig {
    /// Clipping amplitude.
    pub beta: f64,
    pub filter: Option<LowPass>,
}

impl ClipConfig {
    pub fn new(beta: f64, filter: Option<LowPass>) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "clip level must be > 0, got {beta}"
            )));
        }
        if let Some(f) = filter {
            if !(f.cutoff > 0.0 && f.cutoff <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "low-pass cutoff must be in (0, 1], got {}",
                    f.cutoff
                )));
            }
        }
        Ok(Self { beta, filter })
    }

    /// Clip level set `ratio_db` above the RMS amplitude of `s`.
    pub fn relative_to_rms(
        s: &[Complex64],
        ratio_db: f64,
        filter: Option<LowPass>,
    ) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::EmptyInput);
        }
        let rms = (s.iter().map(|v| v.norm_sqr()).sum::<f64>() / s.len() as f64).sqrt();
        if rms == 0.0 {
            return Err(Error::ZeroSignal);
        }
        Self::new(rms * 10f64.powf(ratio_db / 20.0), filter)
    }
}

pub fn clip(s: &[Complex64], beta: f64) -> Vec<Complex64> {
    s.iter()
        .map(|&v| {
            let mag = v.norm();
            if mag > beta {
                v * (beta / mag)
            } else {
                v
            }
        })
        .collect()
}

pub fn low_pass(s: &[Complex64], filter: LowPass) -> Result<Vec<Complex64>> {
    let n = s.len();
    let dft = Dft::new(n)?;
    let mut spec = dft.apply(s, false)?;
    let keep = (filter.cutoff * n as f64 / 2.0).floor() as usize;
    for (k, v) in spec.iter_mut().enumerate() {
        let signed = k.min(n - k);
        if signed > keep {
            *v = ZERO;
        }
    }
    dft.process(&mut spec, true);
    Ok(spec)
}

/// Magnitudes above `beta` are limited to `beta` with the phase kept, then
/// the optional low-pass runs.
pub fn clip_filter(s: &[Complex64], cfg: &ClipConfig) -> Result<Vec<Complex64>> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let clipped = clip(s, cfg.beta);
    match cfg.filter {
        Some(f) => low_pass(&clipped, f),
        None => Ok(clipped),
    }
}

// ---------------------------------------------------------------------------
// Partial transmit sequence
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Partition {
    #[default]
    Contiguous,
    /// Subcarrier `k` belongs to block `k mod M`.
    Interleaved,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PtsConfig {
    pub subblocks: usize,
    pub phases: Vec<Complex64>,
    pub partition: Partition,
}

impl PtsConfig {
    /// Weights `{+1, −1, +j, −j}`, contiguous partition.
    pub fn new(subblocks: usize) -> Self {
        Self {
            subblocks,
            phases: vec![
                ONE,
                -ONE,
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
            ],
            partition: Partition::Contiguous,
        }
    }

    pub fn with_phases(mut self, phases: Vec<Complex64>) -> Self {
        self.phases = phases;
        self
    }

    fn validate(&self, len: usize) -> Result<()> {
        if self.subblocks == 0 || !len.is_multiple_of(self.subblocks) {
            return Err(Error::SubblockMismatch {
                blocks: self.subblocks,
                len,
            });
        }
        if self.phases.iter().any(|b| (b.norm() - 1.0).abs() > 1e-12) {
            return Err(Error::InvalidParameter(
                "PTS weights must have unit modulus".into(),
            ));
        }
        if !self.phases.iter().any(|b| (b - ONE).norm() < 1e-12) {
            return Err(Error::InvalidParameter(
                "PTS weight set must contain +1".into(),
            ));
        }
        Ok(())
    }

    pub fn candidate_count(&self) -> usize {
        self.phases.len().pow(self.subblocks as u32 - 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PtsOutcome {
    pub signal: Vec<Complex64>,
    /// One weight per subblock; the first is always `+1`. This is the side
    /// information a receiver would need.
    pub weights: Vec<Complex64>,
    pub papr_db: f64,
    pub candidates: usize,
}

#[derive(Debug, Clone)]
pub struct Pts {
    modulator: Modulator,
    cfg: PtsConfig,
}

impl Pts {
    pub fn new(waveform: WaveformKind, len: usize, cfg: PtsConfig) -> Result<Self> {
        cfg.validate(len)?;
        Ok(Self {
            modulator: Modulator::new(waveform, len)?,
            cfg,
        })
    }

    pub fn candidate_count(&self) -> usize {
        self.cfg.candidate_count()
    }

    fn block_of(&self, k: usize) -> usize {
        let m = self.cfg.subblocks;
        match self.cfg.partition {
            Partition::Contiguous => k / (self.modulator.len() / m),
            Partition::Interleaved => k % m,
        }
    }

    /// Weights for candidate `index`: block 0 fixed at `+1`, block `m ≥ 1`
    /// takes digit `m − 1` of `index` written in base `B` (least significant
    /// first).
    pub fn weights_for(&self, index: usize) -> Vec<Complex64> {
        let b = self.cfg.phases.len();
        let mut rest = index;
        let mut w = vec![ONE];
        for _ in 1..self.cfg.subblocks {
            w.push(self.cfg.phases[rest % b]);
            rest /= b;
        }
        w
    }

    pub fn run(&self, x: &[Complex64]) -> Result<PtsOutcome> {
        let n = self.modulator.len();
        check_len(x, n)?;
        let m = self.cfg.subblocks;
        let mut parts = Vec::with_capacity(m);
        for block in 0..m {
            let masked: Vec<Complex64> = x
                .iter()
                .enumerate()
                .map(|(k, &v)| if self.block_of(k) == block { v } else { ZERO })
                .collect();
            parts.push(self.modulator.modulate(&masked)?);
        }
        let count = self.cfg.candidate_count();
        let mut best: Option<(f64, usize, Vec<Complex64>)> = None;
        let mut combined = vec![ZERO; n];
        for index in 0..count {
            let w = self.weights_for(index);
            combined.iter_mut().for_each(|v| *v = ZERO);
            for (part, b) in parts.iter().zip(&w) {
                for (acc, v) in combined.iter_mut().zip(part) {
                    *acc += v * b;
                }
            }
            let p = papr_db(&combined)?;
            if best.as_ref().is_none_or(|(bp, _, _)| p < *bp) {
                best = Some((p, index, combined.clone()));
            }
        }
        let (papr, index, signal) = best.expect("at least one candidate");
        Ok(PtsOutcome {
            signal,
            weights: self.weights_for(index),
            papr_db: papr,
            candidates: count,
        })
    }
}

pub fn pts(x: &[Complex64], waveform: WaveformKind, cfg: &PtsConfig) -> Result<PtsOutcome> {
    Pts::new(waveform, x.len(), cfg.clone())?.run(x)
}

// ---------------------------------------------------------------------------
// Selected mapping
// ---------------------------------------------------------------------------

/// `candidates` phase sequences; candidate 0 is all-zero phase, candidate
/// `u ≥ 1` draws i.i.d. quarter-turn phases from the stream
/// `RandomSource::new(seed, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlmConfig {
    pub candidates: usize,
    pub seed: u64,
}

impl SlmConfig {
    pub fn new(candidates: usize, seed: u64) -> Result<Self> {
        if candidates == 0 {
            return Err(Error::InvalidParameter(
                "SLM needs at least one candidate".into(),
            ));
        }
        Ok(Self { candidates, seed })
    }

    pub fn phase_sequence(&self, index: usize, len: usize) -> Vec<Complex64> {
        if index == 0 {
            vec![ONE; len]
        } else {
            RandomSource::new(self.seed, index as u64).quarter_phases(len)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlmOutcome {
    pub signal: Vec<Complex64>,
    pub index: usize,
    pub papr_db: f64,
    pub candidates: usize,
}

#[derive(Debug, Clone)]
pub struct Slm {
    transmitter: Transmitter,
    tables: Vec<Vec<Complex64>>,
}

impl Slm {
    pub fn new(
        waveform: WaveformKind,
        kind: SpreadingKind,
        len: usize,
        cfg: SlmConfig,
    ) -> Result<Self> {
        let cfg = SlmConfig::new(cfg.candidates, cfg.seed)?;
        Ok(Self {
            transmitter: Transmitter::new(kind, waveform, len)?,
            tables: (0..cfg.candidates)
                .map(|u| cfg.phase_sequence(u, len))
                .collect(),
        })
    }

    pub fn candidate_count(&self) -> usize {
        self.tables.len()
    }

    pub fn run(&self, x: &[Complex64]) -> Result<SlmOutcome> {
        check_len(x, self.transmitter.len())?;
        let mut best: Option<(f64, usize, Vec<Complex64>)> = None;
        for (index, phases) in self.tables.iter().enumerate() {
            let rotated: Vec<Complex64> = x.iter().zip(phases).map(|(a, b)| a * b).collect();
            let s = self.transmitter.transmit(&rotated)?;
            let p = papr_db(&s)?;
            if best.as_ref().is_none_or(|(bp, _, _)| p < *bp) {
                best = Some((p, index, s));
            }
        }
        let (papr, index, signal) = best.expect("at least one candidate");
        Ok(SlmOutcome {
            signal,
            index,
            papr_db: papr,
            candidates: self.tables.len(),
        })
    }
}

pub fn slm(
    x: &[Complex64],
    waveform: WaveformKind,
    kind: SpreadingKind,
    cfg: &SlmConfig,
) -> Result<SlmOutcome> {
    Slm::new(waveform, kind, x.len(), *cfg)?.run(x)
}

// ---------------------------------------------------------------------------
// Chirp selection (OCDM)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct ChirpSelectOutcome {
    pub signal: Vec<Complex64>,
    pub direction: ChirpDirection,
    pub papr_db: f64,
    pub candidates: usize,
}

#[derive(Debug, Clone)]
pub struct ChirpSelector {
    down: Modulator,
    up: Modulator,
}

impl ChirpSelector {
    pub fn new(len: usize) -> Result<Self> {
        Ok(Self {
            down: Modulator::with_direction(WaveformKind::Ocdm, len, ChirpDirection::Down)?,
            up: Modulator::with_direction(WaveformKind::Ocdm, len, ChirpDirection::Up)?,
        })
    }

    pub fn run(&self, x: &[Complex64]) -> Result<ChirpSelectOutcome> {
        let down = self.down.modulate(x)?;
        let up = self.up.modulate(x)?;
        let (pd, pu) = (papr_db(&down)?, papr_db(&up)?);
        let (signal, direction, papr) = if pu < pd {
            (up, ChirpDirection::Up, pu)
        } else {
            (down, ChirpDirection::Down, pd)
        };
        Ok(ChirpSelectOutcome {
            signal,
            direction,
            papr_db: papr,
            candidates: 2,
        })
    }
}

pub fn chirp_select(x: &[Complex64]) -> Result<ChirpSelectOutcome> {
    if !x.len().is_multiple_of(2) {
        return Err(Error::OddLength { len: x.len() });
    }
    ChirpSelector::new(x.len())?.run(x)
}

// ---------------------------------------------------------------------------
// Grouped pre-chirp selection (AFDM)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct GpsOutcome {
    pub signal: Vec<Complex64>,
    /// Chosen `c2` for each subcarrier group.
    pub c2_per_group: Vec<f64>,
    pub papr_db: f64,
    pub candidates: usize,
}

/// Subcarriers split into `groups` contiguous groups; each group is
/// modulated with its own `c2` drawn from `c2_candidates`, and all
/// `|candidates|^groups` assignments are tried.
#[derive(Debug, Clone)]
pub struct GroupedPrechirp {
    len: usize,
    groups: usize,
    c2_candidates: Vec<f64>,
    base: Modulator,
    /// `e^{j2π·c2·n²}` for each candidate
    time_chirps: Vec<Vec<Complex64>>,
}

impl GroupedPrechirp {
    pub fn new(
        len: usize,
        groups: usize,
        c2_candidates: &[f64],
        params: AfdmParams,
    ) -> Result<Self> {
        if groups == 0 || !len.is_multiple_of(groups) {
            return Err(Error::GroupMismatch { groups, len });
        }
        if c2_candidates.is_empty() {
            return Err(Error::InvalidParameter(
                "grouped pre-chirp needs at least one c2 candidate".into(),
            ));
        }
        let base = Modulator::new(WaveformKind::Afdm(AfdmParams::new(params.c1, 0.0)?), len)?;
        let time_chirps = c2_candidates
            .iter()
            .map(|&c2| {
                AfdmParams::new(params.c1, c2)?;
                Ok(chirp(len, c2).into_iter().map(|v| v.conj()).collect())
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            len,
            groups,
            c2_candidates: c2_candidates.to_vec(),
            base,
            time_chirps,
        })
    }

    pub fn candidate_count(&self) -> usize {
        self.c2_candidates.len().pow(self.groups as u32)
    }

    /// Candidate indices per group for assignment `index` (group 0 is the
    /// least significant digit).
    pub fn assignment(&self, index: usize) -> Vec<usize> {
        let l = self.c2_candidates.len();
        let mut rest = index;
        (0..self.groups)
            .map(|_| {
                let d = rest % l;
                rest /= l;
                d
            })
            .collect()
    }

    pub fn run(&self, x: &[Complex64]) -> Result<GpsOutcome> {
        check_len(x, self.len)?;
        let size = self.len / self.groups;
        let mut parts = Vec::with_capacity(self.groups);
        for g in 0..self.groups {
            let masked: Vec<Complex64> = x
                .iter()
                .enumerate()
                .map(|(k, &v)| if k / size == g { v } else { ZERO })
                .collect();
            parts.push(self.base.modulate(&masked)?);
        }
        let mut best: Option<(f64, usize, Vec<Complex64>)> = None;
        let mut combined = vec![ZERO; self.len];
        for index in 0..self.candidate_count() {
            combined.iter_mut().for_each(|v| *v = ZERO);
            for (part, c) in parts.iter().zip(self.assignment(index)) {
                for ((acc, v), t) in combined.iter_mut().zip(part).zip(&self.time_chirps[c]) {
                    *acc += v * t;
                }
            }
            let p = papr_db(&combined)?;
            if best.as_ref().is_none_or(|(bp, _, _)| p < *bp) {
                best = Some((p, index, combined.clone()));
            }
        }
        let (papr, index, signal) = best.expect("at least one candidate");
        Ok(GpsOutcome {
            signal,
            c2_per_group: self
                .assignment(index)
                .into_iter()
                .map(|c| self.c2_candidates[c])
                .collect(),
            papr_db: papr,
            candidates: self.candidate_count(),
        })
    }
}

pub fn grouped_prechirp(
    x: &[Complex64],
    groups: usize,
    c2_candidates: &[f64],
    params: AfdmParams,
) -> Result<GpsOutcome> {
    GroupedPrechirp::new(x.len(), groups, c2_candidates, params)?.run(x)
}

/// `c2` candidates evenly spread over one period: `base + i/count`.
pub fn spread_c2_candidates(base: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| base + i as f64 / count as f64).collect()
}

/// Unit phasor `e^{jθ}`; shorthand used by callers building weight sets.
pub fn phasor(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// `{e^{j2πb/B}}` for `b = 0..B`, starting at `+1`.
pub fn uniform_phase_set(count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|b| phasor(2.0 * PI * b as f64 / count as f64))
        .collect()
}
