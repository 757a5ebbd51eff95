//! Seeded Monte Carlo CCDF campaigns.
//!
//! A campaign is a list of pipelines (waveform plus either a spreading or a
//! baseline) evaluated on the same QPSK symbol vector for each trial. The
//! symbols of trial `i` come from `RandomSource::new(seed, i)`, and results
//! are gathered in trial order, so the output does not depend on how many
//! workers ran the trials.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::baselines::{
    clip_filter, uniform_phase_set, ChirpSelector, ClipConfig, GroupedPrechirp, LowPass, Pts,
    PtsConfig, Slm, SlmConfig,
};
use crate::config::{split_list, Settings};
use crate::error::{Error, Result};
use crate::metrics::{
    ccdf, network_savings, papr_db, threshold_grid, CcdfCurve, EnergyModel, LevelReadout,
    PowerRule, RandomSource, Savings,
};
use crate::spreading::{SpreadingKind, Transmitter};
use crate::transforms::default_stride;
use crate::waveforms::{oversample, AfdmParams, WaveformKind};

/// CCDF levels at which every curve is read out.
pub const READOUT_LEVELS: [f64; 3] = [1e-1, 1e-2, 1e-3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Campaign {
    /// Waveforms with and without spreading.
    Ccdf,
    /// Spreading against the conventional baselines.
    Compare,
    /// Just the curves needed for the energy table.
    Energy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Modulation {
    #[default]
    Qpsk,
}

impl Modulation {
    pub fn label(&self) -> &'static str {
        "qpsk"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Baseline {
    Pts,
    Slm,
    ChirpSelect,
    GroupedPrechirp,
    Clip,
    /// Clipping applied after grouped pre-chirp selection, a single-pass
    /// stand-in for iterative chirp optimization followed by clipping.
    GroupedPrechirpClip,
}

impl Baseline {
    pub fn label(&self) -> &'static str {
        match self {
            Baseline::Pts => "pts",
            Baseline::Slm => "slm",
            Baseline::ChirpSelect => "chirpsel",
            Baseline::GroupedPrechirp => "gps",
            Baseline::Clip => "clip",
            Baseline::GroupedPrechirpClip => "gpsclip",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stage {
    Spread(SpreadingKind),
    Baseline(Baseline),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineSpec {
    pub waveform: WaveformKind,
    pub stage: Stage,
}

impl PipelineSpec {
    /// `<waveform>` for the unmodified waveform, otherwise
    /// `<waveform>+<spreading|baseline>`.
    pub fn label(&self) -> String {
        match &self.stage {
            Stage::Spread(SpreadingKind::None) => self.waveform.label().to_string(),
            Stage::Spread(k) => format!("{}+{}", self.waveform.label(), k.label()),
            Stage::Baseline(b) => format!("{}+{}", self.waveform.label(), b.label()),
        }
    }

    pub fn is_unmodified(&self) -> bool {
        self.stage == Stage::Spread(SpreadingKind::None)
    }
}

/// Parameters shared by all baseline pipelines in a campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineParams {
    pub pts_subblocks: usize,
    /// Size `B` of the PTS weight set `{e^{j2πb/B}}`.
    pub pts_phases: usize,
    pub slm_candidates: usize,
    pub slm_seed: u64,
    pub gps_groups: usize,
    pub gps_c2: Vec<f64>,
    /// Clip level above RMS, dB.
    pub clip_db: f64,
    pub clip_cutoff: Option<f64>,
}

impl Default for BaselineParams {
    fn default() -> Self {
        Self {
            pts_subblocks: 4,
            pts_phases: 4,
            slm_candidates: 4,
            slm_seed: 0x5eed,
            gps_groups: 4,
            gps_c2: vec![0.2, 0.45, 0.7, 0.95],
            clip_db: 4.0,
            clip_cutoff: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub modulation: Modulation,
    pub afdm: AfdmParams,
    pub zc_root: usize,
    pub stride: usize,
    pub pipelines: Vec<PipelineSpec>,
    pub baselines: BaselineParams,
    pub grid_max_db: f64,
    pub grid_step_db: f64,
    pub oversample: usize,
    pub output_dir: Option<PathBuf>,
    /// 0 = one worker per core, 1 = run serially.
    pub workers: usize,
}

const CCDF_PIPELINES: &str = "ofdm, ocdm, ocdm+wht, ocdm+dct, ocdm+zc, ocdm+idft, \
                              afdm, afdm+wht, afdm+dct, afdm+zc, afdm+idft";
const COMPARE_PIPELINES: &str = "ocdm, ocdm+pts, ocdm+slm, ocdm+chirpsel, ocdm+idft, \
                                 afdm, afdm+pts, afdm+slm, afdm+gps, afdm+idft";
const ENERGY_PIPELINES: &str = "ocdm, ocdm+idft, afdm, afdm+idft";

impl ExperimentConfig {
    /// Defaults: N = 64, 10 000 trials, QPSK, 0–12 dB grid, `c1 = 0.1`,
    /// `c2 = 0.2`, ZC root 1.
    pub fn defaults(campaign: Campaign) -> Self {
        Self::from_settings(&Settings::new(), campaign).expect("defaults are valid")
    }

    pub fn from_settings(s: &Settings, campaign: Campaign) -> Result<Self> {
        let n = s.parsed("n")?.unwrap_or(64);
        let afdm = AfdmParams::new(
            s.parsed("c1")?.unwrap_or(0.1),
            s.parsed("c2")?.unwrap_or(0.2),
        )
        .map_err(|e| Error::Config(e.to_string()))?;
        let zc_root = s.parsed("zc-root")?.unwrap_or(1);
        let stride = s.parsed("stride")?.unwrap_or_else(|| default_stride(n));
        if let Some(m) = s.get("modulation") {
            if !m.eq_ignore_ascii_case("qpsk") {
                return Err(Error::Config(format!("unsupported modulation `{m}`")));
            }
        }
        let defaults = BaselineParams::default();
        let gps_c2 = match s.list("gps-c2") {
            Some(items) => items
                .iter()
                .map(|v| {
                    v.parse::<f64>()
                        .map_err(|e| Error::Config(format!("bad gps-c2 entry `{v}`: {e}")))
                })
                .collect::<Result<Vec<_>>>()?,
            None => defaults.gps_c2.clone(),
        };
        let baselines = BaselineParams {
            pts_subblocks: s.parsed("pts-subblocks")?.unwrap_or(defaults.pts_subblocks),
            pts_phases: s.parsed("pts-phases")?.unwrap_or(defaults.pts_phases),
            slm_candidates: s
                .parsed("slm-candidates")?
                .unwrap_or(defaults.slm_candidates),
            slm_seed: s.parsed("slm-seed")?.unwrap_or(defaults.slm_seed),
            gps_groups: s.parsed("gps-groups")?.unwrap_or(defaults.gps_groups),
            gps_c2,
            clip_db: s.parsed("clip-db")?.unwrap_or(defaults.clip_db),
            clip_cutoff: s.parsed("clip-cutoff")?,
        };

        let resolver = LabelResolver {
            afdm,
            zc_root,
            stride,
        };
        let labels: Vec<String> = if let Some(list) = s.list("pipeline") {
            list
        } else if s.get("waveform").is_some() || s.get("spreading").is_some() {
            let waveforms = s
                .list("waveform")
                .unwrap_or_else(|| split_list("ofdm, ocdm, afdm"));
            let spreadings = s
                .list("spreading")
                .unwrap_or_else(|| split_list("none, wht, dct, zc, idft"));
            waveforms
                .iter()
                .flat_map(|w| {
                    spreadings.iter().map(move |sp| {
                        if sp == "none" {
                            w.clone()
                        } else {
                            format!("{w}+{sp}")
                        }
                    })
                })
                .collect()
        } else {
            split_list(match campaign {
                Campaign::Ccdf => CCDF_PIPELINES,
                Campaign::Compare => COMPARE_PIPELINES,
                Campaign::Energy => ENERGY_PIPELINES,
            })
        };
        let mut pipelines = labels
            .iter()
            .map(|l| resolver.resolve(l))
            .collect::<Result<Vec<_>>>()?;
        if campaign == Campaign::Compare {
            ensure_unmodified(&mut pipelines);
        }

        Ok(Self {
            n,
            trials: s.parsed("trials")?.unwrap_or(10_000),
            seed: s.parsed("seed")?.unwrap_or(1),
            modulation: Modulation::Qpsk,
            afdm,
            zc_root,
            stride,
            pipelines,
            baselines,
            grid_max_db: s.parsed("grid-max-db")?.unwrap_or(12.0),
            grid_step_db: s.parsed("grid-step-db")?.unwrap_or(0.05),
            oversample: s.parsed("oversample")?.unwrap_or(1),
            output_dir: s.get("out").map(PathBuf::from),
            workers: s.parsed("workers")?.unwrap_or(0),
        })
    }

    /// The resolved configuration as settings; parsing them back yields an
    /// equal config.
    pub fn to_settings(&self) -> Settings {
        let mut s = Settings::new();
        let b = &self.baselines;
        let join_f = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        let labels: Vec<String> = self.pipelines.iter().map(PipelineSpec::label).collect();
        let mut entries = vec![
            ("n", self.n.to_string()),
            ("trials", self.trials.to_string()),
            ("seed", self.seed.to_string()),
            ("modulation", self.modulation.label().to_string()),
            ("pipeline", labels.join(", ")),
            ("c1", self.afdm.c1.to_string()),
            ("c2", self.afdm.c2.to_string()),
            ("zc-root", self.zc_root.to_string()),
            ("stride", self.stride.to_string()),
            ("grid-max-db", self.grid_max_db.to_string()),
            ("grid-step-db", self.grid_step_db.to_string()),
            ("oversample", self.oversample.to_string()),
            ("workers", self.workers.to_string()),
            ("pts-subblocks", b.pts_subblocks.to_string()),
            ("pts-phases", b.pts_phases.to_string()),
            ("slm-candidates", b.slm_candidates.to_string()),
            ("slm-seed", b.slm_seed.to_string()),
            ("gps-groups", b.gps_groups.to_string()),
            ("gps-c2", join_f(&b.gps_c2)),
            ("clip-db", b.clip_db.to_string()),
        ];
        if let Some(c) = b.clip_cutoff {
            entries.push(("clip-cutoff", c.to_string()));
        }
        if let Some(dir) = &self.output_dir {
            entries.push(("out", dir.display().to_string()));
        }
        for (k, v) in entries {
            s.set(k, &v).expect("known key");
        }
        s
    }

    pub fn manifest(&self) -> String {
        let mut out = String::from("# resolved campaign configuration\n");
        for key in crate::config::KEYS {
            if let Some(v) = self.to_settings().get(key) {
                out.push_str(&format!("{key} = {v}\n"));
            }
        }
        out
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        threshold_grid(self.grid_max_db, self.grid_step_db)
            .map_err(|e| Error::Config(e.to_string()))
    }

    /// Checks every scalar and builds every pipeline, so an incompatible
    /// combination is reported before any trial runs.
    pub fn build(&self) -> Result<Vec<Pipeline>> {
        if self.n < 2 {
            return Err(Error::Config(format!("n must be >= 2, got {}", self.n)));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.oversample == 0 {
            return Err(Error::Config("oversample must be >= 1".into()));
        }
        if self.pipelines.is_empty() {
            return Err(Error::Config("no pipelines requested".into()));
        }
        self.grid()?;
        let mut seen = std::collections::BTreeSet::new();
        for p in &self.pipelines {
            if !seen.insert(p.label()) {
                return Err(Error::Config(format!(
                    "pipeline `{}` listed twice",
                    p.label()
                )));
            }
        }
        self.pipelines
            .iter()
            .map(|p| Pipeline::build(self, p))
            .collect()
    }
}

fn ensure_unmodified(pipelines: &mut Vec<PipelineSpec>) {
    let mut out: Vec<PipelineSpec> = Vec::with_capacity(pipelines.len() + 2);
    for p in pipelines.drain(..) {
        let needs_base = !p.is_unmodified()
            && !out
                .iter()
                .any(|q| q.is_unmodified() && q.waveform.label() == p.waveform.label());
        if needs_base {
            out.push(PipelineSpec {
                waveform: p.waveform,
                stage: Stage::Spread(SpreadingKind::None),
            });
        }
        let dup = p.is_unmodified() && out.iter().any(|q| q.label() == p.label());
        if !dup {
            out.push(p);
        }
    }
    *pipelines = out;
}

struct LabelResolver {
    afdm: AfdmParams,
    zc_root: usize,
    stride: usize,
}

impl LabelResolver {
    fn resolve(&self, label: &str) -> Result<PipelineSpec> {
        let lower = label.trim().to_ascii_lowercase();
        let (wf, stage) = match lower.split_once('+') {
            Some((w, s)) => (w.trim(), s.trim()),
            None => (lower.as_str(), "none"),
        };
        let waveform = match wf {
            "ofdm" => WaveformKind::Ofdm,
            "ocdm" => WaveformKind::Ocdm,
            "afdm" => WaveformKind::Afdm(self.afdm),
            other => {
                return Err(Error::Config(format!(
                    "unknown waveform `{other}` in `{label}`"
                )))
            }
        };
        let stage = match stage {
            "none" => Stage::Spread(SpreadingKind::None),
            "wht" => Stage::Spread(SpreadingKind::Wht),
            "dct" => Stage::Spread(SpreadingKind::Dct),
            "zc" => Stage::Spread(SpreadingKind::zc(self.zc_root)),
            "zcmask" => Stage::Spread(SpreadingKind::Zc {
                root: self.zc_root,
                mask_only: true,
            }),
            "idft" => Stage::Spread(SpreadingKind::interleaved_dft(self.stride)),
            "pts" => Stage::Baseline(Baseline::Pts),
            "slm" => Stage::Baseline(Baseline::Slm),
            "chirpsel" => Stage::Baseline(Baseline::ChirpSelect),
            "gps" => Stage::Baseline(Baseline::GroupedPrechirp),
            "clip" => Stage::Baseline(Baseline::Clip),
            "gpsclip" => Stage::Baseline(Baseline::GroupedPrechirpClip),
            other => {
                return Err(Error::Config(format!(
                    "unknown stage `{other}` in `{label}`"
                )))
            }
        };
        Ok(PipelineSpec { waveform, stage })
    }
}

#[derive(Debug, Clone)]
enum Engine {
    Spread(Transmitter),
    Pts(Pts),
    Slm(Slm),
    ChirpSelect(ChirpSelector),
    Gps(GroupedPrechirp),
    Clip(Transmitter, f64, Option<LowPass>),
    GpsClip(GroupedPrechirp, f64, Option<LowPass>),
}

/// A validated, ready-to-run pipeline.
#[derive(Debug, Clone)]
pub struct Pipeline {
    label: String,
    engine: Engine,
    oversample: usize,
}

impl Pipeline {
    fn build(cfg: &ExperimentConfig, spec: &PipelineSpec) -> Result<Self> {
        let label = spec.label();
        let incompatible = |reason: String| Error::IncompatibleCombination {
            label: label.clone(),
            reason,
        };
        let n = cfg.n;
        let b = &cfg.baselines;
        let filter = b.clip_cutoff.map(|cutoff| LowPass { cutoff });
        let gps = || match spec.waveform {
            WaveformKind::Afdm(p) => GroupedPrechirp::new(n, b.gps_groups, &b.gps_c2, p),
            _ => Err(Error::InvalidParameter(
                "grouped pre-chirp selection needs AFDM".into(),
            )),
        };
        let engine = match &spec.stage {
            Stage::Spread(kind) => Transmitter::new(*kind, spec.waveform, n).map(Engine::Spread),
            Stage::Baseline(Baseline::Pts) => {
                let cfg =
                    PtsConfig::new(b.pts_subblocks).with_phases(uniform_phase_set(b.pts_phases));
                Pts::new(spec.waveform, n, cfg).map(Engine::Pts)
            }
            Stage::Baseline(Baseline::Slm) => SlmConfig::new(b.slm_candidates, b.slm_seed)
                .and_then(|c| Slm::new(spec.waveform, SpreadingKind::None, n, c))
                .map(Engine::Slm),
            Stage::Baseline(Baseline::ChirpSelect) => match spec.waveform {
                WaveformKind::Ocdm => ChirpSelector::new(n).map(Engine::ChirpSelect),
                _ => Err(Error::InvalidParameter("chirp selection needs OCDM".into())),
            },
            Stage::Baseline(Baseline::GroupedPrechirp) => gps().map(Engine::Gps),
            Stage::Baseline(Baseline::Clip) => ClipConfig::new(1.0, filter)
                .and_then(|_| Transmitter::new(SpreadingKind::None, spec.waveform, n))
                .map(|t| Engine::Clip(t, b.clip_db, filter)),
            Stage::Baseline(Baseline::GroupedPrechirpClip) => ClipConfig::new(1.0, filter)
                .and_then(|_| gps())
                .map(|g| Engine::GpsClip(g, b.clip_db, filter)),
        }
        .map_err(|e| incompatible(e.to_string()))?;
        Ok(Self {
            label,
            engine,
            oversample: cfg.oversample,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Candidate signals generated per trial.
    pub fn candidates(&self) -> usize {
        match &self.engine {
            Engine::Spread(_) | Engine::Clip(..) => 1,
            Engine::Pts(p) => p.candidate_count(),
            Engine::Slm(s) => s.candidate_count(),
            Engine::ChirpSelect(_) => 2,
            Engine::Gps(g) | Engine::GpsClip(g, ..) => g.candidate_count(),
        }
    }

    /// The transmitted signal for one symbol vector, after oversampling.
    pub fn signal(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let (base, clip) = match &self.engine {
            Engine::Spread(t) => (t.transmit(x)?, None),
            Engine::Pts(p) => (p.run(x)?.signal, None),
            Engine::Slm(s) => (s.run(x)?.signal, None),
            Engine::ChirpSelect(c) => (c.run(x)?.signal, None),
            Engine::Gps(g) => (g.run(x)?.signal, None),
            Engine::Clip(t, db, f) => (t.transmit(x)?, Some((*db, *f))),
            Engine::GpsClip(g, db, f) => (g.run(x)?.signal, Some((*db, *f))),
        };
        let s = oversample(&base, self.oversample)?;
        match clip {
            None => Ok(s),
            Some((db, f)) => clip_filter(&s, &ClipConfig::relative_to_rms(&s, db, f)?),
        }
    }

    pub fn papr_db(&self, x: &[Complex64]) -> Result<f64> {
        papr_db(&self.signal(x)?)
    }
}

/// SHA-256 of the symbols' little-endian `f64` (re, im) bytes.
pub fn symbol_digest(x: &[Complex64]) -> [u8; 32] {
    let mut h = Sha256::new();
    for v in x {
        h.update(v.re.to_le_bytes());
        h.update(v.im.to_le_bytes());
    }
    h.finalize().into()
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveReport {
    pub label: String,
    pub curve: CcdfCurve,
    pub readouts: Vec<(f64, LevelReadout)>,
    /// Per-trial PAPR (dB), in trial order.
    pub samples_db: Vec<f64>,
    pub candidates_per_trial: usize,
}

/// `reference − technique` at a CCDF level; positive means lower PAPR.
#[derive(Debug, Clone, PartialEq)]
pub struct GainRow {
    pub label: String,
    pub reference: String,
    pub level: f64,
    pub gain_db: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub campaign: Campaign,
    pub config: ExperimentConfig,
    pub curves: Vec<CurveReport>,
    pub gains: Vec<GainRow>,
    /// SHA-256 over the per-trial symbol digests in trial order. Every
    /// pipeline consumed exactly these symbols.
    pub symbol_digest: String,
    pub elapsed: Duration,
}

impl RunReport {
    pub fn curve(&self, label: &str) -> Option<&CurveReport> {
        self.curves.iter().find(|c| c.label == label)
    }

    pub fn readout(&self, label: &str, level: f64) -> Option<LevelReadout> {
        self.curve(label)?
            .readouts
            .iter()
            .find(|(l, _)| *l == level)
            .map(|(_, r)| *r)
    }

    pub fn gain(&self, label: &str, reference: &str, level: f64) -> Option<f64> {
        self.gains
            .iter()
            .find(|g| g.label == label && g.reference == reference && g.level == level)
            .and_then(|g| g.gain_db)
    }
}

fn run_trials<T, F>(trials: usize, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    match workers {
        1 => (0..trials as u64).map(&f).collect(),
        0 => (0..trials as u64).into_par_iter().map(&f).collect(),
        w => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {w} workers: {e}")))?;
            pool.install(|| (0..trials as u64).into_par_iter().map(&f).collect())
        }
    }
}

fn execute(cfg: &ExperimentConfig, campaign: Campaign) -> Result<RunReport> {
    let start = Instant::now();
    let pipelines = cfg.build()?;
    let grid = cfg.grid()?;
    let n = cfg.n;
    let seed = cfg.seed;

    let per_trial = run_trials(cfg.trials, cfg.workers, |i| {
        let x = RandomSource::new(seed, i).qpsk_symbols(n);
        let paprs = pipelines
            .iter()
            .map(|p| p.papr_db(&x))
            .collect::<Result<Vec<f64>>>()?;
        Ok((paprs, symbol_digest(&x)))
    })?;

    let mut hasher = Sha256::new();
    for (_, d) in &per_trial {
        hasher.update(d);
    }
    let digest: [u8; 32] = hasher.finalize().into();

    let mut curves = Vec::with_capacity(pipelines.len());
    for (j, p) in pipelines.iter().enumerate() {
        let samples_db: Vec<f64> = per_trial.iter().map(|(v, _)| v[j]).collect();
        let curve = ccdf(&samples_db, &grid)?;
        let readouts = READOUT_LEVELS
            .iter()
            .map(|&l| (l, curve.papr_at(l)))
            .collect();
        curves.push(CurveReport {
            label: p.label().to_string(),
            curve,
            readouts,
            samples_db,
            candidates_per_trial: p.candidates(),
        });
    }

    let references: Vec<&CurveReport> = cfg
        .pipelines
        .iter()
        .zip(&curves)
        .filter(|(spec, _)| spec.is_unmodified())
        .map(|(_, c)| c)
        .collect();
    let mut gains = Vec::new();
    for c in &curves {
        for r in &references {
            if r.label == c.label {
                continue;
            }
            for (i, &level) in READOUT_LEVELS.iter().enumerate() {
                let gain_db = match (r.readouts[i].1.value(), c.readouts[i].1.value()) {
                    (Some(a), Some(b)) => Some(a - b),
                    _ => None,
                };
                gains.push(GainRow {
                    label: c.label.clone(),
                    reference: r.label.clone(),
                    level,
                    gain_db,
                });
            }
        }
    }

    Ok(RunReport {
        campaign,
        config: cfg.clone(),
        curves,
        gains,
        symbol_digest: hex(&digest),
        elapsed: start.elapsed(),
    })
}

/// Runs every pipeline of `cfg` on shared per-trial symbols.
pub fn run_ccdf(cfg: &ExperimentConfig) -> Result<RunReport> {
    execute(cfg, Campaign::Ccdf)
}

/// Like [`run_ccdf`], but guarantees each waveform's unmodified curve is
/// present so every technique gets a gain figure against it.
pub fn compare(cfg: &ExperimentConfig) -> Result<RunReport> {
    let mut cfg = cfg.clone();
    ensure_unmodified(&mut cfg.pipelines);
    execute(&cfg, Campaign::Compare)
}

/// Published readouts (dB) used as soft reproduction targets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedReadout {
    pub campaign: Campaign,
    pub label: &'static str,
    pub level: f64,
    pub papr_db: f64,
}

/// Published gains (dB) of a technique over its unmodified waveform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedGain {
    pub campaign: Campaign,
    pub label: &'static str,
    pub reference: &'static str,
    pub level: f64,
    pub gain_db: f64,
}

pub const SOFT_BAND_DB: f64 = 1.0;

macro_rules! readout {
    ($c:ident, $label:literal, $level:expr, $v:expr) => {
        PublishedReadout {
            campaign: Campaign::$c,
            label: $label,
            level: $level,
            papr_db: $v,
        }
    };
}

pub const PUBLISHED_READOUTS: &[PublishedReadout] = &[
    readout!(Ccdf, "ofdm", 1e-3, 9.6),
    readout!(Ccdf, "ofdm", 1e-2, 8.2),
    readout!(Ccdf, "ofdm", 1e-1, 6.2),
    readout!(Ccdf, "ocdm", 1e-3, 9.2),
    readout!(Ccdf, "ocdm", 1e-2, 7.8),
    readout!(Ccdf, "ocdm", 1e-1, 5.8),
    readout!(Ccdf, "ocdm+wht", 1e-3, 7.9),
    readout!(Ccdf, "ocdm+dct", 1e-3, 7.8),
    readout!(Ccdf, "ocdm+zc", 1e-3, 7.7),
    readout!(Ccdf, "afdm", 1e-3, 9.8),
    readout!(Ccdf, "afdm", 1e-2, 8.4),
    readout!(Ccdf, "afdm", 1e-1, 6.4),
    readout!(Ccdf, "afdm+wht", 1e-3, 8.3),
    readout!(Ccdf, "afdm+dct", 1e-3, 8.2),
    readout!(Ccdf, "afdm+zc", 1e-3, 8.1),
    readout!(Ccdf, "afdm+idft", 1e-3, 7.4),
    readout!(Ccdf, "afdm+idft", 1e-2, 6.0),
    readout!(Ccdf, "afdm+idft", 1e-1, 4.0),
    readout!(Compare, "ocdm", 1e-3, 9.4),
    readout!(Compare, "ocdm+pts", 1e-3, 8.5),
    readout!(Compare, "ocdm+slm", 1e-3, 8.5),
    readout!(Compare, "ocdm+chirpsel", 1e-3, 8.5),
    readout!(Compare, "ocdm+idft", 1e-3, 7.8),
    readout!(Compare, "afdm", 1e-3, 9.8),
    readout!(Compare, "afdm+pts", 1e-3, 8.2),
    readout!(Compare, "afdm+slm", 1e-3, 8.2),
    readout!(Compare, "afdm+gps", 1e-3, 8.2),
    readout!(Compare, "afdm+idft", 1e-3, 7.7),
];

pub const PUBLISHED_GAINS: &[PublishedGain] = &[
    PublishedGain {
        campaign: Campaign::Ccdf,
        label: "ocdm+idft",
        reference: "ocdm",
        level: 1e-3,
        gain_db: 2.2,
    },
    PublishedGain {
        campaign: Campaign::Ccdf,
        label: "afdm+idft",
        reference: "afdm",
        level: 1e-3,
        gain_db: 2.4,
    },
    PublishedGain {
        campaign: Campaign::Compare,
        label: "ocdm+idft",
        reference: "ocdm",
        level: 1e-3,
        gain_db: 1.6,
    },
    PublishedGain {
        campaign: Campaign::Compare,
        label: "afdm+idft",
        reference: "afdm",
        level: 1e-3,
        gain_db: 2.1,
    },
];

/// One measured-versus-published line.
#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    /// e.g. `ocdm@1e-3` or `gain ocdm+idft vs ocdm@1e-3`
    pub what: String,
    pub published_db: f64,
    pub measured_db: Option<f64>,
}

impl Deviation {
    pub fn deviation_db(&self) -> Option<f64> {
        self.measured_db.map(|m| m - self.published_db)
    }

    pub fn within_band(&self) -> bool {
        self.deviation_db().is_some_and(|d| d.abs() <= SOFT_BAND_DB)
    }
}

fn level_tag(level: f64) -> String {
    format!("1e{}", level.log10().round() as i32)
}

/// Measured values next to every published value whose curve is present.
pub fn published_deviations(report: &RunReport) -> Vec<Deviation> {
    let mut out = Vec::new();
    for p in PUBLISHED_READOUTS
        .iter()
        .filter(|p| p.campaign == report.campaign)
    {
        if let Some(r) = report.readout(p.label, p.level) {
            out.push(Deviation {
                what: format!("{}@{}", p.label, level_tag(p.level)),
                published_db: p.papr_db,
                measured_db: r.value(),
            });
        }
    }
    for g in PUBLISHED_GAINS
        .iter()
        .filter(|g| g.campaign == report.campaign)
    {
        if report.curve(g.label).is_some() && report.curve(g.reference).is_some() {
            out.push(Deviation {
                what: format!("gain {} vs {}@{}", g.label, g.reference, level_tag(g.level)),
                published_db: g.gain_db,
                measured_db: report.gain(g.label, g.reference, g.level),
            });
        }
    }
    out
}

/// Energy and emission figures for one waveform family.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyRow {
    pub waveform: String,
    pub reference_db: Option<f64>,
    pub spread_db: Option<f64>,
    /// `reference − spread` at 10⁻³.
    pub delta_db: Option<f64>,
    pub backoff_percent: Option<f64>,
    pub calibrated_percent: Option<f64>,
    pub model: EnergyModel,
    pub sensors: u64,
    pub per_sensor: Savings,
    pub network: Savings,
}

/// Energy table for each waveform family (`ocdm`, `afdm`) whose unmodified
/// and interleaved-DFT curves are both in `report`.
pub fn energy_report(report: &RunReport, sensors: u64) -> Result<Vec<EnergyRow>> {
    let level = 1e-3;
    let mut rows = Vec::new();
    for (wf, model) in [
        ("ocdm", EnergyModel::ocdm_reference()),
        ("afdm", EnergyModel::afdm_reference()),
    ] {
        let spread = format!("{wf}+idft");
        match (report.curve(wf), report.curve(&spread)) {
            (None, None) => continue,
            (Some(_), Some(_)) => {}
            (None, _) => return Err(Error::MissingCurve(wf.to_string())),
            (_, None) => return Err(Error::MissingCurve(spread)),
        }
        let reference_db = report.readout(wf, level).and_then(LevelReadout::value);
        let spread_db = report.readout(&spread, level).and_then(LevelReadout::value);
        let delta_db = reference_db.zip(spread_db).map(|(a, b)| a - b);
        rows.push(EnergyRow {
            waveform: wf.to_string(),
            reference_db,
            spread_db,
            delta_db,
            backoff_percent: delta_db.map(|d| PowerRule::BackoffExponential.reduction_percent(d)),
            calibrated_percent: delta_db.map(|d| model.rule.reduction_percent(d)),
            model,
            sensors,
            per_sensor: network_savings(1, &model),
            network: network_savings(sensors, &model),
        });
    }
    if rows.is_empty() {
        return Err(Error::MissingCurve("ocdm or afdm".into()));
    }
    Ok(rows)
}

/// `(sensors, savings)` at `steps + 1` evenly spaced network sizes up to
/// `max_sensors`.
pub fn scaling_sweep(model: &EnergyModel, max_sensors: u64, steps: u64) -> Vec<(u64, Savings)> {
    let steps = steps.max(1);
    (0..=steps)
        .map(|i| {
            let k = max_sensors * i / steps;
            (k, network_savings(k, model))
        })
        .collect()
}
