//! OFDM, OCDM and AFDM modulators.
//!
//! All three share one fast structure, `s = post ⊙ F(pre ⊙ x)`, where `F`
//! is a unitary (inverse) DFT and `pre`/`post` are unit-modulus chirps:
//!
//! | waveform       | pre (subcarrier k)  | F       | post (time n)               |
//! |----------------|---------------------|---------|-----------------------------|
//! | OFDM           | 1                   | inverse | 1                           |
//! | AFDM(c1, c2)   | `e^{j2πc1k²}`       | inverse | `e^{j2πc2n²}`               |
//! | OCDM, down     | `e^{-jπk²/N}`       | inverse | `e^{jπ/4}·e^{-jπn²/N}`      |
//! | OCDM, up       | `e^{+jπk²/N}`       | forward | `e^{jπ/4}·e^{+jπn²/N}`      |
//!
//! The OCDM rows come from expanding `(n-k)² = n² - 2nk + k²` in the
//! Fresnel kernel. Demodulation applies the conjugate transpose.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::transforms::{check_len, chirp, Dft};

/// AFDM chirp parameters: `c1` multiplies `k²` (subcarrier index), `c2`
/// multiplies `n²` (time index), both in cycles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfdmParams {
    pub c1: f64,
    pub c2: f64,
}

impl Default for AfdmParams {
    fn default() -> Self {
        Self { c1: 0.1, c2: 0.2 }
    }
}

impl AfdmParams {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        if !c1.is_finite() || !c2.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "AFDM chirp parameters must be finite (c1={c1}, c2={c2})"
            )));
        }
        if c1 < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "AFDM c1 must be >= 0, got {c1}"
            )));
        }
        Ok(Self { c1, c2 })
    }

    /// Smallest `c1` giving full diversity for integer Doppler up to
    /// `alpha_max`: `(2·α_max + 1) / (2N)`.
    pub fn min_c1(alpha_max: u32, len: usize) -> f64 {
        (2.0 * alpha_max as f64 + 1.0) / (2.0 * len as f64)
    }

    pub fn from_doppler(alpha_max: u32, len: usize, c2: f64) -> Result<Self> {
        Self::new(Self::min_c1(alpha_max, len), c2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaveformKind {
    Ofdm,
    Ocdm,
    Afdm(AfdmParams),
}

impl WaveformKind {
    pub fn label(&self) -> &'static str {
        match self {
            WaveformKind::Ofdm => "ofdm",
            WaveformKind::Ocdm => "ocdm",
            WaveformKind::Afdm(_) => "afdm",
        }
    }

    pub fn is_chirp(&self) -> bool {
        !matches!(self, WaveformKind::Ofdm)
    }
}

/// Sweep direction of the OCDM Fresnel chirps: `α = +1` (down, the standard
/// kernel) or `α = -1` (up).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChirpDirection {
    #[default]
    Down,
    Up,
}

impl ChirpDirection {
    pub fn alpha(self) -> f64 {
        match self {
            ChirpDirection::Down => 1.0,
            ChirpDirection::Up => -1.0,
        }
    }
}

/// `e^{sign·jπ·i²/N}` with the integer exponent reduced mod `2N`.
fn fresnel_phase(len: usize, sign: f64) -> Vec<Complex64> {
    let m = 2 * len as u128;
    (0..len as u128)
        .map(|i| {
            let r = (i * i) % m;
            Complex64::from_polar(1.0, sign * PI * r as f64 / len as f64)
        })
        .collect()
}

/// A modulator bound to one waveform and length, with its chirps and FFT
/// plan precomputed. Immutable after construction, so it can be shared
/// freely between worker threads.
#[derive(Debug, Clone)]
pub struct Modulator {
    kind: WaveformKind,
    direction: ChirpDirection,
    len: usize,
    dft: Dft,
    pre: Vec<Complex64>,
    post: Vec<Complex64>,
    inverse: bool,
}

impl Modulator {
    pub fn new(kind: WaveformKind, len: usize) -> Result<Self> {
        Self::with_direction(kind, len, ChirpDirection::Down)
    }

    /// `direction` only affects OCDM.
    pub fn with_direction(
        kind: WaveformKind,
        len: usize,
        direction: ChirpDirection,
    ) -> Result<Self> {
        if len < 2 {
            return Err(Error::InvalidParameter(format!(
                "modulators need at least 2 samples, got {len}"
            )));
        }
        let one = vec![Complex64::new(1.0, 0.0); len];
        let (pre, post, inverse) = match kind {
            WaveformKind::Ofdm => (one.clone(), one, true),
            WaveformKind::Afdm(p) => {
                AfdmParams::new(p.c1, p.c2)?;
                let pre = chirp(len, p.c1).into_iter().map(|v| v.conj()).collect();
                let post = chirp(len, p.c2).into_iter().map(|v| v.conj()).collect();
                (pre, post, true)
            }
            WaveformKind::Ocdm => {
                if !len.is_multiple_of(2) {
                    return Err(Error::OddLength { len });
                }
                let sign = -direction.alpha();
                let bias = Complex64::from_polar(1.0, PI / 4.0);
                let pre = fresnel_phase(len, sign);
                let post = pre.iter().map(|v| v * bias).collect();
                (pre, post, direction == ChirpDirection::Down)
            }
        };
        Ok(Self {
            kind,
            direction,
            len,
            dft: Dft::new(len)?,
            pre,
            post,
            inverse,
        })
    }

    pub fn kind(&self) -> WaveformKind {
        self.kind
    }

    pub fn direction(&self) -> ChirpDirection {
        self.direction
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn modulate(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(x, self.len)?;
        let mut buf: Vec<Complex64> = x.iter().zip(&self.pre).map(|(a, b)| a * b).collect();
        self.dft.process(&mut buf, self.inverse);
        for (v, p) in buf.iter_mut().zip(&self.post) {
            *v *= p;
        }
        Ok(buf)
    }

    pub fn demodulate(&self, s: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(s, self.len)?;
        let mut buf: Vec<Complex64> = s
            .iter()
            .zip(&self.post)
            .map(|(a, b)| a * b.conj())
            .collect();
        self.dft.process(&mut buf, !self.inverse);
        for (v, p) in buf.iter_mut().zip(&self.pre) {
            *v *= p.conj();
        }
        Ok(buf)
    }
}

pub fn modulate(x: &[Complex64], kind: WaveformKind) -> Result<Vec<Complex64>> {
    Modulator::new(kind, x.len())?.modulate(x)
}

pub fn demodulate(s: &[Complex64], kind: WaveformKind) -> Result<Vec<Complex64>> {
    Modulator::new(kind, s.len())?.demodulate(s)
}

pub fn afdm_modulate(x: &[Complex64], params: AfdmParams) -> Result<Vec<Complex64>> {
    modulate(x, WaveformKind::Afdm(params))
}

pub fn afdm_demodulate(s: &[Complex64], params: AfdmParams) -> Result<Vec<Complex64>> {
    demodulate(s, WaveformKind::Afdm(params))
}

pub fn ocdm_modulate(x: &[Complex64]) -> Result<Vec<Complex64>> {
    modulate(x, WaveformKind::Ocdm)
}

pub fn ocdm_demodulate(s: &[Complex64]) -> Result<Vec<Complex64>> {
    demodulate(s, WaveformKind::Ocdm)
}

pub fn ofdm_modulate(x: &[Complex64]) -> Result<Vec<Complex64>> {
    modulate(x, WaveformKind::Ofdm)
}

pub fn ofdm_demodulate(s: &[Complex64]) -> Result<Vec<Complex64>> {
    demodulate(s, WaveformKind::Ofdm)
}

/// Band-limited interpolation by an integer factor: the spectrum of `s` is
/// zero-padded in the middle and transformed back. Samples at multiples of
/// `factor` reproduce `s` exactly (up to rounding). `factor = 1` returns
/// `s` unchanged.
pub fn oversample(s: &[Complex64], factor: usize) -> Result<Vec<Complex64>> {
    if factor == 0 {
        return Err(Error::InvalidParameter(
            "oversampling factor must be >= 1".into(),
        ));
    }
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    if factor == 1 {
        return Ok(s.to_vec());
    }
    let n = s.len();
    let spectrum = Dft::new(n)?.apply(s, false)?;
    let total = n * factor;
    let mut padded = vec![Complex64::new(0.0, 0.0); total];
    let positive = n.div_ceil(2);
    padded[..positive].copy_from_slice(&spectrum[..positive]);
    let negative = n - positive;
    padded[total - negative..].copy_from_slice(&spectrum[positive..]);
    let dft = Dft::new(total)?;
    dft.process(&mut padded, true);
    let gain = (factor as f64).sqrt();
    for v in padded.iter_mut() {
        *v *= gain;
    }
    Ok(padded)
}
