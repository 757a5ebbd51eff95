//! Premodulation spreading of data symbols.
//!
//! Each technique is a unitary `N×N` matrix `W` applied before the waveform
//! modulator, `s = G·W·x`:
//!
//! * WHT: `W = H_N/√N` (Sylvester order)
//! * DCT: orthonormal DCT-II
//! * ZC: `W = Fᴴ·diag(z)`, a Zadoff-Chu phase mask followed by the unitary
//!   inverse DFT; `mask_only` drops the DFT for ablation
//! * interleaved DFT: `W = P·Fᴴ`, the unitary `e^{+j2πmk/N}` kernel followed
//!   by the stride-`Q` block interleaver
//!
//! No side information is produced: [`Spreader::spread`] returns only the
//! spread vector.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::transforms::{
    check_len, default_stride, fwht_in_place, interleave_permutation, permute, zc_sequence, Dct,
    Dft,
};
use crate::waveforms::{Modulator, WaveformKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpreadingKind {
    None,
    Wht,
    Dct,
    Zc { root: usize, mask_only: bool },
    InterleavedDft { stride: usize },
}

impl SpreadingKind {
    pub fn zc(root: usize) -> Self {
        SpreadingKind::Zc {
            root,
            mask_only: false,
        }
    }

    pub fn interleaved_dft(stride: usize) -> Self {
        SpreadingKind::InterleavedDft { stride }
    }

    /// The four spreading techniques with default parameters for length `len`
    /// (ZC root 1, interleaver stride from [`default_stride`]).
    pub fn all_for(len: usize) -> [SpreadingKind; 4] {
        [
            SpreadingKind::Wht,
            SpreadingKind::Dct,
            SpreadingKind::zc(1),
            SpreadingKind::interleaved_dft(default_stride(len)),
        ]
    }

    pub fn label(&self) -> &'static str {
        match self {
            SpreadingKind::None => "none",
            SpreadingKind::Wht => "wht",
            SpreadingKind::Dct => "dct",
            SpreadingKind::Zc {
                mask_only: false, ..
            } => "zc",
            SpreadingKind::Zc {
                mask_only: true, ..
            } => "zcmask",
            SpreadingKind::InterleavedDft { .. } => "idft",
        }
    }
}

#[derive(Debug, Clone)]
enum Plan {
    Identity,
    Wht,
    Dct(Dct),
    Zc {
        mask: Vec<Complex64>,
        dft: Option<Dft>,
    },
    Interleaved {
        dft: Dft,
        perm: Vec<usize>,
    },
}

/// A spreading matrix bound to a length, validated and precomputed.
#[derive(Debug, Clone)]
pub struct Spreader {
    kind: SpreadingKind,
    len: usize,
    plan: Plan,
}

impl Spreader {
    pub fn new(kind: SpreadingKind, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyInput);
        }
        let plan = match kind {
            SpreadingKind::None => Plan::Identity,
            SpreadingKind::Wht => {
                if !len.is_power_of_two() {
                    return Err(Error::NonPowerOfTwoLength { len });
                }
                Plan::Wht
            }
            SpreadingKind::Dct => Plan::Dct(Dct::new(len)?),
            SpreadingKind::Zc { root, mask_only } => Plan::Zc {
                mask: zc_sequence(len, root)?,
                dft: if mask_only {
                    None
                } else {
                    Some(Dft::new(len)?)
                },
            },
            SpreadingKind::InterleavedDft { stride } => Plan::Interleaved {
                perm: interleave_permutation(len, stride)?,
                dft: Dft::new(len)?,
            },
        };
        Ok(Self { kind, len, plan })
    }

    pub fn kind(&self) -> SpreadingKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `y = W·x`
    pub fn spread(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(x, self.len)?;
        let mut buf = x.to_vec();
        match &self.plan {
            Plan::Identity => {}
            Plan::Wht => fwht_in_place(&mut buf)?,
            Plan::Dct(dct) => buf = dct.apply(&buf, false)?,
            Plan::Zc { mask, dft } => {
                for (v, z) in buf.iter_mut().zip(mask) {
                    *v *= z;
                }
                if let Some(dft) = dft {
                    dft.process(&mut buf, true);
                }
            }
            Plan::Interleaved { dft, perm } => {
                dft.process(&mut buf, true);
                buf = permute(&buf, perm, false);
            }
        }
        Ok(buf)
    }

    /// `x = Wᴴ·y`
    pub fn despread(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(y, self.len)?;
        let mut buf = y.to_vec();
        match &self.plan {
            Plan::Identity => {}
            Plan::Wht => fwht_in_place(&mut buf)?,
            Plan::Dct(dct) => buf = dct.apply(&buf, true)?,
            Plan::Zc { mask, dft } => {
                if let Some(dft) = dft {
                    dft.process(&mut buf, false);
                }
                for (v, z) in buf.iter_mut().zip(mask) {
                    *v *= z.conj();
                }
            }
            Plan::Interleaved { dft, perm } => {
                buf = permute(&buf, perm, true);
                dft.process(&mut buf, false);
            }
        }
        Ok(buf)
    }
}

pub fn spread(x: &[Complex64], kind: SpreadingKind) -> Result<Vec<Complex64>> {
    Spreader::new(kind, x.len())?.spread(x)
}

pub fn despread(y: &[Complex64], kind: SpreadingKind) -> Result<Vec<Complex64>> {
    Spreader::new(kind, y.len())?.despread(y)
}

/// Spreading followed by modulation: select the spreading, compute `y`, then
/// apply the waveform filter to `y`.
#[derive(Debug, Clone)]
pub struct Transmitter {
    spreader: Spreader,
    modulator: Modulator,
}

impl Transmitter {
    pub fn new(kind: SpreadingKind, waveform: WaveformKind, len: usize) -> Result<Self> {
        Ok(Self {
            spreader: Spreader::new(kind, len)?,
            modulator: Modulator::new(waveform, len)?,
        })
    }

    pub fn from_parts(spreader: Spreader, modulator: Modulator) -> Result<Self> {
        if spreader.len() != modulator.len() {
            return Err(Error::LengthMismatch {
                expected: modulator.len(),
                got: spreader.len(),
            });
        }
        Ok(Self {
            spreader,
            modulator,
        })
    }

    pub fn spreader(&self) -> &Spreader {
        &self.spreader
    }

    pub fn modulator(&self) -> &Modulator {
        &self.modulator
    }

    pub fn len(&self) -> usize {
        self.modulator.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn transmit(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let y = self.spreader.spread(x)?;
        self.modulator.modulate(&y)
    }

    pub fn receive(&self, s: &[Complex64]) -> Result<Vec<Complex64>> {
        let y = self.modulator.demodulate(s)?;
        self.spreader.despread(&y)
    }
}

pub fn transmit(
    x: &[Complex64],
    kind: SpreadingKind,
    waveform: WaveformKind,
) -> Result<Vec<Complex64>> {
    Transmitter::new(kind, waveform, x.len())?.transmit(x)
}

pub fn receive(
    s: &[Complex64],
    kind: SpreadingKind,
    waveform: WaveformKind,
) -> Result<Vec<Complex64>> {
    Transmitter::new(kind, waveform, s.len())?.receive(s)
}
