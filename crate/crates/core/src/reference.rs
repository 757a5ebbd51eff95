//! Explicit `N×N` matrices built entry by entry from the defining formulas.
//!
//! These are O(N²) references for cross-checking the fast paths and for the
//! unitarity checks; nothing on the Monte Carlo path uses them.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spreading::SpreadingKind;
use crate::transforms::{interleave_permutation, zc_sequence};
use crate::waveforms::{AfdmParams, ChirpDirection, WaveformKind};

pub type CMatrix = DMatrix<Complex64>;

fn check_size(len: usize) -> Result<()> {
    if len == 0 {
        Err(Error::EmptyInput)
    } else {
        Ok(())
    }
}

/// Unitary DFT matrix; `inverse` selects the `e^{+j2πmk/N}` kernel.
pub fn dft_matrix(len: usize, inverse: bool) -> CMatrix {
    let sign = if inverse { 1.0 } else { -1.0 };
    let scale = 1.0 / (len as f64).sqrt();
    CMatrix::from_fn(len, len, |r, c| {
        let turns = ((r * c) % len) as f64 / len as f64;
        Complex64::from_polar(scale, sign * 2.0 * PI * turns)
    })
}

/// `H_N/√N` in Sylvester order: `H[r][c] = (-1)^{popcount(r & c)}`.
pub fn hadamard_matrix(len: usize) -> Result<CMatrix> {
    if !len.is_power_of_two() {
        return Err(Error::NonPowerOfTwoLength { len });
    }
    let scale = 1.0 / (len as f64).sqrt();
    Ok(CMatrix::from_fn(len, len, |r, c| {
        let sign = if (r & c).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        Complex64::new(sign * scale, 0.0)
    }))
}

/// Orthonormal DCT-II: `C[k][m] = √(2/N)·α_k·cos(π(2m+1)k/(2N))`.
pub fn dct_matrix(len: usize) -> CMatrix {
    let n = len as f64;
    CMatrix::from_fn(len, len, |k, m| {
        let alpha = if k == 0 { 1.0 / 2f64.sqrt() } else { 1.0 };
        let v = (2.0 / n).sqrt() * alpha * (PI * (2 * m + 1) as f64 * k as f64 / (2.0 * n)).cos();
        Complex64::new(v, 0.0)
    })
}

pub fn permutation_matrix(perm: &[usize]) -> CMatrix {
    let len = perm.len();
    let mut m = CMatrix::zeros(len, len);
    for (r, &c) in perm.iter().enumerate() {
        m[(r, c)] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn spreading_matrix(kind: SpreadingKind, len: usize) -> Result<CMatrix> {
    check_size(len)?;
    Ok(match kind {
        SpreadingKind::None => CMatrix::identity(len, len),
        SpreadingKind::Wht => hadamard_matrix(len)?,
        SpreadingKind::Dct => dct_matrix(len),
        SpreadingKind::Zc { root, mask_only } => {
            let z = zc_sequence(len, root)?;
            let mask = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(z));
            if mask_only {
                mask
            } else {
                dft_matrix(len, true) * mask
            }
        }
        SpreadingKind::InterleavedDft { stride } => {
            let perm = interleave_permutation(len, stride)?;
            permutation_matrix(&perm) * dft_matrix(len, true)
        }
    })
}

/// AFDM modulation matrix, `G[n][k] = (1/√N)·e^{j2π(c1k² + kn/N + c2n²)}`.
pub fn afdm_matrix(len: usize, p: AfdmParams) -> CMatrix {
    let n_f = len as f64;
    CMatrix::from_fn(len, len, |n, k| {
        let (k_f, t) = (k as f64, n as f64);
        let phase = 2.0 * PI * (p.c1 * k_f * k_f + k_f * t / n_f + p.c2 * t * t);
        Complex64::from_polar(1.0 / n_f.sqrt(), phase)
    })
}

/// OCDM modulation matrix,
/// `G[n][k] = (1/√N)·e^{-jπα(n-k)²/N + jπ/4}`.
pub fn ocdm_matrix(len: usize, direction: ChirpDirection) -> Result<CMatrix> {
    if !len.is_multiple_of(2) {
        return Err(Error::OddLength { len });
    }
    let n_f = len as f64;
    let alpha = direction.alpha();
    Ok(CMatrix::from_fn(len, len, |n, k| {
        let d = n as f64 - k as f64;
        Complex64::from_polar(1.0 / n_f.sqrt(), -PI * alpha * d * d / n_f + PI / 4.0)
    }))
}

/// Modulation matrix `G` (time samples × subcarriers) for a waveform.
pub fn modulator_matrix(kind: WaveformKind, len: usize) -> Result<CMatrix> {
    check_size(len)?;
    match kind {
        WaveformKind::Ofdm => Ok(dft_matrix(len, true)),
        WaveformKind::Ocdm => ocdm_matrix(len, ChirpDirection::Down),
        WaveformKind::Afdm(p) => Ok(afdm_matrix(len, p)),
    }
}

/// `max |WᴴW − I|` over all entries.
pub fn unitarity_error(w: &CMatrix) -> f64 {
    let gram = w.adjoint() * w;
    let mut worst: f64 = 0.0;
    for r in 0..gram.nrows() {
        for c in 0..gram.ncols() {
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((gram[(r, c)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

pub fn apply(w: &CMatrix, v: &[Complex64]) -> Vec<Complex64> {
    let col = nalgebra::DVector::from_column_slice(v);
    (w * col).iter().copied().collect()
}
