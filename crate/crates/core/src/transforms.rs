//! Unitary transforms and deterministic sequences.
//!
//! Every transform here is normalized so that its matrix `W` satisfies
//! `WᴴW = I`. The fast implementations (FFT-backed DFT/DCT, butterfly WHT)
//! are what the modulators and the Monte Carlo harness use; explicit matrix
//! constructions for cross-checking live in [`crate::reference`].

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustdct::{DctPlanner, TransformType2And3};
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// A planned unitary DFT of fixed length.
///
/// Forward uses the `e^{-j2πkn/N}` kernel, inverse `e^{+j2πkn/N}`, both
/// scaled by `1/√N`.
#[derive(Clone)]
pub struct Dft {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl std::fmt::Debug for Dft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dft").field("len", &self.len).finish()
    }
}

impl Dft {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(Self {
            len,
            forward: plan(len, false),
            inverse: plan(len, true),
            scale: 1.0 / (len as f64).sqrt(),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn process(&self, buf: &mut [Complex64], inverse: bool) {
        debug_assert_eq!(buf.len(), self.len);
        if inverse {
            self.inverse.process(buf);
        } else {
            self.forward.process(buf);
        }
        for v in buf.iter_mut() {
            *v *= self.scale;
        }
    }

    pub fn apply(&self, v: &[Complex64], inverse: bool) -> Result<Vec<Complex64>> {
        check_len(v, self.len)?;
        let mut buf = v.to_vec();
        self.process(&mut buf, inverse);
        Ok(buf)
    }
}

pub(crate) fn check_len(v: &[Complex64], expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            got: v.len(),
        });
    }
    Ok(())
}

/// Unitary forward (`inverse = false`) or inverse DFT.
pub fn dft(v: &[Complex64], inverse: bool) -> Result<Vec<Complex64>> {
    Dft::new(v.len())?.apply(v, inverse)
}

/// Normalized Walsh-Hadamard transform, `(1/√N)·H_N·v`, in natural
/// (Sylvester) order. Self-inverse.
pub fn fwht(v: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut buf = v.to_vec();
    fwht_in_place(&mut buf)?;
    Ok(buf)
}

pub fn fwht_in_place(buf: &mut [Complex64]) -> Result<()> {
    let n = buf.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if !n.is_power_of_two() {
        return Err(Error::NonPowerOfTwoLength { len: n });
    }
    let mut h = 1;
    while h < n {
        for chunk in buf.chunks_exact_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
    let scale = 1.0 / (n as f64).sqrt();
    for v in buf.iter_mut() {
        *v *= scale;
    }
    Ok(())
}

/// Orthonormal DCT-II of fixed length, backed by `rustdct`.
///
/// The DCT matrix is real, so complex input is transformed linearly (real
/// and imaginary parts independently).
#[derive(Clone)]
pub struct Dct {
    len: usize,
    plan: Arc<dyn TransformType2And3<f64>>,
    /// `√(2/N)·α_k`, turning rustdct's unnormalized sums orthonormal
    weight: Vec<f64>,
}

impl std::fmt::Debug for Dct {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dct")
            .field("len", &self.len)
            .finish_non_exhaustive()
    }
}

impl Dct {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyInput);
        }
        let base = (2.0 / len as f64).sqrt();
        let weight = (0..len)
            .map(|k| if k == 0 { base / 2f64.sqrt() } else { base })
            .collect();
        Ok(Self {
            len,
            plan: DctPlanner::new().plan_dct2(len),
            weight,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn apply(&self, v: &[Complex64], inverse: bool) -> Result<Vec<Complex64>> {
        check_len(v, self.len)?;
        let (mut re, mut im): (Vec<f64>, Vec<f64>) = if inverse {
            // rustdct's DCT-III halves the k = 0 term
            v.iter()
                .zip(&self.weight)
                .enumerate()
                .map(|(k, (y, w))| {
                    let z = y * if k == 0 { 2.0 * w } else { *w };
                    (z.re, z.im)
                })
                .unzip()
        } else {
            v.iter().map(|c| (c.re, c.im)).unzip()
        };
        if inverse {
            self.plan.process_dct3(&mut re);
            self.plan.process_dct3(&mut im);
            Ok(re
                .into_iter()
                .zip(im)
                .map(|(a, b)| Complex64::new(a, b))
                .collect())
        } else {
            self.plan.process_dct2(&mut re);
            self.plan.process_dct2(&mut im);
            Ok(re
                .into_iter()
                .zip(im)
                .zip(&self.weight)
                .map(|((a, b), w)| Complex64::new(a, b) * w)
                .collect())
        }
    }
}

/// Orthonormal DCT-II (`inverse = false`) or its transpose, DCT-III.
pub fn dct2(v: &[Complex64], inverse: bool) -> Result<Vec<Complex64>> {
    Dct::new(v.len())?.apply(v, inverse)
}

/// Exponent convention for Zadoff-Chu phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZcConvention {
    /// `e^{-jπ·u·m(m+1)/N}`
    #[default]
    Shifted,
    /// `e^{-jπ·u·m²/N}`
    Squared,
}

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Zadoff-Chu sequence `z_m = e^{-jπ·u·m(m+1)/N}`.
pub fn zc_sequence(len: usize, root: usize) -> Result<Vec<Complex64>> {
    zc_sequence_with(len, root, ZcConvention::Shifted)
}

pub fn zc_sequence_with(
    len: usize,
    root: usize,
    convention: ZcConvention,
) -> Result<Vec<Complex64>> {
    if len == 0 {
        return Err(Error::EmptyInput);
    }
    if gcd(root, len) != 1 {
        return Err(Error::RootNotCoprime { root, len });
    }
    // Reduce the integer exponent modulo 2N before converting to a phase.
    let modulus = 2 * len as u128;
    Ok((0..len as u128)
        .map(|m| {
            let q = match convention {
                ZcConvention::Shifted => m * (m + 1),
                ZcConvention::Squared => m * m,
            };
            let r = (root as u128 * q) % modulus;
            Complex64::from_polar(1.0, -PI * r as f64 / len as f64)
        })
        .collect())
}

/// Diagonal of the chirp matrix `Λ_c = diag(e^{-j2πcn²})`.
pub fn chirp(len: usize, c: f64) -> Vec<Complex64> {
    (0..len)
        .map(|n| {
            let turns = (c * (n * n) as f64).fract();
            Complex64::from_polar(1.0, -2.0 * PI * turns)
        })
        .collect()
}

/// `Λ_c` as an explicit diagonal matrix.
pub fn chirp_diag(len: usize, c: f64) -> nalgebra::DMatrix<Complex64> {
    nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(chirp(len, c)))
}

/// Row-column block interleaver: `π(i) = (i mod Q)·(N/Q) + ⌊i/Q⌋`.
pub fn interleave_permutation(len: usize, stride: usize) -> Result<Vec<usize>> {
    if len == 0 {
        return Err(Error::EmptyInput);
    }
    if stride == 0 || !len.is_multiple_of(stride) {
        return Err(Error::StrideDoesNotDivide { stride, len });
    }
    let rows = len / stride;
    Ok((0..len).map(|i| (i % stride) * rows + i / stride).collect())
}

/// Forward: `out[i] = v[π(i)]`. Inverse undoes it.
pub fn interleave(v: &[Complex64], stride: usize, inverse: bool) -> Result<Vec<Complex64>> {
    let perm = interleave_permutation(v.len(), stride)?;
    Ok(permute(v, &perm, inverse))
}

pub(crate) fn permute(v: &[Complex64], perm: &[usize], inverse: bool) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for (i, &p) in perm.iter().enumerate() {
        if inverse {
            out[p] = v[i];
        } else {
            out[i] = v[p];
        }
    }
    out
}

/// `√N` for perfect squares, otherwise the largest divisor below `√N`.
pub fn default_stride(len: usize) -> usize {
    let mut best = 1;
    let mut d = 1;
    while d * d <= len {
        if len.is_multiple_of(d) {
            best = d;
        }
        d += 1;
    }
    best
}

/// `Σ|v_n|²`
pub fn energy(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}
