//! Brute-force reference implementations built only from dense matrices.

#![allow(dead_code)]

use chirp_papr::baselines::{Partition, PtsConfig, SlmConfig};
use chirp_papr::reference::{afdm_matrix, apply, modulator_matrix, ocdm_matrix};
use chirp_papr::{AfdmParams, ChirpDirection, Complex64, RandomSource, WaveformKind};

pub fn papr_db(s: &[Complex64]) -> f64 {
    let p: Vec<f64> = s.iter().map(|v| v.norm_sqr()).collect();
    let peak = p.iter().cloned().fold(0.0, f64::max);
    let mean = p.iter().sum::<f64>() / p.len() as f64;
    10.0 * (peak / mean).log10()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Deterministic QPSK pattern shared with the numpy oracle.
pub fn pattern(n: usize) -> Vec<Complex64> {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    (0..n)
        .map(|k| {
            let re = if (k * 7) % 3 != 0 { a } else { -a };
            let im = if (k * 5) % 4 < 2 { a } else { -a };
            Complex64::new(re, im)
        })
        .collect()
}

pub fn pts_candidates(x: &[Complex64], wf: WaveformKind, cfg: &PtsConfig) -> Vec<Vec<Complex64>> {
    let n = x.len();
    let g = modulator_matrix(wf, n).unwrap();
    let m = cfg.subblocks;
    let b = cfg.phases.len();
    let total = b.pow(m as u32 - 1);
    (0..total)
        .map(|idx| {
            // weight for block j ≥ 1 is digit j−1 of idx in base b
            let weight = |j: usize| {
                if j == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    cfg.phases[(idx / b.pow(j as u32 - 1)) % b]
                }
            };
            let xw: Vec<Complex64> = x
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    let j = match cfg.partition {
                        Partition::Contiguous => k / (n / m),
                        Partition::Interleaved => k % m,
                    };
                    v * weight(j)
                })
                .collect();
            apply(&g, &xw)
        })
        .collect()
}

pub fn slm_candidates(x: &[Complex64], wf: WaveformKind, cfg: &SlmConfig) -> Vec<Vec<Complex64>> {
    let g = modulator_matrix(wf, x.len()).unwrap();
    (0..cfg.candidates)
        .map(|u| {
            let xr: Vec<Complex64> = if u == 0 {
                x.to_vec()
            } else {
                let ph = RandomSource::new(cfg.seed, u as u64).quarter_phases(x.len());
                x.iter().zip(ph).map(|(a, b)| a * b).collect()
            };
            apply(&g, &xr)
        })
        .collect()
}

pub fn chirp_candidates(x: &[Complex64]) -> Vec<Vec<Complex64>> {
    [ChirpDirection::Down, ChirpDirection::Up]
        .iter()
        .map(|&d| apply(&ocdm_matrix(x.len(), d).unwrap(), x))
        .collect()
}

/// `Σ_g G(c1, c2_g)·x_g` for every assignment of candidates to groups
/// (group 0 least significant).
pub fn gps_candidates(x: &[Complex64], groups: usize, c2s: &[f64], c1: f64) -> Vec<Vec<Complex64>> {
    let n = x.len();
    let size = n / groups;
    let mats: Vec<_> = c2s
        .iter()
        .map(|&c2| afdm_matrix(n, AfdmParams::new(c1, c2).unwrap()))
        .collect();
    let total = c2s.len().pow(groups as u32);
    (0..total)
        .map(|idx| {
            let mut acc = vec![Complex64::new(0.0, 0.0); n];
            for g in 0..groups {
                let c = (idx / c2s.len().pow(g as u32)) % c2s.len();
                let part: Vec<Complex64> = (0..n)
                    .map(|k| {
                        if k / size == g {
                            x[k]
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    })
                    .collect();
                for (a, v) in acc.iter_mut().zip(apply(&mats[c], &part)) {
                    *a += v;
                }
            }
            acc
        })
        .collect()
}

/// Decimal rounding to `digits` significant digits, halves away from zero.
/// The tiny relative nudge keeps values like 11.915 (stored as
/// 11.91499999…) on the intended side.
pub fn round_sig(v: f64, digits: i32) -> f64 {
    let e = v.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits - 1 - e);
    let nudged = v * scale * (1.0 + 1e-12);
    nudged.round() / scale
}

/// Checks that `signal` is one of `cands`, that its PAPR is `papr`, and that
/// no candidate beats it by more than rounding.
pub fn assert_is_minimum(signal: &[Complex64], papr: f64, cands: &[Vec<Complex64>]) {
    let min = cands
        .iter()
        .map(|c| papr_db(c))
        .fold(f64::INFINITY, f64::min);
    assert!(
        (papr - min).abs() < 1e-9,
        "reported {papr}, brute-force minimum {min}"
    );
    assert!((papr_db(signal) - papr).abs() < 1e-9);
    assert!(
        cands
            .iter()
            .any(|c| max_diff(c, signal) < 1e-9 && (papr_db(c) - min).abs() < 1e-9),
        "returned signal is not a minimizing candidate"
    );
}
