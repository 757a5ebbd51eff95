//! PAPR simulation for OFDM, OCDM and AFDM with premodulation spreading.
//!
//! Every transform is unitary and available two ways: a fast FFT-based path
//! used everywhere ([`waveforms`], [`spreading`]) and explicit dense matrices
//! in [`reference`] that serve as test oracles.

// `!(x > 0.0)` is deliberate: NaN must fail parameter checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod complexity;
pub mod config;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod reference;
pub mod report;
pub mod selftest;
pub mod spreading;
pub mod transforms;
pub mod waveforms;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use experiment::{compare, energy_report, run_ccdf, Campaign, ExperimentConfig, RunReport};
pub use metrics::{
    analytic_ofdm_ccdf, ccdf, papr_db, qpsk_map, CcdfCurve, LevelReadout, RandomSource,
};
pub use spreading::{despread, receive, spread, transmit, SpreadingKind, Transmitter};
pub use waveforms::{demodulate, modulate, AfdmParams, ChirpDirection, Modulator, WaveformKind};
