//! Quick internal consistency checks, run by `chirp-papr selftest`.

use num_complex::Complex64;

use crate::config::Settings;
use crate::experiment::{run_ccdf, Campaign, ExperimentConfig};
use crate::metrics::{network_savings, papr_db, EnergyModel, RandomSource};
use crate::reference::{apply, modulator_matrix, spreading_matrix, unitarity_error};
use crate::report::ccdf_csv;
use crate::spreading::{SpreadingKind, Transmitter};
use crate::waveforms::{AfdmParams, Modulator, WaveformKind};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, worst: f64, tol: f64) -> Check {
    Check {
        name,
        passed: worst <= tol,
        detail: format!("worst {worst:.3e}, tolerance {tol:.0e}"),
    }
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn waveforms() -> [WaveformKind; 3] {
    [
        WaveformKind::Ofdm,
        WaveformKind::Ocdm,
        WaveformKind::Afdm(AfdmParams::default()),
    ]
}

const LENGTHS: [usize; 5] = [2, 4, 8, 16, 64];

fn unitarity() -> Check {
    let mut worst = 0.0f64;
    for n in LENGTHS {
        for k in SpreadingKind::all_for(n) {
            worst = worst.max(unitarity_error(
                &spreading_matrix(k, n).expect("valid length"),
            ));
        }
        for w in waveforms() {
            worst = worst.max(unitarity_error(
                &modulator_matrix(w, n).expect("valid length"),
            ));
        }
    }
    check("unitarity", worst, 1e-10)
}

fn fast_matches_reference() -> Check {
    let mut worst = 0.0f64;
    for n in LENGTHS {
        let x = RandomSource::new(7, n as u64).qpsk_symbols(n);
        for k in SpreadingKind::all_for(n) {
            let fast = Transmitter::new(k, WaveformKind::Ofdm, n)
                .unwrap()
                .spreader()
                .spread(&x)
                .unwrap();
            let slow = apply(&spreading_matrix(k, n).unwrap(), &x);
            worst = worst.max(max_diff(&fast, &slow));
        }
        for w in waveforms() {
            let fast = Modulator::new(w, n).unwrap().modulate(&x).unwrap();
            let slow = apply(&modulator_matrix(w, n).unwrap(), &x);
            worst = worst.max(max_diff(&fast, &slow));
        }
    }
    check("fast transforms match matrices", worst, 1e-9)
}

fn round_trip() -> Check {
    let n = 64;
    let mut worst = 0.0f64;
    for k in SpreadingKind::all_for(n) {
        for w in waveforms() {
            let tx = Transmitter::new(k, w, n).unwrap();
            for t in 0..50 {
                let x = RandomSource::new(11, t).qpsk_symbols(n);
                let back = tx.receive(&tx.transmit(&x).unwrap()).unwrap();
                worst = worst.max(max_diff(&x, &back));
            }
        }
    }
    check("spread/modulate round trip", worst, 1e-9)
}

fn impulse() -> Check {
    let n = 64;
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    x[5] = Complex64::new(1.0, 0.0);
    let worst = [
        WaveformKind::Ocdm,
        WaveformKind::Afdm(AfdmParams::default()),
    ]
    .iter()
    .map(|&w| papr_db(&Modulator::new(w, n).unwrap().modulate(&x).unwrap()).unwrap())
    .fold(0.0, f64::max);
    check("single chirp has 0 dB PAPR", worst, 1e-10)
}

fn determinism() -> Check {
    let run = |workers: usize| {
        let text = format!("n = 16\ntrials = 400\nseed = 3\nworkers = {workers}");
        let cfg = ExperimentConfig::from_settings(&Settings::parse(&text).unwrap(), Campaign::Ccdf)
            .unwrap();
        ccdf_csv(&run_ccdf(&cfg).unwrap())
    };
    let same = run(1) == run(4);
    Check {
        name: "serial and parallel CSV identical",
        passed: same,
        detail: if same {
            "identical".into()
        } else {
            "outputs differ".into()
        },
    }
}

fn energy_linearity() -> Check {
    let mut worst = 0.0f64;
    for m in [EnergyModel::ocdm_reference(), EnergyModel::afdm_reference()] {
        let one = network_savings(1, &m);
        for k in [10u64, 1000, 1_000_000] {
            let s = network_savings(k, &m);
            worst = worst.max((s.energy_mwh - k as f64 * one.energy_mwh).abs() / s.energy_mwh);
            worst = worst.max((s.co2_tons - k as f64 * one.co2_tons).abs() / s.co2_tons);
        }
    }
    check("energy scales linearly", worst, 1e-12)
}

pub fn run_all() -> Vec<Check> {
    vec![
        unitarity(),
        fast_matches_reference(),
        round_trip(),
        impulse(),
        determinism(),
        energy_linearity(),
    ]
}
