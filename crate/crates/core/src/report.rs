//! CSV and text rendering of campaign results.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiment::{published_deviations, scaling_sweep, Deviation, EnergyRow, RunReport};

/// `%.6g`-style formatting: six significant digits, trailing zeros trimmed,
/// exponent form outside `[1e-4, 1e6)`.
pub fn fmt_sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-4..6).contains(&exp) {
        let s = format!("{v:.5e}");
        let (mant, e) = s.split_once('e').expect("exponent form");
        let mant = trim_zeros(mant);
        let e: i32 = e.parse().expect("exponent");
        return format!("{mant}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs());
    }
    let decimals = (5 - exp).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // rounding can carry into a new digit (999999.5 → 1000000)
    if s.trim_start_matches('-')
        .split('.')
        .next()
        .map_or(0, str::len)
        > 6
    {
        return fmt_sig6(s.parse().expect("number"));
    }
    trim_zeros(&s).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".into(), fmt_sig6)
}

/// `papr0_db,<label>,…` then one row per grid threshold.
pub fn ccdf_csv(report: &RunReport) -> String {
    let mut out = String::from("papr0_db");
    for c in &report.curves {
        out.push(',');
        out.push_str(&c.label);
    }
    out.push('\n');
    let Some(first) = report.curves.first() else {
        return out;
    };
    for (i, t) in first.curve.thresholds_db.iter().enumerate() {
        out.push_str(&fmt_sig6(*t));
        for c in &report.curves {
            out.push(',');
            out.push_str(&fmt_sig6(c.curve.probabilities[i]));
        }
        out.push('\n');
    }
    out
}

pub fn readouts_csv(report: &RunReport) -> String {
    let mut out = String::from("label,level,papr_db,status,candidates_per_trial\n");
    for c in &report.curves {
        for (level, r) in &c.readouts {
            let status = match r.value() {
                Some(_) => "ok".to_string(),
                None => r.to_string().replace(' ', "_"),
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                c.label,
                fmt_sig6(*level),
                opt(r.value()),
                status,
                c.candidates_per_trial
            );
        }
    }
    out
}

pub fn gains_csv(report: &RunReport) -> String {
    let mut out = String::from("label,reference,level,gain_db\n");
    for g in &report.gains {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            g.label,
            g.reference,
            fmt_sig6(g.level),
            opt(g.gain_db)
        );
    }
    out
}

pub fn deviations_csv(rows: &[Deviation]) -> String {
    let mut out = String::from("quantity,published_db,measured_db,deviation_db,within_band\n");
    for d in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            d.what,
            fmt_sig6(d.published_db),
            opt(d.measured_db),
            opt(d.deviation_db()),
            d.within_band()
        );
    }
    out
}

/// Human-readable lines, one per published value:
/// `PASS`/`DEVIATION <what>: measured … published … (Δ …)`.
pub fn deviation_lines(rows: &[Deviation]) -> Vec<String> {
    rows.iter()
        .map(|d| {
            let tag = if d.within_band() { "PASS" } else { "DEVIATION" };
            match (d.measured_db, d.deviation_db()) {
                (Some(m), Some(dev)) => format!(
                    "{tag} {}: measured {m:.2} dB, published {:.2} dB ({dev:+.2} dB)",
                    d.what, d.published_db
                ),
                _ => format!(
                    "{tag} {}: no measurement, published {:.2} dB",
                    d.what, d.published_db
                ),
            }
        })
        .collect()
}

pub fn energy_csv(rows: &[EnergyRow]) -> String {
    let mut out = String::from(
        "waveform,reference_db,spread_db,delta_db,backoff_percent,calibrated_percent,\
         per_sensor_mwh,per_sensor_tco2,sensors,network_mwh,network_tco2\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.waveform,
            opt(r.reference_db),
            opt(r.spread_db),
            opt(r.delta_db),
            opt(r.backoff_percent),
            opt(r.calibrated_percent),
            fmt_sig6(r.per_sensor.energy_mwh),
            fmt_sig6(r.per_sensor.co2_tons),
            r.sensors,
            fmt_sig6(r.network.energy_mwh),
            fmt_sig6(r.network.co2_tons),
        );
    }
    out
}

/// Network savings at ten evenly spaced sizes up to each row's sensor count.
pub fn scaling_csv(rows: &[EnergyRow]) -> String {
    let mut out = String::from("waveform,sensors,energy_mwh,tco2\n");
    for r in rows {
        for (k, s) in scaling_sweep(&r.model, r.sensors, 10) {
            let _ = writeln!(
                out,
                "{},{k},{},{}",
                r.waveform,
                fmt_sig6(s.energy_mwh),
                fmt_sig6(s.co2_tons)
            );
        }
    }
    out
}

/// The resolved configuration plus the symbol digest; reparseable as a
/// settings file.
pub fn manifest(report: &RunReport) -> String {
    let mut out = report.config.manifest();
    let _ = writeln!(out, "# symbols_sha256 {}", report.symbol_digest);
    out
}

fn write(dir: &Path, name: &str, body: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, body).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    written.push(path);
    Ok(())
}

/// Writes `ccdf.csv`, `readouts.csv`, `gains.csv`, `published.csv`,
/// `manifest.txt` and, when given, `energy.csv` and `energy_scaling.csv`.
pub fn write_outputs(
    report: &RunReport,
    energy: Option<&[EnergyRow]>,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    write(dir, "ccdf.csv", &ccdf_csv(report), &mut written)?;
    write(dir, "readouts.csv", &readouts_csv(report), &mut written)?;
    write(dir, "gains.csv", &gains_csv(report), &mut written)?;
    write(
        dir,
        "published.csv",
        &deviations_csv(&published_deviations(report)),
        &mut written,
    )?;
    if let Some(rows) = energy {
        write(dir, "energy.csv", &energy_csv(rows), &mut written)?;
        write(dir, "energy_scaling.csv", &scaling_csv(rows), &mut written)?;
    }
    write(dir, "manifest.txt", &manifest(report), &mut written)?;
    Ok(written)
}
