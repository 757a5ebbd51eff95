use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use chirp_papr::config::Settings;
use chirp_papr::experiment::{
    compare, energy_report, published_deviations, run_ccdf, Campaign, ExperimentConfig,
};
use chirp_papr::report::{ccdf_csv, deviation_lines, energy_csv, write_outputs};
use chirp_papr::{selftest, Error};

/// PAPR simulation for OFDM, OCDM and AFDM with premodulation spreading.
#[derive(Parser)]
#[command(name = "chirp-papr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// CCDF of each waveform with and without spreading.
    Ccdf(RunArgs),
    /// Spreading against PTS, SLM, chirp selection and grouped pre-chirp.
    Compare(RunArgs),
    /// Power and CO2 savings implied by the interleaved-DFT PAPR gain.
    Energy(RunArgs),
    /// Internal consistency checks.
    Selftest,
}

#[derive(Args)]
struct RunArgs {
    /// `key = value` settings file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma list of ofdm, ocdm, afdm.
    #[arg(long)]
    waveform: Option<String>,
    /// Comma list of none, wht, dct, zc, zcmask, idft.
    #[arg(long)]
    spreading: Option<String>,
    /// Explicit comma list of labels such as `ocdm+idft, afdm+gps`.
    #[arg(long)]
    pipeline: Option<String>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long = "zc-root")]
    zc_root: Option<usize>,
    /// Interleaver stride for the idft spreading.
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long = "grid-max-db")]
    grid_max_db: Option<f64>,
    #[arg(long = "grid-step-db")]
    grid_step_db: Option<f64>,
    #[arg(long)]
    oversample: Option<usize>,
    /// Output directory; without it the CCDF CSV goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads, 0 = all cores, 1 = serial.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long = "pts-subblocks")]
    pts_subblocks: Option<usize>,
    #[arg(long = "pts-phases")]
    pts_phases: Option<usize>,
    #[arg(long = "slm-candidates")]
    slm_candidates: Option<usize>,
    #[arg(long = "slm-seed")]
    slm_seed: Option<u64>,
    #[arg(long = "gps-groups")]
    gps_groups: Option<usize>,
    /// Comma list of c2 candidates for grouped pre-chirp.
    #[arg(long = "gps-c2")]
    gps_c2: Option<String>,
    /// Clip level above RMS in dB.
    #[arg(long = "clip-db")]
    clip_db: Option<f64>,
    /// Low-pass cutoff after clipping, fraction of the band.
    #[arg(long = "clip-cutoff")]
    clip_cutoff: Option<f64>,
    /// Network size for the energy table.
    #[arg(long)]
    sensors: Option<u64>,
}

impl RunArgs {
    fn settings(&self) -> Result<Settings, Error> {
        let mut s = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                Settings::parse(&text)?
            }
            None => Settings::new(),
        };
        let flags: [(&str, Option<String>); 24] = [
            ("n", self.n.map(|v| v.to_string())),
            ("trials", self.trials.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("waveform", self.waveform.clone()),
            ("spreading", self.spreading.clone()),
            ("pipeline", self.pipeline.clone()),
            ("c1", self.c1.map(|v| v.to_string())),
            ("c2", self.c2.map(|v| v.to_string())),
            ("zc-root", self.zc_root.map(|v| v.to_string())),
            ("stride", self.stride.map(|v| v.to_string())),
            ("grid-max-db", self.grid_max_db.map(|v| v.to_string())),
            ("grid-step-db", self.grid_step_db.map(|v| v.to_string())),
            ("oversample", self.oversample.map(|v| v.to_string())),
            ("out", self.out.as_ref().map(|v| v.display().to_string())),
            ("workers", self.workers.map(|v| v.to_string())),
            ("pts-subblocks", self.pts_subblocks.map(|v| v.to_string())),
            ("pts-phases", self.pts_phases.map(|v| v.to_string())),
            ("slm-candidates", self.slm_candidates.map(|v| v.to_string())),
            ("slm-seed", self.slm_seed.map(|v| v.to_string())),
            ("gps-groups", self.gps_groups.map(|v| v.to_string())),
            ("gps-c2", self.gps_c2.clone()),
            ("clip-db", self.clip_db.map(|v| v.to_string())),
            ("clip-cutoff", self.clip_cutoff.map(|v| v.to_string())),
            ("sensors", self.sensors.map(|v| v.to_string())),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                s.set(key, &v)?;
            }
        }
        Ok(s)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::IncompatibleCombination { .. } => 1,
        _ => 2,
    }
}

fn run(campaign: Campaign, args: &RunArgs) -> Result<(), Error> {
    let settings = args.settings()?;
    let cfg = ExperimentConfig::from_settings(&settings, campaign)?;
    let sensors: u64 = settings.parsed("sensors")?.unwrap_or(1_000_000);
    cfg.build()?;

    let report = match campaign {
        Campaign::Compare => compare(&cfg)?,
        _ => run_ccdf(&cfg)?,
    };
    let energy = match campaign {
        Campaign::Energy => Some(energy_report(&report, sensors)?),
        _ => None,
    };

    for line in deviation_lines(&published_deviations(&report)) {
        eprintln!("{line}");
    }
    eprintln!(
        "{} trials x {} pipelines in {:.2?}, symbols sha256 {}",
        cfg.trials,
        report.curves.len(),
        report.elapsed,
        report.symbol_digest
    );

    match &cfg.output_dir {
        Some(dir) => {
            for path in write_outputs(&report, energy.as_deref(), dir)? {
                eprintln!("wrote {}", path.display());
            }
        }
        None => match &energy {
            Some(rows) => print!("{}", energy_csv(rows)),
            None => print!("{}", ccdf_csv(&report)),
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // bad flags are configuration errors; --help and --version are not
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let (campaign, args) = match &cli.command {
        Command::Ccdf(a) => (Campaign::Ccdf, a),
        Command::Compare(a) => (Campaign::Compare, a),
        Command::Energy(a) => (Campaign::Energy, a),
        Command::Selftest => {
            let checks = selftest::run_all();
            for c in &checks {
                println!(
                    "{} {}: {}",
                    if c.passed { "ok  " } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            return if checks.iter().all(|c| c.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            };
        }
    };
    match run(campaign, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
