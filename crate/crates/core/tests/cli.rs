//! End-to-end runs of the `chirp-papr` binary.

use std::fs;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chirp-papr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SMALL: &[&str] = &["--n", "16", "--trials", "300", "--grid-step-db", "0.5"];

#[test]
fn ccdf_to_stdout() {
    let mut args = vec!["ccdf"];
    args.extend(SMALL);
    args.extend(["--pipeline", "ofdm, ocdm+wht"]);
    let o = bin(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("papr0_db,ofdm,ocdm+wht"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 25);
    assert!(rows[0].starts_with("0,1,1"));
    assert!(rows.last().unwrap().starts_with("12,"));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(
        &cfg,
        "# small run\nn = 16\ntrials = 200\nseed = 5\npipeline = ocdm, ocdm+idft\nstride = 2\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = bin(&[
        "ccdf",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "ccdf.csv",
        "readouts.csv",
        "gains.csv",
        "published.csv",
        "manifest.txt",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
    let manifest = fs::read_to_string(out.join("manifest.txt")).unwrap();
    assert!(manifest.contains("seed = 6\n"));
    assert!(manifest.contains("stride = 2\n"));
    assert!(manifest.contains("pipeline = ocdm, ocdm+idft\n"));
    assert!(manifest.contains("# symbols_sha256 "));

    // rerunning from the manifest reproduces the CSV exactly
    let again = dir.path().join("again");
    let o = bin(&[
        "ccdf",
        "--config",
        out.join("manifest.txt").to_str().unwrap(),
        "--out",
        again.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(
        fs::read(out.join("ccdf.csv")).unwrap(),
        fs::read(again.join("ccdf.csv")).unwrap()
    );
}

#[test]
fn compare_and_energy() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["compare"];
    args.extend(SMALL);
    args.extend(["--pipeline", "ocdm+pts, ocdm+chirpsel, afdm+gps, afdm+slm"]);
    let o = bin(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("papr0_db,ocdm,ocdm+pts,ocdm+chirpsel,afdm,afdm+gps,afdm+slm\n"));

    let out = dir.path().join("e");
    let mut args = vec!["energy"];
    args.extend(SMALL);
    args.extend(["--sensors", "10000", "--out", out.to_str().unwrap()]);
    let o = bin(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let energy = fs::read_to_string(out.join("energy.csv")).unwrap();
    let rows: Vec<&str> = energy.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("ocdm,"));
    assert!(rows[1].ends_with(",10000,23.83,11.915"));
    assert!(rows[2].ends_with(",10000,27.53,13.765"));
    assert!(out.join("energy_scaling.csv").exists());
}

#[test]
fn exit_codes() {
    // unknown key in a config file
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(
        bin(&["ccdf", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
    // incompatible combination named in the message
    let o = bin(&["ccdf", "--n", "16", "--pipeline", "ofdm+chirpsel"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ofdm+chirpsel"));
    // WHT needs a power of two
    assert_eq!(
        bin(&["ccdf", "--n", "12", "--pipeline", "ocdm+wht"])
            .status
            .code(),
        Some(1)
    );
    // missing config file is an I/O error
    assert_eq!(
        bin(&["ccdf", "--config", "/nonexistent/x.conf"])
            .status
            .code(),
        Some(2)
    );
    // energy without the curves it needs
    assert_eq!(
        bin(&[
            "energy",
            "--n",
            "16",
            "--trials",
            "50",
            "--pipeline",
            "ocdm"
        ])
        .status
        .code(),
        Some(2)
    );
    // malformed flag value
    assert_eq!(bin(&["ccdf", "--trials", "many"]).status.code(), Some(1));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn selftest_passes() {
    let o = bin(&["selftest"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 6);
}
