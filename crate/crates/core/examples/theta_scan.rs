//! A theta scan through the experiment runner: CSV, manifest and SVG plot in
//! the directory given as the first argument (default `theta-scan-out`).

use std::path::PathBuf;

use lrperc::experiments::{plot, run, ExperimentConfig, Kind};

const CONFIG: &str = "\
beta = 0.5, 1.2, 4
lambda = 6
sizes = 64, 256, 1024
samples = 2000
seed = 7
";

fn main() -> lrperc::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "theta-scan-out".into()));
    let cfg = ExperimentConfig::parse(CONFIG, Kind::ThetaScan)?;
    let result = run(&cfg, 0, &out)?;
    print!("{}", std::fs::read_to_string(&result.csv)?);
    println!("plot: {}", plot::plot(&result.csv, Kind::ThetaScan)?.display());
    Ok(())
}

// $ cargo run --release --example theta_scan -- /tmp/scan
