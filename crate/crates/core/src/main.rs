use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lrperc::experiments::{self, plot, ExperimentConfig, Kind};
use lrperc::Error;

/// Sweeps and plots for long-range percolation and Potts experiments.
#[derive(Parser)]
#[command(name = "lrperc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// `key = value` config file.
    #[arg(long)]
    config: PathBuf,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    Sample(RunArgs),
    PBad(RunArgs),
    Pbar(RunArgs),
    Lemma2(RunArgs),
    Thm2Events(RunArgs),
    Multiscale(RunArgs),
    FkTheta(RunArgs),
    Magnetization(RunArgs),
    ThetaScan(RunArgs),
    /// Render an experiment CSV as SVG next to it.
    Plot {
        csv: PathBuf,
        /// Experiment kind the CSV was produced by.
        #[arg(long)]
        kind: String,
    },
}

fn run(kind: Kind, args: &RunArgs) -> Result<(), Error> {
    let text = std::fs::read_to_string(&args.config)?;
    let mut cfg = ExperimentConfig::parse(&text, kind)?;
    if let Ok(seed) = std::env::var("LRPERC_SEED") {
        cfg.master_seed = seed
            .trim()
            .parse()
            .map_err(|e| Error::InvalidParams(vec![format!("LRPERC_SEED = `{seed}`: {e}")]))?;
    }
    let out = experiments::run(&cfg, args.threads, &args.out)?;
    println!("{} rows -> {}", out.rows, out.csv.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Plot { csv, kind } => kind
            .parse::<Kind>()
            .and_then(|k| plot::plot(csv, k))
            .map(|p| println!("wrote {}", p.display())),
        Command::Sample(a) => run(Kind::Sample, a),
        Command::PBad(a) => run(Kind::PBad, a),
        Command::Pbar(a) => run(Kind::Pbar, a),
        Command::Lemma2(a) => run(Kind::Lemma2, a),
        Command::Thm2Events(a) => run(Kind::Thm2Events, a),
        Command::Multiscale(a) => run(Kind::Multiscale, a),
        Command::FkTheta(a) => run(Kind::FkTheta, a),
        Command::Magnetization(a) => run(Kind::Magnetization, a),
        Command::ThetaScan(a) => run(Kind::ThetaScan, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lrperc: {e}");
            ExitCode::from(experiments::exit_code(&e) as u8)
        }
    }
}
