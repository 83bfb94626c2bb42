//! Parameter sweeps: one CSV row (or block of rows) per grid point, a
//! manifest, and SVG plots of the results.
//!
//! Grid point `k` runs with seed `derive_seed(master_seed, k)`. Grid points
//! are distributed over a thread pool and merged back in grid order, so the
//! CSV bytes depend only on the config and the master seed.

pub mod config;
pub mod plot;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

pub use config::{ExperimentConfig, GridPoint, Kind};

use crate::cluster::{clusters_in, largest_cluster};
use crate::crossing::{check_lemma2, check_theorem_ii_events, estimate_pbar};
use crate::error::{precondition, Error, Result};
use crate::model::{Interval, ModelParams};
use crate::multiscale::{build_schedule, run_recursion_experiment};
use crate::potts::{estimate_theta_bernoulli, estimate_theta_fk, magnetization, ChainRun};
use crate::renorm::estimate_p_bad;
use crate::rng::derive_seed;
use crate::sampler::{expected_edge_count, sample_config};

/// Column names of the CSV written for `kind`.
pub fn columns(kind: Kind) -> &'static [&'static str] {
    match kind {
        Kind::Sample => &[
            "beta", "lambda", "q", "s", "L", "edges", "expected_edges", "largest_cluster", "seed",
        ],
        Kind::PBad => &["K", "theta", "beta", "lambda", "q", "n", "p_hat", "stderr", "seed"],
        Kind::Pbar | Kind::Lemma2 | Kind::Thm2Events => &[
            "kind", "K", "C", "R", "beta", "lambda", "theta", "n", "estimate", "stderr", "bound", "seed",
        ],
        Kind::Multiscale => &[
            "beta", "lambda", "n", "C_n", "theta_n", "K_n", "u_hat", "stderr", "rhs_bound", "target",
            "pass_flags",
        ],
        Kind::FkTheta | Kind::Magnetization | Kind::ThetaScan => &[
            "q", "beta", "lambda", "L", "bc", "n_sweeps", "burn_in", "observable", "estimate", "stderr",
            "tau_int", "seed",
        ],
    }
}

/// `# schema=<kind>/v1`.
pub fn schema_line(kind: Kind) -> String {
    format!("# schema={kind}/v1")
}

type Row = Vec<String>;

/// Output of one grid point: CSV rows plus, for `sample`, a configuration dump.
struct PointOutput {
    rows: Vec<Row>,
    dump: Option<String>,
}

fn f(x: f64) -> String {
    x.to_string()
}

fn integer_q(p: &ModelParams) -> Result<u32> {
    if p.q.fract() != 0.0 || p.q < 1.0 || p.q > u32::MAX as f64 {
        return Err(Error::InvalidParams(vec![format!(
            "q = {} must be a positive integer for Markov chain kinds",
            p.q
        )]));
    }
    Ok(p.q as u32)
}

fn run_point(cfg: &ExperimentConfig, point: &GridPoint) -> Result<PointOutput> {
    let p = point.params;
    let seed = derive_seed(cfg.master_seed, point.index as u64);
    let n = cfg.samples;
    let size = point.size.unwrap_or(0);
    let one = |row: Row| PointOutput {
        rows: vec![row],
        dump: None,
    };
    match cfg.kind {
        Kind::Sample => {
            let bbox = Interval::centered(size as i64)?;
            let config = sample_config(bbox, &p, seed)?;
            let part = clusters_in(&config, bbox)?;
            Ok(PointOutput {
                rows: vec![vec![
                    f(p.beta),
                    f(p.lambda),
                    f(p.q),
                    f(p.s),
                    size.to_string(),
                    config.edge_count().to_string(),
                    f(expected_edge_count(bbox, &p)?),
                    largest_cluster(&part).0.to_string(),
                    seed.to_string(),
                ]],
                dump: Some(config.dump_to_string()),
            })
        }
        Kind::PBad => {
            let theta: f64 = cfg.require("theta")?;
            let r = estimate_p_bad(size, theta, &p, n, seed)?;
            Ok(one(vec![
                size.to_string(),
                f(theta),
                f(p.beta),
                f(p.lambda),
                f(p.q),
                n.to_string(),
                f(r.mean),
                f(r.stderr),
                seed.to_string(),
            ]))
        }
        Kind::Pbar => {
            let w: u64 = cfg.get("window_halfwidth")?.unwrap_or(5 * size);
            let r = estimate_pbar(size, &p, w, n, seed)?;
            Ok(one(crossing_row("pbar", size, None, None, &p, None, n, r.mean, r.stderr, None, seed)))
        }
        Kind::Lemma2 => {
            let (c, r, theta): (u64, u64, f64) = (cfg.require("c")?, cfg.require("r")?, cfg.require("theta")?);
            let rep = check_lemma2(size, c, &p, theta, r, n, seed)?;
            Ok(one(crossing_row(
                "lemma2",
                size,
                Some(c),
                Some(r),
                &p,
                Some(theta),
                n,
                rep.pbar_ck.mean,
                rep.pbar_ck.stderr,
                Some(rep.bound),
                seed,
            )))
        }
        Kind::Thm2Events => {
            let cond: bool = cfg.get("condition_on_b")?.unwrap_or(false);
            let rep = check_theorem_ii_events(size, &p, n, seed, cond)?;
            let bound = 1.0 - rep.p_a.mean;
            Ok(one(crossing_row(
                "thm2ev",
                size,
                None,
                None,
                &p,
                None,
                n,
                rep.slack + bound,
                rep.slack_stderr,
                Some(bound),
                seed,
            )))
        }
        Kind::Multiscale => {
            let schedule = build_schedule(
                cfg.require("c1")?,
                cfg.require("theta1")?,
                cfg.require("c0")?,
                cfg.require("theta_inf")?,
                cfg.require("max_level")?,
            )?;
            let max_level: u32 = cfg.require("max_level")?;
            let trace = run_recursion_experiment(&schedule, &p, n, max_level, seed)?;
            let rows = trace
                .rows
                .iter()
                .map(|r| {
                    let rec = match r.recursion_holds {
                        Some(true) => "1",
                        Some(false) => "0",
                        None => "NA",
                    };
                    vec![
                        f(p.beta),
                        f(p.lambda),
                        r.level.n.to_string(),
                        r.level.c_n.to_string(),
                        f(r.level.theta_n),
                        r.level.k_n.to_string(),
                        f(r.u_hat.mean),
                        f(r.u_hat.stderr),
                        f(r.rhs_next),
                        f(r.target),
                        format!("target={};recursion={rec}", r.below_target as u8),
                    ]
                })
                .collect();
            Ok(PointOutput { rows, dump: None })
        }
        Kind::FkTheta | Kind::Magnetization | Kind::ThetaScan => {
            let q = integer_q(&p)?;
            let mut run = ChainRun::new(n, seed);
            if let Some(b) = cfg.get::<usize>("burn_in")? {
                run = run.with_burn_in(b);
            }
            if let Some(b) = cfg.get::<usize>("batches")? {
                run.batches = b;
            }
            let (observable, r) = match (cfg.kind, q) {
                (Kind::Magnetization, 1) => {
                    return Err(Error::InvalidParams(vec!["magnetization needs q >= 2".into()]))
                }
                (Kind::Magnetization, _) => ("magnetization", magnetization(q, &p, size, run)?),
                (_, 1) => {
                    run = run.with_burn_in(0);
                    let bbox = Interval::centered(size as i64)?;
                    ("theta_fk", estimate_theta_bernoulli(&p, bbox, n, seed)?)
                }
                _ => ("theta_fk", estimate_theta_fk(q, &p, size, run)?),
            };
            let tau = r.metadata.get("tau_int").cloned().unwrap_or_else(|| "0.5".into());
            Ok(one(vec![
                q.to_string(),
                f(p.beta),
                f(p.lambda),
                size.to_string(),
                "wired".into(),
                run.n_sweeps.to_string(),
                run.burn_in().to_string(),
                observable.into(),
                f(r.mean),
                f(r.stderr),
                tau,
                seed.to_string(),
            ]))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn crossing_row(
    kind: &str,
    k: u64,
    c: Option<u64>,
    r: Option<u64>,
    p: &ModelParams,
    theta: Option<f64>,
    n: usize,
    estimate: f64,
    stderr: f64,
    bound: Option<f64>,
    seed: u64,
) -> Row {
    let opt = |v: Option<String>| v.unwrap_or_default();
    vec![
        kind.into(),
        k.to_string(),
        opt(c.map(|v| v.to_string())),
        opt(r.map(|v| v.to_string())),
        f(p.beta),
        f(p.lambda),
        opt(theta.map(f)),
        n.to_string(),
        f(estimate),
        f(stderr),
        opt(bound.map(f)),
        seed.to_string(),
    ]
}

/// Files written by [`run`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub csv: PathBuf,
    pub manifest: PathBuf,
    pub rows: usize,
}

/// Renders the CSV text (schema line, header, rows) for already computed rows.
fn render_csv(kind: Kind, rows: &[Row]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns(kind))?;
    for r in rows {
        w.write_record(r)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?)
        .map_err(|e| Error::Io(e.to_string()))?;
    Ok(format!("{}\n{body}", schema_line(kind)))
}

/// Runs every grid point of `cfg` on `threads` workers (0 = all cores) and
/// writes `<output or kind>.csv` and `manifest.txt` into `out_dir`.
pub fn run(cfg: &ExperimentConfig, threads: usize, out_dir: &Path) -> Result<RunOutput> {
    cfg.validate()?;
    let grid = cfg.grid();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| precondition(format!("thread pool: {e}")))?;
    let outputs: Vec<PointOutput> = pool.install(|| {
        grid.par_iter()
            .map(|pt| run_point(cfg, pt))
            .collect::<Vec<_>>()
            .into_iter()
            .collect::<Result<Vec<_>>>()
    })?;

    fs::create_dir_all(out_dir)?;
    let name = cfg.output.clone().unwrap_or_else(|| format!("{}.csv", cfg.kind));
    let csv_path = out_dir.join(name);
    let rows: Vec<Row> = outputs.iter().flat_map(|o| o.rows.iter().cloned()).collect();
    fs::write(&csv_path, render_csv(cfg.kind, &rows)?)?;
    for (pt, o) in grid.iter().zip(&outputs) {
        if let Some(d) = &o.dump {
            fs::write(out_dir.join(format!("sample_{}.txt", pt.index)), d)?;
        }
    }

    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let manifest = format!(
        "# lrperc {} manifest\nversion = {}\ncreated_unix = {stamp}\nthreads = {threads}\ngrid_points = {}\ncsv = {}\n# config\n{}",
        cfg.kind,
        env!("CARGO_PKG_VERSION"),
        grid.len(),
        csv_path.display(),
        cfg.to_text()
    );
    let manifest_path = out_dir.join("manifest.txt");
    fs::write(&manifest_path, manifest)?;
    Ok(RunOutput {
        csv: csv_path,
        manifest: manifest_path,
        rows: rows.len(),
    })
}

/// Process exit code for an error: 2 invalid input, 3 resource cap, 4 I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ResourceCap(_) => 3,
        Error::Io(_) => 4,
        _ => 2,
    }
}
