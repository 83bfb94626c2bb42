//! Scale and density schedules of the renormalization induction, the seeding
//! bound on `λ`, and empirical tracking of the bad-block recursion.

use crate::cluster::{clusters_in, largest_cluster};
use crate::error::{precondition, Error, Result};
use crate::model::{Interval, ModelParams};
use crate::renorm::{estimate_p_bad, good_threshold, MIN_SAMPLES};
use crate::rng::{derive_seed, replicates};
use crate::sampler::sample_config;
use crate::stats::EstimatorResult;

/// Largest `K_n` the recursion experiment will sample.
pub const MAX_SCALE: u128 = 10_000_000;

const ZETA3: f64 = 1.202_056_903_159_594_3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleLevel {
    pub n: u32,
    pub c_n: u128,
    pub theta_n: f64,
    pub k_n: u128,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleSchedule {
    pub c1: u64,
    pub theta1: f64,
    pub c0: u64,
    pub theta_inf: f64,
    pub levels: Vec<ScaleLevel>,
}

/// `C_n = n³ C_1`, `K_1 = C_1`, `K_{n+1} = C_{n+1} K_n`,
/// `θ_{n+1} = θ_n - C_0 / C_{n+1}`, for `n = 1..=n_max`.
///
/// Fails unless `(C_0/C_1)(ζ(3) - 1) <= θ_1 - θ_∞`, which keeps every `θ_n`
/// (at any depth) at or above `θ_∞`, or if `K_n` overflows `u128`.
pub fn build_schedule(c1: u64, theta1: f64, c0: u64, theta_inf: f64, n_max: u32) -> Result<ScaleSchedule> {
    if c1 < 2 {
        return Err(precondition("C1 must be at least 2"));
    }
    if !(theta_inf > 0.75 && theta_inf < 1.0) {
        return Err(precondition(format!("theta_inf = {theta_inf} must lie in (3/4, 1)")));
    }
    if !(theta1 > theta_inf && theta1 < 1.0) {
        return Err(precondition(format!("theta1 = {theta1} must lie in (theta_inf, 1)")));
    }
    if n_max == 0 {
        return Err(precondition("need at least one level"));
    }
    let drift = c0 as f64 / c1 as f64 * (ZETA3 - 1.0);
    if drift > theta1 - theta_inf {
        return Err(precondition(format!(
            "infeasible schedule: total density loss {drift:.6} exceeds theta1 - theta_inf = {:.6}",
            theta1 - theta_inf
        )));
    }
    let overflow = || Error::ResourceCap("K_n overflows 128-bit integers".into());
    let mut levels = vec![ScaleLevel {
        n: 1,
        c_n: c1 as u128,
        theta_n: theta1,
        k_n: c1 as u128,
    }];
    for n in 2..=n_max {
        let prev = levels.last().expect("nonempty");
        let c_n = (n as u128).pow(3).checked_mul(c1 as u128).ok_or_else(overflow)?;
        let k_n = prev.k_n.checked_mul(c_n).ok_or_else(overflow)?;
        let theta_n = prev.theta_n - c0 as f64 / c_n as f64;
        levels.push(ScaleLevel { n, c_n, theta_n, k_n });
    }
    Ok(ScaleSchedule {
        c1,
        theta1,
        c0,
        theta_inf,
        levels,
    })
}

/// `ln(400 C1³)`: the smallest `λ` with `C1 e^{-λ} <= 1 / (400 C1²)`.
pub fn lambda_seed(c1: u64) -> f64 {
    (400.0 * (c1 as f64).powi(3)).ln()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub level: ScaleLevel,
    /// `p̂(K_n, θ_n)`.
    pub u_hat: EstimatorResult,
    /// `û_n / 100 + 2 C_{n+1}² û_n²`: the recursion's bound for the next level.
    pub rhs_next: f64,
    /// `C_n^{-2} / 400`.
    pub target: f64,
    /// `û_n <= target`.
    pub below_target: bool,
    /// `û_n <= rhs` of the previous row; `None` on the first row.
    pub recursion_holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecursionTrace {
    pub rows: Vec<TraceRow>,
}

/// Estimates `û_n = p(K_n, θ_n)` level by level up to `max_level` and reports
/// how the recursion and the target bound fare. Nothing is asserted.
pub fn run_recursion_experiment(
    schedule: &ScaleSchedule,
    params: &ModelParams,
    n_samples: usize,
    max_level: u32,
    seed: u64,
) -> Result<RecursionTrace> {
    let levels: Vec<&ScaleLevel> = schedule.levels.iter().filter(|l| l.n <= max_level).collect();
    if levels.is_empty() {
        return Err(precondition("max_level selects no schedule level"));
    }
    if let Some(l) = levels.iter().find(|l| l.k_n > MAX_SCALE) {
        return Err(Error::ResourceCap(format!(
            "level {} has K = {} > {MAX_SCALE}",
            l.n, l.k_n
        )));
    }
    let mut rows: Vec<TraceRow> = Vec::new();
    for (idx, level) in levels.iter().enumerate() {
        let u_hat = estimate_p_bad(
            level.k_n as u64,
            level.theta_n,
            params,
            n_samples,
            derive_seed(seed, level.n as u64),
        )?;
        let u = u_hat.mean;
        let c_next = schedule
            .levels
            .get(idx + 1)
            .map(|l| l.c_n as f64)
            .unwrap_or(((level.n + 1) as f64).powi(3) * schedule.c1 as f64);
        let rhs_next = u / 100.0 + 2.0 * c_next * c_next * u * u;
        let target = 1.0 / (400.0 * (level.c_n as f64).powi(2));
        let recursion_holds = rows.last().map(|prev| u <= prev.rhs_next);
        rows.push(TraceRow {
            level: **level,
            u_hat,
            rhs_next,
            target,
            below_target: u <= target,
            recursion_holds,
        });
    }
    Ok(RecursionTrace { rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub k: u64,
    /// Frequency of `B_K` being ¾-good.
    pub f: EstimatorResult,
    /// Frequency of 0 lying in a cluster of `B_K` of size `>= ceil(3K/2)`.
    pub g: EstimatorResult,
    /// Mean fraction of `B_K` covered by clusters of size `>= ceil(3K/2)`.
    pub g_avg: EstimatorResult,
    /// `g >= 3f/4 - 3 se`, with the standard error of `g - 3f/4`.
    pub chain_ok: bool,
    /// When `f >= 1/2`: `g >= 3/8 - 3 se(g)`.
    pub three_eighths_ok: Option<bool>,
}

/// Samples `B_K = [-K, K)` and compares the frequency of 0 sitting in a
/// cluster of size at least `3K/2` with the frequency of `B_K` being ¾-good.
pub fn density_to_percolation(k: u64, params: &ModelParams, n: usize, seed: u64) -> Result<DensityReport> {
    if k == 0 {
        return Err(precondition("K must be positive"));
    }
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            got: n,
            min: MIN_SAMPLES,
        });
    }
    let params = params.validate()?;
    let bbox = Interval::centered(k as i64)?;
    let size = good_threshold(0.75, k);
    let rows = replicates(n, seed, |s| -> Result<(bool, bool, f64)> {
        let config = sample_config(bbox, &params, s)?;
        let part = clusters_in(&config, bbox)?;
        let good = largest_cluster(&part).0 >= size;
        let covered: usize = part.cluster_sizes().filter(|&(_, c)| c >= size).map(|(_, c)| c).sum();
        Ok((good, part.cluster_size(0) >= size, covered as f64 / bbox.len() as f64))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let nn = n as u64;
    let f = EstimatorResult::from_counts(rows.iter().filter(|r| r.0).count() as u64, nn, seed);
    let g = EstimatorResult::from_counts(rows.iter().filter(|r| r.1).count() as u64, nn, seed);
    let cover: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let g_avg = EstimatorResult::from_samples(&cover, seed);
    // Per-sample differences give the joint error of g - 3f/4.
    let diffs: Vec<f64> = rows
        .iter()
        .map(|r| r.1 as u8 as f64 - 0.75 * r.0 as u8 as f64)
        .collect();
    let d = EstimatorResult::from_samples(&diffs, seed);
    let chain_ok = d.mean >= -3.0 * d.stderr;
    let three_eighths_ok = (f.mean >= 0.5).then(|| g.mean >= 0.375 - 3.0 * g.stderr);
    Ok(DensityReport {
        k,
        f: f.with_meta("K", k),
        g: g.with_meta("K", k),
        g_avg,
        chain_ok,
        three_eighths_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u128) -> u128 {
        (1..=n).product()
    }

    #[test]
    fn small_schedules() {
        let s = build_schedule(10, 0.95, 1, 0.8, 3).unwrap();
        assert_eq!(s.levels[1].c_n, 80);
        assert_eq!(s.levels[1].k_n, 800);
        assert_eq!(s.levels[2].k_n, 216_000);
        for l in &s.levels {
            assert_eq!(l.k_n, factorial(l.n as u128).pow(3) * 10u128.pow(l.n));
        }
        assert!(s.levels.windows(2).all(|w| w[1].theta_n < w[0].theta_n));
        assert!(build_schedule(10, 0.95, 1000, 0.8, 3).is_err());
        assert!(build_schedule(10, 0.95, 1, 0.7, 3).is_err());
    }

    #[test]
    fn seeding_lambda() {
        assert!((lambda_seed(10) - 400_000f64.ln()).abs() < 1e-12);
        assert!((lambda_seed(2) - 8.070_906_088_787_819).abs() < 1e-12);
        for c1 in [2u64, 8, 10] {
            let lhs = c1 as f64 * (-lambda_seed(c1)).exp();
            let rhs = 1.0 / (400.0 * (c1 * c1) as f64);
            assert!((lhs / rhs - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_level_trace() {
        let s = build_schedule(8, 0.95, 1, 0.8, 2).unwrap();
        let t = run_recursion_experiment(&s, &ModelParams::new(0.5, 0.5).unwrap(), 100, 1, 3).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].recursion_holds, None);
        assert!(t.rows[0].u_hat.mean > 0.9);
    }

    #[test]
    fn cap_is_enforced() {
        let s = build_schedule(10, 0.95, 1, 0.8, 4).unwrap();
        let err = run_recursion_experiment(&s, &ModelParams::new(1.0, 1.0).unwrap(), 100, 4, 3);
        assert!(matches!(err, Err(Error::ResourceCap(_))));
    }

    #[test]
    fn density_extremes() {
        let full = density_to_percolation(32, &ModelParams::new(1.0, 50.0).unwrap(), 100, 1).unwrap();
        assert_eq!(full.g.mean, 1.0);
        assert_eq!(full.f.mean, 1.0);
        assert_eq!(full.three_eighths_ok, Some(true));
        let empty = density_to_percolation(32, &ModelParams::new(0.01, 0.01).unwrap(), 100, 1).unwrap();
        assert_eq!(empty.g.mean, 0.0);
        assert!(empty.chain_ok);
        assert_eq!(empty.three_eighths_ok, None);
    }
}
