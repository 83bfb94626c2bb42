//! Crossings of `3K`-blocks by short edges, bridges and unbridged blocks,
//! and the finite-volume events behind the "no small positive θ" argument.
//!
//! `B^i_{3K} = [3K(i-1), 3K(i+1))` is `K`-crossed when some `x < 3Ki - 3K` is
//! connected to some `y >= 3Ki + 3K` by open edges of length at most `K`.
//! Paths are confined to a window (by default `[3Ki - 5K, 3Ki + 5K)`); a
//! larger window can only add crossings.

use std::collections::BTreeSet;

use crate::cluster::{check_inside, connected_to_distance, partition_with, ClusterPartition};
use crate::error::{precondition, Error, Result};
use crate::model::{exterior_field, Interval, ModelParams};
use crate::renorm::MIN_SAMPLES;
use crate::rng::replicates;
use crate::sampler::{sample_config, Configuration};
use crate::stats::{joint_stderr, mean_and_stderr, EstimatorResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CrossSpec {
    pub k: u64,
    pub i: i64,
}

impl CrossSpec {
    pub fn new(k: u64, i: i64) -> Result<Self> {
        if k == 0 {
            return Err(precondition("crossing scale K must be positive"));
        }
        Ok(CrossSpec { k, i })
    }

    fn centre(&self) -> i64 {
        3 * self.k as i64 * self.i
    }

    /// `[3K(i-1), 3K(i+1))`.
    pub fn block(&self) -> Interval {
        let k = self.k as i64;
        Interval::new(self.centre() - 3 * k, self.centre() + 3 * k).expect("K >= 1")
    }

    /// `[3Ki - 5K, 3Ki + 5K)`.
    pub fn default_window(&self) -> Interval {
        self.window(5 * self.k)
    }

    /// `[3Ki - w, 3Ki + w)`.
    pub fn window(&self, halfwidth: u64) -> Interval {
        let w = halfwidth as i64;
        Interval::new(self.centre() - w, self.centre() + w).expect("positive halfwidth")
    }
}

fn short_edge_partition(config: &Configuration, window: Interval, k: u64) -> ClusterPartition {
    let k = k as i64;
    partition_with(config, window, move |a, b| b - a <= k)
}

/// Whether `spec`'s block is `K`-crossed inside `window`.
pub fn is_k_crossed(config: &Configuration, spec: CrossSpec, window: Interval) -> Result<bool> {
    check_inside(config, "crossing window", &window)?;
    if !window.contains_interval(&spec.default_window()) {
        return Err(precondition(format!(
            "crossing window {window} must contain {}",
            spec.default_window()
        )));
    }
    let part = short_edge_partition(config, window, spec.k);
    let block = spec.block();
    let left: BTreeSet<i64> = (window.lo()..block.lo()).map(|x| part.representative(x)).collect();
    Ok((block.hi()..window.hi()).any(|y| left.contains(&part.representative(y))))
}

/// `1 - P[B_{3K} is K-crossed]`, paths confined to `[-W, W)`.
pub fn estimate_pbar(
    k: u64,
    params: &ModelParams,
    window_halfwidth: u64,
    n: usize,
    seed: u64,
) -> Result<EstimatorResult> {
    let spec = CrossSpec::new(k, 0)?;
    if window_halfwidth < 5 * k {
        return Err(precondition(format!(
            "window half-width {window_halfwidth} is below 5K = {}",
            5 * k
        )));
    }
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            got: n,
            min: MIN_SAMPLES,
        });
    }
    let params = params.validate()?;
    let window = spec.window(window_halfwidth);
    let crossed = replicates(n, seed, |s| -> Result<bool> {
        let config = sample_config(window, &params, s)?;
        is_k_crossed(&config, spec, window)
    })
    .into_iter()
    .collect::<Result<Vec<bool>>>()?;
    let hits = crossed.iter().filter(|&&c| !c).count() as u64;
    Ok(EstimatorResult::from_counts(hits, n as u64, seed)
        .with_meta("K", k)
        .with_meta("window_halfwidth", window_halfwidth))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BridgeVerdict {
    pub edge: (i64, i64),
    pub r: u64,
    pub is_bridge: bool,
    /// `K < y - x <= CK`.
    pub length_ok: bool,
}

/// Whether the open edge `{x, y}` is a bridge: with the edge removed, both
/// endpoints are connected to distance `R`.
pub fn is_bridge(config: &Configuration, edge: (i64, i64), r: u64, k: u64, c: u64) -> Result<BridgeVerdict> {
    let (x, y) = if edge.0 <= edge.1 { edge } else { (edge.1, edge.0) };
    if x == y {
        return Err(Error::SelfEdge(x));
    }
    if r == 0 {
        return Err(precondition("bridge radius R must be positive"));
    }
    let ri = r as i64;
    check_inside(config, "bridge margin", &Interval::new(x - ri, y + ri)?)?;
    let len = (y - x) as u64;
    let length_ok = len > k && len <= c.saturating_mul(k);
    let is_bridge = config.is_open(x, y)
        && connected_to_distance(config, x, r, Some((x, y)))?
        && connected_to_distance(config, y, r, Some((x, y)))?;
    Ok(BridgeVerdict {
        edge: (x, y),
        r,
        is_bridge,
        length_ok,
    })
}

/// Indices `i ≡ 0 (mod 3)` with `B^i_{3K} ⊆ B_{CK}`.
pub fn candidate_blocks(k: u64, c: u64) -> Vec<i64> {
    let ck = (c * k) as i64;
    let k3 = 3 * k as i64;
    let reach = ck / k3 + 1;
    (-reach..=reach)
        .filter(|i| i % 3 == 0 && k3 * (i - 1) >= -ck && k3 * (i + 1) <= ck)
        .collect()
}

/// Unbridged candidate blocks.
///
/// A block `B^i_{3K}` counts as bridged when some bridge `{x, y}` with
/// `K < y - x <= CK` satisfies `x < 3K(i+1)` and `y >= 3K(i-1)`, i.e. the
/// bridge spans over part of the block. (Reading the two conditions as
/// alternatives would make a single bridge anywhere bridge every block.)
pub fn unbridged_blocks(config: &Configuration, k: u64, c: u64, r: u64) -> Result<Vec<i64>> {
    if k == 0 || c == 0 || r == 0 {
        return Err(precondition("K, C and R must be positive"));
    }
    let ck = (c * k) as i64;
    let margin = ck + r as i64;
    check_inside(config, "bridge search region", &Interval::new(-ck - margin, ck + margin)?)?;
    let k3 = 3 * k as i64;
    let candidates = candidate_blocks(k, c);
    let (Some(&first), Some(&last)) = (candidates.first(), candidates.last()) else {
        return Ok(Vec::new());
    };
    let (x_max, y_min) = (k3 * (last + 1), k3 * (first - 1));
    let mut spans = Vec::new();
    for &(x, y) in config.long_edges() {
        let len = (y - x) as u64;
        if len <= k || len > c * k || x >= x_max || y < y_min {
            continue;
        }
        if is_bridge(config, (x, y), r, k, c)?.is_bridge {
            spans.push((x, y));
        }
    }
    Ok(candidates
        .into_iter()
        .filter(|&i| {
            !spans
                .iter()
                .any(|&(x, y)| x < k3 * (i + 1) && y >= k3 * (i - 1))
        })
        .collect())
}

/// `P[0 <-> Z \ B_R]` for `B_R = [-R, R)`.
///
/// Rao-Blackwellised: sample the edges inside `B_R`, take the cluster `C` of
/// 0 there, and average `1 - exp(-Σ_{v∈C} h(v))` where `h(v)` is the total
/// weight of edges from `v` to the outside. This is the exact conditional
/// probability that `C` has an open edge leaving the box.
pub fn estimate_escape(r: u64, params: &ModelParams, n: usize, seed: u64) -> Result<EstimatorResult> {
    if r == 0 {
        return Err(precondition("escape radius must be positive"));
    }
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            got: n,
            min: MIN_SAMPLES,
        });
    }
    let params = params.validate()?;
    let bbox = Interval::centered(r as i64)?;
    let field: Vec<f64> = bbox.iter().map(|x| exterior_field(x, &bbox, &params)).collect();
    let values = replicates(n, seed, |s| -> Result<f64> {
        let config = sample_config(bbox, &params, s)?;
        Ok(escape_given(&config, 0, &field))
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    Ok(EstimatorResult::from_samples(&values, seed).with_meta("R", r))
}

/// `1 - exp(-Σ_{v ∈ C(origin)} field[v - lo])` over the cluster of `origin`
/// in the whole box of `config`.
pub(crate) fn escape_given(config: &Configuration, origin: i64, field: &[f64]) -> f64 {
    let bbox = config.bbox();
    let part = partition_with(config, bbox, |_, _| true);
    let total: f64 = part
        .members(origin)
        .into_iter()
        .map(|v| field[(v - bbox.lo()) as usize])
        .sum();
    -(-total).exp_m1()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusChoice {
    pub r: u64,
    pub escape: EstimatorResult,
    /// `(P̂ + 3 se)² + (2R)² e^{-β(K-2R)}`.
    pub lhs: f64,
}

/// Smallest `R <= K/2` with `(P̂[0 <-> Z∖B_R] + 3 se)² + (2R)² e^{-β(K-2R)} <= θ²`,
/// or `None`. Whether θ exceeds the true percolation density is the caller's
/// business.
pub fn choose_r(params: &ModelParams, theta: f64, k: u64, n: usize, seed: u64) -> Result<Option<RadiusChoice>> {
    if !(theta > 0.0) {
        return Err(precondition("theta must be positive"));
    }
    let params = params.validate()?;
    for r in 1..=k / 2 {
        let penalty = (2.0 * r as f64).powi(2) * (-params.beta * (k - 2 * r) as f64).exp();
        if penalty > theta * theta {
            // The penalty only grows with R.
            return Ok(None);
        }
        let escape = estimate_escape(r, &params, n, crate::rng::derive_seed(seed, r))?;
        let lhs = (escape.mean + 3.0 * escape.stderr).powi(2) + penalty;
        if lhs <= theta * theta {
            return Ok(Some(RadiusChoice { r, escape, lhs }));
        }
    }
    Ok(None)
}

/// Empirical probability that `{x, y}` is a bridge at radius `R`, sampled on
/// `[x - R - K, y + R + K)` (edges leaving that box are ignored).
pub fn estimate_bridge_probability(
    edge: (i64, i64),
    r: u64,
    k: u64,
    params: &ModelParams,
    n: usize,
    seed: u64,
) -> Result<EstimatorResult> {
    let (x, y) = if edge.0 <= edge.1 { edge } else { (edge.1, edge.0) };
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            got: n,
            min: MIN_SAMPLES,
        });
    }
    let params = params.validate()?;
    let m = (r + k) as i64;
    let bbox = Interval::new(x - m, y + m)?;
    let hits = replicates(n, seed, |s| -> Result<bool> {
        let config = sample_config(bbox, &params, s)?;
        Ok(is_bridge(&config, (x, y), r, 0, u64::MAX)?.is_bridge)
    })
    .into_iter()
    .collect::<Result<Vec<bool>>>()?;
    let count = hits.iter().filter(|&&h| h).count() as u64;
    Ok(EstimatorResult::from_counts(count, n as u64, seed).with_meta("R", r))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma2Report {
    pub k: u64,
    pub c: u64,
    pub r: u64,
    pub theta: f64,
    pub pbar_k: EstimatorResult,
    pub pbar_ck: EstimatorResult,
    /// `C^{1-βθ²} / (9e) * min(p̄(K), 1/C)`.
    pub bound: f64,
    /// `p̄(CK) / bound`, with a delta-method standard error.
    pub ratio: f64,
    pub ratio_stderr: f64,
    /// Mean number of unbridged candidate blocks.
    pub unbridged: EstimatorResult,
    /// `#candidates * ½ C^{-βθ²}`.
    pub unbridged_bound: f64,
}

/// Diagnostic comparison of `p̄(CK)` with its lower bound in terms of
/// `p̄(K)`. Nothing is asserted; the inequality is only claimed for `C, K`
/// beyond an unspecified threshold.
pub fn check_lemma2(
    k: u64,
    c: u64,
    params: &ModelParams,
    theta: f64,
    r: u64,
    n: usize,
    seed: u64,
) -> Result<Lemma2Report> {
    let params = params.validate()?;
    let bt2 = params.beta * theta * theta;
    if bt2 >= 1.0 {
        return Err(precondition(format!("need beta * theta^2 < 1 (got {bt2})")));
    }
    if c < 2 || r == 0 {
        return Err(precondition("need C >= 2 and R >= 1"));
    }
    let ck = c * k;
    let pbar_k = estimate_pbar(k, &params, 5 * k, n, crate::rng::derive_seed(seed, 1))?;
    let pbar_ck = estimate_pbar(ck, &params, 5 * ck, n, crate::rng::derive_seed(seed, 2))?;
    let cf = c as f64;
    let scale = cf.powf(1.0 - bt2) / (9.0 * std::f64::consts::E);
    let (min, min_se) = if pbar_k.mean < 1.0 / cf {
        (pbar_k.mean, pbar_k.stderr)
    } else {
        (1.0 / cf, 0.0)
    };
    let bound = scale * min;
    let (ratio, ratio_stderr) = if bound > 0.0 {
        let ratio = pbar_ck.mean / bound;
        let rel = joint_stderr(
            pbar_ck.stderr / pbar_ck.mean.max(f64::MIN_POSITIVE),
            min_se / min,
        );
        (ratio, ratio.abs() * rel)
    } else {
        (f64::INFINITY, f64::NAN)
    };

    let half = 2 * ck as i64 + r as i64;
    let bbox = Interval::centered(half)?;
    let counts = replicates(n, crate::rng::derive_seed(seed, 3), |s| -> Result<f64> {
        let config = sample_config(bbox, &params, s)?;
        Ok(unbridged_blocks(&config, k, c, r)?.len() as f64)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let (m, se) = mean_and_stderr(&counts);
    let unbridged = EstimatorResult::new(m, se, n as u64, seed);
    let unbridged_bound = candidate_blocks(k, c).len() as f64 * 0.5 * cf.powf(-bt2);
    Ok(Lemma2Report {
        k,
        c,
        r,
        theta,
        pbar_k,
        pbar_ck,
        bound,
        ratio,
        ratio_stderr,
        unbridged,
        unbridged_bound,
    })
}

/// Indicators of the events around `B_{9K}` on one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThmIiSample {
    /// Some `x ∈ [-3K, 3K)` is connected inside the box to some `y ∉ [-9K, 9K)`.
    pub a: bool,
    /// Every open edge of the box with length `> K` avoids `[-9K, 9K)`.
    pub b: bool,
    pub left_crossed: bool,
    pub right_crossed: bool,
}

impl ThmIiSample {
    /// `B ∧ ¬crossed(-2) ∧ ¬crossed(2) ⇒ ¬A`.
    pub fn implication_holds(&self) -> bool {
        !(self.b && !self.left_crossed && !self.right_crossed && self.a)
    }
}

/// `[-12K, 12K)`: the smallest box holding both flanking crossing windows.
pub fn thm_ii_box(k: u64) -> Result<Interval> {
    if k == 0 {
        return Err(precondition("K must be positive"));
    }
    Interval::centered(12 * k as i64)
}

pub fn thm_ii_events(config: &Configuration, k: u64) -> Result<ThmIiSample> {
    let bbox = thm_ii_box(k)?;
    check_inside(config, "event box", &bbox)?;
    let ki = k as i64;
    let inner = Interval::centered(9 * ki)?;
    let b = !config
        .long_edges()
        .iter()
        .any(|&(x, y)| (y - x) as u64 > k && (inner.contains(x) || inner.contains(y)));
    let part = partition_with(config, bbox, |_, _| true);
    let sources: BTreeSet<i64> = (-3 * ki..3 * ki).map(|x| part.representative(x)).collect();
    let a = bbox
        .iter()
        .filter(|&y| !inner.contains(y))
        .any(|y| sources.contains(&part.representative(y)));
    let left = CrossSpec::new(k, -2)?;
    let right = CrossSpec::new(k, 2)?;
    Ok(ThmIiSample {
        a,
        b,
        left_crossed: is_k_crossed(config, left, left.default_window())?,
        right_crossed: is_k_crossed(config, right, right.default_window())?,
    })
}

/// `ln P[B(K)]` in infinite volume: minus `β` times the total coupling of the
/// edges of length `> K` with an endpoint in `[-9K, 9K)`.
pub fn log_prob_b_event(k: u64, params: &ModelParams) -> Result<f64> {
    let params = params.validate()?;
    if k == 0 {
        return Err(precondition("K must be positive"));
    }
    let ki = k as i64;
    let inner = Interval::centered(9 * ki)?;
    let n = inner.len() as u64;
    let s = params.s;
    let internal: f64 = (k + 1..n)
        .map(|d| (n - d) as f64 * crate::model::coupling_unchecked(d, s))
        .sum();
    let external: f64 = inner
        .iter()
        .map(|x| {
            let left = (x - inner.lo() + 1) as u64;
            let right = (inner.hi() - x) as u64;
            crate::model::power_tail_sum(left.max(k + 1), s)
                + crate::model::power_tail_sum(right.max(k + 1), s)
        })
        .sum();
    Ok(-params.beta * (internal + external))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThmIiReport {
    pub k: u64,
    pub p_a: EstimatorResult,
    /// Frequency of `B` restricted to the edges of the box.
    pub p_b_box: EstimatorResult,
    /// Exact infinite-volume `P[B(K)]`.
    pub p_b_exact: f64,
    /// From both flanking blocks of every sample (`2n` indicators).
    pub pbar: EstimatorResult,
    /// `P̂[B] p̄² - (1 - P̂[A])`; should not exceed `3 * slack_stderr`.
    pub slack: f64,
    pub slack_stderr: f64,
    pub inequality_ok: bool,
    pub violations: usize,
    /// Samples where the implication's hypothesis held (non-vacuous checks).
    pub hypothesis_count: usize,
}

/// Monte Carlo check of `P[B] p̄(K)² <= 1 - P[A]` on `[-12K, 12K)`, plus the
/// deterministic implication on every sample.
///
/// With `condition_on_b`, every sample has its long edges touching
/// `[-9K, 9K)` removed (i.e. it is drawn from the law conditioned on `B`),
/// which makes every implication check non-vacuous; the inequality is then
/// not evaluated.
pub fn check_theorem_ii_events(
    k: u64,
    params: &ModelParams,
    n: usize,
    seed: u64,
    condition_on_b: bool,
) -> Result<ThmIiReport> {
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            got: n,
            min: MIN_SAMPLES,
        });
    }
    let params = params.validate()?;
    let bbox = thm_ii_box(k)?;
    let nine = 9 * k as i64;
    let samples = replicates(n, seed, |s| -> Result<ThmIiSample> {
        let mut config = sample_config(bbox, &params, s)?;
        if condition_on_b {
            let inner = |v: i64| (-nine..nine).contains(&v);
            config = config.filtered(|x, y| (y - x) as u64 <= k || !(inner(x) || inner(y)));
        }
        thm_ii_events(&config, k)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let nn = n as u64;
    let count = |f: &dyn Fn(&ThmIiSample) -> bool| samples.iter().filter(|s| f(s)).count() as u64;
    let p_a = EstimatorResult::from_counts(count(&|s| s.a), nn, seed);
    let p_b_box = EstimatorResult::from_counts(count(&|s| s.b), nn, seed);
    let uncrossed = count(&|s| !s.left_crossed) + count(&|s| !s.right_crossed);
    let pbar = EstimatorResult::from_counts(uncrossed, 2 * nn, seed);
    let violations = samples.iter().filter(|s| !s.implication_holds()).count();
    let hypothesis_count = samples
        .iter()
        .filter(|s| s.b && !s.left_crossed && !s.right_crossed)
        .count();
    let lhs = p_b_box.mean * pbar.mean * pbar.mean;
    let slack = lhs - (1.0 - p_a.mean);
    let lhs_se = joint_stderr(
        p_b_box.stderr * pbar.mean * pbar.mean,
        2.0 * p_b_box.mean * pbar.mean * pbar.stderr,
    );
    let slack_stderr = joint_stderr(lhs_se, p_a.stderr);
    Ok(ThmIiReport {
        k,
        p_a,
        p_b_box,
        p_b_exact: log_prob_b_event(k, &params)?.exp(),
        pbar,
        slack,
        slack_stderr,
        inequality_ok: condition_on_b || slack <= 3.0 * slack_stderr,
        violations,
        hypothesis_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(beta: f64, lambda: f64) -> ModelParams {
        ModelParams::new(beta, lambda).unwrap()
    }

    fn cfg(bbox: Interval, edges: &[(i64, i64)]) -> Configuration {
        Configuration::from_edges(bbox, edges.iter().copied(), p(1.0, 1.0), 0).unwrap()
    }

    fn chain(bbox: Interval) -> Configuration {
        let edges: Vec<_> = (bbox.lo()..bbox.hi() - 1).map(|v| (v, v + 1)).collect();
        cfg(bbox, &edges)
    }

    #[test]
    fn long_edge_does_not_cross() {
        let k = 4;
        let spec = CrossSpec::new(k, 1).unwrap();
        let w = spec.default_window();
        let jump = cfg(w, &[(spec.block().lo() - 1, spec.block().hi())]);
        assert!(!is_k_crossed(&jump, spec, w).unwrap());
        assert!(is_k_crossed(&chain(w), spec, w).unwrap());
        let small = spec.window(4 * k);
        assert!(is_k_crossed(&chain(w), spec, small).is_err());
    }

    #[test]
    fn crossing_uses_edges_up_to_k() {
        let k = 3;
        let spec = CrossSpec::new(k, 0).unwrap();
        let w = spec.default_window();
        // Hops of exactly K from -10 to 11.
        let hops: Vec<_> = (0..7).map(|t| (-10 + 3 * t, -7 + 3 * t)).collect();
        assert!(is_k_crossed(&cfg(w, &hops), spec, w).unwrap());
        let longer: Vec<_> = (0..6).map(|t| (-10 + 4 * t, -6 + 4 * t)).collect();
        assert!(!is_k_crossed(&cfg(w, &longer), spec, w).unwrap());
    }

    #[test]
    fn pbar_extremes() {
        let dense = estimate_pbar(8, &p(2.0, 50.0), 40, 200, 1).unwrap();
        assert!(dense.mean < 0.01);
        let sparse = estimate_pbar(8, &p(0.01, 0.01), 40, 200, 2).unwrap();
        assert!(sparse.mean > 0.99);
        assert!(estimate_pbar(8, &p(1.0, 1.0), 39, 200, 2).is_err());
        assert!(estimate_pbar(8, &p(1.0, 1.0), 40, 99, 2).is_err());
    }

    #[test]
    fn bridge_basics() {
        let bbox = Interval::new(-20, 40).unwrap();
        let lone = cfg(bbox, &[(0, 20)]);
        assert!(!is_bridge(&lone, (0, 20), 2, 4, 8).unwrap().is_bridge);
        let closed = cfg(bbox, &[(0, 1), (19, 20)]);
        let v = is_bridge(&closed, (0, 20), 2, 4, 8).unwrap();
        assert!(!v.is_bridge && v.length_ok);
        let mut edges = vec![(0, 20)];
        edges.extend((-3..3).map(|v| (v, v + 1)));
        edges.extend((17..23).map(|v| (v, v + 1)));
        let solid = cfg(bbox, &edges);
        let v = is_bridge(&solid, (20, 0), 3, 4, 8).unwrap();
        assert!(v.is_bridge);
        assert_eq!(v.edge, (0, 20));
        assert!(!is_bridge(&solid, (0, 20), 3, 20, 8).unwrap().length_ok);
        assert!(is_bridge(&solid, (0, 20), 21, 4, 8).is_err());
    }

    #[test]
    fn candidates_fit_in_big_block() {
        assert_eq!(candidate_blocks(8, 8), vec![0]);
        assert_eq!(candidate_blocks(4, 12), vec![-3, 0, 3]);
        assert_eq!(candidate_blocks(2, 24), vec![-6, -3, 0, 3, 6]);
        for i in candidate_blocks(2, 24) {
            let b = CrossSpec::new(2, i).unwrap().block();
            assert!(Interval::centered(48).unwrap().contains_interval(&b));
        }
    }

    #[test]
    fn unbridged_with_and_without_bridges() {
        let (k, c, r) = (2, 24, 2);
        let bbox = Interval::centered(2 * 48 + 2).unwrap();
        let all = candidate_blocks(k, c);
        assert_eq!(unbridged_blocks(&chain(bbox), k, c, r).unwrap(), all);
        // A bridge of length 2K sitting inside block 3 = [12, 24).
        let mut config = chain(bbox).with_edges([(14, 18)]).unwrap();
        assert_eq!(unbridged_blocks(&config, k, c, r).unwrap(), vec![-6, -3, 0, 6]);
        // Too long to count as a bridge.
        config = chain(bbox).with_edges([(0, 49)]).unwrap();
        assert_eq!(unbridged_blocks(&config, k, c, r).unwrap(), all);
        assert!(unbridged_blocks(&chain(Interval::centered(60).unwrap()), k, c, r).is_err());
    }

    #[test]
    fn crossing_events_trivial_cases() {
        let k = 2;
        let bbox = thm_ii_box(k).unwrap();
        let empty = Configuration::empty(bbox, p(1.0, 1.0));
        let ev = thm_ii_events(&empty, k).unwrap();
        assert!(!ev.a && ev.b && !ev.left_crossed && !ev.right_crossed);
        assert!(ev.implication_holds());
        let jump = cfg(bbox, &[(0, 20)]);
        let ev = thm_ii_events(&jump, k).unwrap();
        assert!(ev.a && !ev.b && ev.implication_holds());
        let full = thm_ii_events(&chain(bbox), k).unwrap();
        assert!(full.a && full.b && full.left_crossed && full.right_crossed);
    }

    #[test]
    fn exact_b_probability_matches_direct_sum() {
        let params = p(0.7, 1.0);
        let k = 3u64;
        let inner = Interval::centered(27).unwrap();
        // Direct: all pairs with an endpoint in [-27, 27), far enough out.
        let mut total = 0.0;
        for x in -3000i64..3000 {
            for y in x + k as i64 + 1..3000 {
                if inner.contains(x) || inner.contains(y) {
                    total += 1.0 / ((y - x) as f64).powi(2);
                }
            }
        }
        let got = log_prob_b_event(k, &params).unwrap();
        // The truncated direct sum misses less than 2 * 54 / 2973.
        assert!(got <= -0.7 * total + 1e-12);
        assert!((got + 0.7 * total).abs() < 0.7 * 2.0 * 54.0 / 2973.0);
    }

    #[test]
    fn choose_r_failure_and_success() {
        assert!(choose_r(&p(1.0, 50.0), 0.01, 32, 100, 1).unwrap().is_none());
        let got = choose_r(&p(0.2, 0.05), 0.9, 16, 200, 1).unwrap().unwrap();
        assert!(got.r <= 8 && got.lhs <= 0.81);
    }

    #[test]
    fn escape_extremes() {
        let frozen = estimate_escape(8, &p(1.0, 50.0), 100, 1).unwrap();
        assert!(frozen.mean > 0.999);
        let thin = estimate_escape(8, &p(0.01, 0.01), 100, 1).unwrap();
        assert!(thin.mean < 0.05);
    }
}
