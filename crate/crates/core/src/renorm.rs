//! Block renormalization: `K`-blocks, θ-goodness, the bad-block probability,
//! the events `E_i` / `F_i` of the merging argument, and the closed-pair
//! weight between two dense clusters.
//!
//! A `K`-block with index `i` is `B^i_K = [K(i-1), K(i+1))`; consecutive
//! blocks share `K` sites. A block is θ-good when it contains a cluster (in
//! the block) of at least `ceil(2θK)` vertices.

use std::collections::BTreeMap;

use crate::cluster::{check_inside, clusters_in, largest_cluster, ClusterPartition};
use crate::error::{precondition, Error, Result};
use crate::model::{coupling_unchecked, Interval, ModelParams};
use crate::rng::replicates;
use crate::sampler::{sample_config, Configuration};
use crate::stats::EstimatorResult;

/// Minimum replicate count for any Monte Carlo estimator in the crate.
pub const MIN_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockSpec {
    pub k: u64,
    pub i: i64,
}

impl BlockSpec {
    pub fn new(k: u64, i: i64) -> Result<Self> {
        if k == 0 {
            return Err(precondition("block scale K must be positive"));
        }
        Ok(BlockSpec { k, i })
    }

    /// `[K(i-1), K(i+1))`.
    pub fn interval(&self) -> Interval {
        let k = self.k as i64;
        Interval::new(k * (self.i - 1), k * (self.i + 1)).expect("K >= 1 gives a nonempty block")
    }
}

/// Integer threshold `ceil(2θK)`. Products that are integers up to rounding
/// noise (e.g. `2 * 0.9 * 10`) are not bumped to the next integer.
pub fn good_threshold(theta: f64, k: u64) -> usize {
    let t = 2.0 * theta * k as f64;
    let r = t.round();
    if (t - r).abs() <= 1e-9 * t.max(1.0) {
        r as usize
    } else {
        t.ceil() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockReport {
    pub block: BlockSpec,
    pub theta: f64,
    pub good: bool,
    pub largest_size: usize,
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(precondition(format!("theta = {theta} must lie in (0, 1)")))
    }
}

pub fn is_theta_good(config: &Configuration, block: BlockSpec, theta: f64) -> Result<BlockReport> {
    check_theta(theta)?;
    let partition = clusters_in(config, block.interval())?;
    Ok(report_from_partition(&partition, block, theta))
}

fn report_from_partition(partition: &ClusterPartition, block: BlockSpec, theta: f64) -> BlockReport {
    let (largest_size, _) = largest_cluster(partition);
    BlockReport {
        block,
        theta,
        good: largest_size >= good_threshold(theta, block.k),
        largest_size,
    }
}

/// Number of clusters of size at least `threshold` in a partition. At most
/// one when `threshold > 3/4` of the domain.
pub fn count_large_clusters(partition: &ClusterPartition, threshold: usize) -> usize {
    partition.cluster_sizes().filter(|&(_, s)| s >= threshold).count()
}

/// Reports for every block `B^j_K`, `-C < j < C`, in index order.
pub fn block_reports(config: &Configuration, k: u64, c: u64, theta: f64) -> Result<Vec<BlockReport>> {
    check_theta(theta)?;
    if c == 0 {
        return Err(precondition("C must be positive"));
    }
    let c = c as i64;
    (-c + 1..c)
        .map(|j| is_theta_good(config, BlockSpec::new(k, j)?, theta))
        .collect()
}

/// Monte Carlo estimate of `P[B_K is θ-bad]`.
///
/// Goodness of `B_K = [-K, K)` only involves edges inside the block, so each
/// replicate samples exactly that box.
pub fn estimate_p_bad(
    k: u64,
    theta: f64,
    params: &ModelParams,
    n: usize,
    seed: u64,
) -> Result<EstimatorResult> {
    if k < 2 {
        return Err(precondition("estimate_p_bad needs K >= 2"));
    }
    check_theta(theta)?;
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            got: n,
            min: MIN_SAMPLES,
        });
    }
    let params = params.validate()?;
    let block = BlockSpec::new(k, 0)?;
    let bad = replicates(n, seed, |s| -> Result<bool> {
        let config = sample_config(block.interval(), &params, s)?;
        Ok(!is_theta_good(&config, block, theta)?.good)
    })
    .into_iter()
    .collect::<Result<Vec<bool>>>()?;
    let count = bad.iter().filter(|&&b| b).count() as u64;
    Ok(EstimatorResult::from_counts(count, n as u64, seed)
        .with_meta("K", k)
        .with_meta("theta", theta))
}

fn check_merge_theta(theta: f64) -> Result<()> {
    if theta > 0.75 && theta < 1.0 {
        Ok(())
    } else {
        Err(precondition(format!(
            "theta = {theta} must exceed 3/4 (uniqueness of the large cluster)"
        )))
    }
}

/// `[-CK, CK)`.
pub fn big_block(k: u64, c: u64) -> Result<BlockSpec> {
    BlockSpec::new(c * k, 0)
}

/// Checks, on one configuration, that all `B^j_K` (`-C < j < C`) being θ-good
/// forces a cluster of size `>= ceil(2θCK)` in `B_{CK}`. A `false` return is
/// a counterexample.
pub fn verify_merge_lemma(config: &Configuration, k: u64, c: u64, theta: f64) -> Result<bool> {
    check_merge_theta(theta)?;
    let big = big_block(k, c)?;
    check_inside(config, "B_CK", &big.interval())?;
    let all_good = block_reports(config, k, c, theta)?.iter().all(|r| r.good);
    if !all_good {
        return Ok(true);
    }
    Ok(is_theta_good(config, big, theta)?.good)
}

/// `E_i`: block `i` is θ-bad and every block outside `{i-1, i, i+1}` is θ-good.
///
/// `reports` must cover exactly the indices `-C+1..=C-1` at one scale and θ.
pub fn detect_e_i(reports: &[BlockReport], i: i64) -> Result<bool> {
    let Some(first) = reports.first() else {
        return Err(precondition("empty block report set"));
    };
    let mut by_index = BTreeMap::new();
    for r in reports {
        if r.block.k != first.block.k || r.theta != first.theta {
            return Err(precondition("block reports mix scales or theta values"));
        }
        if by_index.insert(r.block.i, r.good).is_some() {
            return Err(precondition(format!("duplicate report for block {}", r.block.i)));
        }
    }
    let max = *by_index.keys().next_back().expect("nonempty");
    let min = *by_index.keys().next().expect("nonempty");
    if min != -max || by_index.len() as i64 != 2 * max + 1 {
        return Err(precondition(
            "incomplete report set: need every block index in [-C+1, C-1]",
        ));
    }
    if i.abs() > max {
        return Err(precondition(format!(
            "block index {i} outside the report range [-{max}, {max}]"
        )));
    }
    Ok(!by_index[&i]
        && by_index
            .iter()
            .filter(|(&j, _)| (j - i).abs() > 1)
            .all(|(_, &good)| good))
}

/// `F_i = E_i ∩ {B_CK is θ'-bad}`.
pub fn detect_f_i(
    config: &Configuration,
    k: u64,
    c: u64,
    i: i64,
    theta: f64,
    theta_prime: f64,
) -> Result<bool> {
    if !(theta_prime < theta) {
        return Err(precondition("need theta_prime < theta"));
    }
    check_theta(theta_prime)?;
    let reports = block_reports(config, k, c, theta)?;
    if !detect_e_i(&reports, i)? {
        return Ok(false);
    }
    Ok(!is_theta_good(config, big_block(k, c)?, theta_prime)?.good)
}

/// Empirical `P[F_i]` for every `|i| < C` and `p(K, θ)` from one sample set.
#[derive(Debug, Clone)]
pub struct FEventReport {
    pub k: u64,
    pub c: u64,
    pub theta: f64,
    pub theta_prime: f64,
    /// `(i, P̂[F_i])` for `i = -C+1..=C-1`.
    pub f: Vec<(i64, EstimatorResult)>,
    /// Frequency of `B_K` (the central block `j = 0`) being θ-bad.
    pub p_bad: EstimatorResult,
    /// `Σ_i P̂[F_i] / p̂_bad`; compare with the `1/100` of the renormalization
    /// inequality (which presumes C beyond desk scale).
    pub ratio: f64,
}

pub fn estimate_f_events(
    k: u64,
    c: u64,
    theta: f64,
    theta_prime: f64,
    params: &ModelParams,
    n: usize,
    seed: u64,
) -> Result<FEventReport> {
    check_theta(theta)?;
    check_theta(theta_prime)?;
    if !(theta_prime < theta) {
        return Err(precondition("need theta_prime < theta"));
    }
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            got: n,
            min: MIN_SAMPLES,
        });
    }
    let params = params.validate()?;
    let big = big_block(k, c)?;
    let ci = c as i64;
    let rows = replicates(n, seed, |s| -> Result<(Vec<bool>, bool)> {
        let config = sample_config(big.interval(), &params, s)?;
        let reports = block_reports(&config, k, c, theta)?;
        let big_bad = !is_theta_good(&config, big, theta_prime)?.good;
        let centre_bad = !reports[(ci - 1) as usize].good;
        let f = (-ci + 1..ci)
            .map(|i| Ok(big_bad && detect_e_i(&reports, i)?))
            .collect::<Result<Vec<bool>>>()?;
        Ok((f, centre_bad))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let nn = n as u64;
    let f: Vec<(i64, EstimatorResult)> = (-ci + 1..ci)
        .enumerate()
        .map(|(slot, i)| {
            let hits = rows.iter().filter(|(f, _)| f[slot]).count() as u64;
            (i, EstimatorResult::from_counts(hits, nn, seed).with_meta("i", i))
        })
        .collect();
    let bad = rows.iter().filter(|(_, b)| *b).count() as u64;
    let p_bad = EstimatorResult::from_counts(bad, nn, seed);
    let total: f64 = f.iter().map(|(_, r)| r.mean).sum();
    let ratio = if p_bad.mean > 0.0 {
        total / p_bad.mean
    } else {
        f64::NAN
    };
    Ok(FEventReport {
        k,
        c,
        theta,
        theta_prime,
        f,
        p_bad,
        ratio,
    })
}

/// Realisations of the two dense cluster unions on either side of block `i`.
///
/// `cminus` is stored as `x_1 > x_2 > ...` (all `< anchor`), `cplus` as
/// `y_1 < y_2 < ...` (all `>= anchor`), and both respect the density spacing
/// `x_a >= anchor - 3K - (a-1)/θ`, `y_b <= anchor + 3K + (b-1)/θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySets {
    cminus: Vec<i64>,
    cplus: Vec<i64>,
    anchor: i64,
    k: u64,
    theta: f64,
}

impl DensitySets {
    pub fn new(mut cminus: Vec<i64>, mut cplus: Vec<i64>, anchor: i64, k: u64, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        if cminus.iter().any(|x| cplus.contains(x)) {
            return Err(precondition("overlapping sets: C- and C+ share a vertex"));
        }
        cminus.sort_unstable_by(|a, b| b.cmp(a));
        cplus.sort_unstable();
        if cminus.windows(2).any(|w| w[0] == w[1]) || cplus.windows(2).any(|w| w[0] == w[1]) {
            return Err(precondition("repeated vertex in a density set"));
        }
        if cminus.first().is_some_and(|&x| x >= anchor) {
            return Err(precondition("C- must lie strictly left of the anchor"));
        }
        if cplus.first().is_some_and(|&y| y < anchor) {
            return Err(precondition("C+ must lie at or right of the anchor"));
        }
        const EPS: f64 = 1e-9;
        let reach = 3.0 * k as f64;
        for (a, &x) in cminus.iter().enumerate() {
            if (x as f64) < anchor as f64 - reach - a as f64 / theta - EPS {
                return Err(precondition(format!("x_{} = {x} violates the density spacing", a + 1)));
            }
        }
        for (b, &y) in cplus.iter().enumerate() {
            if (y as f64) > anchor as f64 + reach + b as f64 / theta + EPS {
                return Err(precondition(format!("y_{} = {y} violates the density spacing", b + 1)));
            }
        }
        Ok(DensitySets {
            cminus,
            cplus,
            anchor,
            k,
            theta,
        })
    }

    /// Worst case for the closed-pair weight: `A = ceil(θK(C-|i|-2))` points
    /// on each side, each as far out as the spacing constraint allows
    /// (`x_a = ceil(Ki-3K-(a-1)/θ)`, `y_b = floor(Ki+3K+(b-1)/θ)`).
    pub fn maximally_spread(k: u64, c: u64, i: i64, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        if i.unsigned_abs() + 2 >= c {
            return Err(precondition("need |i| < C - 2 for a nonempty density set"));
        }
        let a_count = (theta * k as f64 * (c - i.unsigned_abs() - 2) as f64 - 1e-9).ceil() as usize;
        let anchor = k as i64 * i;
        let reach = 3.0 * k as f64;
        let cminus = (0..a_count)
            .map(|a| (anchor as f64 - reach - a as f64 / theta - 1e-9).ceil() as i64)
            .collect();
        let cplus = (0..a_count)
            .map(|b| (anchor as f64 + reach + b as f64 / theta + 1e-9).floor() as i64)
            .collect();
        Self::new(cminus, cplus, anchor, k, theta)
    }

    pub fn cminus(&self) -> &[i64] {
        &self.cminus
    }

    pub fn cplus(&self) -> &[i64] {
        &self.cplus
    }

    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Probability that no edge between `C-` and `C+` is open:
/// `exp(-β Σ_{x∈C-} Σ_{y∈C+} J(y - x))`, accumulated in the log domain.
pub fn closed_pair_weight(sets: &DensitySets, beta: f64, s: f64) -> f64 {
    (-beta * closed_pair_exponent(sets, s)).exp()
}

/// `Σ_{x∈C-} Σ_{y∈C+} J(y - x)`.
pub fn closed_pair_exponent(sets: &DensitySets, s: f64) -> f64 {
    sets.cminus
        .iter()
        .map(|&x| {
            sets.cplus
                .iter()
                .map(|&y| coupling_unchecked((y - x) as u64, s))
                .sum::<f64>()
        })
        .sum()
}

/// `(12 / (C - |i|))^{βθ²}`.
pub fn f_i_bound(c: u64, i: i64, beta: f64, theta: f64) -> Result<f64> {
    if i.unsigned_abs() >= c {
        return Err(precondition(format!("need |i| < C (i = {i}, C = {c})")));
    }
    let gap = (c - i.unsigned_abs()) as f64;
    Ok((12.0 / gap).powf(beta * theta * theta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(beta: f64, lambda: f64) -> ModelParams {
        ModelParams::new(beta, lambda).unwrap()
    }

    fn chain(bbox: Interval) -> Configuration {
        let edges = (bbox.lo()..bbox.hi() - 1).map(|v| (v, v + 1));
        Configuration::from_edges(bbox, edges, p(1.0, 1.0), 0).unwrap()
    }

    #[test]
    fn block_geometry() {
        let b = BlockSpec::new(5, 2).unwrap();
        assert_eq!(b.interval(), Interval::new(5, 15).unwrap());
        let next = BlockSpec::new(5, 3).unwrap().interval();
        assert_eq!(b.interval().hi() - next.lo(), 5);
        assert!(BlockSpec::new(0, 1).is_err());
    }

    #[test]
    fn thresholds_use_ceiling() {
        assert_eq!(good_threshold(0.9, 10), 18);
        assert_eq!(good_threshold(0.8, 16), 26);
        assert_eq!(good_threshold(0.6, 2), 3);
        assert_eq!(good_threshold(0.75, 64), 96);
        assert_eq!(good_threshold(0.1, 10), 2);
    }

    #[test]
    fn full_and_empty_blocks() {
        let block = BlockSpec::new(10, 0).unwrap();
        let full = chain(block.interval());
        let r = is_theta_good(&full, block, 0.9).unwrap();
        assert!(r.good);
        assert_eq!(r.largest_size, 20);
        let empty = Configuration::empty(block.interval(), p(1.0, 1.0));
        assert!(!is_theta_good(&empty, block, 0.1).unwrap().good);
        assert!(is_theta_good(&empty, BlockSpec::new(10, 1).unwrap(), 0.5).is_err());
        assert!(is_theta_good(&empty, block, 1.0).is_err());
    }

    #[test]
    fn p_bad_rejects_small_n() {
        assert!(matches!(
            estimate_p_bad(8, 0.9, &p(1.0, 1.0), 50, 0),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(estimate_p_bad(1, 0.9, &p(1.0, 1.0), 200, 0).is_err());
    }

    #[test]
    fn merge_lemma_edge_cases() {
        let (k, c) = (4, 3);
        let big = big_block(k, c).unwrap().interval();
        let full = chain(big);
        assert!(verify_merge_lemma(&full, k, c, 0.8).unwrap());
        let empty = Configuration::empty(big, p(1.0, 1.0));
        assert!(verify_merge_lemma(&empty, k, c, 0.8).unwrap());
        assert!(verify_merge_lemma(&full, k, c, 0.75).is_err());
        let small = chain(Interval::new(-4, 4).unwrap());
        assert!(verify_merge_lemma(&small, k, c, 0.8).is_err());
    }

    fn fake_reports(c: i64, bad: &[i64]) -> Vec<BlockReport> {
        (-c + 1..c)
            .map(|j| BlockReport {
                block: BlockSpec::new(4, j).unwrap(),
                theta: 0.8,
                good: !bad.contains(&j),
                largest_size: 0,
            })
            .collect()
    }

    #[test]
    fn e_events() {
        let c = 6;
        let all_good = fake_reports(c, &[]);
        assert!((-c + 1..c).all(|i| !detect_e_i(&all_good, i).unwrap()));
        let one = fake_reports(c, &[2]);
        for i in -c + 1..c {
            assert_eq!(detect_e_i(&one, i).unwrap(), i == 2);
        }
        let two = fake_reports(c, &[-2, 3]);
        assert!((-c + 1..c).all(|i| !detect_e_i(&two, i).unwrap()));
        // Neighbouring bad blocks are allowed inside the excluded triple.
        let adjacent = fake_reports(c, &[0, 1]);
        assert!(detect_e_i(&adjacent, 0).unwrap());
        assert!(detect_e_i(&adjacent, 1).unwrap());
        assert!(detect_e_i(&one[1..], 0).is_err());
        assert!(detect_e_i(&one, c).is_err());
        assert!(detect_e_i(&[], 0).is_err());
    }

    #[test]
    fn f_event_requires_bad_big_block() {
        let (k, c) = (4, 4);
        let big = big_block(k, c).unwrap().interval();
        let full = chain(big);
        assert!(!detect_f_i(&full, k, c, 0, 0.8, 0.7).unwrap());
        // Cutting {-1, 0} makes block 0 bad (two halves of 4 < 7) and leaves
        // two clusters of 16 in B_CK.
        let cut = full.filtered(|a, _| a != -1);
        let reports = block_reports(&cut, k, c, 0.8).unwrap();
        assert!(detect_e_i(&reports, 0).unwrap());
        assert!(!detect_f_i(&cut, k, c, 0, 0.8, 0.5).unwrap());
        assert!(detect_f_i(&cut, k, c, 0, 0.8, 0.6).unwrap());
        assert!(detect_f_i(&full, k, c, 0, 0.7, 0.8).is_err());
    }

    #[test]
    fn closed_pair_weight_small_sets() {
        let one = DensitySets::new(vec![-1], vec![1], 0, 1, 0.5).unwrap();
        let w = closed_pair_weight(&one, 1.0, 2.0);
        assert!((w - (-0.25f64).exp()).abs() < 1e-15);
        assert!((w - 0.7788).abs() < 1e-4);
        let two = DensitySets::new(vec![-2, -1], vec![1, 2], 0, 1, 0.5).unwrap();
        let expected = (-(1.0 / 9.0 + 1.0 / 16.0 + 1.0 / 4.0 + 1.0 / 9.0f64)).exp();
        assert!((closed_pair_weight(&two, 1.0, 2.0) - expected).abs() < 1e-15);
        assert!((closed_pair_exponent(&two, 2.0) - 0.5347).abs() < 1e-4);
    }

    #[test]
    fn density_set_validation() {
        assert!(DensitySets::new(vec![-1], vec![-1], 0, 1, 0.5).is_err());
        assert!(DensitySets::new(vec![0], vec![1], 0, 1, 0.5).is_err());
        assert!(DensitySets::new(vec![-1], vec![-2], 0, 1, 0.5).is_err());
        // x_1 = -4 is beyond anchor - 3K = -3.
        assert!(DensitySets::new(vec![-4], vec![1], 0, 1, 0.5).is_err());
        // x_2 may sit 1/θ = 2 further out.
        assert!(DensitySets::new(vec![-3, -5], vec![1], 0, 1, 0.5).is_ok());
    }

    #[test]
    fn maximal_sets_respect_spacing() {
        let sets = DensitySets::maximally_spread(4, 40, 0, 0.8).unwrap();
        let a = sets.cminus().len();
        assert_eq!(a, (0.8f64 * 4.0 * 38.0).ceil() as usize);
        assert_eq!(sets.cminus()[0], -12);
        assert_eq!(sets.cplus()[0], 12);
        let w = closed_pair_weight(&sets, 1.0, 2.0);
        assert!(w <= f_i_bound(40, 0, 1.0, 0.8).unwrap());
    }

    #[test]
    fn f_bound_values() {
        assert!((f_i_bound(12, 0, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let b = f_i_bound(100, 0, 1.21, 0.9).unwrap();
        assert!((b - 0.12f64.powf(1.21 * 0.81)).abs() < 1e-15);
        assert!((b - 0.1249).abs() < 5e-4);
        assert!((f_i_bound(100, 88, 1.21, 0.9).unwrap() - 1.0).abs() < 1e-15);
        assert!((f_i_bound(100, -88, 1.21, 0.9).unwrap() - 1.0).abs() < 1e-15);
        assert!(f_i_bound(10, 10, 1.0, 0.9).is_err());
    }
}
