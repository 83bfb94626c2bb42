mod common;

use std::collections::BTreeMap;

use lrperc::renorm::{
    block_reports, closed_pair_weight, count_large_clusters, detect_e_i, estimate_f_events, estimate_p_bad,
    f_i_bound, good_threshold, is_theta_good, BlockReport, BlockSpec, DensitySets,
};
use lrperc::cluster::clusters_in;
use lrperc::rng::derive_seed;
use lrperc::{expected_edge_count, sample_config, Interval, ModelParams};
use proptest::prelude::*;

use common::{all_pairs, bfs_labels, p_edge, product_law};

fn largest(labels: &[i64]) -> usize {
    let mut sizes: BTreeMap<i64, usize> = BTreeMap::new();
    for &l in labels {
        *sizes.entry(l).or_default() += 1;
    }
    sizes.into_values().max().unwrap_or(0)
}

#[test]
fn p_bad_k2_matches_enumeration() {
    // B_2 = [-2, 2): six edges; θ = 0.6 asks for a cluster of 3 sites.
    let (beta, lambda) = (1.0, 1.0);
    let block = Interval::new(-2, 2).unwrap();
    let pairs = all_pairs(block);
    let probs: Vec<f64> = pairs.iter().map(|&(a, b)| p_edge(beta, lambda, 2.0, (b - a) as u64)).collect();
    let law = product_law(&pairs, &probs);
    let mut exact = 0.0;
    for (mask, &w) in law.iter().enumerate() {
        let mut label: Vec<usize> = (0..4).collect();
        for (e, &(a, b)) in pairs.iter().enumerate() {
            if mask >> e & 1 == 1 {
                let (la, lb) = (label[(a + 2) as usize], label[(b + 2) as usize]);
                label.iter_mut().filter(|l| **l == lb).for_each(|l| *l = la);
            }
        }
        let biggest = (0..4).map(|c| label.iter().filter(|&&l| l == c).count()).max().unwrap();
        if biggest < 3 {
            exact += w;
        }
    }
    let est = estimate_p_bad(2, 0.6, &ModelParams::new(beta, lambda).unwrap(), 40_000, 41).unwrap();
    assert!((est.mean - exact).abs() < 3.0 * est.stderr, "{} vs {exact}", est.mean);
}

#[test]
fn p_bad_extremes() {
    let k = 8;
    let dense = ModelParams::new(2.0, 50.0).unwrap();
    // Union bound over the 2K-1 nearest-neighbour edges of the block.
    let union = (2 * k - 1) as f64 * (-50f64).exp();
    assert!(union < 0.01);
    assert!(estimate_p_bad(k, 0.9, &dense, 1000, 1).unwrap().mean < 0.01);
    let sparse = ModelParams::new(0.01, 0.01).unwrap();
    // A good block needs at least 14 open edges; Markov's inequality.
    let mean = expected_edge_count(Interval::new(-8, 8).unwrap(), &sparse).unwrap();
    assert!(mean / ((good_threshold(0.9, k) - 1) as f64) < 0.02);
    assert!(estimate_p_bad(k, 0.9, &sparse, 1000, 1).unwrap().mean > 0.99);
}

#[test]
fn goodness_matches_bfs() {
    let k = 32;
    let block = BlockSpec::new(k, 0).unwrap();
    let threshold = good_threshold(0.8, k);
    assert_eq!(threshold, 52);
    let p = ModelParams::new(1.0, 2.5).unwrap();
    let mut good = 0;
    for r in 0..10_000 {
        let config = sample_config(block.interval(), &p, derive_seed(42, r)).unwrap();
        let rep = is_theta_good(&config, block, 0.8).unwrap();
        let size = largest(&bfs_labels(&config, block.interval()));
        assert_eq!(rep.largest_size, size);
        assert_eq!(rep.good, size >= threshold);
        good += rep.good as usize;
        // Above 3/4 two large clusters cannot fit in one block.
        let part = clusters_in(&config, block.interval()).unwrap();
        assert!(count_large_clusters(&part, threshold) <= 1);
    }
    assert!(good > 500 && good < 9500, "{good}");
}

#[test]
fn e_events_are_disjoint_on_samples() {
    let (k, c) = (8u64, 6u64);
    let bbox = Interval::centered((c * k) as i64).unwrap();
    // Blocks are bad about 3% of the time here.
    let p = ModelParams::new(2.0, 2.0).unwrap();
    let mut singles = 0;
    for r in 0..3000 {
        let config = sample_config(bbox, &p, derive_seed(43, r)).unwrap();
        let reports = block_reports(&config, k, c, 0.8).unwrap();
        let hits: Vec<i64> = (-(c as i64) + 1..c as i64)
            .filter(|&i| detect_e_i(&reports, i).unwrap())
            .collect();
        // Two adjacent bad blocks may both qualify; anything further apart may not.
        assert!(hits.iter().all(|i| hits.iter().all(|j| (i - j).abs() <= 1)), "{hits:?}");
        singles += hits.len();
    }
    assert!(singles > 0);
}

#[test]
fn f_events_respect_the_product_bound() {
    let (k, c, theta, beta) = (16u64, 12u64, 0.8, 1.5);
    let rep = estimate_f_events(k, c, theta, 0.75, &ModelParams::new(beta, 2.0).unwrap(), 2000, 44).unwrap();
    for (i, f) in rep.f.iter().filter(|(i, _)| i.abs() <= 1) {
        let bound = f_i_bound(c, *i, beta, theta).unwrap() * rep.p_bad.mean;
        let se = (f.stderr.powi(2) + rep.p_bad.stderr.powi(2)).sqrt();
        assert!(f.mean <= bound + 3.0 * se, "i = {i}: {} > {bound}", f.mean);
    }
}

#[test]
fn closed_pair_bound_at_c40() {
    let sets = DensitySets::maximally_spread(4, 40, 0, 0.8).unwrap();
    assert_eq!(sets.cminus().len(), 122);
    for beta in [0.5, 1.2, 2.0, 4.0] {
        let w = closed_pair_weight(&sets, beta, 2.0);
        assert!(w <= f_i_bound(40, 0, beta, 0.8).unwrap(), "beta = {beta}");
    }
}

fn report(k: u64, j: i64, good: bool) -> BlockReport {
    BlockReport {
        block: BlockSpec::new(k, j).unwrap(),
        theta: 0.8,
        good,
        largest_size: if good { 2 * k as usize } else { 0 },
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn e_events_far_apart_exclude_each_other(c in 5i64..12, bits in any::<u32>()) {
        let reports: Vec<BlockReport> = (-c + 1..c)
            .map(|j| report(4, j, bits >> (j + c) as u32 % 32 & 1 == 0 || bits % 3 == 0))
            .collect();
        for i in -c + 1..c {
            for j in -c + 1..c {
                if (i - j).abs() >= 2 {
                    prop_assert!(!(detect_e_i(&reports, i).unwrap() && detect_e_i(&reports, j).unwrap()));
                }
            }
        }
    }

    #[test]
    fn goodness_is_monotone(seed in any::<u64>(), a in -16i64..16, b in -16i64..16) {
        prop_assume!(a != b);
        let block = BlockSpec::new(16, 0).unwrap();
        let config = sample_config(block.interval(), &ModelParams::new(0.8, 1.5).unwrap(), seed).unwrap();
        let more = config.with_edges([(a, b)]).unwrap();
        let before = is_theta_good(&config, block, 0.8).unwrap();
        let after = is_theta_good(&more, block, 0.8).unwrap();
        prop_assert!(after.largest_size >= before.largest_size);
        prop_assert!(!before.good || after.good);
    }
}
