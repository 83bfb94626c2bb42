mod common;

use std::collections::{BTreeMap, VecDeque};

use lrperc::cluster::{clusters_in, connected_to_distance, largest_cluster};
use lrperc::rng::{derive_seed, splitmix64};
use lrperc::{sample_config, Configuration, Interval, ModelParams};
use proptest::prelude::*;

use common::bfs_labels;

/// Direct reading of "connected to distance R" on the window `[x-R, x+R)`.
fn reaches(config: &Configuration, x: i64, r: i64, exclude: Option<(i64, i64)>) -> bool {
    let window = Interval::new(x - r, x + r).unwrap();
    let skip = |a: i64, b: i64| exclude.is_some_and(|(p, q)| (a, b) == (p.min(q), p.max(q)));
    let edges: Vec<(i64, i64)> = config.open_edges().into_iter().filter(|&(a, b)| !skip(a, b)).collect();
    let mut seen = BTreeMap::from([(x, ())]);
    let mut queue = VecDeque::from([x]);
    while let Some(v) = queue.pop_front() {
        if (v - x).abs() >= r - 1 {
            return true;
        }
        for &(a, b) in &edges {
            let w = if a == v { b } else if b == v { a } else { continue };
            if !window.contains(w) {
                return true;
            }
            if seen.insert(w, ()).is_none() {
                queue.push_back(w);
            }
        }
    }
    false
}

#[test]
fn partitions_and_largest_cluster_match_bfs() {
    let bbox = Interval::new(0, 512).unwrap();
    for r in 0..300 {
        let p = ModelParams::new(0.2 + (r % 7) as f64 * 0.3, 0.3 + (r % 5) as f64 * 0.5).unwrap();
        let config = sample_config(bbox, &p, derive_seed(31, r)).unwrap();
        let part = clusters_in(&config, bbox).unwrap();
        let labels = bfs_labels(&config, bbox);
        let mut sizes: BTreeMap<i64, usize> = BTreeMap::new();
        for (v, &l) in bbox.iter().zip(&labels) {
            assert_eq!(part.representative(v), l);
            *sizes.entry(l).or_default() += 1;
        }
        let best = sizes.values().copied().max().unwrap();
        // Ties go to the cluster with the smallest representative.
        let rep = sizes.iter().find(|(_, &s)| s == best).map(|(&l, _)| l).unwrap();
        assert_eq!(largest_cluster(&part), (best, rep));
        assert_eq!(part.num_clusters(), sizes.len());
    }
}

#[test]
fn sub_domains_use_only_interior_edges() {
    let bbox = Interval::new(-100, 100).unwrap();
    let p = ModelParams::new(1.5, 1.0).unwrap();
    for r in 0..200 {
        let config = sample_config(bbox, &p, derive_seed(32, r)).unwrap();
        let h = splitmix64(r);
        let lo = -100 + (h % 150) as i64;
        let domain = Interval::new(lo, lo + 2 + (splitmix64(h) % 48) as i64).unwrap();
        let part = clusters_in(&config, domain).unwrap();
        for (v, l) in domain.iter().zip(bfs_labels(&config, domain)) {
            assert_eq!(part.representative(v), l);
        }
    }
}

#[test]
fn distance_predicate_matches_direct_reading() {
    let bbox = Interval::new(-64, 64).unwrap();
    let p = ModelParams::new(1.0, 0.8).unwrap();
    let mut positives = 0;
    for r in 0..10_000u64 {
        let config = sample_config(bbox, &p, derive_seed(33, r)).unwrap();
        let x = (splitmix64(r) % 80) as i64 - 40;
        let got = connected_to_distance(&config, x, 8, None).unwrap();
        assert_eq!(got, reaches(&config, x, 8, None), "sample {r}, x = {x}");
        positives += got as usize;
        if let Some(&y) = config.long_neighbors(x).first() {
            if (y - x).abs() < 24 {
                let e = (x.min(y), x.max(y));
                assert_eq!(connected_to_distance(&config, x, 8, Some(e)).unwrap(), reaches(&config, x, 8, Some(e)));
            }
        }
    }
    assert!(positives > 100 && positives < 9900, "{positives}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adding_edges_only_merges(seed in any::<u64>(), extra in proptest::collection::vec((0i64..60, 0i64..60), 1..6)) {
        let bbox = Interval::new(0, 60).unwrap();
        let config = sample_config(bbox, &ModelParams::new(0.5, 0.5).unwrap(), seed).unwrap();
        let extra: Vec<(i64, i64)> = extra.into_iter().filter(|(a, b)| a != b).collect();
        let bigger = config.with_edges(extra.iter().copied()).unwrap();
        let before = clusters_in(&config, bbox).unwrap();
        let after = clusters_in(&bigger, bbox).unwrap();
        for a in bbox.iter() {
            for b in bbox.iter() {
                if before.same_cluster(a, b) {
                    prop_assert!(after.same_cluster(a, b));
                }
            }
        }
        for &(a, b) in &extra {
            prop_assert!(after.same_cluster(a, b));
        }
    }
}
