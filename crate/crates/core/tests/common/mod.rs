//! Reference implementations shared by the integration tests. They only use
//! the public edge list of a configuration, never the crate's own cluster
//! code.
#![allow(dead_code)]

use std::collections::VecDeque;

use lrperc::{Configuration, Interval};

/// `1 - exp(-λ)` for neighbours, `1 - exp(-β / d^s)` otherwise.
pub fn p_edge(beta: f64, lambda: f64, s: f64, d: u64) -> f64 {
    if d == 1 {
        1.0 - (-lambda).exp()
    } else {
        1.0 - (-beta / (d as f64).powf(s)).exp()
    }
}

/// All pairs `a < b` of the box, lexicographic.
pub fn all_pairs(bbox: Interval) -> Vec<(i64, i64)> {
    bbox.iter()
        .flat_map(|a| (a + 1..bbox.hi()).map(move |b| (a, b)))
        .collect()
}

/// Product Bernoulli law over subsets of `pairs` (bit `e` = pair `e` open).
pub fn product_law(pairs: &[(i64, i64)], probs: &[f64]) -> Vec<f64> {
    (0..1usize << pairs.len())
        .map(|mask| {
            probs
                .iter()
                .enumerate()
                .map(|(e, &p)| if mask >> e & 1 == 1 { p } else { 1.0 - p })
                .product()
        })
        .collect()
}

pub fn mask_of(config: &Configuration, pairs: &[(i64, i64)]) -> usize {
    pairs
        .iter()
        .enumerate()
        .filter(|(_, &(a, b))| config.is_open(a, b))
        .fold(0, |m, (e, _)| m | 1 << e)
}

/// Smallest-member label of every site of `domain`, by breadth-first search
/// over the open edges with both endpoints in `domain` that pass `keep`.
pub fn bfs_labels_with<F>(config: &Configuration, domain: Interval, keep: F) -> Vec<i64>
where
    F: Fn(i64, i64) -> bool,
{
    let n = domain.len();
    let mut adj = vec![Vec::new(); n];
    for (a, b) in config.open_edges() {
        if domain.contains(a) && domain.contains(b) && keep(a, b) {
            adj[(a - domain.lo()) as usize].push((b - domain.lo()) as usize);
            adj[(b - domain.lo()) as usize].push((a - domain.lo()) as usize);
        }
    }
    let mut label = vec![i64::MAX; n];
    for start in 0..n {
        if label[start] != i64::MAX {
            continue;
        }
        // Sites are visited in increasing order, so `start` is the minimum.
        let tag = domain.lo() + start as i64;
        label[start] = tag;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if label[w] == i64::MAX {
                    label[w] = tag;
                    queue.push_back(w);
                }
            }
        }
    }
    label
}

pub fn bfs_labels(config: &Configuration, domain: Interval) -> Vec<i64> {
    bfs_labels_with(config, domain, |_, _| true)
}

pub fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

pub fn tv(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
