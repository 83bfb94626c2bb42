//! Connectivity: union-find partitions of a configuration restricted to a
//! vertex interval, and the local "connected to distance R" predicate.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::Interval;
use crate::sampler::Configuration;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    #[inline]
    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    #[inline]
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn size_of(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r] as usize
    }
}

/// Clusters of a configuration restricted to an interval: only edges with
/// both endpoints in the interval are used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterPartition {
    domain: Interval,
    /// Offset (from `domain.lo`) of the smallest vertex of each vertex's cluster.
    label: Vec<u32>,
    /// Cluster size, indexed by label; zero for non-representatives.
    size: Vec<u32>,
}

impl ClusterPartition {
    fn from_union_find(domain: Interval, mut uf: UnionFind) -> Self {
        let n = domain.len();
        let mut label = vec![0u32; n];
        let mut root_label = vec![u32::MAX; n];
        let mut size = vec![0u32; n];
        for v in 0..n {
            let r = uf.find(v);
            if root_label[r] == u32::MAX {
                root_label[r] = v as u32;
            }
            let l = root_label[r];
            label[v] = l;
            size[l as usize] += 1;
        }
        ClusterPartition {
            domain,
            label,
            size,
        }
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Smallest vertex of the cluster containing `v`.
    pub fn representative(&self, v: i64) -> i64 {
        self.domain.lo() + self.label[self.offset(v)] as i64
    }

    pub fn cluster_size(&self, v: i64) -> usize {
        self.size[self.label[self.offset(v)] as usize] as usize
    }

    pub fn same_cluster(&self, a: i64, b: i64) -> bool {
        self.label[self.offset(a)] == self.label[self.offset(b)]
    }

    pub fn num_clusters(&self) -> usize {
        self.size.iter().filter(|&&s| s > 0).count()
    }

    /// `(representative, size)` for every cluster, by representative.
    pub fn cluster_sizes(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        let lo = self.domain.lo();
        self.size
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > 0)
            .map(move |(k, &s)| (lo + k as i64, s as usize))
    }

    /// Vertex lists of all clusters, ordered by smallest vertex.
    pub fn clusters(&self) -> Vec<Vec<i64>> {
        let lo = self.domain.lo();
        let mut slot = vec![usize::MAX; self.label.len()];
        let mut out: Vec<Vec<i64>> = Vec::new();
        for (k, &l) in self.label.iter().enumerate() {
            let l = l as usize;
            if slot[l] == usize::MAX {
                slot[l] = out.len();
                out.push(Vec::new());
            }
            out[slot[l]].push(lo + k as i64);
        }
        out
    }

    /// Vertices of the cluster containing `v`.
    pub fn members(&self, v: i64) -> Vec<i64> {
        let l = self.label[self.offset(v)];
        let lo = self.domain.lo();
        self.label
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == l)
            .map(|(k, _)| lo + k as i64)
            .collect()
    }

    #[inline]
    fn offset(&self, v: i64) -> usize {
        assert!(self.domain.contains(v), "vertex {v} outside {}", self.domain);
        (v - self.domain.lo()) as usize
    }
}

/// Union-find over `domain` using the open edges of `config` with both
/// endpoints in `domain` that pass `keep`. No containment check.
pub(crate) fn partition_with<F>(config: &Configuration, domain: Interval, keep: F) -> ClusterPartition
where
    F: Fn(i64, i64) -> bool,
{
    let lo = domain.lo();
    let mut uf = UnionFind::new(domain.len());
    for v in domain.iter() {
        let k = (v - lo) as usize;
        if v + 1 < domain.hi() && config.nn_open(v) && keep(v, v + 1) {
            uf.union(k, k + 1);
        }
        for &w in config.long_neighbors(v) {
            if w > v && w < domain.hi() && keep(v, w) {
                uf.union(k, (w - lo) as usize);
            }
        }
    }
    ClusterPartition::from_union_find(domain, uf)
}

pub(crate) fn check_inside(config: &Configuration, what: &'static str, iv: &Interval) -> Result<()> {
    let b = config.bbox();
    if b.contains_interval(iv) {
        Ok(())
    } else {
        Err(Error::OutsideBox {
            what,
            lo: iv.lo(),
            hi: iv.hi(),
            box_lo: b.lo(),
            box_hi: b.hi(),
        })
    }
}

/// Clusters in `domain`: components of the graph on `domain` whose edges are
/// the open edges with both endpoints in `domain`.
pub fn clusters_in(config: &Configuration, domain: Interval) -> Result<ClusterPartition> {
    check_inside(config, "cluster domain", &domain)?;
    Ok(partition_with(config, domain, |_, _| true))
}

/// Size and smallest vertex of the largest cluster; ties go to the smallest
/// representative.
pub fn largest_cluster(partition: &ClusterPartition) -> (usize, i64) {
    let mut best = (0usize, partition.domain().lo());
    for (rep, size) in partition.cluster_sizes() {
        if size > best.0 {
            best = (size, rep);
        }
    }
    best
}

/// Whether `x` is connected to distance `r`, ignoring the edge `exclude`.
///
/// Reading used throughout the crate: let `W = [x - r, x + r)` and let `C` be
/// the cluster of `x` in `W` (edges with both endpoints in `W`, minus
/// `exclude`). The predicate holds iff `C` contains a vertex `v` with
/// `|v - x| >= r - 1`, or some open edge other than `exclude` joins `C` to a
/// vertex outside `W`.
pub fn connected_to_distance(
    config: &Configuration,
    x: i64,
    r: u64,
    exclude: Option<(i64, i64)>,
) -> Result<bool> {
    if r == 0 {
        return Err(Error::Precondition("distance R must be positive".into()));
    }
    let r = r as i64;
    let window = Interval::new(x - r, x + r)?;
    check_inside(config, "connectivity window", &window)?;
    let excluded = |a: i64, b: i64| match exclude {
        Some((p, q)) => (a == p && b == q) || (a == q && b == p),
        None => false,
    };
    let mut seen = vec![false; window.len()];
    let mut queue = VecDeque::new();
    seen[(x - window.lo()) as usize] = true;
    queue.push_back(x);
    while let Some(v) = queue.pop_front() {
        if (v - x).abs() >= r - 1 {
            return Ok(true);
        }
        for w in config.neighbors(v) {
            if excluded(v, w) {
                continue;
            }
            if !window.contains(w) {
                return Ok(true);
            }
            let k = (w - window.lo()) as usize;
            if !seen[k] {
                seen[k] = true;
                queue.push_back(w);
            }
        }
    }
    Ok(false)
}
