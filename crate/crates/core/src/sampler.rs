//! Independent long-range percolation configurations on a finite interval.
//!
//! [`sample_config`] draws, for every distance `d`, the number of open edges
//! of that length directly from `Binomial(N - d, p_d)` and places them
//! uniformly without replacement, so the cost is `O(N + #open edges)` rather
//! than `O(N^2)`. Distances `d >= 64` are grouped into dyadic bands
//! `[D, 2D)`; inside a band candidate edges are visited by geometric skips at
//! the band's largest probability `p_D` and thinned with probability
//! `p_d / p_D`. Both stages realise the product law exactly; nothing is
//! truncated.
//!
//! Random streams: the nearest-neighbour layer uses ChaCha stream 1, distance
//! `d < 64` uses stream `d`, and tail band `k` uses stream `2^32 + k`, all
//! keyed by the configuration seed.

use std::io::{BufRead, Write};

use rand::seq::index;
use rand::Rng;
use rand_distr::{Binomial, Distribution, Geometric};

use crate::error::{precondition, Error, Result};
use crate::model::{Interval, ModelParams};
use crate::rng::{edge_uniform, stream_rng};

/// Distances below this are sampled one binomial at a time.
pub const BINOMIAL_DISTANCE_CUTOFF: u64 = 64;
const NN_STREAM: u64 = 1;
const TAIL_STREAM_BASE: u64 = 1 << 32;

/// A set of open edges inside a box.
#[derive(Debug, Clone)]
pub struct Configuration {
    bbox: Interval,
    /// `nn_open[k]` is the edge `{lo + k, lo + k + 1}`.
    nn_open: Vec<bool>,
    /// Sorted, duplicate free, `j - i >= 2`.
    long_edges: Vec<(i64, i64)>,
    seed: u64,
    params: ModelParams,
    adj_offsets: Vec<u32>,
    adj: Vec<i64>,
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.bbox == other.bbox
            && self.nn_open == other.nn_open
            && self.long_edges == other.long_edges
            && self.seed == other.seed
            && self.params == other.params
    }
}

impl Configuration {
    fn from_parts(
        bbox: Interval,
        nn_open: Vec<bool>,
        mut long_edges: Vec<(i64, i64)>,
        seed: u64,
        params: ModelParams,
    ) -> Self {
        long_edges.sort_unstable();
        long_edges.dedup();
        let n = bbox.len();
        let mut adj_offsets = vec![0u32; n + 1];
        for &(i, j) in &long_edges {
            adj_offsets[(i - bbox.lo()) as usize + 1] += 1;
            adj_offsets[(j - bbox.lo()) as usize + 1] += 1;
        }
        for k in 0..n {
            adj_offsets[k + 1] += adj_offsets[k];
        }
        let mut fill: Vec<u32> = adj_offsets[..n].to_vec();
        let mut adj = vec![0i64; 2 * long_edges.len()];
        for &(i, j) in &long_edges {
            let a = (i - bbox.lo()) as usize;
            let b = (j - bbox.lo()) as usize;
            adj[fill[a] as usize] = j;
            fill[a] += 1;
            adj[fill[b] as usize] = i;
            fill[b] += 1;
        }
        Configuration {
            bbox,
            nn_open,
            long_edges,
            seed,
            params,
            adj_offsets,
            adj,
        }
    }

    /// Builds a configuration from an explicit open-edge list. Endpoints may
    /// come in either order; duplicates are merged.
    pub fn from_edges<I>(bbox: Interval, edges: I, params: ModelParams, seed: u64) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, i64)>,
    {
        let mut nn_open = vec![false; bbox.len() - 1];
        let mut long = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::SelfEdge(a));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if !bbox.contains(i) || !bbox.contains(j) {
                return Err(Error::OutsideBox {
                    what: "edge",
                    lo: i,
                    hi: j + 1,
                    box_lo: bbox.lo(),
                    box_hi: bbox.hi(),
                });
            }
            if j - i == 1 {
                nn_open[(i - bbox.lo()) as usize] = true;
            } else {
                long.push((i, j));
            }
        }
        Ok(Self::from_parts(bbox, nn_open, long, seed, params))
    }

    /// Empty configuration (every edge closed).
    pub fn empty(bbox: Interval, params: ModelParams) -> Self {
        Self::from_parts(bbox, vec![false; bbox.len() - 1], Vec::new(), 0, params)
    }

    pub fn bbox(&self) -> Interval {
        self.bbox
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn nn_bits(&self) -> &[bool] {
        &self.nn_open
    }

    pub fn long_edges(&self) -> &[(i64, i64)] {
        &self.long_edges
    }

    /// Whether `{i, i + 1}` is open.
    #[inline]
    pub fn nn_open(&self, i: i64) -> bool {
        i >= self.bbox.lo() && i + 1 < self.bbox.hi() && self.nn_open[(i - self.bbox.lo()) as usize]
    }

    pub fn is_open(&self, a: i64, b: i64) -> bool {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        match j - i {
            0 => false,
            1 => self.nn_open(i),
            _ => self.long_edges.binary_search(&(i, j)).is_ok(),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.nn_open.iter().filter(|&&b| b).count() + self.long_edges.len()
    }

    /// All open edges `(i, j)` with `i < j`, sorted.
    pub fn open_edges(&self) -> Vec<(i64, i64)> {
        let lo = self.bbox.lo();
        let mut out: Vec<(i64, i64)> = self
            .nn_open
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(k, _)| (lo + k as i64, lo + k as i64 + 1))
            .chain(self.long_edges.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// Long-edge neighbours of `v` (length >= 2).
    #[inline]
    pub fn long_neighbors(&self, v: i64) -> &[i64] {
        let k = (v - self.bbox.lo()) as usize;
        &self.adj[self.adj_offsets[k] as usize..self.adj_offsets[k + 1] as usize]
    }

    /// Every vertex joined to `v` by an open edge.
    pub fn neighbors(&self, v: i64) -> impl Iterator<Item = i64> + '_ {
        let left = self.nn_open(v - 1).then_some(v - 1);
        let right = self.nn_open(v).then_some(v + 1);
        left.into_iter()
            .chain(right)
            .chain(self.long_neighbors(v).iter().copied())
    }

    /// Copy keeping only the edges accepted by `keep`.
    pub fn filtered<F: Fn(i64, i64) -> bool>(&self, keep: F) -> Configuration {
        let lo = self.bbox.lo();
        let nn = self
            .nn_open
            .iter()
            .enumerate()
            .map(|(k, &b)| b && keep(lo + k as i64, lo + k as i64 + 1))
            .collect();
        let long = self
            .long_edges
            .iter()
            .copied()
            .filter(|&(i, j)| keep(i, j))
            .collect();
        Self::from_parts(self.bbox, nn, long, self.seed, self.params)
    }

    /// Copy with extra open edges.
    pub fn with_edges<I: IntoIterator<Item = (i64, i64)>>(&self, extra: I) -> Result<Configuration> {
        let edges = self.open_edges().into_iter().chain(extra);
        let mut out = Self::from_edges(self.bbox, edges, self.params, self.seed)?;
        out.seed = self.seed;
        Ok(out)
    }

    /// Writes the line format: `box lo hi seed beta lambda q s`, then one
    /// `i j` line per open edge (nearest-neighbour edges included).
    pub fn dump<W: Write>(&self, mut out: W) -> Result<()> {
        let p = &self.params;
        writeln!(
            out,
            "box {} {} {} {} {} {} {}",
            self.bbox.lo(),
            self.bbox.hi(),
            self.seed,
            p.beta,
            p.lambda,
            p.q,
            p.s
        )?;
        for (i, j) in self.open_edges() {
            writeln!(out, "{i} {j}")?;
        }
        Ok(())
    }

    pub fn dump_to_string(&self) -> String {
        let mut buf = Vec::new();
        self.dump(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("dump is ASCII")
    }

    /// Parses the format written by [`Configuration::dump`].
    pub fn load<R: BufRead>(input: R) -> Result<Configuration> {
        let mut lines = input.lines().enumerate();
        let header = loop {
            match lines.next() {
                Some((n, line)) => {
                    let line = line?;
                    if !line.trim().is_empty() {
                        break (n + 1, line);
                    }
                }
                None => return Err(parse_err(1, "missing header")),
            }
        };
        let fields: Vec<&str> = header.1.split_whitespace().collect();
        if fields.len() != 8 || fields[0] != "box" {
            return Err(parse_err(
                header.0,
                "header must be `box lo hi seed beta lambda q s`",
            ));
        }
        let num = |k: usize| -> Result<f64> {
            fields[k]
                .parse::<f64>()
                .map_err(|e| parse_err(header.0, &format!("field {k}: {e}")))
        };
        let int = |k: usize| -> Result<i64> {
            fields[k]
                .parse::<i64>()
                .map_err(|e| parse_err(header.0, &format!("field {k}: {e}")))
        };
        let bbox = Interval::new(int(1)?, int(2)?)?;
        let seed = fields[3]
            .parse::<u64>()
            .map_err(|e| parse_err(header.0, &format!("seed: {e}")))?;
        let params = ModelParams {
            beta: num(4)?,
            lambda: num(5)?,
            q: num(6)?,
            s: num(7)?,
        };
        let mut edges = Vec::new();
        for (n, line) in lines {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let mut it = t.split_whitespace();
            let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
                return Err(parse_err(n + 1, "expected `i j`"));
            };
            let a = a.parse::<i64>().map_err(|e| parse_err(n + 1, &e.to_string()))?;
            let b = b.parse::<i64>().map_err(|e| parse_err(n + 1, &e.to_string()))?;
            edges.push((a, b));
        }
        Configuration::from_edges(bbox, edges, params, seed)
    }
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_string(),
    }
}

/// Independent percolation on `bbox`: every edge `{i, j}` inside the box is
/// open with probability `p_{i,j}`. Reproducible from `(bbox, params, seed)`.
pub fn sample_config(bbox: Interval, params: &ModelParams, seed: u64) -> Result<Configuration> {
    let params = params.validate()?;
    if bbox.len() < 2 {
        return Err(precondition(format!("box {bbox} must contain at least 2 sites")));
    }
    let n = bbox.len() as u64;
    let lo = bbox.lo();

    let p1 = params.prob_at_distance(1);
    let mut rng = stream_rng(seed, NN_STREAM);
    let nn_open: Vec<bool> = (0..n - 1).map(|_| rng.random::<f64>() < p1).collect();

    let mut long = Vec::new();
    for d in 2..n.min(BINOMIAL_DISTANCE_CUTOFF) {
        let slots = n - d;
        let p = params.prob_at_distance(d);
        let mut rng = stream_rng(seed, d);
        let k = Binomial::new(slots, p)
            .expect("edge probability lies in [0, 1]")
            .sample(&mut rng);
        if k == 0 {
            continue;
        }
        for pos in index::sample(&mut rng, slots as usize, k as usize) {
            let i = lo + pos as i64;
            long.push((i, i + d as i64));
        }
    }

    let mut band_lo = BINOMIAL_DISTANCE_CUTOFF;
    let mut band = 0u64;
    while band_lo < n {
        let band_hi = (2 * band_lo).min(n);
        sample_tail_band(&params, lo, n, band_lo, band_hi, seed, band, &mut long);
        band_lo = band_hi;
        band += 1;
    }

    Ok(Configuration::from_parts(bbox, nn_open, long, seed, params))
}

/// Distances `d` in `[d_lo, d_hi)`; candidate `(d, pos)` pairs are enumerated
/// in `d`-major order and visited by geometric skips at rate `p_{d_lo}`.
#[allow(clippy::too_many_arguments)]
fn sample_tail_band(
    params: &ModelParams,
    lo: i64,
    n: u64,
    d_lo: u64,
    d_hi: u64,
    seed: u64,
    band: u64,
    out: &mut Vec<(i64, i64)>,
) {
    let p_max = params.prob_at_distance(d_lo);
    if p_max <= 0.0 {
        return;
    }
    let mut rng = stream_rng(seed, TAIL_STREAM_BASE + band);
    let geo = Geometric::new(p_max).expect("p_max lies in (0, 1]");
    let mut d = d_lo;
    let mut offset = 0u64;
    let mut idx = geo.sample(&mut rng);
    let mut p_d = p_max;
    loop {
        while d < d_hi && idx >= offset + (n - d) {
            offset += n - d;
            d += 1;
            p_d = params.prob_at_distance(d);
        }
        if d >= d_hi {
            break;
        }
        let pos = idx - offset;
        if rng.random::<f64>() * p_max < p_d {
            let i = lo + pos as i64;
            out.push((i, i + d as i64));
        }
        idx = idx.saturating_add(1).saturating_add(geo.sample(&mut rng));
    }
}

/// Mean number of open edges in `bbox`.
pub fn expected_edge_count(bbox: Interval, params: &ModelParams) -> Result<f64> {
    if bbox.len() < 2 {
        return Err(precondition(format!("box {bbox} must contain at least 2 sites")));
    }
    let n = bbox.len() as u64;
    Ok((1..n)
        .map(|d| (n - d) as f64 * params.prob_at_distance(d))
        .sum())
}

/// Two configurations on `bbox` driven by the same per-edge uniforms: edge
/// `{i, j}` with `j - i <= max_dist` is open under `lo` iff `u_{ij} < p^lo_{ij}`
/// and under `hi` iff `u_{ij} < p^hi_{ij}`, so `open(lo) ⊆ open(hi)` always.
///
/// Costs `O(|box| * max_dist)`; meant for monotonicity tests, not production.
pub fn sample_config_coupled(
    bbox: Interval,
    lo: &ModelParams,
    hi: &ModelParams,
    seed: u64,
    max_dist: u64,
) -> Result<(Configuration, Configuration)> {
    let lo = lo.validate()?;
    let hi = hi.validate()?;
    if lo.beta > hi.beta || lo.lambda > hi.lambda {
        return Err(precondition(
            "coupled sampling needs lo.beta <= hi.beta and lo.lambda <= hi.lambda",
        ));
    }
    if lo.s != hi.s {
        return Err(precondition("coupled sampling needs a common exponent s"));
    }
    if bbox.len() < 2 {
        return Err(precondition(format!("box {bbox} must contain at least 2 sites")));
    }
    let max_dist = max_dist.max(1).min(bbox.len() as u64 - 1);
    let probs: Vec<(f64, f64)> = (0..=max_dist)
        .map(|d| {
            if d == 0 {
                (0.0, 0.0)
            } else {
                (lo.prob_at_distance(d), hi.prob_at_distance(d))
            }
        })
        .collect();
    let mut edges_lo = Vec::new();
    let mut edges_hi = Vec::new();
    for i in bbox.iter() {
        for d in 1..=max_dist as i64 {
            let j = i + d;
            if j >= bbox.hi() {
                break;
            }
            let u = edge_uniform(seed, i, j);
            let (p_lo, p_hi) = probs[d as usize];
            if u < p_hi {
                edges_hi.push((i, j));
                if u < p_lo {
                    edges_lo.push((i, j));
                }
            }
        }
    }
    Ok((
        Configuration::from_edges(bbox, edges_lo, lo, seed)?,
        Configuration::from_edges(bbox, edges_hi, hi, seed)?,
    ))
}
