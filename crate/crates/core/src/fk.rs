//! Exact random-cluster (FK) and Potts laws on small graphs by enumeration.
//!
//! A graph has a domain `S` (an interval of sites) plus any number of
//! boundary vertices: every endpoint outside `S` is a boundary vertex. The
//! boundary condition says which boundary vertices are identified when
//! counting components. Valid for every real `q > 0`.

use crate::cluster::UnionFind;
use crate::error::{precondition, Result};
use crate::model::{edge_prob, Interval, ModelParams};
use crate::sampler::Configuration;

/// Enumeration limit for [`exact_fk_distribution`].
pub const MAX_ENUM_EDGES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// Every boundary vertex is its own class.
    Free,
    /// All boundary vertices form one class.
    Wired,
    /// Listed classes are identified; unlisted boundary vertices are singletons.
    Partition(Vec<Vec<i64>>),
}

/// Candidate edges with their (independent) opening probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct FkGraph {
    domain: Interval,
    edges: Vec<(i64, i64)>,
    probs: Vec<f64>,
}

impl FkGraph {
    pub fn with_probs(domain: Interval, edges: Vec<(i64, i64)>, probs: Vec<f64>) -> Result<Self> {
        if edges.len() != probs.len() {
            return Err(precondition("one probability per edge"));
        }
        for (&(a, b), &p) in edges.iter().zip(&probs) {
            if a == b {
                return Err(crate::Error::SelfEdge(a));
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(precondition(format!("edge probability {p} outside [0, 1]")));
            }
            if !domain.contains(a) && !domain.contains(b) {
                return Err(precondition(format!("edge {{{a}, {b}}} has no endpoint in {domain}")));
            }
        }
        Ok(FkGraph {
            domain,
            edges,
            probs,
        })
    }

    /// Probabilities `p_{ij}` of the long-range model.
    pub fn from_params(domain: Interval, edges: Vec<(i64, i64)>, params: &ModelParams) -> Result<Self> {
        let params = params.validate()?;
        let probs = edges
            .iter()
            .map(|&(a, b)| edge_prob(a, b, &params))
            .collect::<Result<Vec<f64>>>()?;
        Self::with_probs(domain, edges, probs)
    }

    /// All edges with both endpoints in `domain`.
    pub fn complete(domain: Interval, params: &ModelParams) -> Result<Self> {
        let edges = domain
            .iter()
            .flat_map(|a| (a + 1..domain.hi()).map(move |b| (a, b)))
            .collect();
        Self::from_params(domain, edges, params)
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn edges(&self) -> &[(i64, i64)] {
        &self.edges
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Domain sites first, then boundary vertices in increasing order.
    fn vertices(&self) -> Vec<i64> {
        let mut boundary: Vec<i64> = self
            .edges
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .filter(|v| !self.domain.contains(*v))
            .collect();
        boundary.sort_unstable();
        boundary.dedup();
        self.domain.iter().chain(boundary).collect()
    }

    /// Bitmask (bit `e` = edge `e` open) of the open candidate edges of a
    /// configuration. Edges of the configuration that are not candidates are
    /// ignored.
    pub fn mask_of(&self, config: &Configuration) -> u32 {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| config.bbox().contains(a) && config.bbox().contains(b) && config.is_open(a, b))
            .fold(0, |m, (e, _)| m | 1 << e)
    }
}

/// Vertex indices plus union-find pre-seeded with the boundary identifications.
struct Skeleton {
    index: std::collections::HashMap<i64, usize>,
    base: UnionFind,
    /// Index of one representative per boundary class that counts as "the
    /// boundary" for connection events (the wired class, if any).
    wired_root: Option<usize>,
}

fn skeleton(graph: &FkGraph, bc: &BoundaryCondition) -> Result<Skeleton> {
    let vertices = graph.vertices();
    let index: std::collections::HashMap<i64, usize> =
        vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut base = UnionFind::new(vertices.len());
    let boundary: Vec<usize> = vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| !graph.domain.contains(**v))
        .map(|(k, _)| k)
        .collect();
    let mut wired_root = None;
    match bc {
        BoundaryCondition::Free => {}
        BoundaryCondition::Wired => {
            for w in boundary.windows(2) {
                base.union(w[0], w[1]);
            }
            wired_root = boundary.first().copied();
        }
        BoundaryCondition::Partition(classes) => {
            for class in classes {
                let mut prev = None;
                for v in class {
                    if graph.domain.contains(*v) {
                        return Err(precondition(format!("boundary class contains domain site {v}")));
                    }
                    // Classes may mention vertices no edge touches; those do
                    // not affect component counts of the touched vertices.
                    let Some(&k) = index.get(v) else { continue };
                    if let Some(p) = prev {
                        base.union(p, k);
                    }
                    prev = Some(k);
                }
            }
        }
    }
    Ok(Skeleton {
        index,
        base,
        wired_root,
    })
}

/// Normalised random-cluster weights of all `2^|E|` configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct FkWeightTable {
    pub graph: FkGraph,
    pub q: f64,
    pub bc: BoundaryCondition,
    /// `weights[mask]`, bit `e` of `mask` = edge `e` open.
    pub weights: Vec<f64>,
    /// Number of components of `ω^ξ` (boundary classes identified) per mask.
    pub components: Vec<u32>,
}

/// `P[ω] ∝ q^{k(ω^ξ)} Π p_e^{ω_e} (1 - p_e)^{1 - ω_e}`.
pub fn exact_fk_distribution(graph: &FkGraph, q: f64, bc: &BoundaryCondition) -> Result<FkWeightTable> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(precondition(format!("q = {q} must be a positive real")));
    }
    let m = graph.edges.len();
    if m > MAX_ENUM_EDGES {
        return Err(precondition(format!(
            "{m} edges exceed the enumeration bound of {MAX_ENUM_EDGES}"
        )));
    }
    let sk = skeleton(graph, bc)?;
    let ends: Vec<(usize, usize)> = graph
        .edges
        .iter()
        .map(|(a, b)| (sk.index[a], sk.index[b]))
        .collect();
    let ln_q = q.ln();
    let mut log_w = Vec::with_capacity(1 << m);
    let mut components = Vec::with_capacity(1 << m);
    for mask in 0u32..1 << m {
        let mut uf = sk.base.clone();
        let mut lw = 0.0;
        for (e, &(a, b)) in ends.iter().enumerate() {
            let p = graph.probs[e];
            if mask >> e & 1 == 1 {
                lw += p.ln();
                uf.union(a, b);
            } else {
                lw += (-p).ln_1p();
            }
        }
        let k = (0..uf.len()).filter(|&v| uf.find(v) == v).count() as u32;
        components.push(k);
        log_w.push(lw + k as f64 * ln_q);
    }
    let max = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut weights: Vec<f64> = log_w.iter().map(|l| (l - max).exp()).collect();
    let z: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= z);
    Ok(FkWeightTable {
        graph: graph.clone(),
        q,
        bc: bc.clone(),
        weights,
        components,
    })
}

impl FkWeightTable {
    pub fn edge_open_prob(&self, e: usize) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .filter(|(mask, _)| mask >> e & 1 == 1)
            .map(|(_, w)| w)
            .sum()
    }

    fn joined(&self, mask: usize, skip: Option<usize>, a: i64, b: i64) -> bool {
        let sk = skeleton(&self.graph, &self.bc).expect("validated at construction");
        let mut uf = sk.base;
        for (e, (x, y)) in self.graph.edges.iter().enumerate() {
            if Some(e) != skip && mask >> e & 1 == 1 {
                uf.union(sk.index[x], sk.index[y]);
            }
        }
        let (ia, ib) = (sk.index[&a], sk.index[&b]);
        uf.find(ia) == uf.find(ib)
    }

    /// `P[ω_e = 0 | endpoints of e not joined in ω^ξ without e]`.
    pub fn conditional_closed(&self, e: usize) -> f64 {
        let (a, b) = self.graph.edges[e];
        let mut apart = 0.0;
        let mut closed = 0.0;
        for (mask, &w) in self.weights.iter().enumerate() {
            if self.joined(mask, Some(e), a, b) {
                continue;
            }
            apart += w;
            if mask >> e & 1 == 0 {
                closed += w;
            }
        }
        closed / apart
    }

    /// `P[v is connected to the wired boundary class]`; zero unless the
    /// boundary condition is wired and some boundary vertex exists.
    pub fn boundary_connection_prob(&self, v: i64) -> f64 {
        let sk = skeleton(&self.graph, &self.bc).expect("validated at construction");
        let Some(root) = sk.wired_root else {
            return 0.0;
        };
        let Some(&iv) = sk.index.get(&v) else {
            return 0.0;
        };
        let mut total = 0.0;
        for (mask, &w) in self.weights.iter().enumerate() {
            let mut uf = sk.base.clone();
            for (e, (x, y)) in self.graph.edges.iter().enumerate() {
                if mask >> e & 1 == 1 {
                    uf.union(sk.index[x], sk.index[y]);
                }
            }
            if uf.find(iv) == uf.find(root) {
                total += w;
            }
        }
        total
    }
}

/// `(1 - p) q / (p + (1 - p) q)`: probability that an edge is closed given
/// that its endpoints are not otherwise connected.
pub fn conditional_closed_weight(p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(precondition(format!("p = {p} must lie in (0, 1)")));
    }
    if !(q > 0.0) {
        return Err(precondition(format!("q = {q} must be positive")));
    }
    Ok((1.0 - p) * q / (p + (1.0 - p) * q))
}

/// Exact `q`-state Potts law on the domain sites of `graph`, weights
/// `Π_e (1 - p_e)^{[σ_a ≠ σ_b]}`.
///
/// Under `Free` boundary vertices are not allowed; under `Wired` every
/// boundary vertex carries color 1 (so edges into the boundary act as a
/// field towards color 1). Colorings are indexed in base `q`, site
/// `domain.lo()` being the least significant digit; colors are `1..=q`.
pub fn exact_potts_distribution(graph: &FkGraph, q: u32, bc: &BoundaryCondition) -> Result<Vec<f64>> {
    if q < 1 {
        return Err(precondition("q must be at least 1"));
    }
    let has_boundary = graph.vertices().len() > graph.domain.len();
    match bc {
        BoundaryCondition::Free if has_boundary => {
            return Err(precondition("free Potts enumeration needs edges inside the domain"))
        }
        BoundaryCondition::Partition(_) => {
            return Err(precondition("Potts enumeration supports free and wired boundaries"))
        }
        _ => {}
    }
    let n = graph.domain.len();
    let total = (q as u64).checked_pow(n as u32).filter(|&t| t <= 1 << 22).ok_or_else(|| {
        precondition(format!("{q}^{n} colorings exceed the enumeration bound"))
    })?;
    let lo = graph.domain.lo();
    let mut weights = Vec::with_capacity(total as usize);
    let mut colors = vec![1u32; n];
    for code in 0..total {
        let mut c = code;
        for slot in colors.iter_mut() {
            *slot = (c % q as u64) as u32 + 1;
            c /= q as u64;
        }
        let color = |v: i64| {
            if graph.domain.contains(v) {
                colors[(v - lo) as usize]
            } else {
                1
            }
        };
        let lw: f64 = graph
            .edges
            .iter()
            .zip(&graph.probs)
            .filter(|((a, b), _)| color(*a) != color(*b))
            .map(|(_, &p)| (-p).ln_1p())
            .sum();
        weights.push(lw.exp());
    }
    let z: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= z);
    Ok(weights)
}

/// Color (`1..=q`) of the domain site at `offset` in coloring `code`.
pub fn color_of(code: usize, offset: usize, q: u32) -> u32 {
    (code / (q as usize).pow(offset as u32) % q as usize) as u32 + 1
}

/// `(q P[σ_v = 1] - 1) / (q - 1)` from an exact Potts table.
pub fn exact_magnetization(table: &[f64], domain: Interval, v: i64, q: u32) -> f64 {
    let offset = (v - domain.lo()) as usize;
    let p1: f64 = table
        .iter()
        .enumerate()
        .filter(|(code, _)| color_of(*code, offset, q) == 1)
        .map(|(_, w)| w)
        .sum();
    (q as f64 * p1 - 1.0) / (q as f64 - 1.0)
}
