//! Swendsen-Wang dynamics for the long-range `q`-Potts model and the FK
//! observables read off its bond layer.
//!
//! Wired (monochromatic, color 1) boundary conditions are realised by a ghost
//! vertex: site `x` is joined to it with coupling `h(x)`, the total weight of
//! all edges from `x` to the complement of the box (see
//! [`exterior_field`]). The ghost always carries color 1.

use rand::Rng;

use crate::cluster::UnionFind;
use crate::crossing::escape_given;
use crate::error::{precondition, Result};
use crate::model::{exterior_field, Interval, ModelParams};
use crate::renorm::MIN_SAMPLES;
use crate::rng::{derive_seed, replicates, stream_rng};
use crate::sampler::{sample_config, Configuration};
use crate::stats::{batch_means, BatchMeans, EstimatorResult};

const GHOST_STREAM: u64 = u64::MAX - 1;
const COLOR_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Free,
    /// Ghost vertex of color 1.
    Wired,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PottsState {
    bbox: Interval,
    spins: Vec<u32>,
    q: u32,
    bc: Boundary,
    /// `h(x)` per site; all zero under free boundary conditions.
    ghost_coupling: Vec<f64>,
}

impl PottsState {
    /// All spins set to color 1.
    pub fn new(bbox: Interval, q: u32, bc: Boundary, params: &ModelParams) -> Result<Self> {
        check_q(q, params)?;
        let params = params.validate()?;
        if bbox.len() < 2 {
            return Err(precondition(format!("box {bbox} must contain at least 2 sites")));
        }
        let ghost_coupling = match bc {
            Boundary::Free => vec![0.0; bbox.len()],
            Boundary::Wired => bbox.iter().map(|x| exterior_field(x, &bbox, &params)).collect(),
        };
        Ok(PottsState {
            bbox,
            spins: vec![1; bbox.len()],
            q,
            bc,
            ghost_coupling,
        })
    }

    pub fn with_spins(mut self, spins: Vec<u32>) -> Result<Self> {
        if spins.len() != self.bbox.len() || spins.iter().any(|&c| c < 1 || c > self.q) {
            return Err(precondition(format!("need {} spins in 1..={}", self.bbox.len(), self.q)));
        }
        self.spins = spins;
        Ok(self)
    }

    pub fn bbox(&self) -> Interval {
        self.bbox
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn bc(&self) -> Boundary {
        self.bc
    }

    pub fn spins(&self) -> &[u32] {
        &self.spins
    }

    pub fn spin(&self, x: i64) -> u32 {
        self.spins[(x - self.bbox.lo()) as usize]
    }

    pub fn ghost_coupling(&self) -> &[f64] {
        &self.ghost_coupling
    }
}

fn check_q(q: u32, params: &ModelParams) -> Result<()> {
    if q < 2 {
        return Err(precondition("Swendsen-Wang needs an integer q >= 2"));
    }
    if params.q != q as f64 {
        return Err(precondition(format!(
            "model q = {} does not match the state's q = {q}",
            params.q
        )));
    }
    Ok(())
}

/// Bonds of one Swendsen-Wang step.
#[derive(Debug, Clone, PartialEq)]
pub struct BondLayer {
    /// Open bonds between sites of the box.
    pub config: Configuration,
    /// Open ghost bonds per site (all false under free boundary conditions).
    pub ghost_bonds: Vec<bool>,
}

impl BondLayer {
    /// Union-find over the box plus (last index) the ghost.
    fn union_find(&self) -> UnionFind {
        let bbox = self.config.bbox();
        let n = bbox.len();
        let mut uf = UnionFind::new(n + 1);
        for (a, b) in self.config.open_edges() {
            uf.union((a - bbox.lo()) as usize, (b - bbox.lo()) as usize);
        }
        for (k, &g) in self.ghost_bonds.iter().enumerate() {
            if g {
                uf.union(k, n);
            }
        }
        uf
    }

    /// Whether `x` is joined to the ghost.
    pub fn connected_to_ghost(&self, x: i64) -> bool {
        let bbox = self.config.bbox();
        let mut uf = self.union_find();
        uf.find((x - bbox.lo()) as usize) == uf.find(bbox.len())
    }
}

/// Bond layer for the current spins: independent bonds between equal spins
/// with probability `p_{ij}` and, under wired boundary conditions, ghost
/// bonds at color-1 sites with probability `1 - exp(-h(x))`.
///
/// Bonds are proposed as in [`sample_config`] for all pairs and proposals
/// between unequal spins are discarded, which leaves each equal-spin pair
/// open independently with the right probability.
pub fn bond_layer(state: &PottsState, params: &ModelParams, seed: u64) -> Result<BondLayer> {
    check_q(state.q, params)?;
    let proposal = sample_config(state.bbox, params, seed)?;
    let config = proposal.filtered(|a, b| state.spin(a) == state.spin(b));
    let ghost_bonds = match state.bc {
        Boundary::Free => vec![false; state.spins.len()],
        Boundary::Wired => {
            let mut rng = stream_rng(seed, GHOST_STREAM);
            state
                .spins
                .iter()
                .zip(&state.ghost_coupling)
                .map(|(&c, &h)| {
                    let u: f64 = rng.random();
                    c == 1 && u < -(-h).exp_m1()
                })
                .collect()
        }
    };
    Ok(BondLayer {
        config,
        ghost_bonds,
    })
}

/// FK configuration generated by the bond step (ghost bonds dropped).
pub fn fk_from_spins(state: &PottsState, params: &ModelParams, seed: u64) -> Result<Configuration> {
    Ok(bond_layer(state, params, seed)?.config)
}

/// One Swendsen-Wang step: bond layer, then every cluster not containing the
/// ghost gets a uniform color; the ghost cluster gets color 1. Returns the
/// bond layer used.
pub fn sw_sweep(state: &mut PottsState, params: &ModelParams, seed: u64) -> Result<BondLayer> {
    let layer = bond_layer(state, params, seed)?;
    let n = state.spins.len();
    let mut uf = layer.union_find();
    let ghost_root = uf.find(n);
    let mut rng = stream_rng(seed, COLOR_STREAM);
    let mut new_color = vec![0u32; n + 1];
    for k in 0..n {
        let r = uf.find(k);
        if new_color[r] == 0 {
            new_color[r] = if r == ghost_root {
                1
            } else {
                rng.random_range(1..=state.q)
            };
        }
        state.spins[k] = new_color[r];
    }
    Ok(layer)
}

/// Length and seed of one Markov chain. `burn_in` defaults to a fifth of the
/// sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainRun {
    pub n_sweeps: usize,
    pub burn_in: Option<usize>,
    pub batches: usize,
    pub seed: u64,
}

impl ChainRun {
    pub fn new(n_sweeps: usize, seed: u64) -> Self {
        ChainRun {
            n_sweeps,
            burn_in: None,
            batches: 32,
            seed,
        }
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = Some(burn_in);
        self
    }

    pub fn burn_in(&self) -> usize {
        self.burn_in.unwrap_or(self.n_sweeps / 5)
    }

    fn check(&self) -> Result<()> {
        if self.burn_in() >= self.n_sweeps {
            return Err(precondition(format!(
                "burn-in {} must be smaller than the number of sweeps {}",
                self.burn_in(),
                self.n_sweeps
            )));
        }
        Ok(())
    }

    fn seed_of(&self, sweep: usize) -> u64 {
        derive_seed(self.seed, sweep as u64)
    }
}

/// Both observables from one chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSummary {
    /// Indicator that the origin is joined to the ghost in the bond layer.
    pub theta: BatchMeans,
    /// `(q 1[σ_origin = 1] - 1) / (q - 1)` after each sweep.
    pub magnetization: BatchMeans,
    pub samples: usize,
}

/// Runs a chain from the all-1 state and records both observables after
/// burn-in.
pub fn run_chain(
    bbox: Interval,
    origin: i64,
    q: u32,
    bc: Boundary,
    params: &ModelParams,
    run: ChainRun,
) -> Result<ChainSummary> {
    run.check()?;
    if !bbox.contains(origin) {
        return Err(precondition(format!("origin {origin} outside {bbox}")));
    }
    let mut state = PottsState::new(bbox, q, bc, params)?;
    let mut theta = Vec::with_capacity(run.n_sweeps - run.burn_in());
    let mut mag = Vec::with_capacity(theta.capacity());
    let qf = q as f64;
    for sweep in 0..run.n_sweeps {
        let layer = sw_sweep(&mut state, params, run.seed_of(sweep))?;
        if sweep >= run.burn_in() {
            theta.push(if layer.connected_to_ghost(origin) { 1.0 } else { 0.0 });
            let up = if state.spin(origin) == 1 { 1.0 } else { 0.0 };
            mag.push((qf * up - 1.0) / (qf - 1.0));
        }
    }
    Ok(ChainSummary {
        theta: batch_means(&theta, run.batches),
        magnetization: batch_means(&mag, run.batches),
        samples: theta.len(),
    })
}

/// Visits the spin configuration after every post-burn-in sweep.
pub fn for_each_sweep<F>(state: &mut PottsState, params: &ModelParams, run: ChainRun, mut visit: F) -> Result<()>
where
    F: FnMut(&PottsState, &BondLayer),
{
    run.check()?;
    for sweep in 0..run.n_sweeps {
        let layer = sw_sweep(state, params, run.seed_of(sweep))?;
        if sweep >= run.burn_in() {
            visit(state, &layer);
        }
    }
    Ok(())
}

fn to_result(bm: &BatchMeans, samples: usize, seed: u64, observable: &str) -> EstimatorResult {
    EstimatorResult::new(bm.mean, bm.stderr, samples as u64, seed)
        .with_meta("observable", observable)
        .with_meta("tau_int", bm.tau_int)
}

/// Finite-volume `θ`: probability that 0 is connected to the wired boundary
/// of `[-L, L)`.
///
/// For `q = 1` the chain is replaced by `n_sweeps - burn_in` independent
/// percolation samples, each scored by the exact conditional probability that
/// the cluster of 0 has an open edge leaving the box.
pub fn estimate_theta_fk(q: u32, params: &ModelParams, l: u64, run: ChainRun) -> Result<EstimatorResult> {
    run.check()?;
    let bbox = Interval::centered(l as i64)?;
    if q == 1 {
        return estimate_theta_bernoulli(params, bbox, run.n_sweeps - run.burn_in(), run.seed);
    }
    let params = params.with_q(q as f64);
    let s = run_chain(bbox, 0, q, Boundary::Wired, &params, run)?;
    Ok(to_result(&s.theta, s.samples, run.seed, "theta_fk").with_meta("L", l))
}

/// `P[0 <-> Z ∖ bbox]` for independent percolation (Rao-Blackwellised over
/// the edges leaving the box).
pub fn estimate_theta_bernoulli(params: &ModelParams, bbox: Interval, n: usize, seed: u64) -> Result<EstimatorResult> {
    if n < MIN_SAMPLES {
        return Err(crate::Error::TooFewSamples {
            got: n,
            min: MIN_SAMPLES,
        });
    }
    let params = params.validate()?;
    if !bbox.contains(0) || bbox.len() < 2 {
        return Err(precondition(format!("box {bbox} must contain 0 and another site")));
    }
    let field: Vec<f64> = bbox.iter().map(|x| exterior_field(x, &bbox, &params)).collect();
    let values = replicates(n, seed, |s| -> Result<f64> {
        let config = sample_config(bbox, &params, s)?;
        Ok(escape_given(&config, 0, &field))
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    Ok(EstimatorResult::from_samples(&values, seed).with_meta("observable", "theta_fk"))
}

/// Magnetization `(q P[σ_0 = 1] - 1)/(q - 1)` on `[-L, L)` with monochromatic
/// (color 1) boundary conditions.
pub fn magnetization(q: u32, params: &ModelParams, l: u64, run: ChainRun) -> Result<EstimatorResult> {
    run.check()?;
    let bbox = Interval::centered(l as i64)?;
    let params = params.with_q(q as f64);
    let s = run_chain(bbox, 0, q, Boundary::Wired, &params, run)?;
    Ok(to_result(&s.magnetization, s.samples, run.seed, "magnetization").with_meta("L", l))
}
