//! Model parameters, couplings and edge probabilities.
//!
//! Every pair `{i, j}` of sites carries the coupling `J(|i-j|) = 1/|i-j|^s`.
//! Nearest neighbours are governed separately by `lambda`, longer edges by
//! `beta * J`. All probabilities of the form `1 - exp(-x)` go through
//! `expm1` so that far-apart pairs keep their (tiny) probability instead of
//! rounding to zero.

use std::fmt;

use crate::error::{Error, Result};

/// Parameters `(beta, lambda, q, s)` of the long-range models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Inverse temperature multiplying the long-range coupling.
    pub beta: f64,
    /// Nearest-neighbour strength.
    pub lambda: f64,
    /// Cluster weight: 1 is Bernoulli percolation, integers >= 2 are Potts.
    pub q: f64,
    /// Coupling exponent in (1, 2].
    pub s: f64,
}

impl ModelParams {
    /// Bernoulli parameters (`q = 1`, `s = 2`), validated.
    pub fn new(beta: f64, lambda: f64) -> Result<Self> {
        Self::raw(beta, lambda).validate()
    }

    /// Unvalidated parameters with `q = 1`, `s = 2`. Call [`ModelParams::validate`]
    /// before handing them to a sampler.
    pub const fn raw(beta: f64, lambda: f64) -> Self {
        ModelParams {
            beta,
            lambda,
            q: 1.0,
            s: 2.0,
        }
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = q;
        self
    }

    pub fn with_s(mut self, s: f64) -> Self {
        self.s = s;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn validate(self) -> Result<Self> {
        validate_params(self)
    }

    /// Open probability of an edge of length `d >= 1`.
    #[inline]
    pub fn prob_at_distance(&self, d: u64) -> f64 {
        debug_assert!(d >= 1);
        if d == 1 {
            -(-self.lambda).exp_m1()
        } else {
            -(-self.beta * coupling_unchecked(d, self.s)).exp_m1()
        }
    }

    /// `-ln(1 - p_d)`, the "field" an edge of length `d` contributes.
    #[inline]
    pub fn log_weight_at_distance(&self, d: u64) -> f64 {
        if d == 1 {
            self.lambda
        } else {
            self.beta * coupling_unchecked(d, self.s)
        }
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "beta={} lambda={} q={} s={}",
            self.beta, self.lambda, self.q, self.s
        )
    }
}

/// Checks every parameter bound and reports all violations at once.
pub fn validate_params(raw: ModelParams) -> Result<ModelParams> {
    let mut problems = Vec::new();
    if !(raw.beta > 0.0 && raw.beta.is_finite()) {
        problems.push("beta must be positive".to_string());
    }
    if !(raw.lambda > 0.0 && raw.lambda.is_finite()) {
        problems.push("lambda must be positive".to_string());
    }
    if !(raw.q > 0.0 && raw.q.is_finite()) {
        problems.push("q must be positive".to_string());
    }
    if !(raw.s > 1.0 && raw.s <= 2.0) {
        problems.push("s must lie in (1,2]".to_string());
    }
    if problems.is_empty() {
        Ok(raw)
    } else {
        Err(Error::InvalidParams(problems))
    }
}

/// Half-open integer interval `[lo, hi)`, never empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: i64,
    hi: i64,
}

impl Interval {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo < hi {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::EmptyInterval { lo, hi })
        }
    }

    /// `[-half, half)`.
    pub fn centered(half: i64) -> Result<Self> {
        Self::new(-half, half)
    }

    #[inline]
    pub fn lo(&self) -> i64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> i64 {
        self.hi
    }

    #[inline]
    pub fn len(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    /// Always false; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x < self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn iter(&self) -> std::ops::Range<i64> {
        self.lo..self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

/// `J(d) = 1 / d^s`.
pub fn coupling(d: u64, s: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::ZeroDistance);
    }
    Ok(coupling_unchecked(d, s))
}

#[inline]
pub(crate) fn coupling_unchecked(d: u64, s: f64) -> f64 {
    if s == 2.0 {
        let d = d as f64;
        1.0 / (d * d)
    } else {
        (d as f64).powf(-s)
    }
}

/// Probability that the edge `{i, j}` is open under independent percolation.
pub fn edge_prob(i: i64, j: i64, params: &ModelParams) -> Result<f64> {
    if i == j {
        return Err(Error::SelfEdge(i));
    }
    Ok(params.prob_at_distance(i.abs_diff(j)))
}

/// `sum_{d >= a} d^{-s}` for `a >= 1`, `s > 1`.
///
/// Sums directly up to distance 64 and closes with the Euler-Maclaurin
/// expansion through the `B_6` term; the truncation error is below
/// `64^{-s-7} < 1e-12` for every admissible `s`.
pub fn power_tail_sum(a: u64, s: f64) -> f64 {
    const SWITCH: u64 = 64;
    let a = a.max(1);
    let mut head = 0.0;
    let m = a.max(SWITCH);
    for d in a..m {
        head += coupling_unchecked(d, s);
    }
    let mf = m as f64;
    let f = mf.powf(-s);
    let integral = mf.powf(1.0 - s) / (s - 1.0);
    let d1 = s * f / mf;
    let d3 = s * (s + 1.0) * (s + 2.0) * f / mf.powi(3);
    let d5 = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * f / mf.powi(5);
    let tail = integral + f / 2.0 + d1 / 12.0 - d3 / 720.0 + d5 / 30240.0;
    head + tail
}

/// Total `-ln P[no edge from x to the complement of `window` is open]`, i.e.
/// `lambda * #(nearest neighbours outside) + beta * sum_{y outside, |x-y|>=2} J(|x-y|)`.
///
/// This is the aggregated coupling of `x` to a wired exterior.
pub fn exterior_field(x: i64, window: &Interval, params: &ModelParams) -> f64 {
    debug_assert!(window.contains(x));
    let left = (x - window.lo() + 1) as u64;
    let right = (window.hi() - x) as u64;
    side_field(left, params) + side_field(right, params)
}

fn side_field(dmin: u64, params: &ModelParams) -> f64 {
    if dmin == 1 {
        params.lambda + params.beta * power_tail_sum(2, params.s)
    } else {
        params.beta * power_tail_sum(dmin, params.s)
    }
}
