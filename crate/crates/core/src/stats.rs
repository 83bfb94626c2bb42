//! Monte Carlo output records and error bars.

use std::collections::BTreeMap;
use std::fmt;

/// Mean, standard error and provenance of one Monte Carlo estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorResult {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
    pub seed: u64,
    pub metadata: BTreeMap<String, String>,
}

impl EstimatorResult {
    pub fn new(mean: f64, stderr: f64, n: u64, seed: u64) -> Self {
        debug_assert!(stderr >= 0.0 && n >= 1);
        EstimatorResult {
            mean,
            stderr,
            n,
            seed,
            metadata: BTreeMap::new(),
        }
    }

    /// Frequency of `successes` in `n` independent trials with the binomial
    /// standard error `sqrt(p(1-p)/n)`.
    pub fn from_counts(successes: u64, n: u64, seed: u64) -> Self {
        let p = successes as f64 / n as f64;
        Self::new(p, (p * (1.0 - p) / n as f64).sqrt(), n, seed)
    }

    /// Sample mean of i.i.d. values with standard error `sd / sqrt(n)`.
    pub fn from_samples(values: &[f64], seed: u64) -> Self {
        let (mean, stderr) = mean_and_stderr(values);
        Self::new(mean, stderr, values.len() as u64, seed)
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    /// `mean +- z * stderr`.
    pub fn interval(&self, z: f64) -> (f64, f64) {
        (self.mean - z * self.stderr, self.mean + z * self.stderr)
    }

    /// One minus this estimate (same error bar).
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        out.mean = 1.0 - self.mean;
        out
    }
}

impl fmt::Display for EstimatorResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6} ± {:.6} (n={})", self.mean, self.stderr, self.n)
    }
}

pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// `sqrt(a^2 + b^2)`: error bar of a difference of independent estimates.
pub fn joint_stderr(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

/// Batch-means summary of a correlated time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchMeans {
    pub mean: f64,
    pub stderr: f64,
    /// Integrated autocorrelation time estimated as
    /// `batch_len * var(batch means) / (2 * var(series))`; 0.5 means uncorrelated.
    pub tau_int: f64,
    pub batches: usize,
}

/// Splits `series` into `batches` equal consecutive batches (dropping the
/// remainder from the front) and uses the spread of the batch means as the
/// error bar.
pub fn batch_means(series: &[f64], batches: usize) -> BatchMeans {
    let batches = batches.max(2).min(series.len().max(1));
    let len = series.len() / batches;
    if len == 0 {
        let (mean, stderr) = mean_and_stderr(series);
        return BatchMeans {
            mean,
            stderr,
            tau_int: 0.5,
            batches: series.len(),
        };
    }
    let used = &series[series.len() - len * batches..];
    let means: Vec<f64> = used
        .chunks_exact(len)
        .map(|c| c.iter().sum::<f64>() / len as f64)
        .collect();
    let (mean, stderr) = mean_and_stderr(&means);
    let (_, naive) = mean_and_stderr(used);
    let tau_int = if naive > 0.0 {
        0.5 * (stderr / naive).powi(2)
    } else {
        0.5
    };
    BatchMeans {
        mean,
        stderr,
        tau_int,
        batches,
    }
}

/// Total-variation distance between two probability vectors of equal length.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Normalises a histogram of counts.
pub fn normalize(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}
