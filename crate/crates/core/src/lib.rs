//! Long-range percolation, random-cluster and Potts models on the integers
//! with couplings `1/|i-j|^s`.

pub mod cluster;
pub mod crossing;
pub mod error;
pub mod experiments;
pub mod fk;
pub mod renorm;
pub mod model;
pub mod multiscale;
pub mod potts;
pub mod rng;
pub mod sampler;
pub mod stats;

pub use error::{Error, Result};
pub use model::{coupling, edge_prob, validate_params, Interval, ModelParams};
pub use sampler::{expected_edge_count, sample_config, sample_config_coupled, Configuration};
pub use stats::EstimatorResult;
