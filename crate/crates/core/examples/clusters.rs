//! Cluster structure of one configuration: partition, largest cluster and
//! the local "connected to distance R" predicate.

use lrperc::cluster::{clusters_in, connected_to_distance, largest_cluster};
use lrperc::{sample_config, Interval, ModelParams};

fn main() -> lrperc::Result<()> {
    let bbox = Interval::centered(512)?;
    for (beta, lambda) in [(0.5, 0.5), (1.0, 1.0), (2.0, 2.0)] {
        let config = sample_config(bbox, &ModelParams::new(beta, lambda)?, 7)?;
        let part = clusters_in(&config, bbox)?;
        let (size, rep) = largest_cluster(&part);
        let reach = (-64..64)
            .filter(|&x| connected_to_distance(&config, x, 16, None).unwrap_or(false))
            .count();
        println!(
            "beta={beta} lambda={lambda}: {} clusters, largest {size} (from {rep}), cluster of 0 has {}, {reach}/128 sites reach distance 16",
            part.num_clusters(),
            part.cluster_size(0),
        );
    }
    Ok(())
}

// $ cargo run --release --example clusters
