//! From dense blocks to percolation of the origin: frequency of B_K being
//! 3/4-good against the frequency of 0 sitting in a cluster of size 3K/2.

use lrperc::multiscale::density_to_percolation;
use lrperc::ModelParams;

fn main() -> lrperc::Result<()> {
    for (beta, lambda) in [(1.0, 1.0), (2.0, 13.0)] {
        for k in [16, 64, 256] {
            let r = density_to_percolation(k, &ModelParams::new(beta, lambda)?, 2000, k)?;
            println!(
                "beta={beta} lambda={lambda} K={k}: f = {:.4}, g = {:.4}, covered {:.4}; chain ok {}, 3/8 check {:?}",
                r.f.mean, r.g.mean, r.g_avg.mean, r.chain_ok, r.three_eighths_ok
            );
        }
    }
    Ok(())
}

// $ cargo run --release --example density_chain
