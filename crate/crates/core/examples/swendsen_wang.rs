//! Swendsen-Wang dynamics with a wired ghost: magnetization and boundary
//! connection on a small box, then the q=2 boundary connection across L.
//!
//! Pass `scan` to run the longer L = 256, 1024, 4096 comparison.

use lrperc::potts::{estimate_theta_fk, run_chain, Boundary, ChainRun};
use lrperc::{Interval, ModelParams};

fn main() -> lrperc::Result<()> {
    let params = ModelParams::new(1.0, 1.0)?.with_q(2.0);
    let s = run_chain(Interval::centered(8)?, 0, 2, Boundary::Wired, &params, ChainRun::new(20_000, 1))?;
    println!(
        "[-8, 8), q=2: m = {:.4} +- {:.4}, theta = {:.4} +- {:.4} (tau_int {:.1})",
        s.magnetization.mean, s.magnetization.stderr, s.theta.mean, s.theta.stderr, s.theta.tau_int
    );

    let sizes: &[u64] = if std::env::args().any(|a| a == "scan") { &[256, 1024, 4096] } else { &[64, 256] };
    for beta in [0.5, 4.0] {
        let p = ModelParams::new(beta, 6.0)?;
        for &l in sizes {
            let t = estimate_theta_fk(2, &p, l, ChainRun::new(1000, l))?;
            println!("q=2 beta={beta} lambda=6 L={l}: {t}");
        }
    }
    Ok(())
}

// $ cargo run --release --example swendsen_wang -- scan
