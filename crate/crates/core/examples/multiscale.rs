//! The scale schedule, the seeding value of lambda and the bad-block
//! recursion over the first levels.

use lrperc::multiscale::{build_schedule, lambda_seed, run_recursion_experiment};
use lrperc::ModelParams;

fn main() -> lrperc::Result<()> {
    let c1 = 8;
    let schedule = build_schedule(c1, 0.95, 1, 0.8, 6)?;
    for l in &schedule.levels {
        println!("n={} C_n={} K_n={} theta_n={:.5}", l.n, l.c_n, l.k_n, l.theta_n);
    }

    let lambda = lambda_seed(c1) + 1.0;
    println!("lambda_seed({c1}) = {:.4}; running at lambda = {lambda:.4}", lambda_seed(c1));
    let trace = run_recursion_experiment(&schedule, &ModelParams::new(2.0, lambda)?, 2000, 2, 5)?;
    for r in &trace.rows {
        println!(
            "level {}: u = {} target {:.3e} below: {} next bound {:.3e} recursion: {:?}",
            r.level.n, r.u_hat, r.target, r.below_target, r.rhs_next, r.recursion_holds
        );
    }
    Ok(())
}

// $ cargo run --release --example multiscale
