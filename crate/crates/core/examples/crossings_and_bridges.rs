//! Uncrossed 3K-blocks, the radius R for bridges, and the scale comparison
//! of the uncrossing probability.

use lrperc::crossing::{candidate_blocks, check_lemma2, choose_r, estimate_bridge_probability, estimate_pbar};
use lrperc::ModelParams;

fn main() -> lrperc::Result<()> {
    let params = ModelParams::new(0.5, 1.0)?;
    for k in [4, 8, 16, 32] {
        println!("pbar(K={k}) = {}", estimate_pbar(k, &params, 5 * k, 2000, k)?);
    }

    let theta = 0.9;
    match choose_r(&params, theta, 64, 2000, 56)? {
        Some(pick) => {
            println!("choose_r(theta={theta}, K=64): R = {} (escape {}, lhs {:.4})", pick.r, pick.escape, pick.lhs);
            let b = estimate_bridge_probability((0, 20), pick.r, 64, &params, 2000, 5)?;
            println!("P[{{0, 20}} is a bridge] = {b}");
        }
        None => println!("choose_r(theta={theta}, K=64): no radius"),
    }

    let sub = ModelParams::new(0.5, 0.5)?;
    let rep = check_lemma2(8, 4, &sub, theta, 4, 2000, 9)?;
    println!(
        "K=8, C=4: pbar(K) = {}, pbar(CK) = {}, ratio to bound {:.3} +- {:.3}",
        rep.pbar_k, rep.pbar_ck, rep.ratio, rep.ratio_stderr
    );
    println!(
        "candidates {:?}, mean unbridged {:.3} vs bound {:.3}",
        candidate_blocks(8, 4),
        rep.unbridged.mean,
        rep.unbridged_bound
    );
    Ok(())
}

// $ cargo run --release --example crossings_and_bridges
