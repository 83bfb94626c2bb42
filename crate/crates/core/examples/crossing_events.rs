//! Events A (a long connection out of B_3K), B (no long edge near the
//! origin) and the flanking crossings, for several K.

use lrperc::crossing::{check_theorem_ii_events, log_prob_b_event};
use lrperc::ModelParams;

fn main() -> lrperc::Result<()> {
    let params = ModelParams::new(0.8, 1.0)?;
    for k in [8, 16, 32] {
        let plain = check_theorem_ii_events(k, &params, 2000, k, false)?;
        let cond = check_theorem_ii_events(k, &params, 2000, k + 1, true)?;
        println!(
            "K={k}: P[A] = {}, P[B] box {} exact {:.3e} (log {:.3}), pbar = {}",
            plain.p_a,
            plain.p_b_box,
            plain.p_b_exact,
            log_prob_b_event(k, &params)?,
            plain.pbar
        );
        println!(
            "       slack {:.4} +- {:.4}, inequality ok: {}, violations {} / {} (hypothesis held {} times given B)",
            plain.slack,
            plain.slack_stderr,
            plain.inequality_ok,
            plain.violations + cond.violations,
            4000,
            cond.hypothesis_count
        );
    }
    Ok(())
}

// $ cargo run --release --example crossing_events
