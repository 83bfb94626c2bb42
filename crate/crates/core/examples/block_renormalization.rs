//! Block goodness at scale K, the merge step from K to CK, the F-events and
//! the closed-pair weight against its power-law bound.

use lrperc::renorm::{
    closed_pair_weight, estimate_f_events, estimate_p_bad, f_i_bound, verify_merge_lemma, DensitySets,
};
use lrperc::rng::derive_seed;
use lrperc::{sample_config, Interval, ModelParams};

fn main() -> lrperc::Result<()> {
    let params = ModelParams::new(1.5, 3.0)?;
    for k in [8, 16, 32, 64] {
        let p = estimate_p_bad(k, 0.8, &params, 2000, k)?;
        println!("p_bad(K={k}, theta=0.8) = {p}");
    }

    let (k, c) = (16, 8);
    let bbox = Interval::centered((c * k) as i64)?;
    let mut violations = 0;
    for r in 0..1000 {
        let config = sample_config(bbox, &params, derive_seed(1, r))?;
        violations += !verify_merge_lemma(&config, k, c, 0.8)? as usize;
    }
    println!("merge K={k} -> CK={}: {violations} violations in 1000 samples", c * k);

    let f = estimate_f_events(16, 12, 0.8, 0.75, &ModelParams::new(1.5, 2.0)?, 1000, 3)?;
    println!("F-events at K=16, C=12: p_bad = {}, sum P[F_i] / p_bad = {:.4}", f.p_bad, f.ratio);

    for (c, beta) in [(40, 1.2), (100, 1.2), (200, 2.0)] {
        let sets = DensitySets::maximally_spread(4, c, 0, 0.8)?;
        println!(
            "C={c} beta={beta}: closed-pair weight {:.3e} <= bound {:.3e}",
            closed_pair_weight(&sets, beta, 2.0),
            f_i_bound(c, 0, beta, 0.8)?
        );
    }
    Ok(())
}

// $ cargo run --release --example block_renormalization
