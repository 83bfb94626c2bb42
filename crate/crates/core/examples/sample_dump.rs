//! Draws one configuration, compares open-edge counts per distance with
//! their expectations, and round-trips it through the text dump.

use lrperc::{expected_edge_count, sample_config, Configuration, Interval, ModelParams};

fn main() -> lrperc::Result<()> {
    let bbox = Interval::new(0, 4096)?;
    let params = ModelParams::new(1.0, 1.0)?;
    let config = sample_config(bbox, &params, 2024)?;

    println!("box {bbox}: {} open edges (expected {:.1})", config.edge_count(), expected_edge_count(bbox, &params)?);
    let mut by_distance = [0usize; 6];
    for (a, b) in config.open_edges() {
        if let Some(slot) = by_distance.get_mut((b - a) as usize) {
            *slot += 1;
        }
    }
    for d in 1..6u64 {
        let expected = (bbox.len() as u64 - d) as f64 * params.prob_at_distance(d);
        println!("  d = {d}: {:>5} open, {expected:>8.1} expected", by_distance[d as usize]);
    }

    let text = config.dump_to_string();
    let back = Configuration::load(text.as_bytes())?;
    assert_eq!(back.open_edges(), config.open_edges());
    println!("dump: {} lines, header `{}`", text.lines().count(), text.lines().next().unwrap_or(""));
    Ok(())
}

// $ cargo run --release --example sample_dump
