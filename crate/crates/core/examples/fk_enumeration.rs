//! Exact random-cluster and Potts laws on small graphs.

use lrperc::fk::{
    conditional_closed_weight, exact_fk_distribution, exact_magnetization, exact_potts_distribution, BoundaryCondition,
    FkGraph,
};
use lrperc::{Interval, ModelParams};

fn main() -> lrperc::Result<()> {
    let single = FkGraph::with_probs(Interval::new(0, 2)?, vec![(0, 1)], vec![0.5])?;
    let t = exact_fk_distribution(&single, 2.0, &BoundaryCondition::Free)?;
    println!("single edge, p=1/2, q=2: P[open] = {:.6}", t.edge_open_prob(0));

    // Path 0-1-2 with both ends tied to the outside.
    let domain = Interval::new(0, 3)?;
    let params = ModelParams::new(1.0, 1.0)?;
    let g = FkGraph::from_params(domain, vec![(-1, 0), (0, 1), (1, 2), (2, 3)], &params)?;
    for q in [0.5, 1.0, 2.0, 4.0] {
        let free = exact_fk_distribution(&g, q, &BoundaryCondition::Free)?;
        let wired = exact_fk_distribution(&g, q, &BoundaryCondition::Wired)?;
        println!(
            "q={q}: P[(0,1) open] free {:.4} wired {:.4}; P[1 <-> boundary] wired {:.4}",
            free.edge_open_prob(1),
            wired.edge_open_prob(1),
            wired.boundary_connection_prob(1)
        );
    }

    let wired = exact_fk_distribution(&g, 3.0, &BoundaryCondition::Wired)?;
    let potts = exact_potts_distribution(&g, 3, &BoundaryCondition::Wired)?;
    println!(
        "q=3: magnetization at 1 = {:.6}, boundary connection = {:.6}",
        exact_magnetization(&potts, domain, 1, 3),
        wired.boundary_connection_prob(1)
    );
    for q in [0.5, 1.0, 2.0] {
        println!("closed given apart, p=0.4, q={q}: {:.4}", conditional_closed_weight(0.4, q)?);
    }
    Ok(())
}

// $ cargo run --release --example fk_enumeration
