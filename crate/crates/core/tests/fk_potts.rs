mod common;

use lrperc::fk::{
    conditional_closed_weight, exact_fk_distribution, exact_magnetization, exact_potts_distribution, BoundaryCondition,
    FkGraph,
};
use lrperc::model::exterior_field;
use lrperc::potts::{estimate_theta_bernoulli, estimate_theta_fk, for_each_sweep, run_chain, Boundary, ChainRun, PottsState};
use lrperc::{Interval, ModelParams};

use common::tv;

/// Second evaluator: weights `q^{components} Π p^ω (1-p)^{1-ω}` over the
/// vertex set `0..n`, counting components by repeated relabelling.
fn brute_force_fk(n: usize, edges: &[(usize, usize)], p: &[f64], q: f64) -> Vec<f64> {
    let mut w: Vec<f64> = (0..1usize << edges.len())
        .map(|mask| {
            let mut label: Vec<usize> = (0..n).collect();
            let mut changed = true;
            while changed {
                changed = false;
                for (e, &(a, b)) in edges.iter().enumerate() {
                    if mask >> e & 1 == 1 && label[a] != label[b] {
                        let m = label[a].min(label[b]);
                        label[a] = m;
                        label[b] = m;
                        changed = true;
                    }
                }
            }
            let comps = (0..n).filter(|&v| label[v] == v).count();
            let bern: f64 = (0..edges.len()).map(|e| if mask >> e & 1 == 1 { p[e] } else { 1.0 - p[e] }).product();
            q.powi(comps as i32) * bern
        })
        .collect();
    let z: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= z);
    w
}

#[test]
fn triangle_matches_brute_force() {
    let domain = Interval::new(0, 3).unwrap();
    let probs = vec![0.3, 0.55, 0.8];
    let g = FkGraph::with_probs(domain, vec![(0, 1), (1, 2), (0, 2)], probs.clone()).unwrap();
    for q in [0.5, 2.0, 3.7] {
        let table = exact_fk_distribution(&g, q, &BoundaryCondition::Free).unwrap();
        let oracle = brute_force_fk(3, &[(0, 1), (1, 2), (0, 2)], &probs, q);
        for (a, b) in table.weights.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-14);
        }
    }
    // Wired boundary with two boundary sites equals the free law with them merged.
    let g = FkGraph::with_probs(domain, vec![(-1, 0), (2, 3), (0, 1), (1, 2)], vec![0.4, 0.6, 0.5, 0.7]).unwrap();
    let wired = exact_fk_distribution(&g, 2.0, &BoundaryCondition::Wired).unwrap();
    // Vertices: 0..3 are the sites, 3 is the merged boundary.
    let oracle = brute_force_fk(4, &[(3, 0), (2, 3), (0, 1), (1, 2)], &[0.4, 0.6, 0.5, 0.7], 2.0);
    assert!(tv(&wired.weights, &oracle) < 1e-14);
}

#[test]
fn wired_dominates_free_on_small_graphs() {
    let domain = Interval::new(0, 3).unwrap();
    let verts = [-1i64, 0, 1, 2, 3];
    let universe: Vec<(i64, i64)> = verts
        .iter()
        .flat_map(|&a| verts.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
        .filter(|&(a, b)| (a, b) != (-1, 3))
        .collect();
    for subset in 1u32..1 << universe.len() {
        if subset.count_ones() > 4 {
            continue;
        }
        let edges: Vec<(i64, i64)> = (0..universe.len()).filter(|e| subset >> e & 1 == 1).map(|e| universe[e]).collect();
        for p in [0.2, 0.5, 0.8] {
            let g = FkGraph::with_probs(domain, edges.clone(), vec![p; edges.len()]).unwrap();
            for q in [1.0, 1.5, 2.0, 4.0] {
                let free = exact_fk_distribution(&g, q, &BoundaryCondition::Free).unwrap();
                let wired = exact_fk_distribution(&g, q, &BoundaryCondition::Wired).unwrap();
                for e in 0..edges.len() {
                    assert!(wired.edge_open_prob(e) >= free.edge_open_prob(e) - 1e-12, "{edges:?} p={p} q={q}");
                }
            }
        }
    }
}

#[test]
fn closed_weight_is_monotone_in_q() {
    for p in [0.05, 0.3, 0.5, 0.9] {
        let mut prev = 0.0;
        for q in [0.1, 0.5, 1.0, 2.0, 10.0] {
            let w = conditional_closed_weight(p, q).unwrap();
            assert!(w > prev);
            prev = w;
            if q >= 1.0 {
                assert!(w >= 1.0 - p - 1e-15);
            } else {
                assert!(w <= 1.0 - p + 1e-15);
            }
        }
    }
    assert!((conditional_closed_weight(0.5, 2.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
}

/// Complete graph of `domain` plus, per site, an edge to its own boundary
/// vertex with probability `1 - exp(-h(x))`: the finite picture of the ghost.
fn ghost_graph(domain: Interval, params: &ModelParams) -> FkGraph {
    let inner = FkGraph::complete(domain, params).unwrap();
    let mut edges = inner.edges().to_vec();
    let mut probs = inner.probs().to_vec();
    for x in domain.iter() {
        edges.push((x, 1000 + x));
        probs.push(-(-exterior_field(x, &domain, params)).exp_m1());
    }
    FkGraph::with_probs(domain, edges, probs).unwrap()
}

#[test]
fn swendsen_wang_pair_marginals_on_three_sites() {
    let domain = Interval::new(0, 3).unwrap();
    let p = ModelParams::new(1.0, 0.8).unwrap().with_q(2.0);
    let exact = exact_potts_distribution(&FkGraph::complete(domain, &p).unwrap(), 2, &BoundaryCondition::Free).unwrap();
    let mut counts = [0.0f64; 8];
    let n = 100_000;
    let mut state = PottsState::new(domain, 2, Boundary::Free, &p).unwrap();
    for_each_sweep(&mut state, &p, ChainRun::new(n + 500, 61).with_burn_in(500), |s, _| {
        let code = s.spins().iter().rev().fold(0, |c, &x| 2 * c + (x - 1) as usize);
        counts[code] += 1.0 / n as f64;
    })
    .unwrap();
    for (a, b) in [(0usize, 1usize), (1, 2), (0, 2)] {
        let pair = |w: &[f64]| {
            let mut m = [0.0; 4];
            for (code, x) in w.iter().enumerate() {
                m[(code >> a & 1) * 2 + (code >> b & 1)] += x;
            }
            m
        };
        let d = tv(&pair(&counts), &pair(&exact));
        assert!(d < 0.02, "pair ({a}, {b}): {d}");
    }
}

#[test]
fn wired_chain_matches_enumeration_and_magnetization_equals_theta() {
    let domain = Interval::new(0, 3).unwrap();
    let p = ModelParams::new(0.8, 0.6).unwrap().with_q(2.0);
    let g = ghost_graph(domain, &p);
    let potts = exact_potts_distribution(&g, 2, &BoundaryCondition::Wired).unwrap();
    let fk = exact_fk_distribution(&g, 2.0, &BoundaryCondition::Wired).unwrap();
    for v in domain.iter() {
        let m = exact_magnetization(&potts, domain, v, 2);
        let theta = fk.boundary_connection_prob(v);
        assert!((m - theta).abs() < 1e-12, "site {v}: m = {m}, theta = {theta}");
        let s = run_chain(domain, v, 2, Boundary::Wired, &p, ChainRun::new(40_000, 62 + v as u64)).unwrap();
        let joint = (s.magnetization.stderr.powi(2) + s.theta.stderr.powi(2)).sqrt();
        assert!((s.magnetization.mean - m).abs() < 3.0 * s.magnetization.stderr, "site {v}");
        assert!((s.theta.mean - theta).abs() < 3.0 * s.theta.stderr, "site {v}");
        assert!((s.magnetization.mean - s.theta.mean).abs() < 3.0 * joint);
    }
    let mut counts = vec![0.0f64; potts.len()];
    let mut state = PottsState::new(domain, 2, Boundary::Wired, &p).unwrap();
    let n = 50_000;
    for_each_sweep(&mut state, &p, ChainRun::new(n + 500, 63).with_burn_in(500), |s, _| {
        let code = s.spins().iter().rev().fold(0, |c, &x| 2 * c + (x - 1) as usize);
        counts[code] += 1.0 / n as f64;
    })
    .unwrap();
    assert!(tv(&counts, &potts) < 0.02);
}

#[test]
fn q1_route_agrees_with_bernoulli_estimator() {
    let p = ModelParams::new(0.6, 1.0).unwrap();
    let l = 32;
    let a = estimate_theta_fk(1, &p, l, ChainRun::new(6000, 64).with_burn_in(1000)).unwrap();
    let b = estimate_theta_bernoulli(&p, Interval::centered(l as i64).unwrap(), 5000, 65).unwrap();
    assert_eq!(a.n, 5000);
    assert!((a.mean - b.mean).abs() < 3.0 * (a.stderr.powi(2) + b.stderr.powi(2)).sqrt());
}

#[test]
fn q2_theta_separates_phases() {
    // Short chains: well above the transition the wired box stays connected
    // to its boundary, well below it the origin rarely is at L = 256.
    let strong = estimate_theta_fk(2, &ModelParams::new(4.0, 6.0).unwrap(), 256, ChainRun::new(400, 66)).unwrap();
    let weak = estimate_theta_fk(2, &ModelParams::new(0.5, 0.5).unwrap(), 256, ChainRun::new(400, 67)).unwrap();
    assert!(strong.mean > 0.9, "{strong}");
    assert!(weak.mean < 0.5, "{weak}");
}
