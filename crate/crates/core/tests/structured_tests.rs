//! Quasi-cyclic and repeat-accumulate structure tests.

mod common;

use ldpc_core::cycles::count_cycles;
use ldpc_core::distribution::DegreeDistribution;
use ldpc_core::encode::{syndrome_ok, IraEncoder};
use ldpc_core::peg::{peg_construct, MetricPipeline};
use ldpc_core::structured::{ira_construct, ira_init, qc_peg_construct, IraConstraint};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn qc_orbit_invariant_holds_exhaustively() {
    let lambda = DegreeDistribution::de_optimized_max8();
    let pipeline = MetricPipeline::by_name("multipath-emd", 7).unwrap();
    let (g, qc, _) = qc_peg_construct(256, 128, 8, &lambda, pipeline).unwrap();
    assert_eq!(g.n_var(), 256);
    assert_eq!(g.n_chk(), 128);
    let q = qc.circulant_size;
    // Every edge's rotated image within its tile is also an edge.
    for (v, c) in g.edges() {
        let rotated_v = (v / q) * q + (v % q + 1) % q;
        let rotated_c = (c / q) * q + (c % q + 1) % q;
        assert!(g.has_edge(rotated_v, rotated_c), "orbit broken at ({v}, {c})");
    }
    // The shift table reproduces the graph exactly.
    assert!(qc.matches(&g));
    // Each non-empty tile contributes exactly q edges.
    let tiles: usize =
        qc.shifts.iter().map(|row| row.iter().filter(|s| s.is_some()).count()).sum();
    assert_eq!(tiles * q, g.edge_count());
}

#[test]
fn unit_circulant_reduces_to_plain_construction() {
    let lambda = DegreeDistribution::de_optimized_max8();
    for name in ["peg", "multipath-emd"] {
        let plain = peg_construct(48, 24, &lambda, MetricPipeline::by_name(name, 5).unwrap())
            .unwrap()
            .0;
        let (qc_graph, qc, _) =
            qc_peg_construct(48, 24, 1, &lambda, MetricPipeline::by_name(name, 5).unwrap())
                .unwrap();
        assert_eq!(plain, qc_graph, "construction {name}");
        assert!(qc.matches(&qc_graph));
    }
}

#[test]
fn small_circulant_matches_manual_expansion() {
    let lambda = DegreeDistribution::new(&[(2, 0.4), (3, 0.6)]).unwrap();
    let pipeline = MetricPipeline::by_name("peg", 13).unwrap();
    let (g, qc, _) = qc_peg_construct(12, 8, 2, &lambda, pipeline).unwrap();
    // Manual expansion of the recorded shift table.
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (row, cols) in qc.shifts.iter().enumerate() {
        for (col, shift) in cols.iter().enumerate() {
            if let Some(s) = shift {
                for t in 0..2 {
                    edges.push((col * 2 + t, row * 2 + (t + s) % 2));
                }
            }
        }
    }
    edges.sort_unstable();
    let got: Vec<(usize, usize)> = g.edges().collect();
    assert_eq!(got, edges);
}

#[test]
fn qc_construction_at_full_size_reaches_girth_six() {
    // At 256/128 with tiles of 8 the degree-8 columns have 16 base rows to
    // pick from, so no 4-cycle is ever forced.
    let lambda = DegreeDistribution::de_optimized_max8();
    let pipeline = MetricPipeline::by_name("multipath-emd", 3).unwrap();
    let (g, _, _) = qc_peg_construct(256, 128, 8, &lambda, pipeline).unwrap();
    let census = count_cycles(&g, 6).unwrap();
    assert_eq!(census.count(4), 0);
    assert!(census.girth().unwrap_or(usize::MAX) >= 6);
}

#[test]
fn ira_init_matches_dual_diagonal() {
    let g = ira_init(250, 125).unwrap();
    assert_eq!(g.edge_count(), 2 * 125 - 1);
    // 125 systematic columns untouched, 125 parity columns chained.
    for v in 0..125 {
        assert_eq!(g.var_degree(v), 0);
    }
    assert_eq!(g.var_adj(125), &[0]);
    for j in 1..125 {
        assert_eq!(g.var_adj(125 + j), &[j - 1, j]);
    }
}

#[test]
fn ira_construction_keeps_accumulator_and_realizes_lambda() {
    let lambda = DegreeDistribution::de_optimized_max8();
    let pipeline = MetricPipeline::by_name("multipath-emd", 19).unwrap();
    let (g, ira, _) = ira_construct(250, 125, &lambda, pipeline).unwrap();
    assert_eq!(ira.parity_count, 125);
    // Accumulator intact.
    for (v, c) in ira.accumulator_edges() {
        assert!(g.has_edge(v, c));
    }
    // Systematic columns all landed at degree >= 3.
    for v in 0..125 {
        assert!(g.var_degree(v) >= 3, "var {v} degree {}", g.var_degree(v));
    }
    // The parity chain is the only degree <= 2 population and it is acyclic.
    let weight2: Vec<usize> = (0..g.n_var()).filter(|&v| g.var_degree(v) <= 2).collect();
    assert_eq!(weight2.len(), 125);
    let induced = g.induced_on_vars(&weight2);
    assert_eq!(induced.girth(), None);
}

#[test]
fn ira_encoding_matches_hand_accumulation() {
    // M = 4 toy code with one systematic column on every check.
    let mut g = ira_init(5, 4).unwrap();
    for c in 0..4 {
        g.add_edge(0, c).unwrap();
    }
    let ira = IraConstraint { n_var: 5, parity_count: 4 };
    let encoder = IraEncoder::new(&g, &ira);
    let word = encoder.encode(&[1]).unwrap();
    // Check 3 pins p3 = m0; then p2 = m0 ^ p3 = 0, p1 = m0 ^ p2 = 1,
    // p0 = m0 ^ p1 = 0.
    assert_eq!(word, vec![1, 0, 1, 0, 1]);
    assert!(syndrome_ok(&g, &word));
}

#[test]
fn ira_random_messages_satisfy_all_checks() {
    let lambda = DegreeDistribution::de_optimized_max8();
    let pipeline = MetricPipeline::by_name("peg", 23).unwrap();
    let (g, ira, _) = ira_construct(80, 40, &lambda, pipeline).unwrap();
    let encoder = IraEncoder::new(&g, &ira);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let msg: Vec<u8> = (0..40).map(|_| rng.random_range(0..2u8)).collect();
        let word = encoder.encode(&msg).unwrap();
        assert!(syndrome_ok(&g, &word));
        assert_eq!(&word[..40], msg.as_slice());
    }
}

#[test]
fn weight2_subgraph_of_any_construction_is_acyclic() {
    let lambda = DegreeDistribution::de_optimized_max8();
    for seed in [2, 4, 6] {
        let pipeline = MetricPipeline::by_name("multipath-emd", seed).unwrap();
        let (g, _) = peg_construct(250, 125, &lambda, pipeline).unwrap();
        let weight2: Vec<usize> = (0..g.n_var()).filter(|&v| g.var_degree(v) == 2).collect();
        assert_eq!(weight2.len(), 124);
        let induced = g.induced_on_vars(&weight2);
        assert_eq!(induced.girth(), None, "seed {seed}");
    }
}
