//! Graph-core behaviour pinned against independent brute-force oracles.

mod common;

use common::*;
use ldpc_core::alist::{read_alist, write_alist};
use ldpc_core::cycles::{count_cycles, cycle_vars, enumerate_cycles};
use ldpc_core::graph::tree_expand;
use ldpc_core::stopping::enumerate_stopping_sets;
use ldpc_core::TannerGraph;
use proptest::prelude::*;

#[test]
fn two_cycle_fixture_matches_recorded_properties() {
    let g = two_cycle_fixture();
    // One 4-cycle, one 6-cycle, nothing longer.
    let census = count_cycles(&g, 10).unwrap();
    assert_eq!(census.count(4), 1);
    assert_eq!(census.count(6), 1);
    assert_eq!(census.count(8), 0);
    assert_eq!(census.count(10), 0);
    assert_eq!(census.girth(), Some(4));

    // The union of the two cycles is a stopping set; the pieces are not.
    assert_eq!(g.set_emd(&[0, 1, 2, 3]).unwrap(), 0);
    assert!(g.is_stopping_set(&[0, 1, 2, 3]).unwrap());
    assert!(!g.is_stopping_set(&[1, 2, 3]).unwrap());
    assert!(!g.is_stopping_set(&[0, 1]).unwrap());
    // {v1, v2} leaks through v2's edges into c3 and c4.
    assert_eq!(g.set_emd(&[0, 1]).unwrap(), 2);
    assert_eq!(dense_set_emd(&g, &[0, 1]), 2);
    // A single degree-2 node has EMD equal to its degree.
    assert_eq!(g.set_emd(&[0]).unwrap(), 2);
    assert!(!g.is_stopping_set(&[0]).unwrap());
    // An ACE-style estimate over-counts this stopping set's connectivity.
    let ace: i64 = [0usize, 1, 2, 3].iter().map(|&v| g.var_degree(v) as i64 - 2).sum();
    assert_eq!(ace, 2);
}

#[test]
fn tree_depths_match_bfs_distances() {
    for seed in 0..30 {
        let g = random_graph(20, 12, 4, 1000 + seed);
        for root in [0usize, 7, 19] {
            let tree = tree_expand(&g, root, None, None);
            let (_, chk_dist) = bfs_distances(&g, root);
            for c in 0..g.n_chk() {
                // A check at depth d sits 2d + 1 edges from the root.
                let depth = tree.check_depth(c);
                match (depth, chk_dist[c]) {
                    (Some(d), Some(dist)) => {
                        assert_eq!(2 * d + 1, dist, "seed {seed} root {root} chk {c}")
                    }
                    (None, None) => {}
                    other => panic!("coverage mismatch: {other:?}"),
                }
            }
        }
    }
}

#[test]
fn zero_edge_graph_covers_nothing() {
    let g = TannerGraph::new(6, 9);
    let tree = tree_expand(&g, 3, None, None);
    assert!(tree.covered_checks().is_empty());
    assert_eq!(tree.uncovered_checks().len(), 9);
}

#[test]
fn cycle_census_matches_subset_oracle() {
    // 12 checks x 24 variables, counting up to length 8 against the
    // subset-testing oracle; lengths to 10 on a smaller graph.
    let g = random_graph(24, 12, 3, 42);
    let census = count_cycles(&g, 8).unwrap();
    for (len, count) in subset_cycle_counts(&g, 8) {
        assert_eq!(census.count(len), count, "length {len}");
    }

    let small = random_graph(14, 8, 3, 43);
    let census = count_cycles(&small, 10).unwrap();
    for (len, count) in subset_cycle_counts(&small, 10) {
        assert_eq!(census.count(len), count, "length {len}");
    }
}

#[test]
fn girth_agrees_with_census_and_bfs() {
    for seed in 0..25 {
        let g = random_graph(15, 9, 3, 2000 + seed);
        let census = count_cycles(&g, 10).unwrap();
        let smallest_counted =
            (4..=10).step_by(2).find(|&len| census.count(len) > 0);
        match (census.girth(), smallest_counted) {
            (Some(girth), Some(counted)) => assert_eq!(girth, counted, "seed {seed}"),
            (Some(girth), None) => assert!(girth > 10, "seed {seed}"),
            (None, Some(_)) => panic!("census found cycles in an acyclic graph"),
            (None, None) => {}
        }
    }
}

#[test]
fn cycles_satisfy_ace_over_approximation() {
    // For every enumerated cycle, the exact EMD of its variable nodes never
    // exceeds the sum of (degree - 2) over those nodes.
    for seed in 0..10 {
        let g = random_graph(16, 10, 3, 3000 + seed);
        for cycle in enumerate_cycles(&g, 8).unwrap() {
            let vars = cycle_vars(&g, &cycle);
            let emd = g.set_emd(&vars).unwrap();
            let ace: i64 = vars.iter().map(|&v| g.var_degree(v) as i64 - 2).sum();
            assert!((emd as i64) <= ace, "seed {seed} cycle {cycle:?}");
        }
    }
}

#[test]
fn emd_and_stopping_match_dense_recount_exhaustively() {
    for seed in 0..10 {
        let g = random_graph(12, 8, 3, 4000 + seed);
        let universe: Vec<usize> = (0..12).collect();
        for k in 1..=4 {
            for subset in combinations(&universe, k) {
                assert_eq!(g.set_emd(&subset).unwrap(), dense_set_emd(&g, &subset));
                assert_eq!(g.is_stopping_set(&subset).unwrap(), dense_is_stopping(&g, &subset));
                // Zero EMD with any neighbour is exactly the stopping
                // property.
                let has_neighbour = subset.iter().any(|&v| g.var_degree(v) > 0);
                assert_eq!(
                    g.is_stopping_set(&subset).unwrap(),
                    g.set_emd(&subset).unwrap() == 0 && has_neighbour
                );
            }
        }
    }
}

#[test]
fn stopping_enumeration_matches_subset_oracle() {
    let g = random_graph(15, 30, 3, 77);
    let universe: Vec<usize> = (0..15).collect();
    let found = enumerate_stopping_sets(&g, 5).unwrap();
    let brute = brute_minimal_stopping_sets(&g, &universe, 5);
    assert_eq!(found, brute);

    // A denser graph that actually contains small stopping sets.
    let g = random_graph(14, 6, 3, 78);
    let found = enumerate_stopping_sets(&g, 4).unwrap();
    let universe: Vec<usize> = (0..14).collect();
    let brute = brute_minimal_stopping_sets(&g, &universe, 4);
    assert_eq!(found, brute);
    assert!(!found.is_empty(), "fixture should contain stopping sets");
}

#[test]
fn stopping_enumeration_contains_fixture_set() {
    let g = two_cycle_fixture();
    let sets = enumerate_stopping_sets(&g, 4).unwrap();
    assert!(sets.contains(&vec![0, 1, 2, 3]));
}

#[test]
fn alist_of_fixture_round_trips() {
    let g = two_path_fixture();
    let text = write_alist(&g);
    assert_eq!(read_alist(&text).unwrap(), g);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alist_round_trip_is_identity(seed in 0u64..10_000) {
        let g = random_graph(1 + (seed as usize % 30), 1 + (seed as usize % 17), 4, seed);
        let text = write_alist(&g);
        prop_assert_eq!(read_alist(&text).unwrap(), g);
    }

    #[test]
    fn emd_matches_dense_on_random_subsets(seed in 0u64..10_000) {
        let g = random_graph(18, 11, 4, seed);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let subset: Vec<usize> = (0..18)
            .filter(|_| rand::Rng::random_bool(&mut rng, 0.3))
            .collect();
        if !subset.is_empty() {
            prop_assert_eq!(g.set_emd(&subset).unwrap(), dense_set_emd(&g, &subset));
        }
    }
}
