//! Shared fixtures and independent brute-force oracles for integration
//! tests. Everything here recomputes results from first principles and must
//! stay independent of the library's own algorithms.

#![allow(dead_code)]

use ldpc_core::TannerGraph;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Small two-cycle fixture: a length-4 cycle [v1, c1, v2, c2] and a length-6
/// cycle [v2, c3, v3, c5, v4, c4] joined at v2, so that {v1, v2, v3, v4} is
/// a stopping set while neither cycle alone is. 0-based: v1..v4 -> 0..3,
/// c1..c5 -> 0..4.
pub fn two_cycle_fixture() -> TannerGraph {
    TannerGraph::from_edges(
        4,
        5,
        [
            (0, 0),
            (0, 1),
            (1, 0),
            (1, 1),
            (1, 2),
            (1, 3),
            (2, 2),
            (2, 4),
            (3, 3),
            (3, 4),
        ],
    )
    .unwrap()
}

/// Two-candidate path fixture: from root v0 the checks c6, c8(=ce), c9(=cf)
/// all sit at depth 2; ce sees two distinct paths (via v2-v4 and v3-v4) and
/// cf a single one (via v2-v5). c6 = {v4, v5, v6} carries degree 3 so the
/// weight stage removes it, leaving the ce/cf comparison.
pub fn two_path_fixture() -> TannerGraph {
    TannerGraph::from_edges(
        7,
        10,
        [
            (0, 0),
            (1, 0),
            (0, 1),
            (2, 1),
            (0, 2),
            (3, 2),
            (2, 3),
            (4, 3),
            (3, 4),
            (4, 4),
            (2, 5),
            (5, 5),
            (4, 6),
            (5, 6),
            (6, 6),
            (1, 7),
            (6, 7),
            (4, 8),
            (5, 9),
        ],
    )
    .unwrap()
}

/// Index of check `ce` in [`two_path_fixture`].
pub const TWO_PATH_CE: usize = 8;
/// Index of check `cf` in [`two_path_fixture`].
pub const TWO_PATH_CF: usize = 9;

/// Random sparse graph: every variable picks 1..=max_deg distinct checks.
pub fn random_graph(n_var: usize, n_chk: usize, max_deg: usize, seed: u64) -> TannerGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = TannerGraph::new(n_var, n_chk);
    for v in 0..n_var {
        let d = rng.random_range(1..=max_deg.min(n_chk));
        let mut placed = 0;
        while placed < d {
            let c = rng.random_range(0..n_chk);
            if g.add_edge(v, c).is_ok() {
                placed += 1;
            }
        }
    }
    g
}

/// Plain breadth-first distances (in edges) from a variable node over the
/// bipartite graph. Returns (variable distances, check distances).
pub fn bfs_distances(g: &TannerGraph, root: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let mut var_dist = vec![None; g.n_var()];
    let mut chk_dist = vec![None; g.n_chk()];
    var_dist[root] = Some(0);
    let mut frontier = vec![(false, root)];
    let mut dist = 0;
    while !frontier.is_empty() {
        dist += 1;
        let mut next = Vec::new();
        for &(is_chk, i) in &frontier {
            if is_chk {
                for &v in g.chk_adj(i) {
                    if var_dist[v].is_none() {
                        var_dist[v] = Some(dist);
                        next.push((false, v));
                    }
                }
            } else {
                for &c in g.var_adj(i) {
                    if chk_dist[c].is_none() {
                        chk_dist[c] = Some(dist);
                        next.push((true, c));
                    }
                }
            }
        }
        frontier = next;
    }
    (var_dist, chk_dist)
}

/// Exhaustive simple-cycle count by subset testing: for every pair of a
/// variable subset and check subset of size `k`, count the Hamiltonian
/// cycles of the induced bipartite graph (a cycle may have chords in the
/// host graph, so 2-regularity of the subset is not required).
pub fn subset_cycle_counts(g: &TannerGraph, max_len: usize) -> Vec<(usize, u64)> {
    let mut counts = Vec::new();
    for k in 2..=max_len / 2 {
        let mut count = 0u64;
        let vars: Vec<usize> = (0..g.n_var()).collect();
        let chks: Vec<usize> = (0..g.n_chk()).collect();
        for vset in combinations(&vars, k) {
            for cset in combinations(&chks, k) {
                if subset_degrees_at_least_two(g, &vset, &cset) {
                    count += hamiltonian_cycles(g, &vset, &cset);
                }
            }
        }
        counts.push((2 * k, count));
    }
    counts
}

fn subset_degrees_at_least_two(g: &TannerGraph, vset: &[usize], cset: &[usize]) -> bool {
    vset.iter().all(|&v| g.var_adj(v).iter().filter(|c| cset.contains(c)).count() >= 2)
        && cset.iter().all(|&c| g.chk_adj(c).iter().filter(|v| vset.contains(v)).count() >= 2)
}

/// Cycles visiting every node of `vset` and `cset` exactly once, counted by
/// brute-force alternating sequences anchored at `vset[0]`; each cycle shows
/// up in both directions, so the raw tally is halved.
fn hamiltonian_cycles(g: &TannerGraph, vset: &[usize], cset: &[usize]) -> u64 {
    fn rec(
        g: &TannerGraph,
        vset: &[usize],
        cset: &[usize],
        used_v: &mut Vec<bool>,
        used_c: &mut Vec<bool>,
        current_var: usize,
        placed_vars: usize,
        tally: &mut u64,
    ) {
        if placed_vars == vset.len() {
            // One check remains; the cycle closes if it joins the last
            // variable back to the anchor.
            for (ci, &c) in cset.iter().enumerate() {
                if !used_c[ci] && g.has_edge(current_var, c) && g.has_edge(vset[0], c) {
                    *tally += 1;
                }
            }
            return;
        }
        for (ci, &c) in cset.iter().enumerate() {
            if used_c[ci] || !g.has_edge(current_var, c) {
                continue;
            }
            used_c[ci] = true;
            for (vi, &v) in vset.iter().enumerate() {
                if used_v[vi] || !g.has_edge(v, c) {
                    continue;
                }
                used_v[vi] = true;
                rec(g, vset, cset, used_v, used_c, v, placed_vars + 1, tally);
                used_v[vi] = false;
            }
            used_c[ci] = false;
        }
    }
    let mut used_v = vec![false; vset.len()];
    let mut used_c = vec![false; cset.len()];
    used_v[0] = true;
    let mut tally = 0u64;
    rec(g, vset, cset, &mut used_v, &mut used_c, vset[0], 1, &mut tally);
    tally / 2
}

/// All k-element subsets of `items`.
pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - current.len() {
                break;
            }
            current.push(items[i]);
            rec(items, k, i + 1, current, out);
            current.pop();
        }
    }
    rec(items, k, 0, &mut current, &mut out);
    out
}

/// Column-summing EMD recount straight from the dense parity-check matrix.
pub fn dense_set_emd(g: &TannerGraph, vset: &[usize]) -> usize {
    let mut column_sum = vec![0usize; g.n_chk()];
    let mut members: Vec<usize> = vset.to_vec();
    members.sort_unstable();
    members.dedup();
    for c in 0..g.n_chk() {
        for &v in &members {
            if g.has_edge(v, c) {
                column_sum[c] += 1;
            }
        }
    }
    column_sum.iter().filter(|&&s| s == 1).count()
}

/// Definitional stopping-set test: some neighbour, no singly-connected one.
pub fn dense_is_stopping(g: &TannerGraph, vset: &[usize]) -> bool {
    let mut members: Vec<usize> = vset.to_vec();
    members.sort_unstable();
    members.dedup();
    let mut any = false;
    for c in 0..g.n_chk() {
        let touches = g.chk_adj(c).iter().filter(|v| members.contains(v)).count();
        if touches == 1 {
            return false;
        }
        any |= touches > 0;
    }
    any
}

/// Exhaustive enumeration of the distinct shortest paths from `root` to
/// `candidate` by depth-first search over variable sequences: consecutive
/// variables must share a check, the final one must neighbour the candidate,
/// and the hop count is fixed by the candidate's BFS distance.
pub fn dfs_paths(g: &TannerGraph, root: usize, candidate: usize, hops: usize) -> Vec<Vec<usize>> {
    let mut found = Vec::new();
    let mut path = vec![root];
    let share = |a: usize, b: usize| g.var_adj(a).iter().any(|c| g.var_adj(b).contains(c));
    fn rec(
        g: &TannerGraph,
        candidate: usize,
        hops: usize,
        path: &mut Vec<usize>,
        share: &dyn Fn(usize, usize) -> bool,
        found: &mut Vec<Vec<usize>>,
    ) {
        if path.len() == hops + 1 {
            if g.has_edge(*path.last().unwrap(), candidate) {
                found.push(path.clone());
            }
            return;
        }
        let last = *path.last().unwrap();
        for v in 0..g.n_var() {
            if path.contains(&v) || !share(last, v) {
                continue;
            }
            path.push(v);
            rec(g, candidate, hops, path, share, found);
            path.pop();
        }
    }
    rec(g, candidate, hops, &mut path, &share, &mut found);
    found.sort();
    found
}

/// All stopping subsets of `universe` with size at most `max_size`, by raw
/// subset enumeration, then filtered to the inclusion-minimal ones.
pub fn brute_minimal_stopping_sets(
    g: &TannerGraph,
    universe: &[usize],
    max_size: usize,
) -> Vec<Vec<usize>> {
    let mut stopping: Vec<Vec<usize>> = Vec::new();
    for k in 1..=max_size {
        for subset in combinations(universe, k) {
            if dense_is_stopping(g, &subset) {
                stopping.push(subset);
            }
        }
    }
    let mut minimal: Vec<Vec<usize>> = Vec::new();
    'outer: for set in &stopping {
        for other in &stopping {
            if other.len() < set.len() && other.iter().all(|v| set.contains(v)) {
                continue 'outer;
            }
        }
        minimal.push(set.clone());
    }
    minimal.sort();
    minimal
}

/// Exact bit posteriors by summing over every word that satisfies all
/// checks, weighting words by the channel LLRs. Returns p(bit = 0) per bit.
pub fn exhaustive_marginals(g: &TannerGraph, llrs: &[f64]) -> Vec<f64> {
    let n = g.n_var();
    assert!(n <= 20, "marginalization oracle is exponential");
    let mut p0 = vec![0.0f64; n];
    let mut total = 0.0f64;
    for word in 0u32..(1 << n) {
        let bits: Vec<u8> = (0..n).map(|i| (word >> i & 1) as u8).collect();
        let ok = (0..g.n_chk())
            .all(|c| g.chk_adj(c).iter().fold(0u8, |acc, &v| acc ^ bits[v]) == 0);
        if !ok {
            continue;
        }
        // Weight proportional to prod_i p(bit_i); with LLR l, p(0) and p(1)
        // are proportional to exp(l/2) and exp(-l/2).
        let weight: f64 = (0..n)
            .map(|i| if bits[i] == 0 { (llrs[i] / 2.0).exp() } else { (-llrs[i] / 2.0).exp() })
            .product();
        total += weight;
        for i in 0..n {
            if bits[i] == 0 {
                p0[i] += weight;
            }
        }
    }
    p0.iter().map(|&w| w / total).collect()
}

/// Random bipartite tree on `n_var + n_chk` nodes: each new node attaches to
/// a uniformly chosen existing node of the other side.
pub fn random_tree_code(n_var: usize, n_chk: usize, seed: u64) -> TannerGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = TannerGraph::new(n_var, n_chk);
    let mut vars_in = vec![0usize];
    let mut chks_in: Vec<usize> = Vec::new();
    let mut pending_v: Vec<usize> = (1..n_var).collect();
    let mut pending_c: Vec<usize> = (0..n_chk).collect();
    while !pending_v.is_empty() || !pending_c.is_empty() {
        let can_add_var = !pending_v.is_empty() && !chks_in.is_empty();
        let can_add_chk = !pending_c.is_empty();
        let add_var = match (can_add_var, can_add_chk) {
            (true, true) => rng.random_bool(0.5),
            (true, false) => true,
            (false, true) => false,
            (false, false) => panic!("tree construction needs at least one check"),
        };
        if add_var {
            let v = pending_v.pop().unwrap();
            let c = chks_in[rng.random_range(0..chks_in.len())];
            g.add_edge(v, c).unwrap();
            vars_in.push(v);
        } else {
            let c = pending_c.pop().unwrap();
            let v = vars_in[rng.random_range(0..vars_in.len())];
            g.add_edge(v, c).unwrap();
            chks_in.push(c);
        }
    }
    g
}
