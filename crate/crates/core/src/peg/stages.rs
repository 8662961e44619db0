//! Candidate-pruning stages for progressive edge growth.
//!
//! Every construction flavour shares the same skeleton: a distance stage
//! produces the initial candidate set, a weight stage keeps the lightest
//! checks, optional path-based stages prune further, and a seeded random
//! tie-break leaves a single survivor.

use crate::graph::{tree_expand, TannerGraph, Termination};
use crate::peg::paths::PathSet;

/// One stage of a [`crate::peg::MetricPipeline`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Checks at maximal tree distance (or all uncovered checks).
    MaxDistance,
    /// Checks of minimal current degree.
    MinWeight,
    /// Checks closing the fewest shortest cycles.
    MinPathCount,
    /// Checks whose created cycles have the largest mean exact EMD.
    MaxMeanPathEmd,
    /// Checks maximizing the worst path ACE (degree minus two along paths).
    MaxPathAce,
    /// Checks maximizing the exact EMD of the union of all path nodes.
    MaxExactSetEmd,
    /// Uniform choice among the remaining candidates.
    RandomTieBreak,
}

impl Stage {
    /// Stages that require materialized path sets.
    pub fn needs_paths(self) -> bool {
        matches!(
            self,
            Stage::MinPathCount | Stage::MaxMeanPathEmd | Stage::MaxPathAce | Stage::MaxExactSetEmd
        )
    }
}

/// Candidate survivors of the pruning progression for one edge placement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSets {
    /// Maximal-distance candidates (uncovered checks when saturated).
    pub set_a: Vec<usize>,
    /// Minimum-weight survivors of `set_a`.
    pub set_b: Vec<usize>,
    /// Minimum-path-count survivors of `set_b` (equals `set_b` when the
    /// path-count stage does not run).
    pub set_c: Vec<usize>,
    /// True when the expansion left uncovered checks, so the placement
    /// closes no cycle.
    pub saturated: bool,
    /// Depth at which `set_a` was reached; `None` for saturated placements.
    pub depth: Option<usize>,
}

/// Initial candidate stage: checks at equal maximum distance from `root`.
///
/// For a root with no placed edges the expansion is empty and every check of
/// minimal current degree is a cycle-free candidate. If the expansion stalls
/// with uncovered checks those are the candidates and the placement is
/// cycle-free; otherwise the candidates are the checks first reached at the
/// final depth `l`, each closing cycles of length `2 l + 2`.
pub fn stage_max_distance(graph: &TannerGraph, root: usize) -> CandidateSets {
    let mut sets = CandidateSets {
        set_a: Vec::new(),
        set_b: Vec::new(),
        set_c: Vec::new(),
        saturated: false,
        depth: None,
    };
    if graph.var_degree(root) == 0 {
        let min_deg = (0..graph.n_chk()).map(|c| graph.chk_degree(c)).min().unwrap_or(0);
        sets.set_a = (0..graph.n_chk()).filter(|&c| graph.chk_degree(c) == min_deg).collect();
        sets.saturated = true;
        return sets;
    }
    let tree = tree_expand(graph, root, None, None);
    match tree.termination {
        Termination::AllChecksCovered { depth } => {
            sets.set_a = tree.chk_levels[depth].clone();
            sets.depth = Some(depth);
        }
        Termination::NoNewChecks { .. } | Termination::MaxDepthReached { .. } => {
            sets.set_a = tree.uncovered_checks();
            sets.saturated = true;
        }
    }
    sets
}

/// Keeps the candidates of minimal current check degree.
pub fn stage_min_weight(graph: &TannerGraph, candidates: &[usize]) -> Vec<usize> {
    let min = match candidates.iter().map(|&c| graph.chk_degree(c)).min() {
        Some(min) => min,
        None => return Vec::new(),
    };
    candidates.iter().copied().filter(|&c| graph.chk_degree(c) == min).collect()
}

/// Keeps the candidates with the fewest distinct shortest paths.
pub fn stage_min_path_count(counts: &[(usize, usize)]) -> Vec<usize> {
    let min = match counts.iter().map(|&(_, n)| n).min() {
        Some(min) => min,
        None => return Vec::new(),
    };
    counts.iter().filter(|&&(_, n)| n == min).map(|&(c, _)| c).collect()
}

/// Keeps the candidates with the largest mean path EMD.
///
/// Means are ratios of small integers, so candidates are compared by exact
/// cross-multiplication rather than through floating point.
pub fn stage_max_mean_path_emd(metrics: &[(usize, u64, usize)]) -> Vec<usize> {
    // Entries are (candidate, emd sum, path count).
    let mut best: Vec<usize> = Vec::new();
    let mut best_ratio: Option<(u64, usize)> = None;
    for &(cand, sum, count) in metrics {
        assert!(count > 0, "candidate without paths");
        match best_ratio {
            None => {
                best_ratio = Some((sum, count));
                best.push(cand);
            }
            Some((bs, bc)) => {
                let lhs = sum as u128 * bc as u128;
                let rhs = bs as u128 * count as u128;
                if lhs > rhs {
                    best_ratio = Some((sum, count));
                    best = vec![cand];
                } else if lhs == rhs {
                    best.push(cand);
                }
            }
        }
    }
    best
}

/// Sum of `degree - 2` over the non-root variable nodes of one path.
pub fn path_ace(graph: &TannerGraph, path: &PathSet) -> i64 {
    path.nodes[1..].iter().map(|&v| graph.var_degree(v) as i64 - 2).sum()
}

/// Keeps the candidates whose worst path ACE is largest.
pub fn stage_max_path_ace(
    graph: &TannerGraph,
    paths_by_candidate: &[(usize, &[PathSet])],
) -> Vec<usize> {
    argmax_by_key(paths_by_candidate, |&(_, paths)| {
        paths.iter().map(|p| path_ace(graph, p)).min().expect("candidate without paths")
    })
}

/// Keeps the candidates maximizing the exact set EMD of the union of all
/// their path variable nodes.
pub fn stage_max_exact_set_emd(
    graph: &TannerGraph,
    paths_by_candidate: &[(usize, &[PathSet])],
) -> Vec<usize> {
    argmax_by_key(paths_by_candidate, |&(_, paths)| {
        let mut union: Vec<usize> = paths.iter().flat_map(|p| p.nodes.iter().copied()).collect();
        union.sort_unstable();
        union.dedup();
        graph.set_emd(&union).expect("path union is non-empty") as i64
    })
}

/// Exact set EMD of the union of one candidate's path nodes.
pub fn exact_set_emd(graph: &TannerGraph, paths: &[PathSet]) -> usize {
    let mut union: Vec<usize> = paths.iter().flat_map(|p| p.nodes.iter().copied()).collect();
    union.sort_unstable();
    union.dedup();
    graph.set_emd(&union).expect("path union is non-empty")
}

fn argmax_by_key<T, K: Ord + Copy>(items: &[(usize, T)], mut key: impl FnMut(&(usize, T)) -> K) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::new();
    let mut best_key: Option<K> = None;
    for item in items {
        let k = key(item);
        match best_key {
            None => {
                best_key = Some(k);
                best.push(item.0);
            }
            Some(bk) if k > bk => {
                best_key = Some(k);
                best = vec![item.0];
            }
            Some(bk) if k == bk => best.push(item.0),
            _ => {}
        }
    }
    best
}
