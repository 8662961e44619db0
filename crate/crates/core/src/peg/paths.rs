//! Distinct shortest-path enumeration between a root variable node and a
//! candidate check node.
//!
//! A candidate first reached at depth `L` closes one cycle of length
//! `2 L + 2` per distinct shortest path. Paths are identified level by
//! level: the variables usable at level `a` are those present at depth `a`
//! in the tree below the root and at depth `L - a` in the tree above the
//! candidate, and a partial path extends to a level-`(a+1)` variable exactly
//! when the two variables share a check.

use crate::graph::{tree_expand, var_levels_from_check, TannerGraph};
use thiserror::Error;

/// Default ceiling on distinct paths materialized per candidate.
pub const DEFAULT_PATH_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("check {candidate} is not first reached at depth {depth} from variable {root}")]
    NotReachableAtDepth { root: usize, candidate: usize, depth: usize },
    #[error("path budget {budget} exceeded between variable {root} and check {candidate}")]
    BudgetExceeded { root: usize, candidate: usize, budget: usize },
}

/// One distinct shortest path, recorded as its ordered variable-node set.
///
/// `nodes[0]` is the root; consecutive nodes share at least one check; the
/// last node is adjacent to `candidate`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSet {
    pub nodes: Vec<usize>,
    pub candidate: usize,
}

impl PathSet {
    /// Number of variable-to-variable hops; a path of `h` hops closes a
    /// cycle of length `2 h + 2`.
    pub fn hops(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Paths of four or more hops close cycles of length ten or longer.
    pub fn is_long(&self) -> bool {
        self.hops() >= 4
    }
}

/// Path counts and per-path set EMDs for one candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathMetrics {
    pub candidate: usize,
    pub path_count: usize,
    pub path_emds: Vec<usize>,
}

impl PathMetrics {
    pub fn emd_sum(&self) -> u64 {
        self.path_emds.iter().map(|&e| e as u64).sum()
    }

    /// Arithmetic mean of the path EMDs. Comparisons inside the construction
    /// use exact integer cross-multiplication instead of this value.
    pub fn mean_emd(&self) -> f64 {
        self.emd_sum() as f64 / self.path_count as f64
    }
}

/// Set EMD of a path's variable nodes on the current graph.
pub fn path_emd(graph: &TannerGraph, path: &PathSet) -> usize {
    graph.set_emd(&path.nodes).expect("path sets are non-empty")
}

/// Enumerates the distinct shortest paths from `root` to `candidate`, which
/// must be first reached at depth `levels`.
pub fn enumerate_paths(
    graph: &TannerGraph,
    root: usize,
    candidate: usize,
    levels: usize,
) -> Result<Vec<PathSet>, PathError> {
    enumerate_paths_capped(graph, root, candidate, levels, DEFAULT_PATH_BUDGET)
}

/// [`enumerate_paths`] with an explicit path budget.
pub fn enumerate_paths_capped(
    graph: &TannerGraph,
    root: usize,
    candidate: usize,
    levels: usize,
    budget: usize,
) -> Result<Vec<PathSet>, PathError> {
    let not_reachable =
        || PathError::NotReachableAtDepth { root, candidate, depth: levels };
    if levels == 0 {
        return Err(not_reachable());
    }
    let down = tree_expand(graph, root, None, Some(levels));
    if down.check_depth(candidate) != Some(levels) {
        return Err(not_reachable());
    }
    let up = var_levels_from_check(graph, candidate, levels);

    // Variables usable at each level 1..=levels of a shortest path.
    let mut level_nodes: Vec<Vec<usize>> = Vec::with_capacity(levels);
    for a in 1..=levels {
        let below = down.var_levels.get(a).map_or(&[][..], Vec::as_slice);
        let above = up.get(levels - a).map_or(&[][..], Vec::as_slice);
        let meet: Vec<usize> =
            below.iter().copied().filter(|v| above.binary_search(v).is_ok()).collect();
        if meet.is_empty() {
            return Err(not_reachable());
        }
        level_nodes.push(meet);
    }

    let share_check = |x: usize, y: usize| -> bool {
        let (mut a, mut b) = (graph.var_adj(x), graph.var_adj(y));
        if a.len() > b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        a.iter().any(|c| b.binary_search(c).is_ok())
    };

    let mut partial: Vec<Vec<usize>> = vec![vec![root]];
    for meet in &level_nodes {
        let mut next = Vec::new();
        for path in &partial {
            let last = *path.last().unwrap();
            for &v in meet {
                if share_check(last, v) {
                    let mut extended = path.clone();
                    extended.push(v);
                    next.push(extended);
                    if next.len() > budget {
                        return Err(PathError::BudgetExceeded { root, candidate, budget });
                    }
                }
            }
        }
        partial = next;
        if partial.is_empty() {
            return Err(not_reachable());
        }
    }
    Ok(partial.into_iter().map(|nodes| PathSet { nodes, candidate }).collect())
}
