//! Exact counting and enumeration of short simple cycles.
//!
//! Cycles are counted by a depth-limited DFS anchored per root node, with
//! breadth-first distance pruning. Every cycle is visited exactly once: the
//! smallest node on the cycle acts as the root and the two possible
//! directions are disambiguated lexicographically.

use crate::graph::TannerGraph;
use std::collections::BTreeMap;
use thiserror::Error;

/// Longest cycle length the census will count.
pub const MAX_CENSUS_LEN: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("cycle length {0} not supported (even lengths 4..={MAX_CENSUS_LEN})")]
    UnsupportedLength(usize),
}

/// Cycle counts per even length plus the exact girth of the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCensus {
    counts: BTreeMap<usize, u64>,
    girth: Option<usize>,
}

impl CycleCensus {
    /// Number of simple cycles of the given length.
    pub fn count(&self, len: usize) -> u64 {
        self.counts.get(&len).copied().unwrap_or(0)
    }

    /// All counted lengths, ascending.
    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    /// Shortest cycle length in the whole graph, `None` when acyclic.
    pub fn girth(&self) -> Option<usize> {
        self.girth
    }

    /// CSV rows `length,count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("length,count\n");
        for (len, count) in &self.counts {
            out.push_str(&format!("{len},{count}\n"));
        }
        out
    }
}

fn check_max_len(max_len: usize) -> Result<(), CycleError> {
    if max_len < 4 || max_len > MAX_CENSUS_LEN || max_len % 2 != 0 {
        return Err(CycleError::UnsupportedLength(max_len));
    }
    Ok(())
}

/// Counts all simple cycles of each even length up to `max_len`.
pub fn count_cycles(graph: &TannerGraph, max_len: usize) -> Result<CycleCensus, CycleError> {
    check_max_len(max_len)?;
    let mut counts: BTreeMap<usize, u64> = (4..=max_len).step_by(2).map(|l| (l, 0)).collect();
    for_each_cycle(graph, max_len, |cycle| {
        *counts.get_mut(&cycle.len()).unwrap() += 1;
    });
    Ok(CycleCensus { counts, girth: graph.girth() })
}

/// Collects every simple cycle of length up to `max_len`.
///
/// Cycles are returned as node sequences in combined indexing: variable `v`
/// is node `v`, check `c` is node `n_var + c`. Intended for small graphs and
/// property tests; [`count_cycles`] avoids materializing anything.
pub fn enumerate_cycles(
    graph: &TannerGraph,
    max_len: usize,
) -> Result<Vec<Vec<usize>>, CycleError> {
    check_max_len(max_len)?;
    let mut cycles = Vec::new();
    for_each_cycle(graph, max_len, |cycle| cycles.push(cycle.to_vec()));
    Ok(cycles)
}

/// Variable-node members of a cycle in combined indexing.
pub fn cycle_vars(graph: &TannerGraph, cycle: &[usize]) -> Vec<usize> {
    cycle.iter().copied().filter(|&n| n < graph.n_var()).collect()
}

struct Walker<'a, F> {
    graph: &'a TannerGraph,
    adj: Vec<&'a [usize]>,
    max_len: usize,
    dist: Vec<usize>,
    on_path: Vec<bool>,
    path: Vec<usize>,
    emit: F,
}

impl<F: FnMut(&[usize])> Walker<'_, F> {
    fn bfs_from(&mut self, root: usize) {
        self.dist.fill(usize::MAX);
        self.dist[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if self.dist[u] >= self.max_len {
                continue;
            }
            for &w in self.adj[u] {
                let wid = self.combined(u, w);
                if self.dist[wid] == usize::MAX {
                    self.dist[wid] = self.dist[u] + 1;
                    queue.push_back(wid);
                }
            }
        }
    }

    fn combined(&self, from: usize, neighbour: usize) -> usize {
        // Bipartite: neighbours of a variable are checks and vice versa.
        if from < self.graph.n_var() {
            self.graph.n_var() + neighbour
        } else {
            neighbour
        }
    }

    fn dfs(&mut self, root: usize, u: usize) {
        let len = self.path.len();
        for i in 0..self.adj[u].len() {
            let w = self.combined(u, self.adj[u][i]);
            if w == root {
                // Cycle closure: length is the node count, at least 4, and the
                // direction is fixed by path[1] < last node.
                if len >= 4 && self.path[1] < u {
                    (self.emit)(&self.path);
                }
                continue;
            }
            if w <= root || self.on_path[w] {
                continue;
            }
            // After pushing w the cheapest closure has len + dist(w) nodes.
            if len >= self.max_len
                || self.dist[w] == usize::MAX
                || len + self.dist[w] > self.max_len
            {
                continue;
            }
            self.path.push(w);
            self.on_path[w] = true;
            self.dfs(root, w);
            self.on_path[w] = false;
            self.path.pop();
        }
    }
}

fn for_each_cycle<F: FnMut(&[usize])>(graph: &TannerGraph, max_len: usize, emit: F) {
    let total = graph.n_var() + graph.n_chk();
    let adj: Vec<&[usize]> = (0..graph.n_var())
        .map(|v| graph.var_adj(v))
        .chain((0..graph.n_chk()).map(|c| graph.chk_adj(c)))
        .collect();
    let mut walker = Walker {
        graph,
        adj,
        max_len,
        dist: vec![usize::MAX; total],
        on_path: vec![false; total],
        path: Vec::with_capacity(max_len),
        emit,
    };
    for root in 0..total {
        if walker.adj[root].len() < 2 {
            continue;
        }
        walker.bfs_from(root);
        walker.path.clear();
        walker.path.push(root);
        walker.on_path[root] = true;
        walker.dfs(root, root);
        walker.on_path[root] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TannerGraph;

    #[test]
    fn tree_has_no_cycles() {
        let g = TannerGraph::from_edges(3, 2, [(0, 0), (1, 0), (1, 1), (2, 1)]).unwrap();
        let census = count_cycles(&g, 10).unwrap();
        assert!(census.counts().values().all(|&c| c == 0));
        assert_eq!(census.girth(), None);
    }

    #[test]
    fn four_cycle_counted_once() {
        let g = TannerGraph::from_edges(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let census = count_cycles(&g, 10).unwrap();
        assert_eq!(census.count(4), 1);
        assert_eq!(census.count(6), 0);
        assert_eq!(census.girth(), Some(4));
    }

    #[test]
    fn rejects_unsupported_length() {
        let g = TannerGraph::new(2, 2);
        assert!(count_cycles(&g, 12).is_err());
        assert!(count_cycles(&g, 5).is_err());
    }

    #[test]
    fn complete_bipartite_2x3_has_three_four_cycles() {
        // Vars {0,1}, checks {0,1,2}, all six edges: C(3,2) = 3 four-cycles.
        let mut g = TannerGraph::new(2, 3);
        for v in 0..2 {
            for c in 0..3 {
                g.add_edge(v, c).unwrap();
            }
        }
        let census = count_cycles(&g, 6).unwrap();
        assert_eq!(census.count(4), 3);
        assert_eq!(census.count(6), 0);
    }

    #[test]
    fn csv_rows_follow_length_order() {
        let g = TannerGraph::from_edges(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let census = count_cycles(&g, 6).unwrap();
        assert_eq!(census.to_csv(), "length,count\n4,1\n6,0\n");
    }
}
