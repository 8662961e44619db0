//! Tanner-graph data model and local graph analyses.
//!
//! A [`TannerGraph`] is the bipartite graph of `n_var` variable nodes and
//! `n_chk` check nodes underlying a sparse parity-check matrix. Adjacency is
//! stored on both sides and kept sorted, so two graphs compare equal exactly
//! when they describe the same matrix.

use thiserror::Error;

/// Errors from graph construction and set queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("variable index {var} out of range (n_var = {n_var})")]
    VarOutOfRange { var: usize, n_var: usize },
    #[error("check index {chk} out of range (n_chk = {n_chk})")]
    ChkOutOfRange { chk: usize, n_chk: usize },
    #[error("parallel edge ({var}, {chk})")]
    ParallelEdge { var: usize, chk: usize },
    #[error("empty variable-node set")]
    EmptySet,
}

/// Bipartite graph of variable and check nodes with dual adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    n_var: usize,
    n_chk: usize,
    var_adj: Vec<Vec<usize>>,
    chk_adj: Vec<Vec<usize>>,
}

impl TannerGraph {
    /// Creates an edge-free graph.
    pub fn new(n_var: usize, n_chk: usize) -> Self {
        Self {
            n_var,
            n_chk,
            var_adj: vec![Vec::new(); n_var],
            chk_adj: vec![Vec::new(); n_chk],
        }
    }

    /// Builds a graph from an edge list. Rejects out-of-range and parallel edges.
    pub fn from_edges<I>(n_var: usize, n_chk: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(n_var, n_chk);
        for (v, c) in edges {
            g.add_edge(v, c)?;
        }
        Ok(g)
    }

    /// Builds a graph from per-check variable lists; `n_var` is inferred from
    /// the largest index mentioned plus one unless `n_var` is larger.
    pub fn from_check_lists(n_var: usize, checks: &[Vec<usize>]) -> Result<Self, GraphError> {
        let mut g = Self::new(n_var, checks.len());
        for (c, vars) in checks.iter().enumerate() {
            for &v in vars {
                g.add_edge(v, c)?;
            }
        }
        Ok(g)
    }

    pub fn n_var(&self) -> usize {
        self.n_var
    }

    pub fn n_chk(&self) -> usize {
        self.n_chk
    }

    /// Total number of edges.
    pub fn edge_count(&self) -> usize {
        self.var_adj.iter().map(Vec::len).sum()
    }

    /// Inserts the edge `(v, c)` on both sides, keeping adjacency sorted.
    pub fn add_edge(&mut self, v: usize, c: usize) -> Result<(), GraphError> {
        if v >= self.n_var {
            return Err(GraphError::VarOutOfRange { var: v, n_var: self.n_var });
        }
        if c >= self.n_chk {
            return Err(GraphError::ChkOutOfRange { chk: c, n_chk: self.n_chk });
        }
        let pos = match self.var_adj[v].binary_search(&c) {
            Ok(_) => return Err(GraphError::ParallelEdge { var: v, chk: c }),
            Err(pos) => pos,
        };
        self.var_adj[v].insert(pos, c);
        let pos = self.chk_adj[c].binary_search(&v).unwrap_err();
        self.chk_adj[c].insert(pos, v);
        Ok(())
    }

    pub fn has_edge(&self, v: usize, c: usize) -> bool {
        self.var_adj.get(v).is_some_and(|adj| adj.binary_search(&c).is_ok())
    }

    /// Check neighbours of variable node `v`, ascending.
    pub fn var_adj(&self, v: usize) -> &[usize] {
        &self.var_adj[v]
    }

    /// Variable neighbours of check node `c`, ascending.
    pub fn chk_adj(&self, c: usize) -> &[usize] {
        &self.chk_adj[c]
    }

    pub fn var_degree(&self, v: usize) -> usize {
        self.var_adj[v].len()
    }

    pub fn chk_degree(&self, c: usize) -> usize {
        self.chk_adj[c].len()
    }

    pub fn var_degrees(&self) -> Vec<usize> {
        self.var_adj.iter().map(Vec::len).collect()
    }

    pub fn chk_degrees(&self) -> Vec<usize> {
        self.chk_adj.iter().map(Vec::len).collect()
    }

    /// All edges `(v, c)` in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.var_adj
            .iter()
            .enumerate()
            .flat_map(|(v, adj)| adj.iter().map(move |&c| (v, c)))
    }

    /// Number of check nodes connected to `vset` exactly once.
    ///
    /// This is the extrinsic message degree of the set: summing the
    /// parity-check columns of the set members and counting entries equal
    /// to one. Duplicate indices in `vset` are ignored.
    pub fn set_emd(&self, vset: &[usize]) -> Result<usize, GraphError> {
        let touched = self.check_touch_counts(vset)?;
        Ok(touched.iter().filter(|&&t| t == 1).count())
    }

    /// True when every check neighbour of `vset` is connected to it at least
    /// twice and the set has at least one check neighbour.
    pub fn is_stopping_set(&self, vset: &[usize]) -> Result<bool, GraphError> {
        let touched = self.check_touch_counts(vset)?;
        let mut any = false;
        for &t in &touched {
            if t == 1 {
                return Ok(false);
            }
            if t > 0 {
                any = true;
            }
        }
        Ok(any)
    }

    fn check_touch_counts(&self, vset: &[usize]) -> Result<Vec<u32>, GraphError> {
        if vset.is_empty() {
            return Err(GraphError::EmptySet);
        }
        let mut members: Vec<usize> = vset.to_vec();
        members.sort_unstable();
        members.dedup();
        let mut touched = vec![0u32; self.n_chk];
        for &v in &members {
            if v >= self.n_var {
                return Err(GraphError::VarOutOfRange { var: v, n_var: self.n_var });
            }
            for &c in &self.var_adj[v] {
                touched[c] += 1;
            }
        }
        Ok(touched)
    }

    /// Length of the shortest cycle passing through variable node `v`, if any.
    ///
    /// Breadth-first search labelling every reached node with the first check
    /// branch it was discovered through; an edge joining two branches closes
    /// a cycle through `v` of length `dist(x) + dist(y) + 1`.
    pub fn shortest_cycle_through_var(&self, v: usize) -> Option<usize> {
        let total = self.n_var + self.n_chk;
        let node = |is_chk: bool, i: usize| if is_chk { self.n_var + i } else { i };
        let mut dist = vec![usize::MAX; total];
        let mut branch = vec![usize::MAX; total];
        let mut queue = std::collections::VecDeque::new();
        dist[v] = 0;
        for &c in &self.var_adj[v] {
            let id = node(true, c);
            dist[id] = 1;
            branch[id] = c;
            queue.push_back(id);
        }
        let mut best: Option<usize> = None;
        while let Some(u) = queue.pop_front() {
            if let Some(b) = best {
                // Any further closure is at least as long as 2 * dist(u).
                if 2 * dist[u] >= b {
                    break;
                }
            }
            let (is_chk, idx) = if u >= self.n_var { (true, u - self.n_var) } else { (false, u) };
            let neighbours: &[usize] = if is_chk { &self.chk_adj[idx] } else { &self.var_adj[idx] };
            for &w in neighbours {
                let wid = node(!is_chk, w);
                if wid == v {
                    continue;
                }
                if dist[wid] == usize::MAX {
                    dist[wid] = dist[u] + 1;
                    branch[wid] = branch[u];
                    queue.push_back(wid);
                } else if branch[wid] != branch[u] {
                    let len = dist[u] + dist[wid] + 1;
                    if best.is_none_or(|b| len < b) {
                        best = Some(len);
                    }
                }
            }
        }
        best
    }

    /// Exact girth of the graph, or `None` for an acyclic graph.
    pub fn girth(&self) -> Option<usize> {
        (0..self.n_var)
            .filter_map(|v| self.shortest_cycle_through_var(v))
            .min()
    }

    /// Subgraph induced by `vars` (re-indexed 0..) keeping all check nodes.
    pub fn induced_on_vars(&self, vars: &[usize]) -> TannerGraph {
        let mut g = TannerGraph::new(vars.len(), self.n_chk);
        for (new_v, &v) in vars.iter().enumerate() {
            for &c in &self.var_adj[v] {
                g.add_edge(new_v, c).expect("induced edge");
            }
        }
        g
    }
}

/// How a tree expansion stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Every check node entered the tree; `depth` is the last level.
    AllChecksCovered { depth: usize },
    /// A level added no new check nodes while some remain uncovered.
    NoNewChecks { depth: usize },
    /// The caller-imposed depth limit was hit first.
    MaxDepthReached { depth: usize },
}

/// Breadth-first expansion from a root variable node, recorded level by level.
///
/// `var_levels[a]` holds the variable nodes first reached at depth `a`
/// (depth 0 is the root alone) and `chk_levels[a]` the check nodes first
/// reached from the depth-`a` variables. A check node first reached at depth
/// `l >= 1` closes cycles of length `2 l + 2` when connected to the root.
#[derive(Debug, Clone)]
pub struct TreeExpansion {
    pub root: usize,
    pub var_levels: Vec<Vec<usize>>,
    pub chk_levels: Vec<Vec<usize>>,
    covered: Vec<bool>,
    pub termination: Termination,
}

impl TreeExpansion {
    /// Check nodes reached at any depth, ascending.
    pub fn covered_checks(&self) -> Vec<usize> {
        (0..self.covered.len()).filter(|&c| self.covered[c]).collect()
    }

    /// Check nodes never reached, ascending.
    pub fn uncovered_checks(&self) -> Vec<usize> {
        (0..self.covered.len()).filter(|&c| !self.covered[c]).collect()
    }

    pub fn is_covered(&self, c: usize) -> bool {
        self.covered[c]
    }

    /// Depth at which check `c` first entered the tree.
    pub fn check_depth(&self, c: usize) -> Option<usize> {
        self.chk_levels.iter().position(|level| level.contains(&c))
    }
}

/// Expands the tree rooted at variable node `root`.
///
/// The expansion alternates variable and check levels until all checks are
/// covered, a level adds no new check node, or `max_depth` variable levels
/// were produced. `excluded_edge` is ignored in both directions, which lets
/// a caller probe the graph as it would look without one placed edge.
pub fn tree_expand(
    graph: &TannerGraph,
    root: usize,
    excluded_edge: Option<(usize, usize)>,
    max_depth: Option<usize>,
) -> TreeExpansion {
    assert!(root < graph.n_var(), "root out of range");
    let mut var_seen = vec![false; graph.n_var()];
    let mut covered = vec![false; graph.n_chk()];
    var_seen[root] = true;
    let mut var_levels = vec![vec![root]];
    let mut chk_levels: Vec<Vec<usize>> = Vec::new();
    let mut n_covered = 0usize;
    let skip = |v: usize, c: usize| excluded_edge == Some((v, c));

    let termination = loop {
        let depth = chk_levels.len();
        let mut new_checks = Vec::new();
        for &v in &var_levels[depth] {
            for &c in graph.var_adj(v) {
                if skip(v, c) || covered[c] {
                    continue;
                }
                covered[c] = true;
                new_checks.push(c);
            }
        }
        new_checks.sort_unstable();
        n_covered += new_checks.len();
        if new_checks.is_empty() {
            chk_levels.push(new_checks);
            break Termination::NoNewChecks { depth };
        }
        let mut new_vars = Vec::new();
        for &c in &new_checks {
            for &v in graph.chk_adj(c) {
                if skip(v, c) || var_seen[v] {
                    continue;
                }
                var_seen[v] = true;
                new_vars.push(v);
            }
        }
        new_vars.sort_unstable();
        chk_levels.push(new_checks);
        if n_covered == graph.n_chk() {
            break Termination::AllChecksCovered { depth };
        }
        if max_depth.is_some_and(|m| depth >= m) {
            break Termination::MaxDepthReached { depth };
        }
        if new_vars.is_empty() {
            break Termination::NoNewChecks { depth };
        }
        var_levels.push(new_vars);
    };

    TreeExpansion { root, var_levels, chk_levels, covered, termination }
}

/// Variable nodes of the tree rooted at check node `c`, by level.
///
/// Level 0 holds the immediate variable neighbours of `c`; level `m + 1`
/// holds the variables first reached from the level-`m` variables through
/// checks other than `c`.
pub fn var_levels_from_check(graph: &TannerGraph, c: usize, max_levels: usize) -> Vec<Vec<usize>> {
    assert!(c < graph.n_chk(), "check out of range");
    let mut var_seen = vec![false; graph.n_var()];
    let mut chk_seen = vec![false; graph.n_chk()];
    chk_seen[c] = true;
    let level: Vec<usize> = graph.chk_adj(c).to_vec();
    for &v in &level {
        var_seen[v] = true;
    }
    let mut levels = vec![level];
    while levels.len() <= max_levels {
        let mut next = Vec::new();
        for &v in levels.last().unwrap() {
            for &cc in graph.var_adj(v) {
                if chk_seen[cc] {
                    continue;
                }
                chk_seen[cc] = true;
                for &w in graph.chk_adj(cc) {
                    if !var_seen[w] {
                        var_seen[w] = true;
                        next.push(w);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        levels.push(next);
    }
    levels
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph() -> TannerGraph {
        // v0 - c0 - v1 - c1 - v2, a tree.
        TannerGraph::from_edges(3, 2, [(0, 0), (1, 0), (1, 1), (2, 1)]).unwrap()
    }

    #[test]
    fn add_edge_rejects_parallel() {
        let mut g = TannerGraph::new(2, 2);
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.add_edge(0, 1), Err(GraphError::ParallelEdge { var: 0, chk: 1 }));
    }

    #[test]
    fn degree_sums_match_edge_count() {
        let g = path_graph();
        let dv: usize = g.var_degrees().iter().sum();
        let dc: usize = g.chk_degrees().iter().sum();
        assert_eq!(dv, g.edge_count());
        assert_eq!(dc, g.edge_count());
    }

    #[test]
    fn single_variable_emd_is_its_degree() {
        let g = TannerGraph::from_edges(1, 4, [(0, 0), (0, 1), (0, 3)]).unwrap();
        assert_eq!(g.set_emd(&[0]).unwrap(), 3);
        assert_eq!(g.is_stopping_set(&[0]).unwrap(), false);
    }

    #[test]
    fn emd_rejects_empty_set() {
        let g = path_graph();
        assert_eq!(g.set_emd(&[]), Err(GraphError::EmptySet));
    }

    #[test]
    fn tree_expand_no_edges() {
        let g = TannerGraph::new(3, 4);
        let t = tree_expand(&g, 1, None, None);
        assert_eq!(t.covered_checks(), Vec::<usize>::new());
        assert_eq!(t.uncovered_checks(), vec![0, 1, 2, 3]);
        assert!(matches!(t.termination, Termination::NoNewChecks { depth: 0 }));
    }

    #[test]
    fn tree_expand_covers_path() {
        let g = path_graph();
        let t = tree_expand(&g, 0, None, None);
        // Expansion stops once every check is covered; v2 is never needed.
        assert_eq!(t.var_levels, vec![vec![0], vec![1]]);
        assert_eq!(t.chk_levels, vec![vec![0], vec![1]]);
        assert!(matches!(t.termination, Termination::AllChecksCovered { depth: 1 }));
    }

    #[test]
    fn excluded_edge_is_ignored() {
        let g = path_graph();
        let t = tree_expand(&g, 0, Some((1, 1)), None);
        assert_eq!(t.covered_checks(), vec![0]);
        assert_eq!(t.uncovered_checks(), vec![1]);
    }

    #[test]
    fn girth_of_tree_is_none() {
        assert_eq!(path_graph().girth(), None);
    }

    #[test]
    fn girth_of_four_cycle() {
        let g = TannerGraph::from_edges(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert_eq!(g.girth(), Some(4));
        assert_eq!(g.shortest_cycle_through_var(0), Some(4));
    }

    #[test]
    fn girth_of_six_cycle() {
        let g =
            TannerGraph::from_edges(3, 3, [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)]).unwrap();
        assert_eq!(g.girth(), Some(6));
    }
}
