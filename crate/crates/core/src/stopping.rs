//! Bounded enumeration of minimal stopping sets.
//!
//! This search exists as a verification oracle, not an optimizer: direct
//! stopping-set optimization is intractable at useful block lengths, so the
//! enumerator carries hard caps and refuses anything larger.

use crate::graph::{GraphError, TannerGraph};
use thiserror::Error;

/// Largest variable-node count accepted by [`enumerate_stopping_sets`].
pub const MAX_SEARCH_VARS: usize = 60;
/// Largest universe accepted by [`enumerate_stopping_sets_within`].
pub const MAX_SEARCH_UNIVERSE: usize = 96;
/// Largest set size either search will look for.
pub const MAX_SEARCH_SIZE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoppingSearchError {
    #[error("graph has {n_var} variable nodes, enumeration capped at {MAX_SEARCH_VARS}")]
    GraphTooLarge { n_var: usize },
    #[error("universe has {len} nodes, enumeration capped at {MAX_SEARCH_UNIVERSE}")]
    UniverseTooLarge { len: usize },
    #[error("max_size {max_size} above cap {MAX_SEARCH_SIZE}")]
    SizeTooLarge { max_size: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// All minimal stopping sets of size at most `max_size`, sorted.
///
/// A set is minimal when no proper subset is itself a stopping set.
pub fn enumerate_stopping_sets(
    graph: &TannerGraph,
    max_size: usize,
) -> Result<Vec<Vec<usize>>, StoppingSearchError> {
    if graph.n_var() > MAX_SEARCH_VARS {
        return Err(StoppingSearchError::GraphTooLarge { n_var: graph.n_var() });
    }
    let universe: Vec<usize> = (0..graph.n_var()).collect();
    search(graph, &universe, max_size, None)
}

/// Minimal stopping sets of size at most `max_size` drawn from `universe`,
/// optionally restricted to sets intersecting `require_any`.
pub fn enumerate_stopping_sets_within(
    graph: &TannerGraph,
    universe: &[usize],
    max_size: usize,
    require_any: Option<&[usize]>,
) -> Result<Vec<Vec<usize>>, StoppingSearchError> {
    if universe.len() > MAX_SEARCH_UNIVERSE {
        return Err(StoppingSearchError::UniverseTooLarge { len: universe.len() });
    }
    let mut universe = universe.to_vec();
    universe.sort_unstable();
    universe.dedup();
    search(graph, &universe, max_size, require_any)
}

fn search(
    graph: &TannerGraph,
    universe: &[usize],
    max_size: usize,
    require_any: Option<&[usize]>,
) -> Result<Vec<Vec<usize>>, StoppingSearchError> {
    if max_size > MAX_SEARCH_SIZE {
        return Err(StoppingSearchError::SizeTooLarge { max_size });
    }
    for &v in universe {
        if v >= graph.n_var() {
            return Err(GraphError::VarOutOfRange { var: v, n_var: graph.n_var() }.into());
        }
    }
    let required: Option<Vec<bool>> = require_any.map(|req| {
        let mut flags = vec![false; graph.n_var()];
        for &v in req {
            if v < flags.len() {
                flags[v] = true;
            }
        }
        flags
    });

    // For each check, the largest universe position of any neighbour: once the
    // search has moved past it, a singly-connected check can never be fixed.
    let mut last_fix = vec![None::<usize>; graph.n_chk()];
    for (pos, &v) in universe.iter().enumerate() {
        for &c in graph.var_adj(v) {
            last_fix[c] = Some(pos);
        }
    }
    let max_deg = universe.iter().map(|&v| graph.var_degree(v)).max().unwrap_or(0);

    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut state = SearchState {
        graph,
        universe,
        max_size,
        required: required.as_deref(),
        last_fix: &last_fix,
        max_deg,
        touch: vec![0u32; graph.n_chk()],
        singly: 0,
        chosen: Vec::new(),
        has_required: false,
        found: &mut found,
    };
    state.extend(0);

    // Keep only minimal sets.
    found.sort_by_key(|s| (s.len(), s.clone()));
    let mut minimal: Vec<Vec<usize>> = Vec::new();
    'outer: for set in found {
        for kept in &minimal {
            if kept.iter().all(|v| set.contains(v)) {
                continue 'outer;
            }
        }
        minimal.push(set);
    }
    minimal.sort();
    Ok(minimal)
}

struct SearchState<'a> {
    graph: &'a TannerGraph,
    universe: &'a [usize],
    max_size: usize,
    required: Option<&'a [bool]>,
    last_fix: &'a [Option<usize>],
    max_deg: usize,
    touch: Vec<u32>,
    singly: usize,
    chosen: Vec<usize>,
    has_required: bool,
    found: &'a mut Vec<Vec<usize>>,
}

impl SearchState<'_> {
    fn extend(&mut self, from_pos: usize) {
        if !self.chosen.is_empty() && self.singly == 0 {
            // Every touched check is covered twice; a set with no neighbours
            // at all (all-zero columns) does not count.
            let has_neighbour = self.chosen.iter().any(|&v| self.graph.var_degree(v) > 0);
            if has_neighbour {
                if self.required.is_none() || self.has_required {
                    self.found.push(self.chosen.clone());
                    // Supersets are never minimal within the searched family.
                    return;
                }
                // Stopping set without a required member: supersets may still
                // contain one, so the branch stays open.
            }
        }
        if self.chosen.len() == self.max_size {
            return;
        }
        let room = self.max_size - self.chosen.len();
        // Each new member repairs at most max_deg singly-connected checks.
        if self.max_deg == 0 || self.singly > room * self.max_deg {
            return;
        }
        for pos in from_pos..self.universe.len() {
            // A singly-connected check with no repair candidate ahead of
            // `pos` dooms every extension from here.
            if self
                .touch
                .iter()
                .enumerate()
                .any(|(c, &t)| t == 1 && self.last_fix[c].is_none_or(|lf| lf < pos))
            {
                return;
            }
            if self.required.is_some() && !self.has_required {
                // All remaining required members must still be reachable.
                let req = self.required.unwrap();
                if !self.universe[pos..].iter().any(|&v| req[v]) {
                    return;
                }
            }
            let v = self.universe[pos];
            let was_required = self.has_required;
            for &c in self.graph.var_adj(v) {
                self.touch[c] += 1;
                match self.touch[c] {
                    1 => self.singly += 1,
                    2 => self.singly -= 1,
                    _ => {}
                }
            }
            self.chosen.push(v);
            if let Some(req) = self.required {
                self.has_required = self.has_required || req[v];
            }
            self.extend(pos + 1);
            self.chosen.pop();
            self.has_required = was_required;
            for &c in self.graph.var_adj(v) {
                match self.touch[c] {
                    1 => self.singly -= 1,
                    2 => self.singly += 1,
                    _ => {}
                }
                self.touch[c] -= 1;
            }
        }
    }
}
