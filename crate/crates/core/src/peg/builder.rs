//! Edge-by-edge graph construction driven by a metric pipeline.
//!
//! Variable nodes are processed in non-decreasing target-degree order; the
//! first edge of a node goes to a minimum-degree check and every further
//! edge runs the pipeline. A [`PegBuilder`] exposes single placements so
//! callers can freeze a construction mid-flight and inspect the candidate
//! sets of any step.

use crate::distribution::{enforce_weight2_constraint, DegreeDistribution, Weight2Error};
use crate::graph::{tree_expand, TannerGraph};
use crate::peg::paths::{
    enumerate_paths_capped, path_emd, PathError, PathSet, DEFAULT_PATH_BUDGET,
};
use crate::peg::stages::{
    stage_max_distance, stage_max_exact_set_emd, stage_max_mean_path_emd, stage_max_path_ace,
    stage_min_path_count, stage_min_weight, CandidateSets, Stage,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error("pipeline must start with MaxDistance")]
    PipelineMissingDistance,
    #[error("pipeline must end with RandomTieBreak")]
    PipelineMissingTieBreak,
    #[error("unknown pipeline name `{0}`")]
    UnknownPipeline(String),
    #[error("no eligible check for variable {var} (edge {edge} of {target})")]
    NoEligibleCheck { var: usize, edge: usize, target: usize },
    #[error("schedule for variable {var} asks for {target} edges, only {available} checks")]
    InfeasibleDegree { var: usize, target: usize, available: usize },
    #[error("schedule length {len} does not match {n_var} variable nodes")]
    ScheduleLength { len: usize, n_var: usize },
    #[error(transparent)]
    Weight2(#[from] Weight2Error),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("circulant size {q} must divide n_var {n_var} and n_chk {n_chk}")]
    QcShape { q: usize, n_var: usize, n_chk: usize },
    #[error("tile column degrees must be uniform, column {col} mixes {a} and {b}")]
    QcMixedDegrees { col: usize, a: usize, b: usize },
}

/// Ordered candidate-pruning stages plus the tie-break seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricPipeline {
    stages: Vec<Stage>,
    pub rng_seed: u64,
}

impl MetricPipeline {
    pub fn new(stages: Vec<Stage>, rng_seed: u64) -> Result<Self, BuildError> {
        if stages.first() != Some(&Stage::MaxDistance) {
            return Err(BuildError::PipelineMissingDistance);
        }
        if stages.last() != Some(&Stage::RandomTieBreak) {
            return Err(BuildError::PipelineMissingTieBreak);
        }
        Ok(Self { stages, rng_seed })
    }

    /// Pipeline for a construction flavour name: `peg`, `ipeg-ace`,
    /// `ace-emd` or `multipath-emd`.
    pub fn by_name(name: &str, rng_seed: u64) -> Result<Self, BuildError> {
        use Stage::*;
        let stages = match name {
            "peg" => vec![MaxDistance, MinWeight, RandomTieBreak],
            "ipeg-ace" => vec![MaxDistance, MinWeight, MaxPathAce, RandomTieBreak],
            "ace-emd" => vec![MaxDistance, MinWeight, MaxPathAce, MaxExactSetEmd, RandomTieBreak],
            "multipath-emd" => {
                vec![MaxDistance, MinWeight, MinPathCount, MaxMeanPathEmd, RandomTieBreak]
            }
            other => return Err(BuildError::UnknownPipeline(other.to_string())),
        };
        Self::new(stages, rng_seed)
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn has_path_stages(&self) -> bool {
        self.stages.iter().any(|s| s.needs_paths())
    }
}

/// Count of path sets materialized while scoring candidates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ComplexityAudit {
    pub total_paths_evaluated: u64,
    /// Paths of four or more hops (closing cycles of length ten or longer).
    pub long_paths_evaluated: u64,
}

impl ComplexityAudit {
    pub fn absorb(&mut self, other: ComplexityAudit) {
        self.total_paths_evaluated += other.total_paths_evaluated;
        self.long_paths_evaluated += other.long_paths_evaluated;
    }
}

/// Everything decided during one edge placement.
#[derive(Debug, Clone)]
pub struct PlacementRecord {
    pub root: usize,
    /// Which edge of the root this was (0-based) and its target degree.
    pub edge_index: usize,
    pub target_degree: usize,
    pub sets: CandidateSets,
    pub chosen: usize,
    pub paths_evaluated: u64,
}

struct QcState {
    q: usize,
    base_rows: usize,
    base_cols: usize,
    /// Shift per non-empty tile, indexed `[base_row][base_col]`.
    shifts: Vec<Vec<Option<usize>>>,
}

/// Incremental PEG construction.
pub struct PegBuilder {
    graph: TannerGraph,
    pipeline: MetricPipeline,
    rng: ChaCha8Rng,
    /// `(node, additional edges)` in placement order.
    order: Vec<(usize, usize)>,
    node_cursor: usize,
    edge_cursor: usize,
    audit: ComplexityAudit,
    degree_cap: Option<usize>,
    path_budget: usize,
    qc: Option<QcState>,
}

impl PegBuilder {
    /// Builder over an empty graph; `schedule[v]` is the target degree of
    /// variable node `v`.
    pub fn new(
        n_var: usize,
        n_chk: usize,
        schedule: &[usize],
        pipeline: MetricPipeline,
    ) -> Result<Self, BuildError> {
        Self::with_initial_graph(TannerGraph::new(n_var, n_chk), schedule, pipeline)
    }

    /// Builder over a pre-seeded graph (accumulator columns, sub-blocks).
    /// `schedule[v]` is the target total degree; nodes already at target are
    /// skipped. The weight-2 budget applies to the nodes still to place.
    pub fn with_initial_graph(
        graph: TannerGraph,
        schedule: &[usize],
        pipeline: MetricPipeline,
    ) -> Result<Self, BuildError> {
        if schedule.len() != graph.n_var() {
            return Err(BuildError::ScheduleLength { len: schedule.len(), n_var: graph.n_var() });
        }
        let mut order: Vec<(usize, usize)> = Vec::new();
        for (v, &target) in schedule.iter().enumerate() {
            let have = graph.var_degree(v);
            if target > graph.n_chk() {
                return Err(BuildError::InfeasibleDegree {
                    var: v,
                    target,
                    available: graph.n_chk(),
                });
            }
            if target > have {
                order.push((v, target));
            }
        }
        order.sort_by_key(|&(v, target)| (target, v));
        let pending: Vec<usize> = order.iter().map(|&(_, t)| t).collect();
        enforce_weight2_constraint(&pending, graph.n_chk())?;

        let total_edges: usize =
            graph.edge_count() + order.iter().map(|&(v, t)| t - graph.var_degree(v)).sum::<usize>();
        let degree_cap = Some(total_edges.div_ceil(graph.n_chk().max(1)));
        let rng = ChaCha8Rng::seed_from_u64(pipeline.rng_seed);
        Ok(Self {
            graph,
            pipeline,
            rng,
            order,
            node_cursor: 0,
            edge_cursor: 0,
            audit: ComplexityAudit::default(),
            degree_cap,
            path_budget: DEFAULT_PATH_BUDGET,
            qc: None,
        })
    }

    /// Constrains the construction to circulant tiles of size `q`: every
    /// accepted placement commits the whole orbit of `q` edges and each tile
    /// carries at most one circulant. Only tile representatives (variables
    /// with index divisible by `q`) may appear in the schedule with the same
    /// degree repeated across their tile.
    pub fn with_qc(mut self, q: usize) -> Result<Self, BuildError> {
        let (n_var, n_chk) = (self.graph.n_var(), self.graph.n_chk());
        if q == 0 || n_var % q != 0 || n_chk % q != 0 {
            return Err(BuildError::QcShape { q, n_var, n_chk });
        }
        // Collapse the order to representatives, validating uniform degrees.
        let mut per_col: Vec<Option<usize>> = vec![None; n_var / q];
        for &(v, target) in &self.order {
            let col = v / q;
            match per_col[col] {
                None => per_col[col] = Some(target),
                Some(t) if t == target => {}
                Some(t) => {
                    return Err(BuildError::QcMixedDegrees { col, a: t, b: target });
                }
            }
        }
        self.order.retain(|&(v, _)| v % q == 0);
        self.qc = Some(QcState {
            q,
            base_rows: n_chk / q,
            base_cols: n_var / q,
            shifts: vec![vec![None; n_var / q]; n_chk / q],
        });
        Ok(self)
    }

    pub fn with_degree_cap(mut self, cap: Option<usize>) -> Self {
        self.degree_cap = cap;
        self
    }

    pub fn with_path_budget(mut self, budget: usize) -> Self {
        self.path_budget = budget;
        self
    }

    pub fn graph(&self) -> &TannerGraph {
        &self.graph
    }

    pub fn audit(&self) -> ComplexityAudit {
        self.audit
    }

    /// Edges still to place (orbit placements count once).
    pub fn remaining_placements(&self) -> usize {
        self.order
            .iter()
            .skip(self.node_cursor)
            .map(|&(v, target)| target.saturating_sub(self.graph.var_degree(v)))
            .sum()
    }

    pub fn is_done(&self) -> bool {
        self.node_cursor >= self.order.len()
    }

    /// Places the next edge, or returns `None` when the schedule is done.
    pub fn step(&mut self) -> Option<Result<PlacementRecord, BuildError>> {
        if self.is_done() {
            return None;
        }
        Some(self.place_next())
    }

    /// Runs the schedule to completion.
    pub fn finish(mut self) -> Result<(TannerGraph, ComplexityAudit), BuildError> {
        while let Some(step) = self.step() {
            step?;
        }
        Ok((self.graph, self.audit))
    }

    /// Consumes the builder, returning the QC shift table when constrained.
    pub fn into_parts(self) -> (TannerGraph, ComplexityAudit, Option<QcShiftTable>) {
        let qc = self.qc.map(|q| QcShiftTable {
            circulant_size: q.q,
            base_rows: q.base_rows,
            base_cols: q.base_cols,
            shifts: q.shifts,
        });
        (self.graph, self.audit, qc)
    }

    fn place_next(&mut self) -> Result<PlacementRecord, BuildError> {
        let (root, target) = self.order[self.node_cursor];
        let edge_index = self.edge_cursor;

        let mut sets = stage_max_distance(&self.graph, root);
        self.filter_eligible(root, &mut sets);
        if sets.set_a.is_empty() {
            // Structural constraints can block the whole preferred level;
            // take the deepest level that still has an eligible check.
            let (set_a, depth, saturated) = self.eligible_fallback(root);
            if set_a.is_empty() {
                return Err(BuildError::NoEligibleCheck { var: root, edge: edge_index, target });
            }
            sets.set_a = set_a;
            sets.depth = depth;
            sets.saturated = saturated;
        }

        sets.set_b = stage_min_weight(&self.graph, &sets.set_a);
        let mut survivors = sets.set_b.clone();
        let mut paths_evaluated = 0u64;
        let mut paths: Vec<(usize, Vec<PathSet>)> = Vec::new();

        let score_paths = !sets.saturated && self.pipeline.has_path_stages() && survivors.len() > 1;
        if score_paths {
            let depth = sets.depth.expect("unsaturated placement has a depth");
            for &cand in &survivors {
                let cand_paths =
                    enumerate_paths_capped(&self.graph, root, cand, depth, self.path_budget)?;
                paths_evaluated += cand_paths.len() as u64;
                self.audit.total_paths_evaluated += cand_paths.len() as u64;
                self.audit.long_paths_evaluated +=
                    cand_paths.iter().filter(|p| p.is_long()).count() as u64;
                paths.push((cand, cand_paths));
            }
        }

        let stages: Vec<Stage> = self.pipeline.stages()[1..].to_vec();
        for stage in stages {
            if survivors.len() <= 1 {
                break;
            }
            match stage {
                Stage::MaxDistance => {}
                Stage::MinWeight => {
                    survivors = stage_min_weight(&self.graph, &survivors);
                }
                Stage::MinPathCount if score_paths => {
                    let counts: Vec<(usize, usize)> = survivors
                        .iter()
                        .map(|&c| (c, self.paths_of(&paths, c).len()))
                        .collect();
                    survivors = stage_min_path_count(&counts);
                    sets.set_c = survivors.clone();
                }
                Stage::MaxMeanPathEmd if score_paths => {
                    let metrics: Vec<(usize, u64, usize)> = survivors
                        .iter()
                        .map(|&c| {
                            let ps = self.paths_of(&paths, c);
                            let sum: u64 =
                                ps.iter().map(|p| path_emd(&self.graph, p) as u64).sum();
                            (c, sum, ps.len())
                        })
                        .collect();
                    survivors = stage_max_mean_path_emd(&metrics);
                }
                Stage::MaxPathAce if score_paths => {
                    let by_cand: Vec<(usize, &[PathSet])> = survivors
                        .iter()
                        .map(|&c| (c, self.paths_of(&paths, c)))
                        .collect();
                    survivors = stage_max_path_ace(&self.graph, &by_cand);
                }
                Stage::MaxExactSetEmd if score_paths => {
                    let by_cand: Vec<(usize, &[PathSet])> = survivors
                        .iter()
                        .map(|&c| (c, self.paths_of(&paths, c)))
                        .collect();
                    survivors = stage_max_exact_set_emd(&self.graph, &by_cand);
                }
                Stage::RandomTieBreak => {
                    let pick = self.rng.random_range(0..survivors.len());
                    survivors = vec![survivors[pick]];
                }
                // Path stages are skipped for cycle-free placements.
                _ => {}
            }
        }
        if sets.set_c.is_empty() {
            sets.set_c = sets.set_b.clone();
        }
        let chosen = survivors[0];
        self.commit(root, chosen)?;

        self.edge_cursor += 1;
        let placed_now = self.graph.var_degree(root);
        if placed_now >= target {
            self.node_cursor += 1;
            self.edge_cursor = 0;
        }
        Ok(PlacementRecord {
            root,
            edge_index,
            target_degree: target,
            sets,
            chosen,
            paths_evaluated,
        })
    }

    fn paths_of<'a>(&self, paths: &'a [(usize, Vec<PathSet>)], cand: usize) -> &'a [PathSet] {
        paths
            .iter()
            .find(|&&(c, _)| c == cand)
            .map(|(_, p)| p.as_slice())
            .expect("paths scored for every minimum-weight candidate")
    }

    /// Applies structural and degree-cap eligibility to `set_a`, falling back
    /// to laxer filters rather than failing when a constraint empties it.
    fn filter_eligible(&self, root: usize, sets: &mut CandidateSets) {
        let structural: Vec<usize> = sets
            .set_a
            .iter()
            .copied()
            .filter(|&c| !self.graph.has_edge(root, c) && self.qc_allows(root, c))
            .collect();
        if let Some(cap) = self.degree_cap {
            let capped: Vec<usize> =
                structural.iter().copied().filter(|&c| self.graph.chk_degree(c) < cap).collect();
            if !capped.is_empty() {
                sets.set_a = capped;
                return;
            }
        }
        sets.set_a = structural;
    }

    fn qc_allows(&self, root: usize, c: usize) -> bool {
        match &self.qc {
            None => true,
            Some(qc) => qc.shifts[c / qc.q][root / qc.q].is_none(),
        }
    }

    /// Deepest tree level with a structurally eligible check, tried after the
    /// preferred candidate set was filtered away entirely.
    fn eligible_fallback(&self, root: usize) -> (Vec<usize>, Option<usize>, bool) {
        let tree = tree_expand(&self.graph, root, None, None);
        let structural = |c: usize| !self.graph.has_edge(root, c) && self.qc_allows(root, c);
        let uncovered: Vec<usize> =
            tree.uncovered_checks().into_iter().filter(|&c| structural(c)).collect();
        if !uncovered.is_empty() {
            return (uncovered, None, true);
        }
        for depth in (1..tree.chk_levels.len()).rev() {
            let level: Vec<usize> =
                tree.chk_levels[depth].iter().copied().filter(|&c| structural(c)).collect();
            if !level.is_empty() {
                return (level, Some(depth), false);
            }
        }
        (Vec::new(), None, false)
    }

    fn commit(&mut self, root: usize, chosen: usize) -> Result<(), BuildError> {
        match &mut self.qc {
            None => {
                self.graph
                    .add_edge(root, chosen)
                    .expect("eligibility filter rejects parallel edges");
            }
            Some(qc) => {
                let (col, row) = (root / qc.q, chosen / qc.q);
                let shift = (chosen % qc.q + qc.q - root % qc.q) % qc.q;
                qc.shifts[row][col] = Some(shift);
                for t in 0..qc.q {
                    let v = col * qc.q + t;
                    let c = row * qc.q + (t + shift) % qc.q;
                    self.graph.add_edge(v, c).expect("fresh tile cannot collide");
                }
            }
        }
        Ok(())
    }
}

/// Circulant layout of a quasi-cyclic construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QcShiftTable {
    pub circulant_size: usize,
    pub base_rows: usize,
    pub base_cols: usize,
    pub shifts: Vec<Vec<Option<usize>>>,
}

/// Builds a graph realizing `lambda` at the given dimensions.
pub fn peg_construct(
    n_var: usize,
    n_chk: usize,
    lambda: &DegreeDistribution,
    pipeline: MetricPipeline,
) -> Result<(TannerGraph, ComplexityAudit), BuildError> {
    let schedule = lambda.realize(n_var, n_chk)?;
    PegBuilder::new(n_var, n_chk, &schedule, pipeline)?.finish()
}
