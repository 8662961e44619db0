//! Full-diversity codes for block-fading channels with any fade count.
//!
//! The codeword splits into `F` equal contiguous blocks, the systematic bits
//! living in the first. For every fade count the graph is assembled from
//! `F - 1` row groups; group `j` couples block 0 with block `j` and is zero
//! elsewhere. Within a group the block-0 columns are weight-2 and placed in
//! the cycle-free construction phase, so the group alone recovers all of
//! block 0 whenever block `j` is known. Any erasure pattern that spares at
//! least one transmitted block therefore recovers the systematic bits, which
//! is exactly the full-diversity condition; `verify_diversity` checks it by
//! peeling every such pattern.

use crate::decode::bec_peel;
use crate::distribution::DegreeDistribution;
use crate::graph::TannerGraph;
use crate::peg::{BuildError, ComplexityAudit, MetricPipeline, PegBuilder};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiversityError {
    #[error("fade count {0} must be at least 2")]
    FadeCountTooSmall(usize),
    #[error("block length {n} not divisible by fade count {f}")]
    BlockMismatch { n: usize, f: usize },
    #[error("systematic size {k} infeasible: at most {max} at these dimensions")]
    RateInfeasible { k: usize, max: usize },
    #[error("check count {m} not divisible into {groups} row groups")]
    RowGroupMismatch { m: usize, groups: usize },
    #[error("row group too small: {m1} checks cannot place {block} weight-2 columns cycle-free")]
    RowGroupTooSmall { m1: usize, block: usize },
    #[error("distribution error: {0}")]
    Distribution(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("construction failed verification; first witness: blocks {blocks:?}, residual {residual:?}")]
    VerificationFailed { blocks: Vec<usize>, residual: Vec<usize> },
    #[error("puncturing steps down one fade only: {from} to {to} requested")]
    BadPunctureTarget { from: usize, to: usize },
}

/// Partition of the variable nodes into fade blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    pub fade_count: usize,
    pub n_var: usize,
    /// Systematic bits: the first `systematic_count` positions of block 0.
    pub systematic_count: usize,
    /// Block withheld from transmission, if any.
    pub punctured_block: Option<usize>,
}

impl BlockLayout {
    pub fn block_size(&self) -> usize {
        self.n_var / self.fade_count
    }

    /// Variable range of block `b` (0-based).
    pub fn block_range(&self, b: usize) -> std::ops::Range<usize> {
        let size = self.block_size();
        b * size..(b + 1) * size
    }

    pub fn block_of(&self, v: usize) -> usize {
        v / self.block_size()
    }

    pub fn systematic(&self) -> std::ops::Range<usize> {
        0..self.systematic_count
    }

    pub fn code_rate(&self) -> f64 {
        self.systematic_count as f64 / self.n_var as f64
    }

    /// Transmitted positions (everything outside the punctured block).
    pub fn transmitted(&self) -> Vec<usize> {
        match self.punctured_block {
            None => (0..self.n_var).collect(),
            Some(p) => (0..self.n_var).filter(|&v| self.block_of(v) != p).collect(),
        }
    }

    /// Number of fades seen on the channel after puncturing.
    pub fn effective_fades(&self) -> usize {
        self.fade_count - usize::from(self.punctured_block.is_some())
    }
}

/// Whether a row-group/block region of the parity-check matrix carries edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Constructed,
    Null,
}

/// A constructed diversity code: graph, layout and region map.
#[derive(Debug, Clone, PartialEq)]
pub struct DiversityGraph {
    pub graph: TannerGraph,
    pub layout: BlockLayout,
    /// `submatrix_map[group][block]` over `F - 1` row groups and `F` blocks.
    pub submatrix_map: Vec<Vec<Region>>,
    /// Checks per row group.
    pub row_group_size: usize,
}

impl DiversityGraph {
    /// Check range of row group `g` (0-based).
    pub fn row_group_range(&self, g: usize) -> std::ops::Range<usize> {
        g * self.row_group_size..(g + 1) * self.row_group_size
    }
}

/// Largest systematic size the structure allows at `(f, n_var)`.
pub fn max_systematic(f: usize, n_var: usize) -> usize {
    // Each of the F - 1 row groups needs at least block + 1 checks.
    n_var - (f - 1) * (n_var / f + 1)
}

/// Builds a full-diversity code for `f` fades at length `n_var`.
///
/// `k` picks the systematic size (defaults to the structural maximum, which
/// leaves the rate just under `1 / F`). The result has passed
/// [`verify_diversity`]; a failing construction is an error, never a return.
pub fn build_full_diversity(
    f: usize,
    n_var: usize,
    k: Option<usize>,
    lambda: &DegreeDistribution,
    pipeline: MetricPipeline,
) -> Result<(DiversityGraph, ComplexityAudit), DiversityError> {
    if f < 2 {
        return Err(DiversityError::FadeCountTooSmall(f));
    }
    if n_var % f != 0 {
        return Err(DiversityError::BlockMismatch { n: n_var, f });
    }
    let block = n_var / f;
    let k_max = max_systematic(f, n_var);
    let k = k.unwrap_or_else(|| {
        // Largest k keeping the check count divisible into row groups.
        let mut k = k_max;
        while (n_var - k) % (f - 1) != 0 {
            k -= 1;
        }
        k
    });
    if k == 0 || k > k_max.min(block) {
        return Err(DiversityError::RateInfeasible { k, max: k_max.min(block) });
    }
    let m = n_var - k;
    if m % (f - 1) != 0 {
        return Err(DiversityError::RowGroupMismatch { m, groups: f - 1 });
    }
    let m1 = m / (f - 1);
    if block + 1 > m1 {
        return Err(DiversityError::RowGroupTooSmall { m1, block });
    }

    let other_lambda = lambda
        .restricted_min_degree(3)
        .map_err(|e| DiversityError::Distribution(e.to_string()))?;
    let other_counts = other_lambda.node_counts(block);

    let mut graph = TannerGraph::new(n_var, m);
    let mut audit = ComplexityAudit::default();
    let mut submatrix_map = vec![vec![Region::Null; f]; f - 1];

    for group in 0..f - 1 {
        // Sub-construction on columns (block 0, block group+1) and the
        // group's checks: block-0 columns weight 2, the rest from lambda.
        let mut schedule = vec![0usize; 2 * block];
        for s in schedule.iter_mut().take(block) {
            *s = 2;
        }
        let mut v = block;
        for &(d, n) in &other_counts {
            for _ in 0..n {
                schedule[v] = d;
                v += 1;
            }
        }
        let sub_pipeline = MetricPipeline::new(
            pipeline.stages().to_vec(),
            pipeline.rng_seed.wrapping_add(group as u64),
        )?;
        let builder = PegBuilder::new(2 * block, m1, &schedule, sub_pipeline)?;
        let (sub, sub_audit) = builder.finish()?;
        audit.absorb(sub_audit);

        let var_map = |v: usize| if v < block { v } else { (group + 1) * block + (v - block) };
        let chk_map = |c: usize| group * m1 + c;
        for (v, c) in sub.edges() {
            graph.add_edge(var_map(v), chk_map(c)).expect("sub-blocks are disjoint");
        }
        submatrix_map[group][0] = Region::Constructed;
        submatrix_map[group][group + 1] = Region::Constructed;
    }

    let dg = DiversityGraph {
        graph,
        layout: BlockLayout {
            fade_count: f,
            n_var,
            systematic_count: k,
            punctured_block: None,
        },
        submatrix_map,
        row_group_size: m1,
    };
    let report = verify_diversity(&dg);
    if let Some(failure) = report.failures.first() {
        return Err(DiversityError::VerificationFailed {
            blocks: failure.erased_blocks.clone(),
            residual: failure.residual.clone(),
        });
    }
    Ok((dg, audit))
}

/// One erasure pattern that failed to recover the systematic bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternFailure {
    /// Erased block indices (0-based).
    pub erased_blocks: Vec<usize>,
    /// Unresolved variables after peeling: a stopping set witnessing the
    /// failure.
    pub residual: Vec<usize>,
}

/// Outcome of exhaustive block-erasure verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiversityReport {
    pub passed: bool,
    pub patterns_checked: usize,
    pub failures: Vec<PatternFailure>,
}

/// Verifies the full-diversity condition by peeling every relevant
/// block-erasure pattern.
///
/// The patterns erase block 0 together with any proper sub-collection of the
/// other transmitted blocks (all blocks gone is unrecoverable by definition,
/// and patterns sparing block 0 hand the systematic bits over directly);
/// with the trivial nothing-erased pattern this makes `2^(F - 1)` cases for
/// `F` effective fades. A punctured block counts as erased everywhere. The
/// code passes when every pattern recovers every systematic bit.
pub fn verify_diversity(dg: &DiversityGraph) -> DiversityReport {
    let layout = &dg.layout;
    let others: Vec<usize> = (1..layout.fade_count)
        .filter(|&b| layout.punctured_block != Some(b))
        .collect();
    let mut patterns: Vec<Vec<usize>> = vec![vec![]];
    // Block 0 plus every proper subset of the remaining transmitted blocks.
    for mask in 0..(1u32 << others.len()) - 1 {
        let mut blocks = vec![0usize];
        for (i, &b) in others.iter().enumerate() {
            if mask >> i & 1 == 1 {
                blocks.push(b);
            }
        }
        patterns.push(blocks);
    }

    let mut failures = Vec::new();
    for blocks in &patterns {
        let mut erased: Vec<usize> = Vec::new();
        for &b in blocks {
            erased.extend(layout.block_range(b));
        }
        // The punctured block is erased at the decoder in every pattern.
        if let Some(p) = layout.punctured_block {
            erased.extend(layout.block_range(p));
        }
        erased.sort_unstable();
        erased.dedup();
        let outcome = bec_peel(&dg.graph, &erased);
        let lost: Vec<usize> =
            outcome.residual.iter().copied().filter(|&v| v < layout.systematic_count).collect();
        if !lost.is_empty() {
            failures.push(PatternFailure {
                erased_blocks: blocks.clone(),
                residual: outcome.residual,
            });
        }
    }
    DiversityReport { passed: failures.is_empty(), patterns_checked: patterns.len(), failures }
}

/// Punctures the last block for use one fade count down.
///
/// Decoding still runs on the full graph with zero LLRs on the withheld
/// block; the returned mask lists the withheld positions.
pub fn puncture(
    dg: &DiversityGraph,
    target_f: usize,
) -> Result<(DiversityGraph, Vec<usize>), DiversityError> {
    let f = dg.layout.effective_fades();
    if target_f + 1 != f {
        return Err(DiversityError::BadPunctureTarget { from: f, to: target_f });
    }
    let mut punctured = dg.clone();
    let block = dg.layout.fade_count - 1;
    punctured.layout.punctured_block = Some(block);
    let mask: Vec<usize> = dg.layout.block_range(block).collect();
    let report = verify_diversity(&punctured);
    if let Some(failure) = report.failures.first() {
        return Err(DiversityError::VerificationFailed {
            blocks: failure.erased_blocks.clone(),
            residual: failure.residual.clone(),
        });
    }
    Ok((punctured, mask))
}

/// Serializes a layout to the sidecar text format.
pub fn write_layout(layout: &BlockLayout) -> String {
    let mut out = String::new();
    out.push_str(&format!("f = {}\n", layout.fade_count));
    out.push_str(&format!("n = {}\n", layout.n_var));
    out.push_str(&format!("k = {}\n", layout.systematic_count));
    out.push_str(&format!("block = {}\n", layout.block_size()));
    match layout.punctured_block {
        Some(b) => out.push_str(&format!("punctured_block = {b}\n")),
        None => out.push_str("punctured_block = none\n"),
    }
    out
}

/// Parses the sidecar text format.
pub fn parse_layout(text: &str) -> Result<BlockLayout, String> {
    let mut f = None;
    let mut n = None;
    let mut k = None;
    let mut punctured = None;
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", no + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let parse = |v: &str| v.parse::<usize>().map_err(|e| format!("line {}: {e}", no + 1));
        match key {
            "f" => f = Some(parse(value)?),
            "n" => n = Some(parse(value)?),
            "k" => k = Some(parse(value)?),
            "block" => {
                parse(value)?;
            }
            "punctured_block" => {
                punctured = if value == "none" { None } else { Some(parse(value)?) };
            }
            other => return Err(format!("line {}: unknown key `{other}`", no + 1)),
        }
    }
    let fade_count = f.ok_or("missing key `f`")?;
    let n_var = n.ok_or("missing key `n`")?;
    let systematic_count = k.ok_or("missing key `k`")?;
    Ok(BlockLayout { fade_count, n_var, systematic_count, punctured_block: punctured })
}
