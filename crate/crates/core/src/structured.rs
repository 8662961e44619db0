//! Structural constraints layered on the PEG engine: quasi-cyclic circulant
//! tiling, repeat-accumulate dual-diagonal initialization, and degree
//! quantization around both.

use crate::distribution::DegreeDistribution;
use crate::graph::TannerGraph;
use crate::peg::{BuildError, ComplexityAudit, MetricPipeline, PegBuilder};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error("circulant size {q} must divide n_var {n_var} and n_chk {n_chk}")]
    QcDivisibility { q: usize, n_var: usize, n_chk: usize },
    #[error("degree quantization infeasible: {0}")]
    Quantization(String),
    #[error("accumulator needs {parity} parity columns, graph has room for {room}")]
    ParityMismatch { parity: usize, room: usize },
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Circulant layout of a quasi-cyclic graph.
///
/// Tile `(row, col)` of size `Q x Q` is empty or carries the circulant with
/// the recorded shift: expanded edge `(col Q + t, row Q + (t + shift) % Q)`
/// for every `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QcConstraint {
    pub circulant_size: usize,
    pub base_rows: usize,
    pub base_cols: usize,
    pub shifts: Vec<Vec<Option<usize>>>,
}

impl QcConstraint {
    /// Rebuilds the expanded graph from the shift table.
    pub fn expand(&self) -> TannerGraph {
        let q = self.circulant_size;
        let mut g = TannerGraph::new(self.base_cols * q, self.base_rows * q);
        for (row, cols) in self.shifts.iter().enumerate() {
            for (col, shift) in cols.iter().enumerate() {
                if let Some(s) = shift {
                    for t in 0..q {
                        g.add_edge(col * q + t, row * q + (t + s) % q)
                            .expect("tiles are disjoint");
                    }
                }
            }
        }
        g
    }

    /// True when `graph` contains exactly the edges the table implies.
    pub fn matches(&self, graph: &TannerGraph) -> bool {
        let expanded = self.expand();
        expanded == *graph
    }

    /// CSV rows `base_row,base_col,shift` for the non-empty tiles.
    pub fn shift_csv(&self) -> String {
        let mut out = String::from("base_row,base_col,shift\n");
        for (row, cols) in self.shifts.iter().enumerate() {
            for (col, shift) in cols.iter().enumerate() {
                if let Some(s) = shift {
                    out.push_str(&format!("{row},{col},{s}\n"));
                }
            }
        }
        out
    }
}

/// Quantizes `lambda` to whole tile columns of size `q`, capping the
/// degree-2 column count by the weight-2 budget.
pub fn qc_column_degrees(
    lambda: &DegreeDistribution,
    n_var: usize,
    n_chk: usize,
    q: usize,
) -> Result<Vec<usize>, StructureError> {
    if q == 0 || n_var % q != 0 || n_chk % q != 0 {
        return Err(StructureError::QcDivisibility { q, n_var, n_chk });
    }
    let base_cols = n_var / q;
    let weight2_cols = n_chk.saturating_sub(1) / q;
    let counts = lambda.node_counts_capped(base_cols, weight2_cols);
    let base_rows = n_chk / q;
    let mut degrees = Vec::with_capacity(base_cols);
    for (d, cols) in counts {
        if d > base_rows {
            return Err(StructureError::Quantization(format!(
                "degree {d} exceeds {base_rows} base rows"
            )));
        }
        degrees.extend(std::iter::repeat_n(d, cols));
    }
    if degrees.len() != base_cols {
        return Err(StructureError::Quantization(format!(
            "weight-2 budget of {weight2_cols} tile columns cannot absorb the distribution"
        )));
    }
    Ok(degrees)
}

/// Quasi-cyclic PEG construction.
///
/// The pipeline scores candidates for the tile representative; every accepted
/// placement commits the whole circulant orbit, so the rotation symmetry of
/// the graph is preserved after each step and any orbit member would score
/// identically.
pub fn qc_peg_construct(
    n_var: usize,
    n_chk: usize,
    q: usize,
    lambda: &DegreeDistribution,
    pipeline: MetricPipeline,
) -> Result<(TannerGraph, QcConstraint, ComplexityAudit), StructureError> {
    let col_degrees = qc_column_degrees(lambda, n_var, n_chk, q)?;
    let mut schedule = vec![0usize; n_var];
    for (col, &d) in col_degrees.iter().enumerate() {
        for t in 0..q {
            schedule[col * q + t] = d;
        }
    }
    let builder = PegBuilder::new(n_var, n_chk, &schedule, pipeline)?.with_qc(q)?;
    let mut builder = builder;
    while let Some(step) = builder.step() {
        step?;
    }
    let (graph, audit, table) = builder.into_parts();
    let table = table.expect("QC builder returns a shift table");
    let constraint = QcConstraint {
        circulant_size: table.circulant_size,
        base_rows: table.base_rows,
        base_cols: table.base_cols,
        shifts: table.shifts,
    };
    Ok((graph, constraint, audit))
}

/// Dual-diagonal accumulator of a repeat-accumulate code.
///
/// Parity node `j` (0-based, stored after the systematic columns) connects
/// to checks `j` and `j - 1`; parity node 0 connects to check 0 only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IraConstraint {
    pub n_var: usize,
    pub parity_count: usize,
}

impl IraConstraint {
    /// The pre-placed accumulator edges `(variable, check)`.
    pub fn accumulator_edges(&self) -> Vec<(usize, usize)> {
        let k = self.n_var - self.parity_count;
        let mut edges = Vec::with_capacity(2 * self.parity_count - 1);
        for j in 0..self.parity_count {
            edges.push((k + j, j));
            if j > 0 {
                edges.push((k + j, j - 1));
            }
        }
        edges
    }
}

/// Graph holding only the accumulator edges; systematic columns are left
/// for the PEG construction, making encoding a running accumulation.
pub fn ira_init(n_var: usize, n_chk: usize) -> Result<TannerGraph, StructureError> {
    if n_chk > n_var {
        return Err(StructureError::ParityMismatch { parity: n_chk, room: n_var });
    }
    let constraint = IraConstraint { n_var, parity_count: n_chk };
    let mut g = TannerGraph::new(n_var, n_chk);
    for (v, c) in constraint.accumulator_edges() {
        g.add_edge(v, c).expect("accumulator edges are distinct");
    }
    Ok(g)
}

/// Repeat-accumulate PEG construction: accumulator pre-placed, systematic
/// columns realized from the degrees of `lambda` at three or above (the
/// weight-2 budget is spent on the parity chain).
pub fn ira_construct(
    n_var: usize,
    n_chk: usize,
    lambda: &DegreeDistribution,
    pipeline: MetricPipeline,
) -> Result<(TannerGraph, IraConstraint, ComplexityAudit), StructureError> {
    let graph = ira_init(n_var, n_chk)?;
    let k = n_var - n_chk;
    let syst_lambda = lambda
        .restricted_min_degree(3)
        .map_err(|e| StructureError::Quantization(e.to_string()))?;
    let mut schedule = vec![0usize; n_var];
    let counts = syst_lambda.node_counts(k);
    let mut v = 0usize;
    for (d, n) in counts {
        for _ in 0..n {
            schedule[v] = d;
            v += 1;
        }
    }
    // Parity columns keep their accumulator degrees.
    for j in 0..n_chk {
        schedule[k + j] = graph.var_degree(k + j);
    }
    let builder = PegBuilder::with_initial_graph(graph, &schedule, pipeline)?;
    let (graph, audit) = builder.finish()?;
    Ok((graph, IraConstraint { n_var, parity_count: n_chk }, audit))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ira_init_m4_adjacency() {
        let g = ira_init(8, 4).unwrap();
        // Parity nodes are columns 4..8.
        assert_eq!(g.var_adj(4), &[0]);
        assert_eq!(g.var_adj(5), &[0, 1]);
        assert_eq!(g.var_adj(6), &[1, 2]);
        assert_eq!(g.var_adj(7), &[2, 3]);
        assert_eq!(g.edge_count(), 2 * 4 - 1);
    }

    #[test]
    fn accumulator_edge_count_is_2m_minus_1() {
        for m in [1, 4, 17, 125] {
            let c = IraConstraint { n_var: 2 * m, parity_count: m };
            assert_eq!(c.accumulator_edges().len(), 2 * m - 1);
        }
    }

    #[test]
    fn qc_column_degrees_quantize_to_tiles() {
        let lambda = DegreeDistribution::de_optimized_max8();
        let degrees = qc_column_degrees(&lambda, 256, 128, 8).unwrap();
        assert_eq!(degrees.len(), 32);
        // Degree-2 columns capped by the weight-2 budget (127 / 8 = 15 tiles).
        let w2 = degrees.iter().filter(|&&d| d == 2).count();
        assert_eq!(w2, 15);
        assert!(degrees.iter().all(|&d| d <= 16));
    }

    #[test]
    fn qc_divisibility_enforced() {
        let lambda = DegreeDistribution::de_optimized_max8();
        assert!(matches!(
            qc_column_degrees(&lambda, 250, 125, 8),
            Err(StructureError::QcDivisibility { .. })
        ));
    }
}
