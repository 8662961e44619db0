//! Reading and writing parity-check matrices in the alist text format.
//!
//! Layout: `N M`, then the maximum variable and check degrees, the per-node
//! degree lists, and one 1-based adjacency row per variable node followed by
//! one per check node, each zero-padded to the maximum degree of its side.

use crate::graph::TannerGraph;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlistError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: index {index} out of range 1..={max}")]
    IndexOutOfRange { line: usize, index: usize, max: usize },
    #[error("line {line}: edge (v{var}, c{chk}) listed on one side only")]
    Inconsistent { line: usize, var: usize, chk: usize },
    #[error("line {line}: duplicate entry {index}")]
    Duplicate { line: usize, index: usize },
}

fn malformed(line: usize, message: impl Into<String>) -> AlistError {
    AlistError::Malformed { line, message: message.into() }
}

/// Serializes a graph to alist text. Inverse of [`read_alist`].
pub fn write_alist(graph: &TannerGraph) -> String {
    let max_dv = (0..graph.n_var()).map(|v| graph.var_degree(v)).max().unwrap_or(0);
    let max_dc = (0..graph.n_chk()).map(|c| graph.chk_degree(c)).max().unwrap_or(0);
    let join = |values: Vec<usize>| {
        values.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", graph.n_var(), graph.n_chk()));
    out.push_str(&format!("{max_dv} {max_dc}\n"));
    out.push_str(&join((0..graph.n_var()).map(|v| graph.var_degree(v)).collect()));
    out.push('\n');
    out.push_str(&join((0..graph.n_chk()).map(|c| graph.chk_degree(c)).collect()));
    out.push('\n');
    for v in 0..graph.n_var() {
        let mut row: Vec<usize> = graph.var_adj(v).iter().map(|&c| c + 1).collect();
        row.resize(max_dv, 0);
        out.push_str(&join(row));
        out.push('\n');
    }
    for c in 0..graph.n_chk() {
        let mut row: Vec<usize> = graph.chk_adj(c).iter().map(|&v| v + 1).collect();
        row.resize(max_dc, 0);
        out.push_str(&join(row));
        out.push('\n');
    }
    out
}

/// Parses alist text into a graph, validating both adjacency sides.
pub fn read_alist(text: &str) -> Result<TannerGraph, AlistError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let line_at = |i: usize, what: &str| -> Result<(usize, &str), AlistError> {
        lines
            .get(i)
            .copied()
            .ok_or_else(|| malformed(lines.last().map_or(0, |l| l.0), format!("missing {what}")))
    };

    let (line_no, header) = line_at(0, "header `N M`")?;
    let header = parse_numbers(line_no, header)?;
    if header.len() != 2 {
        return Err(malformed(line_no, "header must be `N M`"));
    }
    let (n_var, n_chk) = (header[0], header[1]);

    let (line_no, maxima) = line_at(1, "maximum degree line")?;
    let maxima = parse_numbers(line_no, maxima)?;
    if maxima.len() != 2 {
        return Err(malformed(line_no, "expected `max_var_degree max_chk_degree`"));
    }

    let (line_no, dv_line) = line_at(2, "variable degree list")?;
    let var_degrees = parse_numbers(line_no, dv_line)?;
    if var_degrees.len() != n_var {
        return Err(malformed(line_no, format!("expected {n_var} variable degrees")));
    }
    let (line_no, dc_line) = line_at(3, "check degree list")?;
    let chk_degrees = parse_numbers(line_no, dc_line)?;
    if chk_degrees.len() != n_chk {
        return Err(malformed(line_no, format!("expected {n_chk} check degrees")));
    }

    let read_side = |offset: usize,
                     count: usize,
                     degrees: &[usize],
                     max_index: usize,
                     what: &str|
     -> Result<Vec<(usize, Vec<usize>)>, AlistError> {
        let mut rows = Vec::with_capacity(count);
        for i in 0..count {
            let (line_no, line) = line_at(offset + i, &format!("{what} row {}", i + 1))?;
            let entries = parse_numbers(line_no, line)?;
            let mut row = Vec::new();
            for &e in &entries {
                if e == 0 {
                    continue;
                }
                if e > max_index {
                    return Err(AlistError::IndexOutOfRange {
                        line: line_no,
                        index: e,
                        max: max_index,
                    });
                }
                if row.contains(&(e - 1)) {
                    return Err(AlistError::Duplicate { line: line_no, index: e });
                }
                row.push(e - 1);
            }
            if row.len() != degrees[i] {
                return Err(malformed(
                    line_no,
                    format!("row has {} entries, degree list says {}", row.len(), degrees[i]),
                ));
            }
            row.sort_unstable();
            rows.push((line_no, row));
        }
        Ok(rows)
    };

    let var_rows = read_side(4, n_var, &var_degrees, n_chk, "variable")?;
    let chk_rows = read_side(4 + n_var, n_chk, &chk_degrees, n_var, "check")?;

    let mut graph = TannerGraph::new(n_var, n_chk);
    for (v, (line_no, row)) in var_rows.iter().enumerate() {
        for &c in row {
            graph
                .add_edge(v, c)
                .map_err(|_| AlistError::Duplicate { line: *line_no, index: c + 1 })?;
        }
    }
    // The check side must describe exactly the same edge set.
    for (c, (line_no, row)) in chk_rows.iter().enumerate() {
        if graph.chk_adj(c) != row.as_slice() {
            let var = row
                .iter()
                .find(|&&v| !graph.has_edge(v, c))
                .copied()
                .or_else(|| graph.chk_adj(c).iter().find(|&&v| !row.contains(&v)).copied())
                .unwrap_or(0);
            return Err(AlistError::Inconsistent { line: *line_no, var, chk: c });
        }
    }
    Ok(graph)
}

fn parse_numbers(line: usize, text: &str) -> Result<Vec<usize>, AlistError> {
    text.split_whitespace()
        .map(|tok| tok.parse::<usize>().map_err(|_| malformed(line, format!("bad number `{tok}`"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_written_2x4() {
        let text = "4 2\n1 2\n1 1 1 1\n2 2\n1\n1\n2\n2\n1 2 0\n3 4\n";
        let g = read_alist(text).unwrap();
        assert_eq!(g.n_var(), 4);
        assert_eq!(g.n_chk(), 2);
        assert_eq!(g.var_adj(0), &[0]);
        assert_eq!(g.var_adj(2), &[1]);
        assert_eq!(g.chk_adj(0), &[0, 1]);
        assert_eq!(g.chk_adj(1), &[2, 3]);
    }

    #[test]
    fn round_trip_identity() {
        let g = TannerGraph::from_edges(
            5,
            3,
            [(0, 0), (0, 2), (1, 0), (2, 1), (3, 1), (3, 2), (4, 2)],
        )
        .unwrap();
        let text = write_alist(&g);
        assert_eq!(read_alist(&text).unwrap(), g);
        // And the text itself is a fixed point.
        assert_eq!(write_alist(&read_alist(&text).unwrap()), text);
    }

    #[test]
    fn missing_edge_on_check_side() {
        // Both variables claim c0; the check side lists only v1.
        let text = "2 2\n1 2\n1 1\n1 0\n1\n1\n2\n0\n";
        match read_alist(text) {
            Err(AlistError::Inconsistent { line, var, chk }) => {
                assert_eq!((line, var, chk), (7, 0, 0));
            }
            other => panic!("expected inconsistency, got {other:?}"),
        }
    }

    #[test]
    fn inconsistent_sides_report_line() {
        // Degrees agree but the edges differ: v0-c0 and v1-c1 on the variable
        // side, c0 claims v1 and c1 claims v0.
        let text = "2 2\n1 1\n1 1\n1 1\n1\n2\n2\n1\n";
        match read_alist(text) {
            Err(AlistError::Inconsistent { line, .. }) => assert_eq!(line, 7),
            other => panic!("expected inconsistency, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_index_reports_line() {
        let text = "2 2\n1 1\n1 1\n1 1\n3\n2\n1\n2\n";
        match read_alist(text) {
            Err(AlistError::IndexOutOfRange { line, index, max }) => {
                assert_eq!((line, index, max), (5, 3, 2));
            }
            other => panic!("expected range error, got {other:?}"),
        }
    }

    #[test]
    fn zero_degree_nodes_round_trip() {
        let mut g = TannerGraph::new(3, 2);
        g.add_edge(0, 0).unwrap();
        g.add_edge(2, 0).unwrap();
        let text = write_alist(&g);
        assert_eq!(read_alist(&text).unwrap(), g);
    }
}
