//! Iterative decoders: log-domain sum-product with a flooding schedule and
//! the erasure-channel peeling decoder.

use crate::channel::{LlrVector, Scalar};
use crate::graph::TannerGraph;

/// Message magnitudes are clamped here; `atanh` is guarded just below its
/// pole so saturated products cannot overflow.
pub const LLR_CLAMP: f64 = 30.0;

/// Outcome of one sum-product decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    /// Hard-decision word (0/1 per variable node).
    pub estimate: Vec<u8>,
    /// All parity checks satisfied with no undecided position.
    pub converged: bool,
    pub iterations_used: usize,
}

/// Reusable sum-product workspace for one graph.
///
/// Messages live on edges; decoding many frames over the same graph reuses
/// the adjacency layout and buffers.
pub struct SpaDecoder<T> {
    n_var: usize,
    /// Edge ids grouped per variable node.
    var_edges: Vec<Vec<usize>>,
    /// Per check: (variable, edge id) pairs.
    chk_edges: Vec<Vec<(usize, usize)>>,
    var_to_chk: Vec<T>,
    chk_to_var: Vec<T>,
    posterior: Vec<T>,
    scratch: Vec<T>,
}

impl<T: Scalar> SpaDecoder<T> {
    pub fn new(graph: &TannerGraph) -> Self {
        let mut var_edges = vec![Vec::new(); graph.n_var()];
        let mut chk_edges = vec![Vec::new(); graph.n_chk()];
        let mut next_edge = 0usize;
        for v in 0..graph.n_var() {
            for &c in graph.var_adj(v) {
                var_edges[v].push(next_edge);
                chk_edges[c].push((v, next_edge));
                next_edge += 1;
            }
        }
        let max_chk_deg = chk_edges.iter().map(Vec::len).max().unwrap_or(0);
        Self {
            n_var: graph.n_var(),
            var_edges,
            chk_edges,
            var_to_chk: vec![T::zero(); next_edge],
            chk_to_var: vec![T::zero(); next_edge],
            posterior: vec![T::zero(); graph.n_var()],
            scratch: vec![T::zero(); max_chk_deg + 1],
        }
    }

    /// Runs up to `max_iter` flooding iterations with early exit once the
    /// hard decision satisfies every check and no posterior sits at zero.
    pub fn decode(&mut self, llrs: &LlrVector<T>, max_iter: usize) -> DecodeResult {
        self.decode_traced(llrs, max_iter, |_, _, _| {})
    }

    /// Runs exactly `iters` iterations with no early exit, leaving the fully
    /// propagated beliefs in [`Self::posteriors`].
    pub fn decode_full(&mut self, llrs: &LlrVector<T>, iters: usize) -> DecodeResult {
        self.run(llrs, iters, false, |_, _, _| {})
    }

    /// Like [`Self::decode`], reporting `(iteration, estimate, syndrome_ok)`
    /// after every iteration. The estimate slice is valid for the callback
    /// only.
    pub fn decode_traced(
        &mut self,
        llrs: &LlrVector<T>,
        max_iter: usize,
        on_iteration: impl FnMut(usize, &[u8], bool),
    ) -> DecodeResult {
        self.run(llrs, max_iter, true, on_iteration)
    }

    fn run(
        &mut self,
        llrs: &LlrVector<T>,
        max_iter: usize,
        early_exit: bool,
        mut on_iteration: impl FnMut(usize, &[u8], bool),
    ) -> DecodeResult {
        assert_eq!(llrs.len(), self.n_var, "LLR length mismatch");
        let clamp = T::from_f64c(LLR_CLAMP);
        // Just inside the atanh pole at the working precision.
        let guard = T::one() - T::epsilon() * T::from_f64c(4.0);
        self.chk_to_var.fill(T::zero());
        let mut estimate = vec![0u8; self.n_var];

        let mut converged = false;
        let mut iterations_used = max_iter;
        let mut last_ok = false;
        for iter in 1..=max_iter {
            // Variable update.
            for v in 0..self.n_var {
                let edges = &self.var_edges[v];
                let total: T = edges
                    .iter()
                    .fold(llrs.values[v], |acc, &e| acc + self.chk_to_var[e]);
                self.posterior[v] = total;
                for &e in edges {
                    let m = total - self.chk_to_var[e];
                    self.var_to_chk[e] = m.max(-clamp).min(clamp);
                }
            }
            // Check update via prefix/suffix products of tanh(m / 2); the
            // two-sided form keeps exact zeros from erased inputs intact.
            let half = T::from_f64c(0.5);
            for edges in &self.chk_edges {
                let deg = edges.len();
                if deg == 0 {
                    continue;
                }
                let scratch = &mut self.scratch;
                scratch[0] = T::one();
                for (i, &(_, e)) in edges.iter().enumerate() {
                    scratch[i + 1] = scratch[i] * (self.var_to_chk[e] * half).tanh();
                }
                let mut suffix = T::one();
                for (i, &(_, e)) in edges.iter().enumerate().rev() {
                    let prod = scratch[i] * suffix;
                    suffix = suffix * (self.var_to_chk[e] * half).tanh();
                    let bounded = prod.max(-guard).min(guard);
                    let m = bounded.atanh() * T::from_f64c(2.0);
                    self.chk_to_var[e] = m.max(-clamp).min(clamp);
                }
            }
            // Posterior from fresh check messages.
            for v in 0..self.n_var {
                let total: T = self.var_edges[v]
                    .iter()
                    .fold(llrs.values[v], |acc, &e| acc + self.chk_to_var[e]);
                self.posterior[v] = total;
                estimate[v] = u8::from(total < T::zero());
            }
            let syndrome_ok = self.syndrome_ok(&estimate);
            on_iteration(iter, &estimate, syndrome_ok);
            let decided = self.posterior.iter().all(|&p| p != T::zero());
            if syndrome_ok && decided {
                converged = true;
                iterations_used = iter;
                if early_exit {
                    break;
                }
            }
        }
        DecodeResult { estimate, converged, iterations_used }
    }

    /// Posterior LLRs of the last decode, one per variable node.
    pub fn posteriors(&self) -> &[T] {
        &self.posterior
    }

    fn syndrome_ok(&self, estimate: &[u8]) -> bool {
        self.chk_edges
            .iter()
            .all(|edges| edges.iter().fold(0u8, |acc, &(v, _)| acc ^ estimate[v]) == 0)
    }
}

/// One-shot sum-product decode.
pub fn spa_decode<T: Scalar>(
    graph: &TannerGraph,
    llrs: &LlrVector<T>,
    max_iter: usize,
) -> DecodeResult {
    SpaDecoder::new(graph).decode(llrs, max_iter)
}

/// Result of peeling an erasure pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelOutcome {
    /// Erased variables recovered, ascending.
    pub recovered: Vec<usize>,
    /// Erased variables no check could resolve, ascending. Empty or the
    /// union of the stopping sets inside the erased set.
    pub residual: Vec<usize>,
    /// Synchronous peeling sweeps performed.
    pub rounds: usize,
}

/// Peels an erasure pattern: any check with exactly one erased neighbour
/// resolves it, repeated until nothing changes.
pub fn bec_peel(graph: &TannerGraph, erased: &[usize]) -> PeelOutcome {
    let mut is_erased = vec![false; graph.n_var()];
    for &v in erased {
        is_erased[v] = true;
    }
    let mut erased_count: Vec<usize> =
        (0..graph.n_chk()).map(|c| graph.chk_adj(c).iter().filter(|&&v| is_erased[v]).count()).collect();
    let mut recovered = Vec::new();
    let mut rounds = 0;
    loop {
        let resolvable: Vec<usize> = (0..graph.n_chk())
            .filter(|&c| erased_count[c] == 1)
            .filter_map(|c| graph.chk_adj(c).iter().copied().find(|&v| is_erased[v]))
            .collect();
        if resolvable.is_empty() {
            break;
        }
        rounds += 1;
        for v in resolvable {
            if !is_erased[v] {
                continue; // already resolved this sweep
            }
            is_erased[v] = false;
            recovered.push(v);
            for &c in graph.var_adj(v) {
                erased_count[c] -= 1;
            }
        }
    }
    recovered.sort_unstable();
    let residual: Vec<usize> = (0..graph.n_var()).filter(|&v| is_erased[v]).collect();
    PeelOutcome { recovered, residual, rounds }
}
