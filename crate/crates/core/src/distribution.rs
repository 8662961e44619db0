//! Edge-perspective degree distributions and their realization as
//! per-node degree schedules.
//!
//! Constructions take the variable-node distribution lambda as input; the
//! check side is not prescribed but forced into the concentrated near-regular
//! form during placement, so only its realized `(a, b)` shape is reported.

use crate::graph::TannerGraph;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistributionError {
    #[error("coefficient for degree {degree} is negative")]
    NegativeCoefficient { degree: usize },
    #[error("degree {degree} repeated")]
    DuplicateDegree { degree: usize },
    #[error("degree 0 not allowed")]
    ZeroDegree,
    #[error("coefficients sum to {sum}, expected 1 within 1e-9")]
    BadSum { sum: f64 },
    #[error("distribution has no degrees >= {min_degree}")]
    NothingAbove { min_degree: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Weight2Error {
    #[error("{count} degree-2 variable nodes exceed the cycle-free budget {budget} (n_chk - 1)")]
    TooManyWeight2 { count: usize, budget: usize },
    #[error("schedule is not in non-decreasing degree order")]
    NotSorted,
}

/// Realized concentrated check-node form `rho(x) = a x^b + (1-a) x^(b-1)`,
/// edge perspective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoForm {
    pub a: f64,
    pub b: usize,
}

/// Edge-perspective variable-node degree distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    lambda: Vec<(usize, f64)>,
    pub rho: Option<RhoForm>,
}

impl DegreeDistribution {
    /// Builds a distribution from `(degree, edge fraction)` pairs.
    pub fn new(pairs: &[(usize, f64)]) -> Result<Self, DistributionError> {
        let mut lambda: Vec<(usize, f64)> = pairs.to_vec();
        lambda.sort_by_key(|&(d, _)| d);
        let mut sum = 0.0;
        for i in 0..lambda.len() {
            let (d, f) = lambda[i];
            if d == 0 {
                return Err(DistributionError::ZeroDegree);
            }
            if f < 0.0 {
                return Err(DistributionError::NegativeCoefficient { degree: d });
            }
            if i > 0 && lambda[i - 1].0 == d {
                return Err(DistributionError::DuplicateDegree { degree: d });
            }
            sum += f;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(DistributionError::BadSum { sum });
        }
        Ok(Self { lambda, rho: None })
    }

    /// The density-evolution optimized maximum-degree-8 distribution used as
    /// the default for all irregular constructions here:
    /// `0.30013 x + 0.28395 x^2 + 0.41592 x^7`.
    pub fn de_optimized_max8() -> Self {
        Self::new(&[(2, 0.30013), (3, 0.28395), (8, 0.41592)]).expect("constant distribution")
    }

    /// Regular distribution: every variable node has degree `d`.
    pub fn regular(d: usize) -> Self {
        Self::new(&[(d, 1.0)]).expect("regular distribution")
    }

    /// `(degree, edge fraction)` pairs, ascending by degree.
    pub fn lambda(&self) -> &[(usize, f64)] {
        &self.lambda
    }

    /// Node-perspective fractions: fraction of nodes with each degree.
    pub fn node_fractions(&self) -> Vec<(usize, f64)> {
        let norm: f64 = self.lambda.iter().map(|&(d, f)| f / d as f64).sum();
        self.lambda.iter().map(|&(d, f)| (d, f / (d as f64) / norm)).collect()
    }

    /// Largest-remainder quantization of node fractions to exactly `units`
    /// nodes (or tile columns).
    pub fn node_counts(&self, units: usize) -> Vec<(usize, usize)> {
        largest_remainder(&self.node_fractions(), units)
    }

    /// Like [`Self::node_counts`] but capping the degree-2 node count at
    /// `max_weight2`; the excess is redistributed over the higher degrees.
    pub fn node_counts_capped(&self, units: usize, max_weight2: usize) -> Vec<(usize, usize)> {
        let counts = self.node_counts(units);
        let w2 = counts.iter().find(|&&(d, _)| d == 2).map_or(0, |&(_, n)| n);
        if w2 <= max_weight2 {
            return counts;
        }
        let others: Vec<(usize, f64)> =
            self.node_fractions().into_iter().filter(|&(d, _)| d != 2).collect();
        let mut result = vec![(2, max_weight2)];
        result.extend(largest_remainder(&others, units - max_weight2));
        result.sort_by_key(|&(d, _)| d);
        result
    }

    /// Distribution renormalized over degrees at least `min_degree`.
    pub fn restricted_min_degree(&self, min_degree: usize) -> Result<Self, DistributionError> {
        let kept: Vec<(usize, f64)> =
            self.lambda.iter().copied().filter(|&(d, _)| d >= min_degree).collect();
        let sum: f64 = kept.iter().map(|&(_, f)| f).sum();
        if sum <= 0.0 {
            return Err(DistributionError::NothingAbove { min_degree });
        }
        Self::new(&kept.into_iter().map(|(d, f)| (d, f / sum)).collect::<Vec<_>>())
    }

    /// Per-node degree schedule for `n_var` nodes honouring the weight-2
    /// budget of `n_chk - 1`, sorted in non-decreasing degree order.
    pub fn realize(&self, n_var: usize, n_chk: usize) -> Result<Vec<usize>, Weight2Error> {
        let budget = n_chk.saturating_sub(1);
        let counts = self.node_counts_capped(n_var, budget);
        let mut schedule = Vec::with_capacity(n_var);
        for (d, n) in counts {
            schedule.extend(std::iter::repeat_n(d, n));
        }
        if schedule.len() != n_var {
            // No higher degrees exist to absorb the capped weight-2 excess.
            let count = self.node_counts(n_var).iter().find(|&&(d, _)| d == 2).map_or(0, |&(_, n)| n);
            return Err(Weight2Error::TooManyWeight2 { count, budget });
        }
        enforce_weight2_constraint(&schedule, n_chk)?;
        Ok(schedule)
    }

    /// Total edges implied by a quantized schedule of `n_var` nodes.
    pub fn edge_count(&self, n_var: usize) -> usize {
        self.node_counts(n_var).iter().map(|&(d, n)| d * n).sum()
    }

    /// Realized concentrated check form of a graph: `b` is the maximum check
    /// degree and `a` the edge fraction at that degree. `None` when the check
    /// degrees spread over more than two values.
    pub fn rho_from_graph(graph: &TannerGraph) -> Option<RhoForm> {
        let degrees = graph.chk_degrees();
        let b = *degrees.iter().max()?;
        let spread = degrees.iter().any(|&d| d + 1 < b);
        if spread || b == 0 {
            return None;
        }
        let edges: usize = degrees.iter().sum();
        let at_b: usize = degrees.iter().filter(|&&d| d == b).map(|&d| d).sum();
        Some(RhoForm { a: at_b as f64 / edges as f64, b })
    }
}

/// Validates a placement schedule against the weight-2 stopping-set budget:
/// at most `n_chk - 1` degree-2 nodes, scheduled before all higher degrees so
/// the construction places every one of them in its cycle-free phase.
pub fn enforce_weight2_constraint(schedule: &[usize], n_chk: usize) -> Result<(), Weight2Error> {
    if schedule.windows(2).any(|w| w[0] > w[1]) {
        return Err(Weight2Error::NotSorted);
    }
    let count = schedule.iter().filter(|&&d| d == 2).count();
    let budget = n_chk.saturating_sub(1);
    if count > budget {
        return Err(Weight2Error::TooManyWeight2 { count, budget });
    }
    Ok(())
}

fn largest_remainder(fractions: &[(usize, f64)], units: usize) -> Vec<(usize, usize)> {
    if fractions.is_empty() || units == 0 {
        return Vec::new();
    }
    let targets: Vec<(usize, f64)> =
        fractions.iter().map(|&(d, f)| (d, f * units as f64)).collect();
    let mut counts: Vec<(usize, usize)> =
        targets.iter().map(|&(d, t)| (d, t.floor() as usize)).collect();
    let assigned: usize = counts.iter().map(|&(_, n)| n).sum();
    let mut order: Vec<usize> = (0..targets.len()).collect();
    // Largest fractional part first; ties to the higher degree.
    order.sort_by(|&i, &j| {
        let fi = targets[i].1 - targets[i].1.floor();
        let fj = targets[j].1 - targets[j].1.floor();
        fj.partial_cmp(&fi).unwrap().then(targets[j].0.cmp(&targets[i].0))
    });
    for k in 0..units.saturating_sub(assigned) {
        counts[order[k % order.len()]].1 += 1;
    }
    counts.retain(|&(_, n)| n > 0);
    counts
}
