//! Asynchronous GoRank: decentralized rank estimation via pairwise
//! comparison and auxiliary-observation swapping.
//!
//! Each node k holds its observation X_k, an auxiliary observation Y_k
//! that random-walks over the graph via swaps, a normalized rank estimate
//! R'_k, and an update counter C_k. When an edge (i, j) activates, both
//! endpoints fold the comparison indicator I{X_k > Y_k} into the running
//! mean R'_k, then swap Y_i and Y_j.

use crate::engine::Estimator;
use crate::{Error, Result};

/// Per-node GoRank state.
#[derive(Debug, Clone)]
pub struct RankState {
    x: Vec<f64>,
    y: Vec<f64>,
    r_prime: Vec<f64>,
    counters: Vec<u64>,
    ties_mode: bool,
}

impl RankState {
    /// Initializes Y = X, R' = 0, C = 1 at every node. In no-ties mode,
    /// duplicate observations are rejected up front: running the no-ties
    /// update on tied data silently biases the estimates.
    pub fn init(observations: &[f64], ties_mode: bool) -> Result<Self> {
        if observations.len() < 2 {
            return Err(Error::invalid_parameter(
                "need at least 2 observations to rank",
            ));
        }
        if !ties_mode {
            let mut sorted = observations.to_vec();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid_input(
                    "duplicate observations require ties mode",
                ));
            }
        }
        Ok(RankState {
            x: observations.to_vec(),
            y: observations.to_vec(),
            r_prime: vec![0.0; observations.len()],
            counters: vec![1; observations.len()],
            ties_mode,
        })
    }

    pub fn node_count(&self) -> usize {
        self.x.len()
    }

    pub fn ties_mode(&self) -> bool {
        self.ties_mode
    }

    pub fn observations(&self) -> &[f64] {
        &self.x
    }

    /// Comparison indicator for node k against its current auxiliary
    /// value: I{X_k > Y_k}, plus I{X_k = Y_k}/2 in ties mode. Equality is
    /// exact bitwise comparison; ties are a data property.
    fn indicator(&self, k: usize) -> f64 {
        let mut h = if self.x[k] > self.y[k] { 1.0 } else { 0.0 };
        if self.ties_mode && self.x[k] == self.y[k] {
            h += 0.5;
        }
        h
    }

    /// Folds one comparison into node k's running mean and increments its
    /// counter. Used by the composite estimators, which interleave their
    /// own updates between the per-node rank updates and the swap.
    pub fn update_node(&mut self, k: usize) {
        let c = self.counters[k] as f64;
        self.r_prime[k] = (1.0 - 1.0 / c) * self.r_prime[k] + self.indicator(k) / c;
        self.counters[k] += 1;
    }

    /// Swaps the auxiliary observations of i and j.
    pub fn swap(&mut self, i: usize, j: usize) {
        self.y.swap(i, j);
    }

    /// One full edge activation: both endpoints update against their
    /// pre-swap auxiliary values, then the swap executes.
    pub fn on_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if i == j {
            return Err(Error::invalid_parameter("edge endpoints must differ"));
        }
        self.update_node(i);
        self.update_node(j);
        self.swap(i, j);
        Ok(())
    }

    /// Rank estimates R_k = n R'_k + 1 (no-ties) or n R'_k + 1/2 (ties).
    pub fn rank_estimates(&self) -> Vec<f64> {
        let n = self.x.len() as f64;
        let offset = if self.ties_mode { 0.5 } else { 1.0 };
        self.r_prime.iter().map(|&r| n * r + offset).collect()
    }

    pub fn auxiliary(&self) -> &[f64] {
        &self.y
    }

    pub fn normalized_estimates(&self) -> &[f64] {
        &self.r_prime
    }

    pub fn counters(&self) -> &[u64] {
        &self.counters
    }
}

impl Estimator for RankState {
    fn on_edge(&mut self, i: usize, j: usize) -> Result<()> {
        RankState::on_edge(self, i, j)
    }

    fn estimates(&self) -> Vec<f64> {
        self.rank_estimates()
    }
}

/// Edge schedule of the synchronous GoRank baseline: uniform edge
/// sampling, p_e = 1/|E|. The update dynamics are identical; only the
/// activation probabilities differ from the asynchronous schedule.
pub fn sync_variant_distribution(g: &crate::graph::Graph) -> crate::graph::EdgeDistribution {
    crate::graph::uniform_edge_distribution(g)
}

/// Centralized rank oracle: r_k = 1 + #{l : X_k > X_l} without ties, or
/// the mid-rank r_k = 1/2 + sum_l (I{X_k > X_l} + I{X_k = X_l}/2) with
/// ties (the self-comparison contributes the 1/2).
pub fn exact_ranks(observations: &[f64], ties_mode: bool) -> Result<Vec<f64>> {
    if observations.is_empty() {
        return Err(Error::invalid_parameter("empty observations"));
    }
    if !ties_mode {
        let mut sorted = observations.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid_input(
                "duplicate observations require ties mode",
            ));
        }
    }
    Ok(observations
        .iter()
        .map(|&xk| {
            if ties_mode {
                let s: f64 = observations
                    .iter()
                    .map(|&xl| {
                        if xk > xl {
                            1.0
                        } else if xk == xl {
                            0.5
                        } else {
                            0.0
                        }
                    })
                    .sum();
                0.5 + s
            } else {
                1.0 + observations.iter().filter(|&&xl| xk > xl).count() as f64
            }
        })
        .collect())
}
