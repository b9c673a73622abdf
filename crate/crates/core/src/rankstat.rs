//! Gossip estimation of rank-based statistics T_n = sum_k f(r_k) g(X_k).
//!
//! Each node tracks a statistic estimate Z_k and its last weight
//! W_k = n * f(R_k). An edge activation updates the ranks of both
//! endpoints, injects the weight correction (W'_k - W_k) * g(X_k) into
//! Z_k, then pairwise-averages Z_i and Z_j. The running node average of Z
//! therefore equals (1/n) sum_l W_l g(X_l), which converges to T_n as the
//! rank estimates settle.
//!
//! Wilcoxon (f = id, g = membership indicator) and van der Waerden
//! (f = normal quantile of r/(n+1)) scores are provided, along with the
//! centralized oracle and the two-sample rank-sum test.

use std::sync::Arc;

use crate::engine::Estimator;
use crate::gorank::{exact_ranks, RankState};
use crate::normal;
use crate::{Error, Result};

type RankScoreFn = dyn Fn(f64) -> f64 + Send + Sync;
type ObsScoreFn = dyn Fn(usize, f64) -> f64 + Send + Sync;

/// Score pair (f, g) defining a rank-based statistic. `f` is applied to
/// (possibly non-integer) rank estimates; `g` receives the node index and
/// its observation, so membership labels can live with nodes.
#[derive(Clone)]
pub struct ScorePair {
    pub f: Arc<RankScoreFn>,
    pub g: Arc<ObsScoreFn>,
    pub label: String,
}

/// Two-sample partition: membership[k] is true iff node k's value belongs
/// to the first sample.
#[derive(Debug, Clone)]
pub struct Partition {
    membership: Vec<bool>,
    n1: usize,
    n2: usize,
}

impl Partition {
    pub fn new(membership: Vec<bool>) -> Result<Self> {
        let n1 = membership.iter().filter(|&&b| b).count();
        let n2 = membership.len() - n1;
        if n1 == 0 || n2 == 0 {
            return Err(Error::invalid_parameter(
                "both samples must be nonempty",
            ));
        }
        Ok(Partition { membership, n1, n2 })
    }

    pub fn membership(&self) -> &[bool] {
        &self.membership
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }
}

/// Wilcoxon rank-sum scores: f = id, g = first-sample indicator.
pub fn wilcoxon_scores(part: &Partition) -> ScorePair {
    let membership = part.membership.clone();
    ScorePair {
        f: Arc::new(|r| r),
        g: Arc::new(move |k, _x| if membership[k] { 1.0 } else { 0.0 }),
        label: "wilcoxon".into(),
    }
}

/// Van der Waerden scores: f(r) = phi_inv(clamp(r, 1, n) / (n + 1)), with
/// the same membership indicator as Wilcoxon. Clamping guards gossip rank
/// estimates that stray outside [1, n].
pub fn vanderwaerden_scores(n: usize, part: &Partition) -> ScorePair {
    let membership = part.membership.clone();
    let nf = n as f64;
    ScorePair {
        f: Arc::new(move |r| normal::phi_inv(r.clamp(1.0, nf) / (nf + 1.0))),
        g: Arc::new(move |k, _x| if membership[k] { 1.0 } else { 0.0 }),
        label: "van-der-waerden".into(),
    }
}

enum RankSource {
    Gossip(RankState),
    /// Test hook: ranks pinned to fixed values, rank updates and swaps
    /// become no-ops.
    Frozen(Vec<f64>),
}

/// Per-node state for gossip rank-statistic estimation.
pub struct StatState {
    z: Vec<f64>,
    w: Vec<f64>,
    gx: Vec<f64>,
    f: Arc<RankScoreFn>,
    ranks: RankSource,
    n: usize,
}

impl StatState {
    pub fn init(observations: &[f64], scores: &ScorePair, ties_mode: bool) -> Result<Self> {
        let rank_state = RankState::init(observations, ties_mode)?;
        Self::build(observations, scores, RankSource::Gossip(rank_state))
    }

    /// Test hook: rank estimates frozen at the given values; only the
    /// correction/averaging dynamics run.
    pub fn init_with_frozen_ranks(
        observations: &[f64],
        scores: &ScorePair,
        ranks: Vec<f64>,
    ) -> Result<Self> {
        if ranks.len() != observations.len() {
            return Err(Error::invalid_parameter("ranks/observations mismatch"));
        }
        Self::build(observations, scores, RankSource::Frozen(ranks))
    }

    fn build(observations: &[f64], scores: &ScorePair, ranks: RankSource) -> Result<Self> {
        let n = observations.len();
        let gx: Vec<f64> = observations
            .iter()
            .enumerate()
            .map(|(k, &x)| (scores.g)(k, x))
            .collect();
        if let Some(k) = gx.iter().position(|v| !v.is_finite()) {
            return Err(Error::EstimatorFailure {
                node: k,
                reason: "g(X_k) is not finite".into(),
            });
        }
        Ok(StatState {
            z: vec![0.0; n],
            w: vec![0.0; n],
            gx,
            f: scores.f.clone(),
            ranks,
            n,
        })
    }

    fn current_rank(&self, k: usize) -> f64 {
        match &self.ranks {
            RankSource::Gossip(rs) => {
                let n = self.n as f64;
                let offset = if rs.ties_mode() { 0.5 } else { 1.0 };
                n * rs.normalized_estimates()[k] + offset
            }
            RankSource::Frozen(r) => r[k],
        }
    }

    pub fn statistic_estimates(&self) -> &[f64] {
        &self.z
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn cached_g(&self) -> &[f64] {
        &self.gx
    }

    pub fn rank_state(&self) -> Option<&RankState> {
        match &self.ranks {
            RankSource::Gossip(rs) => Some(rs),
            RankSource::Frozen(_) => None,
        }
    }
}

impl Estimator for StatState {
    fn on_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if i == j {
            return Err(Error::invalid_parameter("edge endpoints must differ"));
        }
        for k in [i, j] {
            if let RankSource::Gossip(rs) = &mut self.ranks {
                rs.update_node(k);
            }
            let w_new = self.n as f64 * (self.f)(self.current_rank(k));
            if !w_new.is_finite() {
                return Err(Error::EstimatorFailure {
                    node: k,
                    reason: "f(R_k) produced a non-finite weight".into(),
                });
            }
            self.z[k] += (w_new - self.w[k]) * self.gx[k];
            self.w[k] = w_new;
        }
        let avg = (self.z[i] + self.z[j]) / 2.0;
        self.z[i] = avg;
        self.z[j] = avg;
        if let RankSource::Gossip(rs) = &mut self.ranks {
            rs.swap(i, j);
        }
        Ok(())
    }

    fn estimates(&self) -> Vec<f64> {
        self.z.clone()
    }
}

/// Centralized oracle for T_n = sum_k f(r_k) g(X_k) using exact ranks.
pub fn centralized_statistic(
    observations: &[f64],
    scores: &ScorePair,
    ties_mode: bool,
) -> Result<f64> {
    let ranks = exact_ranks(observations, ties_mode)?;
    Ok(observations
        .iter()
        .enumerate()
        .zip(&ranks)
        .map(|((k, &x), &r)| (scores.f)(r) * (scores.g)(k, x))
        .sum())
}

/// Wilcoxon rank-sum test via the normal approximation:
/// mu = n1 (n+1) / 2, sigma = sqrt(n1 n2 (n+1) / 12),
/// z = (t_n - mu) / sigma, p = 2 (1 - Phi(|z|)).
pub fn wilcoxon_test(t_n: f64, n1: usize, n2: usize) -> Result<(f64, f64)> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::invalid_parameter("n1 and n2 must be >= 1"));
    }
    let n = (n1 + n2) as f64;
    let mu = n1 as f64 * (n + 1.0) / 2.0;
    let sigma = (n1 as f64 * n2 as f64 * (n + 1.0) / 12.0).sqrt();
    let z = (t_n - mu) / sigma;
    Ok((z, normal::two_sided_p(z)))
}
