//! Adaptive GoTrim: gossip estimation of the trimmed mean.
//!
//! The trimmed mean is the rank-based statistic with weight
//! w(r) = I{r in (a, b)} * n / (n - 2m), m = floor(alpha * n), and
//! half-integer interval endpoints a = m + 1/2, b = n - m + 1/2. Each
//! node tracks a weighted-sum estimate N_k and a weight-mass estimate
//! M_k; the adaptive read-out N_k / max(1, M_k) corrects the early-phase
//! normalization bias of the original estimate N_k.

use crate::engine::Estimator;
use crate::gorank::RankState;
use crate::{Error, Result};

/// Trimming configuration with derived interval endpoints.
#[derive(Debug, Clone, Copy)]
pub struct TrimParams {
    alpha: f64,
    n: usize,
    m: usize,
    a: f64,
    b: f64,
}

impl TrimParams {
    /// Accepts 0 <= alpha < 1/2. alpha = 0 (and any alpha < 1/n) keeps
    /// all observations, so the estimate converges to the plain mean.
    pub fn new(alpha: f64, n: usize) -> Result<Self> {
        if !(0.0..0.5).contains(&alpha) {
            return Err(Error::invalid_parameter("alpha must lie in [0, 1/2)"));
        }
        if n < 2 {
            return Err(Error::invalid_parameter("need n >= 2"));
        }
        let m = (alpha * n as f64).floor() as usize;
        if n <= 2 * m {
            return Err(Error::invalid_parameter(
                "trimming removes all observations (n - 2m < 1)",
            ));
        }
        Ok(TrimParams {
            alpha,
            n,
            m,
            a: m as f64 + 0.5,
            b: (n - m) as f64 + 0.5,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }
}

/// Trimmed-mean weight w(r) = I{a < r < b} * n / (n - 2m). On integer
/// ranks this equals I{m+1 <= r <= n-m} * n / (n - 2m); the open interval
/// with half-integer endpoints disambiguates fractional rank estimates.
pub fn trim_weight(r: f64, params: &TrimParams) -> f64 {
    if r > params.a && r < params.b {
        params.n as f64 / (params.n - 2 * params.m) as f64
    } else {
        0.0
    }
}

/// Distance from an integer rank to the nearer interval endpoint; always
/// >= 1/2 because the endpoints are half-integers.
pub fn gamma_diagnostic(r: usize, params: &TrimParams) -> f64 {
    let r = r as f64;
    (r - params.a).abs().min((r - params.b).abs())
}

/// Per-node GoTrim state.
pub struct TrimState {
    n_sum: Vec<f64>,
    m_sum: Vec<f64>,
    w: Vec<f64>,
    params: TrimParams,
    ranks: RankState,
}

impl TrimState {
    pub fn init(observations: &[f64], params: TrimParams, ties_mode: bool) -> Result<Self> {
        if observations.len() != params.n() {
            return Err(Error::invalid_parameter(
                "params.n must match the observation count",
            ));
        }
        let ranks = RankState::init(observations, ties_mode)?;
        let n = observations.len();
        Ok(TrimState {
            n_sum: vec![0.0; n],
            m_sum: vec![0.0; n],
            w: vec![0.0; n],
            params,
            ranks,
        })
    }

    /// Adaptive read-out N_k / max(1, M_k), or the original read-out N_k.
    pub fn estimates(&self, adaptive: bool) -> Vec<f64> {
        if adaptive {
            self.n_sum
                .iter()
                .zip(&self.m_sum)
                .map(|(&n, &m)| n / m.max(1.0))
                .collect()
        } else {
            self.n_sum.clone()
        }
    }

    pub fn weight_mass(&self) -> &[f64] {
        &self.m_sum
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn rank_state(&self) -> &RankState {
        &self.ranks
    }

    fn current_rank(&self, k: usize) -> f64 {
        let n = self.params.n() as f64;
        let offset = if self.ranks.ties_mode() { 0.5 } else { 1.0 };
        n * self.ranks.normalized_estimates()[k] + offset
    }
}

impl Estimator for TrimState {
    fn on_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if i == j {
            return Err(Error::invalid_parameter("edge endpoints must differ"));
        }
        let x = self.ranks.observations().to_vec();
        for k in [i, j] {
            self.ranks.update_node(k);
            let w_new = trim_weight(self.current_rank(k), &self.params);
            let delta = w_new - self.w[k];
            self.n_sum[k] += delta * x[k];
            self.m_sum[k] += delta;
            self.w[k] = w_new;
        }
        let n_avg = (self.n_sum[i] + self.n_sum[j]) / 2.0;
        self.n_sum[i] = n_avg;
        self.n_sum[j] = n_avg;
        let m_avg = (self.m_sum[i] + self.m_sum[j]) / 2.0;
        self.m_sum[i] = m_avg;
        self.m_sum[j] = m_avg;
        self.ranks.swap(i, j);
        Ok(())
    }

    /// The adaptive read-out; use [`TrimState::estimates`] for the
    /// original variant.
    fn estimates(&self) -> Vec<f64> {
        self.estimates(true)
    }
}

/// Centralized oracle: sort, drop the lowest and highest m = floor(alpha n)
/// values, average the rest.
pub fn centralized_trimmed_mean(observations: &[f64], alpha: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&alpha) {
        return Err(Error::invalid_parameter("alpha must lie in [0, 1/2)"));
    }
    if observations.is_empty() {
        return Err(Error::invalid_parameter("empty observations"));
    }
    let n = observations.len();
    let m = (alpha * n as f64).floor() as usize;
    if n <= 2 * m {
        return Err(Error::invalid_parameter("trimming removes everything"));
    }
    let mut sorted = observations.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let kept = &sorted[m..n - m];
    Ok(kept.iter().sum::<f64>() / kept.len() as f64)
}
