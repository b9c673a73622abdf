//! Simulation loop for the asynchronous gossip process.
//!
//! One logical tick activates one edge (the global rate-n clock view of
//! independent per-node Poisson clocks). A run is strictly sequential;
//! parallelism happens only across trials, each of which owns an
//! independent RNG stream.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::graph::EdgeDistribution;
use crate::graph::Graph;
use crate::{Error, Result};

/// Seeded RNG stream. Identical seeds yield identical edge sequences and
/// data assignments.
pub struct RngStream {
    rng: ChaCha12Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream {
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha12Rng {
        &mut self.rng
    }
}

/// Stream-derivation rule: trial `t` of base seed `s` uses
/// splitmix64(s + t * 0x9E3779B97F4A7C15). This rule is part of the
/// reproducibility contract.
pub fn derive_seed(base_seed: u64, stream: u64) -> u64 {
    let mut z = base_seed.wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-node estimator state machine driven by edge activations.
pub trait Estimator {
    /// Processes one activation of edge (i, j).
    fn on_edge(&mut self, i: usize, j: usize) -> Result<()>;

    /// Read-only per-node estimates; must not perturb state.
    fn estimates(&self) -> Vec<f64>;
}

/// Cumulative-table edge sampler.
pub struct EdgeSampler {
    edges: Vec<(usize, usize)>,
    cumulative: Vec<f64>,
}

impl EdgeSampler {
    pub fn new(g: &Graph, dist: &EdgeDistribution) -> Result<Self> {
        if dist.len() != g.edge_count() {
            return Err(Error::invalid_parameter(
                "distribution not aligned with graph edges",
            ));
        }
        let mut cumulative = Vec::with_capacity(dist.len());
        let mut acc = 0.0;
        for &p in dist.probabilities() {
            acc += p;
            cumulative.push(acc);
        }
        // Guard against rounding in the final partial sum.
        *cumulative.last_mut().unwrap() = 1.0;
        Ok(EdgeSampler {
            edges: g.edges().to_vec(),
            cumulative,
        })
    }

    /// Draws edge e with probability p_e.
    pub fn draw(&self, rng: &mut RngStream) -> (usize, usize) {
        let u: f64 = rng.rng().random();
        let idx = self.cumulative.partition_point(|&c| c <= u);
        self.edges[idx.min(self.edges.len() - 1)]
    }
}

/// Recorded time series of a scalar metric over gossip ticks.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub ticks: Vec<u64>,
    pub values: Vec<f64>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.ticks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ticks.is_empty()
    }
}

/// Runs `ticks` edge activations, recording each metric every
/// `record_every` ticks and at the final tick.
pub fn run_with_metrics<E: Estimator>(
    est: &mut E,
    g: &Graph,
    dist: &EdgeDistribution,
    ticks: u64,
    record_every: u64,
    metrics: &[&dyn Fn(&E) -> f64],
    rng: &mut RngStream,
) -> Result<Vec<Trace>> {
    if ticks < 1 {
        return Err(Error::invalid_parameter("ticks must be >= 1"));
    }
    if record_every < 1 {
        return Err(Error::invalid_parameter("record_every must be >= 1"));
    }
    let sampler = EdgeSampler::new(g, dist)?;
    let mut traces = vec![
        Trace {
            ticks: Vec::new(),
            values: Vec::new(),
        };
        metrics.len()
    ];
    for t in 1..=ticks {
        let (i, j) = sampler.draw(rng);
        est.on_edge(i, j).map_err(|e| Error::RunFailure {
            tick: t,
            source: Box::new(e),
        })?;
        if t % record_every == 0 || t == ticks {
            for (trace, metric) in traces.iter_mut().zip(metrics) {
                trace.ticks.push(t);
                trace.values.push(metric(est));
            }
        }
    }
    Ok(traces)
}

/// Single-metric convenience wrapper around [`run_with_metrics`].
pub fn run<E: Estimator>(
    est: &mut E,
    g: &Graph,
    dist: &EdgeDistribution,
    ticks: u64,
    record_every: u64,
    metric: &dyn Fn(&E) -> f64,
    rng: &mut RngStream,
) -> Result<Trace> {
    Ok(run_with_metrics(est, g, dist, ticks, record_every, &[metric], rng)?.remove(0))
}

/// Pointwise mean and sample standard deviation of a metric across trials.
#[derive(Debug, Clone)]
pub struct AggregatedTrace {
    pub ticks: Vec<u64>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl AggregatedTrace {
    /// Aggregates per-trial traces; all traces must share tick grids.
    pub fn from_traces(traces: &[Trace]) -> Result<Self> {
        let first = traces
            .first()
            .ok_or_else(|| Error::invalid_parameter("no traces to aggregate"))?;
        let ticks = first.ticks.clone();
        for t in traces {
            if t.ticks != ticks {
                return Err(Error::invalid_input("trial traces have mismatched ticks"));
            }
        }
        let trials = traces.len() as f64;
        let points = ticks.len();
        let mut mean = vec![0.0; points];
        for t in traces {
            for (m, v) in mean.iter_mut().zip(&t.values) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= trials;
        }
        let mut std = vec![0.0; points];
        if traces.len() > 1 {
            for t in traces {
                for ((s, v), m) in std.iter_mut().zip(&t.values).zip(&mean) {
                    let d = v - m;
                    *s += d * d;
                }
            }
            for s in &mut std {
                *s = (*s / (trials - 1.0)).sqrt();
            }
        }
        Ok(AggregatedTrace { ticks, mean, std })
    }
}

/// Runs `trials` independent simulations in parallel and aggregates each
/// recorded metric. The closure receives a trial's derived seed and
/// returns one trace per metric (fresh data-to-node assignment included).
pub fn run_trials<F>(trials: u64, base_seed: u64, trial_run: F) -> Result<Vec<AggregatedTrace>>
where
    F: Fn(u64) -> Result<Vec<Trace>> + Sync,
{
    if trials < 1 {
        return Err(Error::invalid_parameter("trials must be >= 1"));
    }
    let per_trial: Vec<Vec<Trace>> = (0..trials)
        .into_par_iter()
        .map(|t| trial_run(derive_seed(base_seed, t)))
        .collect::<Result<_>>()?;
    let metric_count = per_trial[0].len();
    (0..metric_count)
        .map(|m| {
            let slice: Vec<Trace> = per_trial.iter().map(|tr| tr[m].clone()).collect();
            AggregatedTrace::from_traces(&slice)
        })
        .collect()
}
