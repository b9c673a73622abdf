//! The four experiment commands: spectral inspection, rank estimation,
//! Wilcoxon statistic estimation, and trimmed-mean estimation.

use std::path::PathBuf;

use gossip_rank::data::{self, SampleTag};
use gossip_rank::engine::{self, derive_seed, AggregatedTrace, RngStream};
use gossip_rank::gorank::{exact_ranks, RankState};
use gossip_rank::gotrim::{centralized_trimmed_mean, TrimParams, TrimState};
use gossip_rank::graph::{
    async_edge_distribution, build_complete, build_random_geometric, build_watts_strogatz,
    expected_gossip_matrix, spectral_gap, uniform_edge_distribution, weighted_laplacian,
    EdgeDistribution, Graph,
};
use gossip_rank::metrics::{rank_error, relative_stat_error, trim_error};
use gossip_rank::rankstat::{centralized_statistic, wilcoxon_scores, wilcoxon_test, Partition,
    StatState};
use gossip_rank::{Error, Result};

use crate::config::{ExperimentConfig, GraphKind, Sampling};
use crate::output;

// Sub-stream tags for seed derivation (documented reproducibility rule:
// every random source is derive_seed(parent_seed, tag)).
const GRAPH_STREAM: u64 = u64::MAX;
const CORRUPT_STREAM: u64 = u64::MAX - 1;
const DATASET_STREAM: u64 = u64::MAX - 2;
const ASSIGN_STREAM: u64 = 1;
const ENGINE_STREAM: u64 = 2;

pub fn build_graph(cfg: &ExperimentConfig) -> Result<Graph> {
    let seed = derive_seed(cfg.seed, GRAPH_STREAM);
    match cfg.graph {
        GraphKind::Complete => build_complete(cfg.n),
        GraphKind::WattsStrogatz => build_watts_strogatz(cfg.n, cfg.ws_k, cfg.ws_p, seed),
        GraphKind::Geometric => build_random_geometric(cfg.n, cfg.geo_radius, seed),
    }
}

fn distribution(g: &Graph, sampling: Sampling) -> EdgeDistribution {
    match sampling {
        Sampling::Async => async_edge_distribution(g),
        Sampling::Uniform => uniform_edge_distribution(g),
    }
}

fn gap(g: &Graph, dist: &EdgeDistribution) -> Result<f64> {
    spectral_gap(&weighted_laplacian(g, dist)?)
}

fn second_largest_eigenvalue(g: &Graph, dist: &EdgeDistribution, alpha: u32) -> Result<f64> {
    let w = expected_gossip_matrix(g, dist, alpha)?;
    let mut ev: Vec<f64> = w.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(ev[1])
}

/// Spectral inspection: graph shape, connectivity, and mixing quantities
/// under both sampling schedules.
pub fn cmd_spectral(cfg: &ExperimentConfig) -> Result<String> {
    let g = build_graph(cfg)?;
    let dist_async = async_edge_distribution(&g);
    let dist_uniform = uniform_edge_distribution(&g);
    let mut lines = cfg.provenance_lines();
    lines.push(("edges".into(), g.edge_count().to_string()));
    lines.push(("connected".into(), g.is_connected().to_string()));
    lines.push(("bipartite".into(), g.is_bipartite().to_string()));
    lines.push(("gap-async".into(), output::fmt_sig(gap(&g, &dist_async)?)));
    lines.push(("gap-uniform".into(), output::fmt_sig(gap(&g, &dist_uniform)?)));
    lines.push((
        "lambda2-alpha1-async".into(),
        output::fmt_sig(second_largest_eigenvalue(&g, &dist_async, 1)?),
    ));
    lines.push((
        "lambda2-alpha2-async".into(),
        output::fmt_sig(second_largest_eigenvalue(&g, &dist_async, 2)?),
    ));
    let report = output::kv_report(&lines);
    if let Some(out) = &cfg.out {
        output::write_text(out, &report)?;
    }
    Ok(report)
}

fn sampling_modes(cfg: &ExperimentConfig) -> Vec<Sampling> {
    match cfg.sampling {
        Some(s) => vec![s],
        None => vec![Sampling::Async, Sampling::Uniform],
    }
}

fn out_path_for_mode(cfg: &ExperimentConfig, mode: Sampling, multi: bool) -> Option<PathBuf> {
    cfg.out.as_ref().map(|p| {
        if multi {
            output::with_suffix(p, &format!("_{}", mode.name()))
        } else {
            p.clone()
        }
    })
}

/// Rank estimation (GoRank) under the configured sampling mode(s); one
/// trace per mode of the trial-averaged mean normalized rank error.
pub fn cmd_rank(cfg: &ExperimentConfig) -> Result<Vec<(Sampling, AggregatedTrace)>> {
    let g = build_graph(cfg)?;
    let ds = data::integer_dataset(cfg.n)?;
    let modes = sampling_modes(cfg);
    let multi = modes.len() > 1;
    let mut results = Vec::new();
    for mode in modes {
        let dist = distribution(&g, mode);
        let ties = cfg.ties;
        let aggs = engine::run_trials(cfg.trials, cfg.seed, |trial_seed| {
            let (obs, _) = data::assign_to_nodes(&ds, &g, derive_seed(trial_seed, ASSIGN_STREAM))?;
            let exact = exact_ranks(&obs, ties)?;
            let n = obs.len();
            let mut est = RankState::init(&obs, ties)?;
            let metric = |e: &RankState| {
                let errs = rank_error(&e.rank_estimates(), &exact, n).expect("aligned");
                errs.iter().sum::<f64>() / n as f64
            };
            let mut rng = RngStream::new(derive_seed(trial_seed, ENGINE_STREAM));
            engine::run_with_metrics(
                &mut est,
                &g,
                &dist,
                cfg.ticks,
                cfg.record_every,
                &[&metric],
                &mut rng,
            )
        })?;
        let agg = aggs.into_iter().next().expect("one metric");
        if let Some(path) = out_path_for_mode(cfg, mode, multi) {
            output::write_trace_csv(&path, &agg, &[])?;
            let mut lines = cfg.provenance_lines();
            lines.push(("command".into(), "rank".into()));
            lines.push(("mode".into(), mode.name().into()));
            lines.push(("edges".into(), g.edge_count().to_string()));
            lines.push(("gap".into(), output::fmt_sig(gap(&g, &dist)?)));
            lines.push((
                "final-mean-error".into(),
                output::fmt_sig(*agg.mean.last().unwrap()),
            ));
            output::write_provenance(&path, &lines)?;
        }
        results.push((mode, agg));
    }
    Ok(results)
}

/// Summary statistics reported by the Wilcoxon command alongside its trace.
pub struct WilcoxonReport {
    pub trace: AggregatedTrace,
    pub t_n: f64,
    pub final_mean_error: f64,
    pub z: f64,
    pub p: f64,
}

/// Wilcoxon statistic estimation on a two-sample Cauchy dataset
/// (locations 0.8 and 0.0, scale 1.0, even split), plus the rank-sum test
/// evaluated at the centralized statistic.
pub fn cmd_wilcoxon(cfg: &ExperimentConfig) -> Result<WilcoxonReport> {
    let n1 = cfg.n / 2;
    let n2 = cfg.n - n1;
    let ds = data::cauchy_two_sample(
        n1,
        n2,
        0.8,
        0.0,
        1.0,
        derive_seed(cfg.seed, DATASET_STREAM),
    )?;
    let g = build_graph(cfg)?;
    let dist = distribution(&g, cfg.sampling.unwrap_or(Sampling::Async));

    // The statistic is assignment-invariant; compute the oracle once.
    let membership: Vec<bool> = ds
        .labels
        .as_ref()
        .expect("two-sample dataset is labeled")
        .iter()
        .map(|&t| t == SampleTag::S1)
        .collect();
    let scores = wilcoxon_scores(&Partition::new(membership)?);
    let t_n = centralized_statistic(&ds.values, &scores, cfg.ties)?;

    let ties = cfg.ties;
    let aggs = engine::run_trials(cfg.trials, cfg.seed, |trial_seed| {
        let (obs, labels) =
            data::assign_to_nodes(&ds, &g, derive_seed(trial_seed, ASSIGN_STREAM))?;
        let membership: Vec<bool> = labels
            .expect("labels travel with values")
            .iter()
            .map(|&t| t == SampleTag::S1)
            .collect();
        let scores = wilcoxon_scores(&Partition::new(membership)?);
        let mut est = StatState::init(&obs, &scores, ties)?;
        let metric =
            |e: &StatState| relative_stat_error(e.statistic_estimates(), t_n).expect("t_n != 0");
        let mut rng = RngStream::new(derive_seed(trial_seed, ENGINE_STREAM));
        engine::run_with_metrics(
            &mut est,
            &g,
            &dist,
            cfg.ticks,
            cfg.record_every,
            &[&metric],
            &mut rng,
        )
    })?;
    let trace = aggs.into_iter().next().expect("one metric");
    let (z, p) = wilcoxon_test(t_n, n1, n2)?;
    let final_mean_error = *trace.mean.last().unwrap();

    if let Some(path) = &cfg.out {
        output::write_trace_csv(path, &trace, &[])?;
        let mut lines = cfg.provenance_lines();
        lines.push(("command".into(), "wilcoxon".into()));
        lines.push(("n1".into(), n1.to_string()));
        lines.push(("n2".into(), n2.to_string()));
        lines.push(("edges".into(), g.edge_count().to_string()));
        lines.push(("gap".into(), output::fmt_sig(gap(&g, &dist)?)));
        lines.push(("oracle-t-n".into(), output::fmt_sig(t_n)));
        lines.push(("final-mean-relative-error".into(), output::fmt_sig(final_mean_error)));
        lines.push(("z-score".into(), output::fmt_sig(z)));
        lines.push(("p-value".into(), output::fmt_sig(p)));
        output::write_provenance(path, &lines)?;
    }
    Ok(WilcoxonReport {
        trace,
        t_n,
        final_mean_error,
        z,
        p,
    })
}

/// Outputs of the trimmed-mean command: adaptive and original read-out
/// traces plus the constant corrupted-mean baseline error.
pub struct TrimReport {
    pub adaptive: AggregatedTrace,
    pub original: AggregatedTrace,
    pub reference: f64,
    pub baseline_error: f64,
    pub ties_enabled: bool,
}

fn has_duplicates(values: &[f64]) -> bool {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sorted.windows(2).any(|w| w[0] == w[1])
}

/// Trimmed-mean estimation (GoTrim) on the integer dataset, with optional
/// scale corruption. Both read-outs come from one simulation; the error
/// reference is the trimmed mean of the clean dataset.
pub fn cmd_trim(cfg: &ExperimentConfig) -> Result<TrimReport> {
    let alpha = cfg
        .alpha
        .ok_or_else(|| Error::invalid_parameter("trim requires --alpha"))?;
    let g = build_graph(cfg)?;
    let dist = distribution(&g, cfg.sampling.unwrap_or(Sampling::Async));
    let clean = data::integer_dataset(cfg.n)?;
    let reference = centralized_trimmed_mean(&clean.values, alpha)?;
    let (ds, _changed) = match cfg.epsilon {
        Some(eps) => data::scale_corrupt(
            &clean,
            eps,
            cfg.scale,
            derive_seed(cfg.seed, CORRUPT_STREAM),
        )?,
        None => (clean.clone(), 0),
    };
    let corrupted_mean = ds.values.iter().sum::<f64>() / ds.len() as f64;
    let baseline_error = (corrupted_mean - reference).abs();
    // Scale corruption can collide values; mid-rank handling is then
    // required for unbiased ranks.
    let ties = cfg.ties || has_duplicates(&ds.values);
    let params = TrimParams::new(alpha, cfg.n)?;

    let aggs = engine::run_trials(cfg.trials, cfg.seed, |trial_seed| {
        let (obs, _) = data::assign_to_nodes(&ds, &g, derive_seed(trial_seed, ASSIGN_STREAM))?;
        let mut est = TrimState::init(&obs, params, ties)?;
        let adaptive_metric = |e: &TrimState| trim_error(&e.estimates(true), reference);
        let original_metric = |e: &TrimState| trim_error(&e.estimates(false), reference);
        let mut rng = RngStream::new(derive_seed(trial_seed, ENGINE_STREAM));
        engine::run_with_metrics(
            &mut est,
            &g,
            &dist,
            cfg.ticks,
            cfg.record_every,
            &[&adaptive_metric, &original_metric],
            &mut rng,
        )
    })?;
    let mut it = aggs.into_iter();
    let adaptive = it.next().expect("adaptive trace");
    let original = it.next().expect("original trace");

    if let Some(path) = &cfg.out {
        let extra: Vec<(String, Vec<f64>)> = vec![
            ("original_mean_error".into(), original.mean.clone()),
            ("original_std_error".into(), original.std.clone()),
            (
                "baseline_error".into(),
                vec![baseline_error; adaptive.ticks.len()],
            ),
        ];
        output::write_trace_csv(path, &adaptive, &extra)?;
        let mut lines = cfg.provenance_lines();
        lines.push(("command".into(), "trim".into()));
        lines.push(("edges".into(), g.edge_count().to_string()));
        lines.push(("gap".into(), output::fmt_sig(gap(&g, &dist)?)));
        lines.push(("ties-effective".into(), ties.to_string()));
        lines.push(("trimmed-mean-reference".into(), output::fmt_sig(reference)));
        lines.push(("corrupted-mean".into(), output::fmt_sig(corrupted_mean)));
        lines.push(("baseline-error".into(), output::fmt_sig(baseline_error)));
        lines.push((
            "final-adaptive-error".into(),
            output::fmt_sig(*adaptive.mean.last().unwrap()),
        ));
        lines.push((
            "final-original-error".into(),
            output::fmt_sig(*original.mean.last().unwrap()),
        ));
        output::write_provenance(path, &lines)?;
    }
    Ok(TrimReport {
        adaptive,
        original,
        reference,
        baseline_error,
        ties_enabled: ties,
    })
}
