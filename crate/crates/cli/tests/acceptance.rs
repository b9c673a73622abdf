//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line. Run with
//!
//!   cargo test --release -p gossip-rank-cli --test acceptance -- --nocapture
//!
//! Tolerances and experiment parameters are pinned in the constants next
//! to each criterion.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use gossip_rank::data;
use gossip_rank::engine::{self, derive_seed, Estimator, RngStream};
use gossip_rank::gorank::{self, RankState};
use gossip_rank::gotrim::{self, TrimParams, TrimState};
use gossip_rank::graph::{self, Graph};
use gossip_rank::metrics;
use gossip_rank::rankstat::{self, Partition, StatState};

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {id:2} ({name}): {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} failed: {detail}");
}

/// Mean trace across trials for one estimator/metric pair, used by the
/// slope-band criteria.
fn mean_trace(agg: &engine::AggregatedTrace) -> engine::Trace {
    engine::Trace {
        ticks: agg.ticks.clone(),
        values: agg.mean.clone(),
    }
}

// --- criterion 1: deterministic spectral gap on the complete graph ------

#[test]
fn criterion_01_spectral_gap_deterministic() {
    const REPORTED: f64 = 4.01e-3;
    const TOL: f64 = 1e-4;
    let start = Instant::now();

    let g = graph::build_complete(500).unwrap();
    let dist = graph::async_edge_distribution(&g);
    let l = graph::weighted_laplacian(&g, &dist).unwrap();
    let c = graph::spectral_gap(&l).unwrap();

    let exact = 2.0 / 499.0;
    let elapsed = start.elapsed();
    let pass = (c - exact).abs() < 1e-10 && (c - REPORTED).abs() < TOL && elapsed.as_secs() < 30;
    report(
        1,
        "spectral gap, deterministic",
        pass,
        &format!("c = {c:.6e}, |c - 2/499| = {:.2e}, {elapsed:.2?}", (c - exact).abs()),
    );
}

// --- criterion 2: stochastic spectral gaps ------------------------------

#[test]
fn criterion_02_spectral_gap_stochastic() {
    const SEEDS: u64 = 20;
    const WS_BAND: (f64, f64) = (1e-4, 1e-3);
    const GEO_BAND: (f64, f64) = (5e-6, 2e-4);

    let mut ws_hits = 0usize;
    for seed in 0..SEEDS {
        let g = graph::build_watts_strogatz(500, 4, 0.2, seed).unwrap();
        let l = graph::weighted_laplacian(&g, &graph::async_edge_distribution(&g)).unwrap();
        let c = graph::spectral_gap(&l).unwrap();
        if (WS_BAND.0..=WS_BAND.1).contains(&c) {
            ws_hits += 1;
        }
    }

    let mut geo_accepted = 0usize;
    let mut geo_hits = 0usize;
    for seed in 0..SEEDS {
        let Ok(g) = graph::build_random_geometric(500, 0.1, seed) else {
            continue;
        };
        geo_accepted += 1;
        let l = graph::weighted_laplacian(&g, &graph::async_edge_distribution(&g)).unwrap();
        let c = graph::spectral_gap(&l).unwrap();
        if (GEO_BAND.0..=GEO_BAND.1).contains(&c) {
            geo_hits += 1;
        }
    }

    let ws_ok = ws_hits as f64 >= 0.9 * SEEDS as f64;
    let geo_ok = geo_accepted > 0 && geo_hits as f64 >= 0.8 * geo_accepted as f64;
    report(
        2,
        "spectral gap, stochastic",
        ws_ok && geo_ok,
        &format!("WS in-band {ws_hits}/{SEEDS}, geometric in-band {geo_hits}/{geo_accepted}"),
    );
}

// --- criterion 3: gossip-matrix identities ------------------------------

/// Connected non-bipartite Erdos-Renyi graph by rejection; independent of
/// the library generators.
fn random_gossip_graph(rng: &mut ChaCha12Rng) -> Graph {
    loop {
        let n = rng.random_range(4..=20usize);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random::<f64>() < 0.45 {
                    edges.push((i, j));
                }
            }
        }
        if let Ok(g) = Graph::from_edges(n, edges) {
            if g.is_gossip_ready() {
                return g;
            }
        }
    }
}

fn max_abs<R: nalgebra::Dim, C: nalgebra::Dim, S: nalgebra::storage::Storage<f64, R, C>>(
    m: &nalgebra::Matrix<f64, R, C, S>,
) -> f64 {
    m.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()))
}

#[test]
fn criterion_03_gossip_matrix_identities() {
    const GRAPHS: usize = 50;
    const TOL: f64 = 1e-8;
    let mut rng = ChaCha12Rng::seed_from_u64(3);
    let mut worst = 0.0f64;

    for _ in 0..GRAPHS {
        let g = random_gossip_graph(&mut rng);
        let n = g.node_count();
        let dist = graph::async_edge_distribution(&g);
        let l = graph::weighted_laplacian(&g, &dist).unwrap();
        let c = graph::spectral_gap(&l).unwrap();
        let identity = nalgebra::DMatrix::<f64>::identity(n, n);
        let ones = nalgebra::DVector::<f64>::from_element(n, 1.0);

        for alpha in [1u32, 2] {
            // Per-activation identities: W1(t)^2 = I, W2(t)^2 = W2(t),
            // and double stochasticity of every sample matrix.
            let mut weighted_sum = nalgebra::DMatrix::<f64>::zeros(n, n);
            for (&e, &p) in g.edges().iter().zip(dist.probabilities()) {
                let w = graph::sample_gossip_matrix(e, n, alpha).unwrap();
                let sq = &w * &w;
                let idem = if alpha == 1 {
                    max_abs(&(sq - &identity))
                } else {
                    max_abs(&(sq - &w))
                };
                let rows = max_abs(&(&w * &ones - &ones));
                let cols = max_abs(&(w.transpose() * &ones - &ones));
                worst = worst.max(idem).max(rows).max(cols);
                weighted_sum += w * p;
            }

            // Expectation identity: sum_e p_e W_alpha(e) = I - L(P)/alpha.
            let expected = graph::expected_gossip_matrix(&g, &dist, alpha).unwrap();
            worst = worst.max(max_abs(&(&weighted_sum - &expected)));
            worst = worst.max(max_abs(
                &(&expected - (&identity - &l / alpha as f64)),
            ));

            // Mixing bound: ||W_alpha - J/n||_op <= 1 - c/alpha.
            let norm = graph::centered_operator_norm(&expected);
            let bound = 1.0 - c / alpha as f64;
            worst = worst.max((norm - bound).max(0.0));
        }
    }

    report(
        3,
        "gossip-matrix identities",
        worst < TOL,
        &format!("worst deviation {worst:.2e} over {GRAPHS} graphs"),
    );
}

// --- criterion 4: exact oracle equivalences -----------------------------

/// Sort-based mid-rank assignment, written independently of the library's
/// pairwise-comparison rank oracle.
fn sorted_midranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = mid;
        }
        i = j + 1;
    }
    ranks
}

#[test]
fn criterion_04_oracle_equivalences() {
    const INSTANCES: usize = 1000;
    const TOL: f64 = 1e-12;
    let mut rng = ChaCha12Rng::seed_from_u64(4);
    let mut worst = 0.0f64;

    // Centralized Wilcoxon statistic vs brute-force pooled-rank sum.
    for _ in 0..INSTANCES {
        let n = rng.random_range(4..=12usize);
        let n1 = rng.random_range(1..n);
        let with_ties = rng.random::<bool>();
        let values: Vec<f64> = (0..n)
            .map(|i| {
                if with_ties {
                    rng.random_range(1..=5u32) as f64
                } else {
                    i as f64 + rng.random::<f64>() * 0.5
                }
            })
            .collect();
        let mut membership = vec![false; n];
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        for &k in idx.iter().take(n1) {
            membership[k] = true;
        }
        let part = Partition::new(membership.clone()).unwrap();
        let scores = rankstat::wilcoxon_scores(&part);
        let got = rankstat::centralized_statistic(&values, &scores, with_ties).unwrap();
        let want: f64 = sorted_midranks(&values)
            .iter()
            .zip(&membership)
            .filter(|(_, &m)| m)
            .map(|(&r, _)| r)
            .sum();
        worst = worst.max((got - want).abs());
    }

    // Centralized trimmed mean vs sort-and-trim.
    for _ in 0..INSTANCES {
        let n = rng.random_range(3..=100usize);
        let alpha = rng.random::<f64>() * 0.499;
        let m = (alpha * n as f64).floor() as usize;
        if n <= 2 * m {
            continue;
        }
        let values: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 200.0 - 100.0).collect();
        let got = gotrim::centralized_trimmed_mean(&values, alpha).unwrap();
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want =
            sorted[m..n - m].iter().sum::<f64>() / (n - 2 * m) as f64;
        worst = worst.max((got - want).abs());
    }

    // Weighted-indicator identity (1/n) sum w(r_k) X_k = trimmed mean.
    for _ in 0..200 {
        let n = rng.random_range(3..=100usize);
        let alpha = rng.random::<f64>() * 0.499;
        let m = (alpha * n as f64).floor() as usize;
        if n <= 2 * m {
            continue;
        }
        // Distinct values so that exact ranks are unambiguous.
        let mut values: Vec<f64> = (0..n).map(|i| i as f64 * 3.0 + 1.0).collect();
        values.shuffle(&mut rng);
        let params = TrimParams::new(alpha, n).unwrap();
        let ranks = gorank::exact_ranks(&values, false).unwrap();
        let lhs = values
            .iter()
            .zip(&ranks)
            .map(|(&x, &r)| gotrim::trim_weight(r, &params) * x)
            .sum::<f64>()
            / n as f64;
        let rhs = gotrim::centralized_trimmed_mean(&values, alpha).unwrap();
        worst = worst.max((lhs - rhs).abs());
    }

    report(
        4,
        "oracle equivalences",
        worst < TOL,
        &format!("worst deviation {worst:.2e}"),
    );
}

// --- criterion 5: GoRank convergence-rate band --------------------------

#[test]
fn criterion_05_gorank_rate() {
    const N: usize = 100;
    const TICKS: u64 = 50_000;
    const TRIALS: u64 = 100;
    const BAND: (f64, f64) = (-0.7, -0.3);
    const WINDOW: f64 = 0.9;
    const SEED: u64 = 42;
    let start = Instant::now();

    let g = graph::build_watts_strogatz(N, 4, 0.2, SEED).unwrap();
    let dist = graph::async_edge_distribution(&g);
    let dataset = data::integer_dataset(N).unwrap();

    let aggs = engine::run_trials(TRIALS, SEED, |seed| {
        let (values, _) = data::assign_to_nodes(&dataset, &g, derive_seed(seed, 1))?;
        let exact = gorank::exact_ranks(&values, false)?;
        let mut est = RankState::init(&values, false)?;
        let mut rng = RngStream::new(derive_seed(seed, 2));
        let metric = move |e: &RankState| {
            let errs = metrics::rank_error(&e.rank_estimates(), &exact, N).unwrap();
            errs.iter().sum::<f64>() / N as f64
        };
        engine::run_with_metrics(&mut est, &g, &dist, TICKS, 100, &[&metric], &mut rng)
    })
    .unwrap();

    let slope = metrics::loglog_slope(&mean_trace(&aggs[0]), WINDOW).unwrap();
    let elapsed = start.elapsed();
    let pass = (BAND.0..=BAND.1).contains(&slope) && elapsed.as_secs() < 300;
    report(
        5,
        "GoRank rate",
        pass,
        &format!("slope = {slope:.3} (band [{}, {}]), {elapsed:.2?}", BAND.0, BAND.1),
    );
}

// --- criterion 6: GoRank exact recovery ---------------------------------

#[test]
fn criterion_06_gorank_exact_recovery() {
    const N: usize = 20;
    const TICKS: u64 = 100_000;
    const TRIALS: u64 = 100;
    const NEEDED: u64 = 95;
    const SEED: u64 = 6;

    let g = graph::build_complete(N).unwrap();
    let dist = graph::async_edge_distribution(&g);
    let dataset = data::integer_dataset(N).unwrap();

    let mut exact_trials = 0u64;
    for t in 0..TRIALS {
        let seed = derive_seed(SEED, t);
        let (values, _) = data::assign_to_nodes(&dataset, &g, derive_seed(seed, 1)).unwrap();
        let exact = gorank::exact_ranks(&values, false).unwrap();
        let mut est = RankState::init(&values, false).unwrap();
        let mut rng = RngStream::new(derive_seed(seed, 2));
        let sampler = engine::EdgeSampler::new(&g, &dist).unwrap();
        for _ in 0..TICKS {
            let (i, j) = sampler.draw(&mut rng);
            Estimator::on_edge(&mut est, i, j).unwrap();
        }
        let recovered = est
            .rank_estimates()
            .iter()
            .zip(&exact)
            .all(|(r, e)| r.round() == *e);
        if recovered {
            exact_trials += 1;
        }
    }

    report(
        6,
        "GoRank exact recovery",
        exact_trials >= NEEDED,
        &format!("all ranks recovered in {exact_trials}/{TRIALS} trials (need {NEEDED})"),
    );
}

// --- criterion 7: Wilcoxon rate band and topology ordering --------------

/// One Wilcoxon experiment: per-trial traces of the mean relative error
/// and the vector of per-trial final errors.
fn wilcoxon_experiment(
    g: &Graph,
    ticks: u64,
    trials: u64,
    base_seed: u64,
) -> (engine::Trace, Vec<f64>) {
    const N1: usize = 50;
    const N2: usize = 50;
    let dist = graph::async_edge_distribution(g);
    let dataset = data::cauchy_two_sample(N1, N2, 0.8, 0.0, 1.0, base_seed).unwrap();

    // The oracle statistic is assignment-invariant: compute it once on the
    // dataset ordering.
    let membership: Vec<bool> = dataset
        .labels
        .as_ref()
        .unwrap()
        .iter()
        .map(|l| *l == data::SampleTag::S1)
        .collect();
    let part = Partition::new(membership).unwrap();
    let scores = rankstat::wilcoxon_scores(&part);
    let t_n = rankstat::centralized_statistic(&dataset.values, &scores, false).unwrap();

    let traces: Vec<engine::Trace> = (0..trials)
        .map(|t| {
            let seed = derive_seed(base_seed, t);
            let (values, labels) =
                data::assign_to_nodes(&dataset, g, derive_seed(seed, 1)).unwrap();
            let node_membership: Vec<bool> = labels
                .unwrap()
                .iter()
                .map(|l| *l == data::SampleTag::S1)
                .collect();
            let node_part = Partition::new(node_membership).unwrap();
            let node_scores = rankstat::wilcoxon_scores(&node_part);
            let mut est = StatState::init(&values, &node_scores, false).unwrap();
            let mut rng = RngStream::new(derive_seed(seed, 2));
            let metric = move |e: &StatState| {
                metrics::relative_stat_error(e.statistic_estimates(), t_n).unwrap()
            };
            engine::run(&mut est, g, &dist, ticks, 50, &metric, &mut rng).unwrap()
        })
        .collect();

    let finals: Vec<f64> = traces.iter().map(|t| *t.values.last().unwrap()).collect();
    let agg = engine::AggregatedTrace::from_traces(&traces).unwrap();
    (
        engine::Trace {
            ticks: agg.ticks,
            values: agg.mean,
        },
        finals,
    )
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

#[test]
fn criterion_07_wilcoxon_rate_and_topology_ordering() {
    const N: usize = 100;
    const TICKS: u64 = 20_000;
    const TRIALS: u64 = 100;
    const BAND: (f64, f64) = (-1.3, -0.7);
    const WINDOW: f64 = 0.9;
    const GEO_RADIUS: f64 = 0.18;
    const SEED: u64 = 42;

    let complete = graph::build_complete(N).unwrap();
    let ws = graph::build_watts_strogatz(N, 4, 0.2, SEED).unwrap();
    let geo = graph::build_random_geometric(N, GEO_RADIUS, SEED).unwrap();

    let (trace_complete, finals_complete) = wilcoxon_experiment(&complete, TICKS, TRIALS, SEED);
    let (_, finals_ws) = wilcoxon_experiment(&ws, TICKS, TRIALS, SEED);
    let (_, finals_geo) = wilcoxon_experiment(&geo, TICKS, TRIALS, SEED);

    let slope = metrics::loglog_slope(&trace_complete, WINDOW).unwrap();
    let slope_ok = (BAND.0..=BAND.1).contains(&slope);

    let (mc, mw, mg) = (
        median(&finals_complete),
        median(&finals_ws),
        median(&finals_geo),
    );
    let order_ok = mc <= mw && mw <= mg;

    report(
        7,
        "Wilcoxon rate and topology ordering",
        slope_ok && order_ok,
        &format!(
            "slope = {slope:.3} (band [{}, {}]); medians complete {mc:.3e} <= ws {mw:.3e} <= geometric {mg:.3e}",
            BAND.0, BAND.1
        ),
    );
}

// --- criterion 8: Wilcoxon test formulas vs independent CDF oracle ------

/// Standard normal CDF by adaptive Simpson quadrature of the density —
/// independent of the library's series/continued-fraction evaluation.
fn phi_quadrature(x: f64) -> f64 {
    let density = |t: f64| (-t * t / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let a = 0.0;
    let b = x.abs().min(40.0);
    let steps = 20_000usize;
    let h = (b - a) / steps as f64;
    let mut acc = density(a) + density(b);
    for k in 1..steps {
        let t = a + k as f64 * h;
        acc += density(t) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    let half = acc * h / 3.0;
    if x >= 0.0 {
        0.5 + half
    } else {
        0.5 - half
    }
}

#[test]
fn criterion_08_wilcoxon_test_formulas() {
    const TRIPLES: usize = 100;
    const TOL: f64 = 1e-8;
    let mut rng = ChaCha12Rng::seed_from_u64(8);
    let mut worst = 0.0f64;

    for _ in 0..TRIPLES {
        let n1 = rng.random_range(2..=200usize);
        let n2 = rng.random_range(2..=200usize);
        let n = (n1 + n2) as f64;
        let mu = n1 as f64 * (n + 1.0) / 2.0;
        let sigma = (n1 as f64 * n2 as f64 * (n + 1.0) / 12.0).sqrt();
        // Statistics scattered within a few sigma of the null mean.
        let t_n = mu + (rng.random::<f64>() * 8.0 - 4.0) * sigma;

        let (z, p) = rankstat::wilcoxon_test(t_n, n1, n2).unwrap();
        let z_oracle = (t_n - mu) / sigma;
        let p_oracle = 2.0 * (1.0 - phi_quadrature(z_oracle.abs()));
        worst = worst.max((z - z_oracle).abs()).max((p - p_oracle).abs());
    }

    report(
        8,
        "Wilcoxon test formulas",
        worst < TOL,
        &format!("worst |delta| = {worst:.2e} over {TRIPLES} triples"),
    );
}

// --- criterion 9: GoTrim rate band and corruption robustness ------------

#[test]
fn criterion_09_gotrim_rates_and_robustness() {
    const N: usize = 100;
    const TICKS: u64 = 50_000;
    const TRIALS: u64 = 100;
    const BAND: (f64, f64) = (-0.8, -0.2);
    const WINDOW: f64 = 0.9;
    const SEED: u64 = 42;

    let g = graph::build_complete(N).unwrap();
    let dist = graph::async_edge_distribution(&g);

    // Clean-data convergence rate at alpha = 0.2.
    let clean = data::integer_dataset(N).unwrap();
    let reference = gotrim::centralized_trimmed_mean(&clean.values, 0.2).unwrap();
    let aggs = engine::run_trials(TRIALS, SEED, |seed| {
        let (values, _) = data::assign_to_nodes(&clean, &g, derive_seed(seed, 1))?;
        let params = TrimParams::new(0.2, N)?;
        let mut est = TrimState::init(&values, params, false)?;
        let mut rng = RngStream::new(derive_seed(seed, 2));
        let metric =
            move |e: &TrimState| metrics::trim_error(&e.estimates(true), reference);
        engine::run_with_metrics(&mut est, &g, &dist, TICKS, 100, &[&metric], &mut rng)
    })
    .unwrap();
    let slope = metrics::loglog_slope(&mean_trace(&aggs[0]), WINDOW).unwrap();
    let slope_ok = (BAND.0..=BAND.1).contains(&slope);

    // Corruption setting: epsilon = 0.3, s = 10, alpha = 0.4. The scaled
    // duplicates force mid-rank tie handling.
    let (corrupted, changed) = data::scale_corrupt(&clean, 0.3, 10.0, SEED).unwrap();
    assert_eq!(changed, 30);
    let robust_reference = gotrim::centralized_trimmed_mean(&clean.values, 0.4).unwrap();
    let corrupted_mean = corrupted.values.iter().sum::<f64>() / N as f64;
    let baseline = (corrupted_mean - robust_reference).abs();

    let aggs = engine::run_trials(TRIALS, SEED, |seed| {
        let (values, _) = data::assign_to_nodes(&corrupted, &g, derive_seed(seed, 1))?;
        let params = TrimParams::new(0.4, N)?;
        let mut est = TrimState::init(&values, params, true)?;
        let mut rng = RngStream::new(derive_seed(seed, 2));
        let adaptive =
            move |e: &TrimState| metrics::trim_error(&e.estimates(true), robust_reference);
        let original =
            move |e: &TrimState| metrics::trim_error(&e.estimates(false), robust_reference);
        engine::run_with_metrics(
            &mut est,
            &g,
            &dist,
            TICKS,
            100,
            &[&adaptive, &original],
            &mut rng,
        )
    })
    .unwrap();
    let adaptive_final = *aggs[0].mean.last().unwrap();
    let original_final = *aggs[1].mean.last().unwrap();
    let robust_ok =
        adaptive_final <= original_final && adaptive_final < baseline && original_final < baseline;

    report(
        9,
        "GoTrim rates and robustness",
        slope_ok && robust_ok,
        &format!(
            "clean slope = {slope:.3} (band [{}, {}]); corrupted adaptive {adaptive_final:.2} <= original {original_final:.2}, baseline {baseline:.2}",
            BAND.0, BAND.1
        ),
    );
}

// --- criterion 10: end-to-end CLI smoke test ----------------------------

fn read_trace_csv(path: &std::path::Path) -> (Vec<String>, Vec<u64>, Vec<f64>) {
    let text = std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .expect("empty CSV")
        .split(',')
        .map(str::to_string)
        .collect();
    let mut ticks = Vec::new();
    let mut means = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), header.len(), "ragged row in {}", path.display());
        ticks.push(fields[0].parse::<u64>().expect("tick column"));
        means.push(fields[1].parse::<f64>().expect("mean_error column"));
        for f in &fields[1..] {
            f.parse::<f64>().expect("numeric trace column");
        }
    }
    (header, ticks, means)
}

/// Smoothed monotone-trend check: ten block means must be non-increasing
/// up to 10% slack, with clear overall decay.
fn monotone_trending(values: &[f64]) -> bool {
    const BLOCKS: usize = 10;
    let size = values.len() / BLOCKS;
    if size == 0 {
        return false;
    }
    let block_means: Vec<f64> = (0..BLOCKS)
        .map(|b| values[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    block_means.windows(2).all(|w| w[1] <= w[0] * 1.10)
        && *block_means.last().unwrap() < 0.8 * block_means[0]
}

#[test]
fn criterion_10_cli_smoke() {
    const TICKS: &str = "50000";
    const TRIALS: &str = "20";
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_gossip-rank");
    let dir = std::env::temp_dir().join("gossip-rank-acceptance");
    std::fs::create_dir_all(&dir).unwrap();

    let run = |args: &[&str]| {
        let out = std::process::Command::new(bin)
            .args(args)
            .output()
            .expect("CLI spawn failed");
        assert!(
            out.status.success(),
            "CLI failed for {args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    };

    let rank_out = dir.join("rank.csv");
    run(&[
        "rank", "--graph", "ws", "--n", "500", "--ticks", TICKS, "--trials", TRIALS, "--seed",
        "1", "--out", rank_out.to_str().unwrap(),
    ]);
    let wilcoxon_out = dir.join("wilcoxon.csv");
    run(&[
        "wilcoxon", "--graph", "complete", "--n", "500", "--ticks", TICKS, "--trials", TRIALS,
        "--seed", "1", "--out", wilcoxon_out.to_str().unwrap(),
    ]);
    let trim_out = dir.join("trim.csv");
    run(&[
        "trim", "--graph", "complete", "--n", "500", "--alpha", "0.4", "--epsilon", "0.3",
        "--scale", "10", "--ticks", TICKS, "--trials", TRIALS, "--seed", "1", "--out",
        trim_out.to_str().unwrap(),
    ]);

    let mut all_ok = true;
    let mut notes = Vec::new();
    let outputs = [
        dir.join("rank_async.csv"),
        dir.join("rank_uniform.csv"),
        wilcoxon_out,
        trim_out,
    ];
    for path in &outputs {
        let (header, ticks, means) = read_trace_csv(path);
        let schema_ok = header[0] == "tick"
            && header[1] == "mean_error"
            && header[2] == "std_error"
            && ticks.windows(2).all(|w| w[1] > w[0]);
        let trend_ok = monotone_trending(&means);
        if !(schema_ok && trend_ok) {
            all_ok = false;
        }
        notes.push(format!(
            "{}: schema {} trend {}",
            path.file_name().unwrap().to_string_lossy(),
            if schema_ok { "ok" } else { "BAD" },
            if trend_ok { "ok" } else { "BAD" },
        ));
    }

    let elapsed = start.elapsed();
    let pass = all_ok && elapsed.as_secs() < 30 * 60;
    report(
        10,
        "end-to-end CLI smoke test",
        pass,
        &format!("{}; {elapsed:.2?}", notes.join(", ")),
    );
}
