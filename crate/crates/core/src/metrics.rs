//! Error metrics and convergence-rate diagnostics.

use crate::engine::Trace;
use crate::{Error, Result};

/// Normalized per-node rank error |R_k - r_k| / n.
pub fn rank_error(estimates: &[f64], exact: &[f64], n: usize) -> Result<Vec<f64>> {
    if estimates.len() != exact.len() {
        return Err(Error::invalid_parameter("length mismatch"));
    }
    Ok(estimates
        .iter()
        .zip(exact)
        .map(|(r, e)| (r - e).abs() / n as f64)
        .collect())
}

/// Mean relative error (1/n) sum_k |Z_k - t_n| / t_n.
pub fn relative_stat_error(estimates: &[f64], t_n: f64) -> Result<f64> {
    if t_n == 0.0 {
        return Err(Error::invalid_input("reference statistic is zero"));
    }
    Ok(estimates.iter().map(|z| (z - t_n).abs() / t_n.abs()).sum::<f64>()
        / estimates.len() as f64)
}

/// Mean absolute error (1/n) sum_k |Z_k - xbar_alpha|.
pub fn trim_error(estimates: &[f64], xbar_alpha: f64) -> f64 {
    estimates.iter().map(|z| (z - xbar_alpha).abs()).sum::<f64>() / estimates.len() as f64
}

/// Rank functional sigma_n(r) = n^(3/2) * sqrt(u (1 - u)), u = (r-1)/n:
/// the per-rank envelope appearing in the rate bounds. Returns 0 outside
/// the open unit interval (boundary ranks).
pub fn rank_functional(r: f64, n: usize) -> f64 {
    let nf = n as f64;
    let u = (r - 1.0) / nf;
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    nf.powf(1.5) * (u * (1.0 - u)).sqrt()
}

/// Default number of log-spaced bins for slope fitting.
pub const DEFAULT_SLOPE_BINS: usize = 20;

/// Least-squares slope of log(value) vs log(tick) over the trailing
/// `window_fraction` of the trace. Values are first reduced to one
/// representative point per log-spaced tick bin (the element with the
/// median value) to tame Monte-Carlo noise.
pub fn loglog_slope(trace: &Trace, window_fraction: f64) -> Result<f64> {
    loglog_slope_binned(trace, window_fraction, DEFAULT_SLOPE_BINS)
}

pub fn loglog_slope_binned(trace: &Trace, window_fraction: f64, bins: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&window_fraction) || window_fraction == 0.0 {
        return Err(Error::invalid_parameter("window_fraction must be in (0,1]"));
    }
    let len = trace.len();
    let start = len - ((len as f64 * window_fraction).ceil() as usize).clamp(1, len);
    let window: Vec<(f64, f64)> = trace.ticks[start..]
        .iter()
        .zip(&trace.values[start..])
        .map(|(&t, &v)| (t as f64, v))
        .collect();
    if window.len() < 10 {
        return Err(Error::invalid_input("need at least 10 points in the window"));
    }
    if window.iter().any(|&(_, v)| v <= 0.0) {
        return Err(Error::invalid_input("non-positive values in slope window"));
    }

    // Log-spaced tick bins; each contributes its median-value sample point.
    let t_min = window.first().unwrap().0;
    let t_max = window.last().unwrap().0;
    let mut points: Vec<(f64, f64)> = Vec::new();
    if t_min == t_max {
        return Err(Error::invalid_input("degenerate tick range"));
    }
    let log_min = t_min.ln();
    let log_step = (t_max.ln() - log_min) / bins as f64;
    let mut bin_members: Vec<Vec<(f64, f64)>> = vec![Vec::new(); bins];
    for &(t, v) in &window {
        let idx = (((t.ln() - log_min) / log_step) as usize).min(bins - 1);
        bin_members[idx].push((t, v));
    }
    for members in bin_members.iter_mut() {
        if members.is_empty() {
            continue;
        }
        members.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        points.push(members[(members.len() - 1) / 2]);
    }

    // Ordinary least squares on (ln t, ln v).
    let m = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(t, v) in &points {
        let x = t.ln();
        let y = v.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = m * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return Err(Error::invalid_input("degenerate tick spread for slope fit"));
    }
    Ok((m * sxy - sx * sy) / denom)
}
