//! Experiment configuration: flat key-value config files mirrored 1:1 by
//! command-line flags, with flags taking precedence.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Complete,
    WattsStrogatz,
    Geometric,
}

impl GraphKind {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "complete" => Ok(GraphKind::Complete),
            "ws" => Ok(GraphKind::WattsStrogatz),
            "geometric" => Ok(GraphKind::Geometric),
            other => Err(format!("unknown graph kind {other:?} (complete|ws|geometric)")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GraphKind::Complete => "complete",
            GraphKind::WattsStrogatz => "ws",
            GraphKind::Geometric => "geometric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    Async,
    Uniform,
}

impl Sampling {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "async" => Ok(Sampling::Async),
            "uniform" => Ok(Sampling::Uniform),
            other => Err(format!("unknown sampling {other:?} (async|uniform)")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Sampling::Async => "async",
            Sampling::Uniform => "uniform",
        }
    }
}

/// Fully resolved experiment configuration. All seeds are explicit; there
/// is no wall-clock seeding anywhere.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub graph: GraphKind,
    pub n: usize,
    pub ws_k: usize,
    pub ws_p: f64,
    pub geo_radius: f64,
    /// None means "run every applicable sampling mode" (rank command).
    pub sampling: Option<Sampling>,
    pub ticks: u64,
    pub trials: u64,
    pub record_every: u64,
    pub alpha: Option<f64>,
    pub epsilon: Option<f64>,
    pub scale: f64,
    pub ties: bool,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            graph: GraphKind::Complete,
            n: 500,
            ws_k: 4,
            ws_p: 0.2,
            geo_radius: 0.1,
            sampling: None,
            ticks: 50_000,
            trials: 100,
            record_every: 100,
            alpha: None,
            epsilon: None,
            scale: 10.0,
            ties: false,
            seed: 0,
            out: None,
        }
    }
}

/// Partial settings collected from a config file or from flags.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub graph: Option<String>,
    pub n: Option<usize>,
    pub ws_k: Option<usize>,
    pub ws_p: Option<f64>,
    pub geo_radius: Option<f64>,
    pub sampling: Option<String>,
    pub ticks: Option<u64>,
    pub trials: Option<u64>,
    pub record_every: Option<u64>,
    pub alpha: Option<f64>,
    pub epsilon: Option<f64>,
    pub scale: Option<f64>,
    pub ties: Option<bool>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

/// Parses a flat `key = value` file. `#` and `;` start comments; blank
/// lines are ignored. Keys match the long flag names without `--`.
pub fn parse_config_file(path: &Path) -> Result<Overrides, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    overrides_from_map(map)
}

fn overrides_from_map(map: BTreeMap<String, String>) -> Result<Overrides, String> {
    let mut o = Overrides::default();
    for (key, value) in map {
        let parse_err = |e| format!("bad value for {key}: {e}");
        match key.as_str() {
            "graph" => o.graph = Some(value),
            "n" => o.n = Some(value.parse().map_err(|e| parse_err(format!("{e}")))?),
            "ws-k" => o.ws_k = Some(value.parse().map_err(|e| parse_err(format!("{e}")))?),
            "ws-p" => o.ws_p = Some(value.parse().map_err(|e| parse_err(format!("{e}")))?),
            "geo-radius" => {
                o.geo_radius = Some(value.parse().map_err(|e| parse_err(format!("{e}")))?)
            }
            "sampling" => o.sampling = Some(value),
            "ticks" => o.ticks = Some(value.parse().map_err(|e| parse_err(format!("{e}")))?),
            "trials" => o.trials = Some(value.parse().map_err(|e| parse_err(format!("{e}")))?),
            "record-every" => {
                o.record_every = Some(value.parse().map_err(|e| parse_err(format!("{e}")))?)
            }
            "alpha" => o.alpha = Some(value.parse().map_err(|e| parse_err(format!("{e}")))?),
            "epsilon" => o.epsilon = Some(value.parse().map_err(|e| parse_err(format!("{e}")))?),
            "scale" => o.scale = Some(value.parse().map_err(|e| parse_err(format!("{e}")))?),
            "ties" => o.ties = Some(value.parse().map_err(|e| parse_err(format!("{e}")))?),
            "seed" => o.seed = Some(value.parse().map_err(|e| parse_err(format!("{e}")))?),
            "out" => o.out = Some(PathBuf::from(value)),
            other => return Err(format!("unknown config key {other:?}")),
        }
    }
    Ok(o)
}

impl ExperimentConfig {
    /// Applies file settings, then flag settings on top.
    pub fn resolve(file: Option<Overrides>, flags: Overrides) -> Result<Self, String> {
        let mut cfg = ExperimentConfig::default();
        for o in file.into_iter().chain(std::iter::once(flags)) {
            if let Some(g) = o.graph {
                cfg.graph = GraphKind::parse(&g)?;
            }
            if let Some(s) = o.sampling {
                cfg.sampling = Some(Sampling::parse(&s)?);
            }
            if let Some(v) = o.n {
                cfg.n = v;
            }
            if let Some(v) = o.ws_k {
                cfg.ws_k = v;
            }
            if let Some(v) = o.ws_p {
                cfg.ws_p = v;
            }
            if let Some(v) = o.geo_radius {
                cfg.geo_radius = v;
            }
            if let Some(v) = o.ticks {
                cfg.ticks = v;
            }
            if let Some(v) = o.trials {
                cfg.trials = v;
            }
            if let Some(v) = o.record_every {
                cfg.record_every = v;
            }
            if let Some(v) = o.alpha {
                cfg.alpha = Some(v);
            }
            if let Some(v) = o.epsilon {
                cfg.epsilon = Some(v);
            }
            if let Some(v) = o.scale {
                cfg.scale = v;
            }
            if let Some(v) = o.ties {
                cfg.ties = v;
            }
            if let Some(v) = o.seed {
                cfg.seed = v;
            }
            if let Some(v) = o.out {
                cfg.out = Some(v);
            }
        }
        if cfg.ticks < 1 {
            return Err("ticks must be >= 1".into());
        }
        if cfg.trials < 1 {
            return Err("trials must be >= 1".into());
        }
        if cfg.record_every < 1 {
            return Err("record-every must be >= 1".into());
        }
        Ok(cfg)
    }

    /// Key-value lines echoing the resolved configuration; the provenance
    /// sidecar starts with these.
    pub fn provenance_lines(&self) -> Vec<(String, String)> {
        let mut lines = vec![
            ("graph".into(), self.graph.name().into()),
            ("n".into(), self.n.to_string()),
            ("ticks".into(), self.ticks.to_string()),
            ("trials".into(), self.trials.to_string()),
            ("record-every".into(), self.record_every.to_string()),
            ("ties".into(), self.ties.to_string()),
            ("seed".into(), self.seed.to_string()),
        ];
        match self.graph {
            GraphKind::WattsStrogatz => {
                lines.push(("ws-k".into(), self.ws_k.to_string()));
                lines.push(("ws-p".into(), self.ws_p.to_string()));
            }
            GraphKind::Geometric => {
                lines.push(("geo-radius".into(), self.geo_radius.to_string()));
            }
            GraphKind::Complete => {}
        }
        if let Some(s) = self.sampling {
            lines.push(("sampling".into(), s.name().into()));
        }
        if let Some(a) = self.alpha {
            lines.push(("alpha".into(), a.to_string()));
        }
        if let Some(e) = self.epsilon {
            lines.push(("epsilon".into(), e.to_string()));
            lines.push(("scale".into(), self.scale.to_string()));
        }
        lines
    }
}
