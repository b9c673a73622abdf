//! Seeded experiment datasets: integer grids, two-sample Cauchy draws,
//! contamination, and random data-to-node assignment.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::graph::Graph;
use crate::{Error, Result};

/// Sample tag for two-sample experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleTag {
    S1,
    S2,
}

/// Experiment dataset: values with optional per-element sample tags.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub values: Vec<f64>,
    pub labels: Option<Vec<SampleTag>>,
    pub provenance: String,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The dataset {1, ..., n}.
pub fn integer_dataset(n: usize) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::invalid_parameter("need n >= 2"));
    }
    Ok(Dataset {
        values: (1..=n).map(|i| i as f64).collect(),
        labels: None,
        provenance: format!("integers 1..{n}"),
    })
}

/// Two-sample Cauchy dataset: n1 draws from Cauchy(loc1, scale) tagged S1
/// followed by n2 draws from Cauchy(loc2, scale) tagged S2. Sampling is
/// by inverse CDF, x = loc + scale * tan(pi (u - 1/2)).
pub fn cauchy_two_sample(
    n1: usize,
    n2: usize,
    loc1: f64,
    loc2: f64,
    scale: f64,
    seed: u64,
) -> Result<Dataset> {
    if n1 < 1 || n2 < 1 {
        return Err(Error::invalid_parameter("n1 and n2 must be >= 1"));
    }
    if scale <= 0.0 {
        return Err(Error::invalid_parameter("scale must be positive"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut draw = |loc: f64| {
        let u: f64 = rng.random();
        loc + scale * (std::f64::consts::PI * (u - 0.5)).tan()
    };
    let mut values = Vec::with_capacity(n1 + n2);
    let mut labels = Vec::with_capacity(n1 + n2);
    for _ in 0..n1 {
        values.push(draw(loc1));
        labels.push(SampleTag::S1);
    }
    for _ in 0..n2 {
        values.push(draw(loc2));
        labels.push(SampleTag::S2);
    }
    Ok(Dataset {
        values,
        labels: Some(labels),
        provenance: format!(
            "cauchy two-sample n1={n1} loc1={loc1} n2={n2} loc2={loc2} scale={scale} seed={seed}"
        ),
    })
}

/// Multiplies exactly floor(epsilon * n) uniformly chosen distinct values
/// by `s`. Returns the corrupted dataset and the number of entries
/// changed (zero means the requested fraction rounded down to nothing).
pub fn scale_corrupt(d: &Dataset, epsilon: f64, s: f64, seed: u64) -> Result<(Dataset, usize)> {
    if !(0.0..0.5).contains(&epsilon) {
        return Err(Error::invalid_parameter("epsilon must lie in [0, 1/2)"));
    }
    let count = (epsilon * d.len() as f64).floor() as usize;
    let mut out = d.clone();
    out.provenance = format!("{} | scale-corrupt eps={epsilon} s={s} seed={seed}", d.provenance);
    if count == 0 {
        return Ok((out, 0));
    }
    let indices = choose_indices(d.len(), count, seed);
    for &i in &indices {
        out.values[i] *= s;
    }
    Ok((out, count))
}

/// Huber contamination: replaces floor(epsilon * n) uniformly chosen
/// distinct values by draws from `outlier_sampler`.
pub fn huber_contaminate(
    d: &Dataset,
    epsilon: f64,
    outlier_sampler: &mut dyn FnMut(&mut ChaCha12Rng) -> f64,
    seed: u64,
) -> Result<(Dataset, usize)> {
    if epsilon <= 0.0 || epsilon >= 0.5 {
        return Err(Error::invalid_parameter("epsilon must lie in (0, 1/2)"));
    }
    let count = (epsilon * d.len() as f64).floor() as usize;
    let mut out = d.clone();
    out.provenance = format!("{} | huber eps={epsilon} seed={seed}", d.provenance);
    if count == 0 {
        return Ok((out, 0));
    }
    let indices = choose_indices(d.len(), count, seed);
    let mut rng = ChaCha12Rng::seed_from_u64(seed.wrapping_add(1));
    for &i in &indices {
        out.values[i] = outlier_sampler(&mut rng);
    }
    Ok((out, count))
}

fn choose_indices(n: usize, count: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(&mut rng);
    all.truncate(count);
    all
}

/// Uniform random bijection dataset -> nodes. Labels travel with values.
/// Returns per-node values and (when present) per-node labels.
pub fn assign_to_nodes(
    d: &Dataset,
    g: &Graph,
    seed: u64,
) -> Result<(Vec<f64>, Option<Vec<SampleTag>>)> {
    if d.len() != g.node_count() {
        return Err(Error::invalid_parameter(format!(
            "dataset size {} != node count {}",
            d.len(),
            g.node_count()
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..d.len()).collect();
    perm.shuffle(&mut rng);
    let values = perm.iter().map(|&i| d.values[i]).collect();
    let labels = d
        .labels
        .as_ref()
        .map(|l| perm.iter().map(|&i| l[i]).collect());
    Ok((values, labels))
}

/// Writes a dataset as CSV with columns `index,value,label` (0-based
/// indices, empty label column when untagged).
pub fn dump_csv<W: std::io::Write>(d: &Dataset, mut w: W) -> std::io::Result<()> {
    writeln!(w, "index,value,label")?;
    for (i, v) in d.values.iter().enumerate() {
        let label = match d.labels.as_ref().map(|l| l[i]) {
            Some(SampleTag::S1) => "S1",
            Some(SampleTag::S2) => "S2",
            None => "",
        };
        writeln!(w, "{i},{v:.12e},{label}")?;
    }
    Ok(())
}

/// Reads a dataset from the CSV format written by [`dump_csv`].
pub fn load_csv<R: std::io::BufRead>(r: R) -> Result<Dataset> {
    let mut values = Vec::new();
    let mut labels: Vec<Option<SampleTag>> = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line.map_err(|e| Error::invalid_input(format!("read error: {e}")))?;
        if lineno == 0 {
            continue; // header
        }
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.splitn(3, ',').collect();
        if parts.len() < 2 {
            return Err(Error::invalid_input(format!("malformed CSV line {lineno}")));
        }
        let value: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::invalid_input(format!("bad value on line {lineno}")))?;
        values.push(value);
        labels.push(match parts.get(2).map(|s| s.trim()) {
            Some("S1") => Some(SampleTag::S1),
            Some("S2") => Some(SampleTag::S2),
            Some("") | None => None,
            Some(other) => {
                return Err(Error::invalid_input(format!("unknown label {other:?}")));
            }
        });
    }
    if values.is_empty() {
        return Err(Error::invalid_input("empty dataset"));
    }
    let labels = if labels.iter().all(|l| l.is_some()) {
        Some(labels.into_iter().map(|l| l.unwrap()).collect())
    } else if labels.iter().all(|l| l.is_none()) {
        None
    } else {
        return Err(Error::invalid_input("partially labeled dataset"));
    };
    Ok(Dataset {
        values,
        labels,
        provenance: "loaded from CSV".into(),
    })
}
