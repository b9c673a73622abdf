//! Communication graphs, edge-sampling distributions, and their spectral
//! quantities.
//!
//! Node indices are 0-based everywhere in code and in serialized output.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::{Error, Result};

/// Retry budget for random graph generation (connectivity and
/// non-bipartiteness are enforced by rejection).
const GENERATION_RETRIES: usize = 100;

/// Undirected simple graph with at least two nodes.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    degrees: Vec<usize>,
}

impl Graph {
    /// Builds a graph from an explicit edge list. Edges are normalized to
    /// (min, max); self-loops and duplicates are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid_parameter("graph needs at least 2 nodes"));
        }
        let mut seen = std::collections::HashSet::new();
        let mut normalized = Vec::new();
        let mut degrees = vec![0usize; n];
        for (i, j) in edges {
            if i == j {
                return Err(Error::invalid_parameter(format!("self-loop at node {i}")));
            }
            if i >= n || j >= n {
                return Err(Error::invalid_parameter(format!(
                    "edge ({i},{j}) out of range for n={n}"
                )));
            }
            let e = (i.min(j), i.max(j));
            if !seen.insert(e) {
                return Err(Error::invalid_parameter(format!("duplicate edge {e:?}")));
            }
            degrees[e.0] += 1;
            degrees[e.1] += 1;
            normalized.push(e);
        }
        if degrees.iter().any(|&d| d == 0) {
            return Err(Error::invalid_parameter("isolated node (degree 0)"));
        }
        Ok(Graph {
            n,
            edges: normalized,
            degrees,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, node: usize) -> usize {
        self.degrees[node]
    }

    fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    /// BFS reachability from node 0.
    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency_lists();
        let mut visited = vec![false; self.n];
        let mut queue = std::collections::VecDeque::from([0usize]);
        visited[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !visited[v] {
                    visited[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }

    /// BFS 2-coloring; components are colored independently.
    pub fn is_bipartite(&self) -> bool {
        let adj = self.adjacency_lists();
        let mut color = vec![-1i8; self.n];
        for start in 0..self.n {
            if color[start] >= 0 {
                continue;
            }
            color[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if color[v] < 0 {
                        color[v] = 1 - color[u];
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Connected and non-bipartite: the property the gossip process needs
    /// in order to mix.
    pub fn is_gossip_ready(&self) -> bool {
        self.is_connected() && !self.is_bipartite()
    }
}

/// Builds the complete graph on `n >= 3` nodes.
pub fn build_complete(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::invalid_parameter(
            "complete graph requires n >= 3 (n=2 is bipartite)",
        ));
    }
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    Graph::from_edges(n, edges)
}

/// Builds a Watts-Strogatz small-world graph: ring lattice of even degree
/// `k`, each edge's far endpoint rewired independently with probability `p`.
/// Draws are retried until the result is connected and non-bipartite.
pub fn build_watts_strogatz(n: usize, k: usize, p: f64, seed: u64) -> Result<Graph> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::invalid_parameter("k must be even and >= 2"));
    }
    if n <= k {
        return Err(Error::invalid_parameter("need n > k"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid_parameter("p must lie in [0,1]"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for _ in 0..GENERATION_RETRIES {
        let mut edge_set = std::collections::BTreeSet::new();
        for i in 0..n {
            for offset in 1..=k / 2 {
                let j = (i + offset) % n;
                edge_set.insert((i.min(j), i.max(j)));
            }
        }
        // Rewire the far endpoint of each original lattice edge.
        for i in 0..n {
            for offset in 1..=k / 2 {
                let j = (i + offset) % n;
                let e = (i.min(j), i.max(j));
                if p > 0.0 && rng.random::<f64>() < p && edge_set.contains(&e) {
                    let target = rng.random_range(0..n);
                    let candidate = (i.min(target), i.max(target));
                    if target != i && !edge_set.contains(&candidate) {
                        edge_set.remove(&e);
                        edge_set.insert(candidate);
                    }
                }
            }
        }
        let g = Graph::from_edges(n, edge_set);
        if let Ok(g) = g {
            if g.is_gossip_ready() {
                return Ok(g);
            }
        }
    }
    Err(Error::GenerationFailure {
        attempts: GENERATION_RETRIES,
        reason: format!("watts-strogatz n={n} k={k} p={p}"),
    })
}

/// Builds a random geometric graph: `n` points uniform on the unit square,
/// edge iff Euclidean distance <= radius. Resampled until connected and
/// non-bipartite.
pub fn build_random_geometric(n: usize, radius: f64, seed: u64) -> Result<Graph> {
    if n < 3 {
        return Err(Error::invalid_parameter("geometric graph requires n >= 3"));
    }
    if radius <= 0.0 {
        return Err(Error::invalid_parameter("radius must be positive"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for _ in 0..GENERATION_RETRIES {
        let points: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.random::<f64>(), rng.random::<f64>()))
            .collect();
        let r2 = radius * radius;
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let dx = points[i].0 - points[j].0;
                let dy = points[i].1 - points[j].1;
                if dx * dx + dy * dy <= r2 {
                    edges.push((i, j));
                }
            }
        }
        if let Ok(g) = Graph::from_edges(n, edges) {
            if g.is_gossip_ready() {
                return Ok(g);
            }
        }
    }
    Err(Error::GenerationFailure {
        attempts: GENERATION_RETRIES,
        reason: format!("random geometric n={n} radius={radius} (radius too small?)"),
    })
}

/// Probability of activating each edge, aligned with `Graph::edges`.
#[derive(Debug, Clone)]
pub struct EdgeDistribution {
    probabilities: Vec<f64>,
}

impl EdgeDistribution {
    fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.iter().any(|&p| p <= 0.0 || !p.is_finite()) {
            return Err(Error::invalid_parameter(
                "edge probabilities must be strictly positive",
            ));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid_parameter(format!(
                "edge probabilities sum to {total}, expected 1"
            )));
        }
        Ok(EdgeDistribution { probabilities })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

/// Asynchronous wake-up model: node clocks tick uniformly, each awake node
/// contacts a uniformly chosen neighbor, giving
/// p_e = (1/n) * (1/d_i + 1/d_j) for edge e = (i,j).
pub fn async_edge_distribution(g: &Graph) -> EdgeDistribution {
    let n = g.node_count() as f64;
    let probs = g
        .edges()
        .iter()
        .map(|&(i, j)| (1.0 / g.degree(i) as f64 + 1.0 / g.degree(j) as f64) / n)
        .collect();
    EdgeDistribution::new(probs).expect("async distribution sums to 1 by construction")
}

/// Uniform edge sampling, p_e = 1/|E|; the synchronous-baseline schedule.
pub fn uniform_edge_distribution(g: &Graph) -> EdgeDistribution {
    let m = g.edge_count() as f64;
    EdgeDistribution::new(vec![1.0 / m; g.edge_count()])
        .expect("uniform distribution sums to 1 by construction")
}

/// Sampling-weighted Laplacian L(P) = sum_e p_e * L_e, where L_e is the
/// elementary Laplacian of edge e.
pub fn weighted_laplacian(g: &Graph, dist: &EdgeDistribution) -> Result<DMatrix<f64>> {
    if dist.len() != g.edge_count() {
        return Err(Error::invalid_parameter(
            "distribution not aligned with graph edges",
        ));
    }
    let n = g.node_count();
    let mut l = DMatrix::zeros(n, n);
    for (&(i, j), &p) in g.edges().iter().zip(dist.probabilities()) {
        l[(i, i)] += p;
        l[(j, j)] += p;
        l[(i, j)] -= p;
        l[(j, i)] -= p;
    }
    Ok(l)
}

/// Second-smallest eigenvalue of a symmetric PSD matrix with smallest
/// eigenvalue 0; positive iff the underlying graph is connected.
pub fn spectral_gap(l: &DMatrix<f64>) -> Result<f64> {
    let n = l.nrows();
    if n != l.ncols() {
        return Err(Error::invalid_parameter("matrix must be square"));
    }
    for i in 0..n {
        for j in i + 1..n {
            if (l[(i, j)] - l[(j, i)]).abs() > 1e-12 {
                return Err(Error::invalid_parameter("matrix must be symmetric"));
            }
        }
    }
    let mut eigenvalues: Vec<f64> = l
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(eigenvalues[1])
}

/// Expected gossip matrix W_alpha = I - (1/alpha) * L(P). Swap dynamics use
/// alpha = 1, pairwise averaging alpha = 2.
pub fn expected_gossip_matrix(
    g: &Graph,
    dist: &EdgeDistribution,
    alpha: u32,
) -> Result<DMatrix<f64>> {
    if alpha != 1 && alpha != 2 {
        return Err(Error::invalid_parameter("alpha must be 1 or 2"));
    }
    let l = weighted_laplacian(g, dist)?;
    let n = g.node_count();
    Ok(DMatrix::identity(n, n) - l / alpha as f64)
}

/// Per-activation transition matrix W_alpha(t) = I - L_e / alpha for the
/// activated edge: a coordinate swap (alpha = 1) or a pairwise-averaging
/// projector (alpha = 2).
pub fn sample_gossip_matrix(edge: (usize, usize), n: usize, alpha: u32) -> Result<DMatrix<f64>> {
    let (i, j) = edge;
    if i == j {
        return Err(Error::invalid_parameter("edge endpoints must differ"));
    }
    if i >= n || j >= n {
        return Err(Error::invalid_parameter("edge endpoint out of range"));
    }
    if alpha != 1 && alpha != 2 {
        return Err(Error::invalid_parameter("alpha must be 1 or 2"));
    }
    let mut w = DMatrix::identity(n, n);
    let a = 1.0 / alpha as f64;
    w[(i, i)] -= a;
    w[(j, j)] -= a;
    w[(i, j)] += a;
    w[(j, i)] += a;
    Ok(w)
}

/// Operator norm of W_alpha - (1/n) 11^T; for symmetric input this is the
/// largest absolute eigenvalue.
pub fn centered_operator_norm(w: &DMatrix<f64>) -> f64 {
    let n = w.nrows();
    let centered = w - DMatrix::from_element(n, n, 1.0 / n as f64);
    centered
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &e| acc.max(e.abs()))
}
