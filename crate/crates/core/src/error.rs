use thiserror::Error;

/// Error type shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter violates a precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Input data violates an assumption (e.g. duplicate values in
    /// no-ties mode, non-positive trace values for a log-log fit).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Random graph generation exhausted its retry budget without
    /// producing a connected, non-bipartite graph.
    #[error("graph generation failed after {attempts} attempts: {reason}")]
    GenerationFailure { attempts: usize, reason: String },

    /// An estimator produced a non-finite quantity during a run.
    #[error("estimator failure at node {node}: {reason}")]
    EstimatorFailure { node: usize, reason: String },

    /// An estimator failed inside the simulation loop; carries the tick.
    #[error("run failed at tick {tick}: {source}")]
    RunFailure {
        tick: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn invalid_parameter(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn invalid_input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
