//! Asynchronous gossip algorithms for decentralized rank-based statistics.
//!
//! Nodes of a connected, non-bipartite communication graph each hold one
//! real-valued observation. Randomly activated edges let node pairs exchange
//! auxiliary values and update local estimates, so that every node learns:
//!
//! - its observation's rank in the global dataset ([`gorank`]),
//! - a rank-based statistic such as the Wilcoxon rank-sum statistic
//!   ([`rankstat`]),
//! - a robust trimmed mean of the whole dataset ([`gotrim`]).
//!
//! The [`engine`] module drives the edge-activation process and records
//! error traces; [`graph`] builds topologies and their spectral quantities;
//! [`data`] generates seeded experiment datasets; [`metrics`] holds the
//! error definitions and rate diagnostics.

pub mod data;
pub mod engine;
mod error;
pub mod gorank;
pub mod gotrim;
pub mod graph;
pub mod metrics;
pub mod normal;
pub mod rankstat;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
