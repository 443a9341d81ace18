//! Group-free group fairness over social networks.
//!
//! The crate measures between-group inequality of per-node outcomes without
//! group labels: a similarity kernel inferred from network homophily
//! replaces the partition in a decomposable inequality index. On top of the
//! measure sit three fairness-constrained solvers: classification label
//! post-processing, greedy seeding for information access, and
//! exposure-fair ranking via Frank-Wolfe.

pub mod classify;
pub mod error;
pub mod graph;
pub mod inequality;
pub mod influence;
pub mod kernel;
pub mod ranking;

pub use error::{Error, Result};
pub use graph::Graph;
pub use inequality::{EntropyConfig, Kernel, Variant};
