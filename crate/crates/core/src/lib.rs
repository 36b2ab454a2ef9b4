//! Deterministic embedding of prescribed 2-factors into bijumbled graphs.
//!
//! The pipeline is layered: [`graph`] holds the host graph and its
//! diagnostics, [`partition`] splits vertex sets while keeping degrees,
//! [`paths`] finds the connecting paths and book cycles, [`template`] builds
//! the flexible bipartite templates, [`absorber`] assembles and fires the
//! absorbing structure, and [`embed`] composes everything into cycle factors.

pub mod config;
pub mod embed;
pub mod graph;
pub mod partition;
pub mod absorber;
pub mod paths;
pub mod template;

pub use config::{Constants, JumbledParams, Mode};
pub use graph::{Graph, VertexSet};
