//! Fully dynamic graph algorithms with constant update time.
//!
//! * [`coloring`] keeps a proper (Δ+1)-vertex coloring of a Δ-bounded graph
//!   under edge insertions and deletions, using random vertex ranks to bound
//!   the length and cost of recoloring cascades.
//! * [`cc_exact`] and [`cc_random`] estimate the number of connected
//!   components with additive error proportional to the number of
//!   non-isolated vertices.
//! * [`msf`] combines per-threshold component counts into a (1+ε)-approximate
//!   minimum spanning forest weight.
//! * [`oracle`] holds brute-force reference computations for all of the above.

pub mod cc_exact;
pub mod cc_random;
pub mod coloring;
pub mod error;
pub mod graph;
pub mod msf;
pub mod oracle;
pub mod sampler;
pub mod stream;

pub use error::{Error, Result};
pub use graph::{BfsOutcome, DynamicGraph, LimitedBfs, UpdateOp, VertexId};
