//! Stream generation, oracle-checked replay and benchmarking for `dyngraph`.

pub mod adversary;
pub mod bench;
pub mod gen;
pub mod replay;

pub use replay::{run, Algo, Checkpoint, RunConfig, RunError, RunReport};
