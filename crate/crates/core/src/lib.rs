//! Solvers and instance generators for the Critical Node Cut problem.

pub mod bench;
pub mod branching;
pub mod component_dp;
pub mod decomposition;
pub mod engine;
pub mod error;
pub mod families;
pub mod graph;
pub mod instance;
pub mod kernel;
pub mod oracle;
pub mod reductions;
pub mod treewidth_dp;

pub use error::{CncError, Result};
pub use graph::{Cut, Graph, PairCount, Vertex};
