//! Exact two-terminal reliability of undirected networks with independent arc
//! failures.
//!
//! Four interchangeable backends compute the probability that node 1 reaches
//! node n: an exhaustive oracle, the binary-addition tree walk (BAT), a pruned
//! walk bounded by the first connected and last disconnected vectors, and a
//! staged engine that splits the network along minimum cuts and folds
//! per-stage connection tables together.

pub mod bat;
pub mod budget;
mod connectivity;
pub mod counters;
pub mod decomposition;
pub mod error;
pub mod generate;
pub mod network;
pub mod paths;
pub mod quick_bat;
pub mod run;
pub mod stm;
pub mod vector;
pub mod weights;

pub use bat::{is_connected, reliability_bat, reliability_oracle, vector_probability};
pub use budget::Deadline;
pub use counters::{Counters, Outcome};
pub use decomposition::{decompose, Decomposition, Stage};
pub use error::{Error, NetworkError, Result};
pub use generate::{Family, GeneratorSpec};
pub use network::{parse_network, Arc, Network};
pub use quick_bat::{first_connected, last_disconnected, reliability_quick_bat};
pub use run::{run, Backend, RunOptions, RunResult};
pub use stm::{reliability_qb2, SourceTargetMatrix, WeightedStmSet};
pub use vector::ArcStateVector;
