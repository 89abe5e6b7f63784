//! Persistence, command line and HTTP front ends for the routing engine.

pub mod cli;
pub mod http;
pub mod run;
pub mod store;

pub use run::{run_algorithm, AlgorithmRequest, AlgorithmResult, ResultKind};
pub use store::{GraphStore, StoreError};
