//! SAT-based safety model checking for AIGER circuits.
//!
//! The checker implements IC3/PDR with selectable cube-generalization
//! strategies, self-certifies its verdicts (inductive-invariant checking for
//! safe results, trace replay for unsafe ones), and ships an explicit-state
//! oracle plus a small benchmarking harness.

pub mod aiger;
pub mod bench;
pub mod certify;
pub mod config;
pub mod engine;
pub mod frames;
pub mod mic;
pub mod logic;
pub mod oracle;
pub mod sat;
pub mod stats;
pub mod tracelog;
pub mod transys;
