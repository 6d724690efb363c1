//! Timing harness comparing the incremental decoder with its non-incremental
//! baselines. Shared by the `prs bench` command and the criterion benches.

pub mod harness;

pub use harness::{run_bench, Algorithm, AlgorithmStats, BenchConfig, Instance, PhaseTimes};
