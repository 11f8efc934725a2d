//! Simulator, experiment harness and file formats for sorting with rank scales.
//!
//! The algorithms live in [`scales_core`], re-exported here as [`core`].

pub use scales_core as core;

pub mod error;
pub mod harness;
pub mod io;
pub mod rng;

pub use error::HarnessError;
pub use harness::{
    bench_sweep, consistent_orders, consistent_permutations, run_experiment, verify_exhaustive,
    write_csv, Algorithm, AmbiguityClass, ConsistencyReport, ExperimentReport, OrderSource,
    VerifySummary,
};
