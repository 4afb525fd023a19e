//! Verification harness: parameter sweeps, caching and reports.

pub mod cache;
pub mod engine;
pub mod sweep;

pub use cache::Cache;
pub use engine::Engine;
pub use sweep::{enumerate_points, run_point, sweep, SweepConfig, SweepOutcome, VerificationRecord};
