//! Monte Carlo detection: mode-pair sampling, LLR statistics, and empirical ROCs.

pub mod llr;
pub mod rng;
pub mod roc;
pub mod sample;
pub mod trials;

pub use llr::{llr_gaussian, Llr};
pub use roc::{empirical_roc, wilson_interval, RocEstimate, RocEstimatePoint, Z95};
pub use sample::{pivoted_cholesky, sample_mode_pair, ModeSampler};
pub use trials::{
    check_budget, run_trials, run_trials_cs, run_trials_gaussian, run_trials_opa, with_workers, FadingModel,
    TrialBatch, BUDGET_ENV, DEFAULT_BUDGET,
};
