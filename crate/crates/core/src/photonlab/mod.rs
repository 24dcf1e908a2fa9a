//! Simulated experiment: noisy statistics, Poissonian counts, bootstrap
//! errors and the per-state results table.
//!
//! Seeding: every state gets `derive_seed(master, label)`. Its ChaCha8
//! stream 0 draws the counts, stream `k + 1` drives bootstrap resample `k`,
//! and optics jitter uses `derive_seed(state_seed, "optics")`. Output is
//! therefore independent of state order and thread count.

mod bootstrap;
mod calibrate;
mod counts;
mod experiment;
mod noise;
mod report;

pub use bootstrap::{
    bootstrap_binary_entropy, bootstrap_sigma, first_order_sigma_h, mean_and_std, resample_rng, BinaryBootstrap,
    BootstrapSummary,
};
pub use calibrate::{calibrate_depolarizing, calibration_sweep, CalibrationPoint, TARGET_MEAN_RHS};
pub use counts::{
    empirical_distribution, evaluate_counts, evaluate_statistics, poisson, simulate_counts, CountRecord, Evaluation,
    ShotPlan, DEFAULT_RESAMPLES, DEFAULT_SHOTS, MIN_RESAMPLES,
};
pub use experiment::{
    derive_seed, noisy_statistics, run_state, run_states, run_table, ExperimentReport, Mode, Provenance, ReportRow,
};
pub use noise::{apply_depolarizing, depolarize_outcomes, NoiseModel, DEFAULT_DEPOLARIZING};
pub use report::CSV_COLUMNS;
