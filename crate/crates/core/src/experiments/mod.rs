//! Monte Carlo harness: declarative configs, parallel deterministic
//! replications, streaming summaries, checks and on-disk artifacts.

mod config;
mod output;
mod plots;
mod runner;
mod stats;
mod summary;

pub use config::{ExperimentConfig, ExperimentKind, Variant, WindowShape};
pub use output::{
    default_run_dir, load_records, read_records, records_header, write_outputs, write_records, write_summary,
    RunManifest, CHECKS_FILE, CONFIG_FILE, MANIFEST_FILE, PLOTS_DIR, RECORDS_FILE, SUMMARY_FILE, SUMMARY_HEADER,
    TIMINGS_FILE,
};
pub use runner::{
    extra_columns, replication_seed, run_clt, run_concentration, run_coupling, run_dpp_concentration,
    run_duality_audit, run_experiment, run_simplex_law, run_strong_law, run_variance_scaling, ExperimentOutput,
    ReplicationRecord, Timing,
};
pub use stats::{
    calibrate_bands, ks_critical_1pct, ks_standardized, moments_of, Calibration, Moments, NormalityBands,
};
pub use summary::{derive_checks, envelope_shape, summarize, tail_threshold, Check, SummaryRow};
