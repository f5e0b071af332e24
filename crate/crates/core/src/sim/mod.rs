//! Seeded Monte Carlo experiments under the signal and noise models.

mod bias;
mod engine;
mod models;
mod rng;
mod roc;

pub use bias::inverse_scm_bias_check;
pub use engine::{run_h0, run_h1, run_monte_carlo, trial_statistics, ExperimentConfig, StatisticStreams};
pub use models::{sample_h0, sample_h1, signal_energy, ChannelModel, NoiseModel};
pub use rng::{Purpose, RandomStream};
pub use roc::{
    empirical_threshold, estimate_roc, ks_critical_value, null_histogram_check, pd_vs_snr_sweep, wilson_interval,
    HistogramSummary, RocCurve, RocPoint, SweepRow,
};
