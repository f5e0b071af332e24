use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "lss-sense", version, about = "Trace-based spectrum sensing for large antenna arrays")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Noise-only statistic streams and their fit to the Gaussian null laws.
    NullDist(RunArgs),
    /// Operating characteristic at one SNR.
    Roc(RunArgs),
    /// Detection rate against SNR at a fixed false-alarm target.
    PdVsSnr(SweepArgs),
    /// Neyman–Pearson threshold of one detector.
    Threshold(ThresholdArgs),
    /// Cross-check every closed form against the numerical oracles.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Number of antennas.
    #[arg(long = "M")]
    pub m: Option<usize>,
    /// Number of samples per sensing period.
    #[arg(long = "L")]
    pub l: Option<usize>,
    /// Average SNR in dB (`-inf` for no signal).
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<f64>,
    /// Target false-alarm probabilities, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub pfa: Option<Vec<f64>>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `uncorrelated` or `exp:<rho>`.
    #[arg(long)]
    pub channel: Option<String>,
    /// `calibrated:<var>` or `uncalibrated:<lo>:<hi>`.
    #[arg(long)]
    pub noise: Option<String>,
    /// Detectors, comma separated (HDL, HDS, HDQ, GLR, FN, RAO).
    #[arg(long, value_delimiter = ',')]
    pub detectors: Option<Vec<String>>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file with defaults for any of the above; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// SNR points in dB, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub snr_list: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub detector: String,
    #[arg(long = "M")]
    pub m: usize,
    #[arg(long = "L")]
    pub l: usize,
    #[arg(long)]
    pub pfa: f64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Base quadrature nodes per contour.
    #[arg(long, default_value_t = 1024)]
    pub nodes: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Monte Carlo trials for the inverse-covariance check.
    #[arg(long, default_value_t = 4000)]
    pub trials: usize,
    /// Perturb one reference constant; the run must then fail.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}
