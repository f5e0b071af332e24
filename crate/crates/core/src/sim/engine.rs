use rayon::prelude::*;

use super::models::{sample_h0, sample_h1, ChannelModel, NoiseModel};
use super::rng::{Purpose, RandomStream};
use crate::detectors::{compute_scm_summary, decision_statistic, statistic_from_spectrum, ObservationMatrix};
use crate::oracle::hermitian_eigenvalues;
use crate::rmt::DetectorKind;
use crate::{Error, Result};

/// One Monte Carlo experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub m: usize,
    pub l: usize,
    /// Average SNR in dB; `-inf` turns the signal off.
    pub snr_db: f64,
    pub channel: ChannelModel,
    pub noise: NoiseModel,
    pub trials: usize,
    pub seed: u64,
    pub detectors: Vec<DetectorKind>,
    pub pfa_grid: Vec<f64>,
}

impl ExperimentConfig {
    /// Uncorrelated channel, unit calibrated noise, the three trace detectors
    /// and the default false-alarm grid.
    pub fn new(m: usize, l: usize) -> Self {
        Self {
            m,
            l,
            snr_db: -10.0,
            channel: ChannelModel::Uncorrelated,
            noise: NoiseModel::Calibrated { variance: 1.0 },
            trials: 10_000,
            seed: 0,
            detectors: DetectorKind::HIGH_DIMENSIONAL.to_vec(),
            pfa_grid: Self::default_pfa_grid(),
        }
    }

    /// 20 log-spaced points from 1e-3 to 0.5.
    pub fn default_pfa_grid() -> Vec<f64> {
        let (lo, hi) = (1e-3_f64.ln(), 0.5_f64.ln());
        (0..20).map(|i| (lo + (hi - lo) * i as f64 / 19.0).exp()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.l == 0 {
            return Err(Error::invalid(format!("dimensions must be positive, got M={}, L={}", self.m, self.l)));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.snr_db.is_nan() || self.snr_db == f64::INFINITY {
            return Err(Error::invalid(format!("SNR must be finite or -inf dB, got {}", self.snr_db)));
        }
        if self.detectors.is_empty() {
            return Err(Error::invalid("no detectors selected"));
        }
        if let Some(p) = self.pfa_grid.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
            return Err(Error::Probability(*p));
        }
        if self.pfa_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("false-alarm grid must be strictly increasing"));
        }
        self.channel.validate()?;
        self.noise.validate()
    }
}

/// Statistics per detector, each stream in trial order.
#[derive(Debug, Clone, PartialEq)]
pub struct StatisticStreams {
    pub detectors: Vec<DetectorKind>,
    pub values: Vec<Vec<f64>>,
}

impl StatisticStreams {
    pub fn get(&self, kind: DetectorKind) -> Option<&[f64]> {
        self.detectors.iter().position(|k| *k == kind).map(|i| self.values[i].as_slice())
    }

    pub fn trials(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }
}

/// Statistics of every requested detector for one observation.
///
/// With calibrated noise the data are brought to unit noise power first, so
/// the closed-form null laws apply. Uncalibrated data are used as received.
pub fn trial_statistics(y: &ObservationMatrix, detectors: &[DetectorKind], noise: &NoiseModel) -> Result<Vec<f64>> {
    let scale = noise.known_variance().unwrap_or(1.0);
    let summary = compute_scm_summary(y).normalized_by_noise(scale);
    let mut spectrum = None;
    detectors
        .iter()
        .map(|&kind| match kind {
            DetectorKind::Hdl | DetectorKind::Hds | DetectorKind::Hdq => decision_statistic(kind, &summary),
            DetectorKind::BaselineFn => Ok(summary.trace_r2 / summary.m as f64),
            DetectorKind::BaselineGlr | DetectorKind::BaselineRao => {
                if spectrum.is_none() {
                    let (n, gram) = y.compact_scm();
                    let eig = hermitian_eigenvalues(n, &gram)?.into_psd()?.padded_with_zeros(y.m());
                    spectrum = Some(eig.eigenvalues().iter().map(|x| x / scale).collect::<Vec<_>>());
                }
                statistic_from_spectrum(kind, spectrum.as_deref().unwrap_or_default(), y.l())
            }
        })
        .collect()
}

fn run_trials(
    cfg: &ExperimentConfig,
    workers: usize,
    draw: impl Fn(u64) -> Result<ObservationMatrix> + Sync,
) -> Result<StatisticStreams> {
    cfg.validate()?;
    if workers == 0 {
        return Err(Error::invalid("worker count must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Resource(format!("cannot start {workers} workers: {e}")))?;
    let rows: Vec<Vec<f64>> = pool.install(|| {
        (0..cfg.trials as u64)
            .into_par_iter()
            .map(|t| trial_statistics(&draw(t)?, &cfg.detectors, &cfg.noise))
            .collect::<Result<_>>()
    })?;
    let mut values = vec![Vec::with_capacity(cfg.trials); cfg.detectors.len()];
    for row in rows {
        for (stream, v) in values.iter_mut().zip(row) {
            stream.push(v);
        }
    }
    Ok(StatisticStreams { detectors: cfg.detectors.clone(), values })
}

/// Noise-only statistics; trial `t` draws from substream `(seed, t)`.
pub fn run_h0(cfg: &ExperimentConfig, workers: usize) -> Result<StatisticStreams> {
    run_trials(cfg, workers, |t| {
        let mut stream = RandomStream::for_trial(cfg.seed, t, Purpose::NoiseOnly);
        sample_h0(cfg.m, cfg.l, &cfg.noise, &mut stream)
    })
}

/// Signal-present statistics at `snr_db`. Different SNRs reuse the same
/// per-trial draws.
pub fn run_h1(cfg: &ExperimentConfig, snr_db: f64, workers: usize) -> Result<StatisticStreams> {
    run_trials(cfg, workers, |t| {
        let mut stream = RandomStream::for_trial(cfg.seed, t, Purpose::SignalPresent);
        sample_h1(cfg.m, cfg.l, snr_db, &cfg.channel, &cfg.noise, &mut stream)
    })
}

/// Both hypotheses at the configured SNR. Results are identical for any
/// worker count.
pub fn run_monte_carlo(cfg: &ExperimentConfig, workers: usize) -> Result<(StatisticStreams, StatisticStreams)> {
    Ok((run_h0(cfg, workers)?, run_h1(cfg, cfg.snr_db, workers)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(6, 10);
        cfg.trials = 50;
        cfg.seed = 17;
        cfg.detectors = DetectorKind::ALL.to_vec();
        cfg
    }

    #[test]
    fn default_grid() {
        let g = ExperimentConfig::default_pfa_grid();
        assert_eq!(g.len(), 20);
        assert!((g[0] - 1e-3).abs() < 1e-15 && (g[19] - 0.5).abs() < 1e-14);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn validation() {
        let mut cfg = small();
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = small();
        cfg.pfa_grid = vec![0.1, 0.1];
        assert!(cfg.validate().is_err());
        let mut cfg = small();
        cfg.pfa_grid = vec![0.0];
        assert!(cfg.validate().is_err());
        assert!(run_h0(&small(), 0).is_err());
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let cfg = small();
        let one = run_monte_carlo(&cfg, 1).unwrap();
        let four = run_monte_carlo(&cfg, 4).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.0.trials(), 50);
        assert_eq!(one.0.values.len(), DetectorKind::ALL.len());
    }

    #[test]
    fn rao_baseline_equals_trace_quadratic() {
        let streams = run_h0(&small(), 1).unwrap();
        let rao = streams.get(DetectorKind::BaselineRao).unwrap();
        let hdq = streams.get(DetectorKind::Hdq).unwrap();
        for (a, b) in rao.iter().zip(hdq) {
            assert!((a - b).abs() < 1e-9 * b.abs().max(1.0));
        }
    }

    #[test]
    fn calibrated_variance_is_normalised_away() {
        let mut cfg = small();
        cfg.detectors = DetectorKind::HIGH_DIMENSIONAL.to_vec();
        let unit = run_h0(&cfg, 1).unwrap();
        cfg.noise = NoiseModel::Calibrated { variance: 4.0 };
        let scaled = run_h0(&cfg, 1).unwrap();
        for (a, b) in unit.values.iter().flatten().zip(scaled.values.iter().flatten()) {
            assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
        }
    }
}
