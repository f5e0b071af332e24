use num_complex::Complex64;

use super::RandomStream;
use crate::detectors::ObservationMatrix;
use crate::{Error, Result};

/// Spatial covariance of the primary user's channel vector, normalised so
/// that `tr Σ_H = M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelModel {
    /// `Σ_H = I`
    Uncorrelated,
    /// `[Σ_H]_ij = ρ^|i−j|`
    ExponentialCorrelated { rho: f64 },
}

impl ChannelModel {
    pub const DEFAULT_RHO: f64 = 0.5;

    pub fn validate(&self) -> Result<()> {
        match *self {
            ChannelModel::Uncorrelated => Ok(()),
            ChannelModel::ExponentialCorrelated { rho } if (0.0..1.0).contains(&rho) => Ok(()),
            ChannelModel::ExponentialCorrelated { rho } => {
                Err(Error::invalid(format!("correlation coefficient must lie in [0, 1), got {rho}")))
            }
        }
    }

    /// `Σ_H` row-major. Both models have a unit diagonal, so the trace is `M`.
    pub fn covariance(&self, m: usize) -> Vec<f64> {
        let rho = match *self {
            ChannelModel::Uncorrelated => 0.0,
            ChannelModel::ExponentialCorrelated { rho } => rho,
        };
        let mut out = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                out[i * m + j] = if i == j { 1.0 } else { rho.powi(i.abs_diff(j) as i32) };
            }
        }
        out
    }

    /// One draw of `h ~ CN(0, Σ_H)`.
    ///
    /// The exponential model is sampled as a stationary AR(1) sequence
    /// across the array, which has exactly the covariance `ρ^|i−j|`.
    pub fn sample(&self, m: usize, stream: &mut RandomStream) -> Vec<Complex64> {
        let mut h: Vec<Complex64> = (0..m).map(|_| stream.complex_normal(1.0)).collect();
        if let ChannelModel::ExponentialCorrelated { rho } = *self {
            let innovation = (1.0 - rho * rho).sqrt();
            for i in 1..m {
                h[i] = h[i - 1] * rho + h[i] * innovation;
            }
        }
        h
    }
}

/// Diagonal noise covariance `Σ_N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// Every antenna has the same, known variance.
    Calibrated { variance: f64 },
    /// Per-antenna variances drawn uniformly on `[lo, hi]`, fresh for every trial.
    Uncalibrated { lo: f64, hi: f64 },
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseModel::Calibrated { variance } if variance > 0.0 && variance.is_finite() => Ok(()),
            NoiseModel::Calibrated { variance } => {
                Err(Error::invalid(format!("noise variance must be positive, got {variance}")))
            }
            NoiseModel::Uncalibrated { lo, hi } if lo > 0.0 && lo <= hi && hi.is_finite() => Ok(()),
            NoiseModel::Uncalibrated { lo, hi } => {
                Err(Error::invalid(format!("uncalibrated noise needs 0 < lo <= hi, got [{lo}, {hi}]")))
            }
        }
    }

    /// The common variance when the receiver knows it.
    pub fn known_variance(&self) -> Option<f64> {
        match *self {
            NoiseModel::Calibrated { variance } => Some(variance),
            NoiseModel::Uncalibrated { .. } => None,
        }
    }

    /// Per-antenna variances for one trial.
    pub fn draw_levels(&self, m: usize, stream: &mut RandomStream) -> Vec<f64> {
        match *self {
            NoiseModel::Calibrated { variance } => vec![variance; m],
            NoiseModel::Uncalibrated { lo, hi } => (0..m).map(|_| stream.uniform(lo, hi)).collect(),
        }
    }
}

/// Per-sample signal energy `E_s` giving average SNR `snr_db` when
/// `SNR = E_s·tr Σ_H / tr Σ_N` and `tr Σ_H = M`. `-∞` dB means no signal.
pub fn signal_energy(snr_db: f64, noise_trace: f64, m: usize) -> f64 {
    if snr_db == f64::NEG_INFINITY {
        return 0.0;
    }
    10f64.powf(snr_db / 10.0) * noise_trace / m as f64
}

fn add_noise(data: &mut [Complex64], l: usize, levels: &[f64], stream: &mut RandomStream) {
    for (i, &var) in levels.iter().enumerate() {
        for y in &mut data[i * l..(i + 1) * l] {
            *y += stream.complex_normal(var);
        }
    }
}

fn check_dims(m: usize, l: usize) -> Result<()> {
    if m == 0 || l == 0 {
        return Err(Error::invalid(format!("dimensions must be positive, got M={m}, L={l}")));
    }
    Ok(())
}

/// Noise-only block: column `ℓ` is `CN(0, Σ_N)`.
pub fn sample_h0(m: usize, l: usize, noise: &NoiseModel, stream: &mut RandomStream) -> Result<ObservationMatrix> {
    check_dims(m, l)?;
    noise.validate()?;
    let levels = noise.draw_levels(m, stream);
    let mut data = vec![Complex64::new(0.0, 0.0); m * l];
    add_noise(&mut data, l, &levels, stream);
    ObservationMatrix::new(m, l, data)
}

/// Signal-present block `y_ℓ = h·s_ℓ + n_ℓ` with one channel draw held over
/// all `L` samples.
///
/// The number of draws taken from `stream` does not depend on `snr_db`, so
/// a sweep over SNR with the same stream reuses the same channel, symbols
/// and noise (common random numbers).
pub fn sample_h1(
    m: usize,
    l: usize,
    snr_db: f64,
    channel: &ChannelModel,
    noise: &NoiseModel,
    stream: &mut RandomStream,
) -> Result<ObservationMatrix> {
    check_dims(m, l)?;
    channel.validate()?;
    noise.validate()?;
    if snr_db.is_nan() || snr_db == f64::INFINITY {
        return Err(Error::invalid(format!("SNR must be finite or -inf dB, got {snr_db}")));
    }
    let levels = noise.draw_levels(m, stream);
    let energy = signal_energy(snr_db, levels.iter().sum(), m);
    let h = channel.sample(m, stream);
    let amplitude = energy.sqrt();
    let s: Vec<Complex64> = (0..l).map(|_| stream.complex_normal(1.0) * amplitude).collect();
    let mut data = Vec::with_capacity(m * l);
    for hi in &h {
        data.extend(s.iter().map(|sj| hi * sj));
    }
    add_noise(&mut data, l, &levels, stream);
    ObservationMatrix::new(m, l, data)
}
