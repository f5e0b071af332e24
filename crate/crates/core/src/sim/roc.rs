use super::engine::{run_h0, run_h1, ExperimentConfig, StatisticStreams};
use crate::rmt::{null_distribution, DetectorKind, NullDistribution};
use crate::{Error, Result};

const Z95: f64 = 1.959963984540054;

/// 95% Wilson score interval for `successes` out of `n`.
pub fn wilson_interval(successes: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = Z95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn exceedances(stats: &[f64], threshold: f64) -> usize {
    stats.iter().filter(|&&x| x > threshold).count()
}

/// Smallest sample value exceeded by at most `floor(pfa·n)` of the samples.
pub fn empirical_threshold(sorted: &[f64], pfa: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::EmptyStream);
    }
    if !(pfa > 0.0 && pfa < 1.0) {
        return Err(Error::Probability(pfa));
    }
    let n = sorted.len();
    let allowed = ((pfa * n as f64).floor() as usize).min(n - 1);
    Ok(sorted[n - 1 - allowed])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub pfa_target: f64,
    pub threshold: f64,
    pub pd_hat: f64,
    pub pfa_hat: f64,
    /// Half-width of the 95% Wilson interval around `pd_hat`.
    pub ci_halfwidth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    pub detector: DetectorKind,
    pub points: Vec<RocPoint>,
    pub config_digest: Option<String>,
}

/// Operating points at each target false-alarm rate.
///
/// Thresholds come from `null` when given, otherwise from the empirical
/// quantile of `h0`.
pub fn estimate_roc(
    detector: DetectorKind,
    h0: &[f64],
    h1: &[f64],
    pfa_grid: &[f64],
    null: Option<&NullDistribution>,
) -> Result<RocCurve> {
    if h0.is_empty() || h1.is_empty() {
        return Err(Error::EmptyStream);
    }
    let mut sorted = h0.to_vec();
    sorted.sort_by(f64::total_cmp);
    let points = pfa_grid
        .iter()
        .map(|&pfa| {
            let threshold = match null {
                Some(law) => law.threshold(pfa)?,
                None => empirical_threshold(&sorted, pfa)?,
            };
            let hits = exceedances(h1, threshold);
            let (lo, hi) = wilson_interval(hits, h1.len());
            Ok(RocPoint {
                pfa_target: pfa,
                threshold,
                pd_hat: hits as f64 / h1.len() as f64,
                pfa_hat: exceedances(h0, threshold) as f64 / h0.len() as f64,
                ci_halfwidth: 0.5 * (hi - lo),
            })
        })
        .collect::<Result<_>>()?;
    Ok(RocCurve { detector, points, config_digest: None })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramSummary {
    pub sample_mean: f64,
    pub sample_variance: f64,
    pub sample_skewness: f64,
    /// One-sample Kolmogorov–Smirnov distance to the reference Gaussian.
    pub ks_statistic: f64,
    pub n: usize,
}

/// Moments of `stats` and their KS distance to `null`.
pub fn null_histogram_check(stats: &[f64], null: &NullDistribution) -> Result<HistogramSummary> {
    let n = stats.len();
    if n < 100 {
        return Err(Error::invalid(format!("need at least 100 samples, got {n}")));
    }
    let nf = n as f64;
    let mean = stats.iter().sum::<f64>() / nf;
    let (mut m2, mut m3) = (0.0, 0.0);
    for x in stats {
        let d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    let variance = m2 / (nf - 1.0);
    let biased = m2 / nf;
    let skewness = if biased > 0.0 { (m3 / nf) / biased.powf(1.5) } else { 0.0 };

    let mut sorted = stats.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut ks = 0.0_f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = null.cdf(x);
        ks = ks.max((i + 1) as f64 / nf - f).max(f - i as f64 / nf);
    }
    Ok(HistogramSummary {
        sample_mean: mean,
        sample_variance: variance,
        sample_skewness: skewness,
        ks_statistic: ks,
        n,
    })
}

/// Asymptotic critical value of the one-sample KS statistic at level `alpha`.
pub fn ks_critical_value(n: usize, alpha: f64) -> f64 {
    (-(0.5 * alpha).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub detector: DetectorKind,
    pub threshold: f64,
    pub pd_hat: f64,
    pub ci_halfwidth: f64,
}

/// Per-detector thresholds at `pfa`: closed form for the trace detectors
/// under calibrated noise, else the empirical noise-only quantile.
fn thresholds(cfg: &ExperimentConfig, pfa: f64, workers: usize) -> Result<Vec<f64>> {
    let closed = cfg.noise.known_variance().is_some();
    let needs_h0 = !closed || cfg.detectors.iter().any(|k| !k.has_closed_form_null());
    let h0: Option<StatisticStreams> = if needs_h0 { Some(run_h0(cfg, workers)?) } else { None };
    cfg.detectors
        .iter()
        .enumerate()
        .map(|(i, &kind)| {
            if closed && kind.has_closed_form_null() {
                null_distribution(kind, cfg.m, cfg.l)?.threshold(pfa)
            } else {
                let mut sorted = h0.as_ref().map(|s| s.values[i].clone()).unwrap_or_default();
                sorted.sort_by(f64::total_cmp);
                empirical_threshold(&sorted, pfa)
            }
        })
        .collect()
}

/// Detection rate at a fixed false-alarm target across SNR values. All SNR
/// points share the same per-trial draws.
pub fn pd_vs_snr_sweep(cfg: &ExperimentConfig, snr_list: &[f64], pfa: f64, workers: usize) -> Result<Vec<SweepRow>> {
    if snr_list.is_empty() {
        return Err(Error::invalid("SNR list is empty"));
    }
    cfg.validate()?;
    let taus = thresholds(cfg, pfa, workers)?;
    let mut rows = Vec::with_capacity(snr_list.len() * cfg.detectors.len());
    for &snr in snr_list {
        let h1 = run_h1(cfg, snr, workers)?;
        for (i, &kind) in cfg.detectors.iter().enumerate() {
            let hits = exceedances(&h1.values[i], taus[i]);
            let n = h1.values[i].len();
            let (lo, hi) = wilson_interval(hits, n);
            rows.push(SweepRow {
                snr_db: snr,
                detector: kind,
                threshold: taus[i],
                pd_hat: hits as f64 / n as f64,
                ci_halfwidth: 0.5 * (hi - lo),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Purpose;
    use crate::sim::RandomStream;

    #[test]
    fn wilson_examples() {
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.4038).abs() < 1e-4 && (hi - 0.5962).abs() < 1e-4);
        let (lo, hi) = wilson_interval(0, 10);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.2775).abs() < 1e-4);
        let (lo, hi) = wilson_interval(10, 10);
        assert!((hi - 1.0).abs() < 1e-12 && lo < 1.0);
    }

    #[test]
    fn empirical_quantile_rule() {
        let sorted: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(empirical_threshold(&sorted, 0.1).unwrap(), 90.0);
        assert_eq!(empirical_threshold(&sorted, 0.005).unwrap(), 100.0);
        assert!(empirical_threshold(&[], 0.1).is_err());
    }

    #[test]
    fn chance_line_and_separation() {
        let h0: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        let roc = estimate_roc(DetectorKind::Hdl, &h0, &h0, &[0.01, 0.1, 0.5], None).unwrap();
        for p in &roc.points {
            assert_eq!(p.pd_hat, p.pfa_hat);
            assert!((p.pfa_hat - p.pfa_target).abs() < 1e-12);
        }
        let h1 = vec![5000.0; 10];
        let roc = estimate_roc(DetectorKind::Hdl, &h0, &h1, &[0.01, 0.1], None).unwrap();
        assert!(roc.points.iter().all(|p| p.pd_hat == 1.0));
        assert!(estimate_roc(DetectorKind::Hdl, &[], &h1, &[0.1], None).is_err());
    }

    #[test]
    fn closed_form_thresholds_are_used_when_given() {
        let null = null_distribution(DetectorKind::Hdl, 70, 30).unwrap();
        let roc = estimate_roc(DetectorKind::Hdl, &[70.0], &[80.0], &[0.5], Some(&null)).unwrap();
        assert_eq!(roc.points[0].threshold, 70.0);
        assert_eq!(roc.points[0].pd_hat, 1.0);
        assert_eq!(roc.points[0].pfa_hat, 0.0);
    }

    #[test]
    fn ks_of_matching_gaussian_is_small() {
        let null = NullDistribution { detector: DetectorKind::Hdl, mean: 3.0, variance: 4.0 };
        let mut rejections = 0;
        for rep in 0..40 {
            let mut s = RandomStream::for_trial(99, rep, Purpose::NoiseOnly);
            let stats: Vec<f64> = (0..2000).map(|_| 3.0 + 2.0 * s.standard_normal()).collect();
            let h = null_histogram_check(&stats, &null).unwrap();
            assert!(h.ks_statistic >= 0.0 && h.ks_statistic <= 1.0);
            if h.ks_statistic > ks_critical_value(2000, 0.05) {
                rejections += 1;
            }
        }
        // About 2 of 40 expected; 8 or more would be a 0.1% event.
        assert!(rejections < 8, "{rejections}");
        assert!(null_histogram_check(&[1.0; 10], &null).is_err());
    }

    #[test]
    fn ks_critical_values() {
        assert!((ks_critical_value(1, 0.05) - 1.3581).abs() < 1e-3);
        assert!((ks_critical_value(1, 0.01) - 1.6276).abs() < 1e-3);
    }
}
