//! The simulation subcommands and `threshold`.

use std::io::Write;

use lss_sense::rmt::{null_distribution, DetectorKind};
use lss_sense::sim::{estimate_roc, null_histogram_check, pd_vs_snr_sweep, run_h0, run_monte_carlo, ExperimentConfig};

use crate::args::{RunArgs, SweepArgs, ThresholdArgs};
use crate::error::{CliError, CliResult};
use crate::format::{fmt_g, Csv};
use crate::manifest::OutputDir;
use crate::settings::{Defaults, Settings};

/// Default SNR points for `pd-vs-snr`, in dB.
pub const DEFAULT_SNR_LIST: [f64; 11] = [-20.0, -18.0, -16.0, -14.0, -12.0, -10.0, -8.0, -6.0, -4.0, -2.0, 0.0];

fn require_closed_form(kind: DetectorKind) -> CliResult<()> {
    if kind.has_closed_form_null() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{kind} has no closed-form null distribution; use HDL, HDS or HDQ")))
    }
}

pub fn null_dist(args: &RunArgs, workers: usize) -> CliResult<()> {
    let settings = Settings::resolve(
        "null-dist",
        args,
        None,
        Defaults { pfa: ExperimentConfig::default_pfa_grid(), snr_list: Vec::new() },
    )?;
    for &kind in &settings.detectors {
        require_closed_form(kind)?;
    }
    let cfg = settings.experiment();
    let mut out = OutputDir::create(&settings.out)?;
    let h0 = run_h0(&cfg, workers)?;
    let mut summary =
        Csv::new(&["detector", "M", "L", "theory_mean", "theory_var", "sample_mean", "sample_var", "ks_stat", "n"]);
    for &kind in &settings.detectors {
        let stats = h0.get(kind).expect("stream for every requested detector");
        let mut csv = Csv::new(&["trial", "statistic"]);
        for (t, x) in stats.iter().enumerate() {
            csv.row(&[t.to_string(), fmt_g(*x)]);
        }
        out.write(&format!("nulldist_{}.csv", kind.label().to_ascii_lowercase()), &csv.into_string())?;

        let law = null_distribution(kind, cfg.m, cfg.l)?;
        let (mean, var, ks) = if stats.len() >= 100 {
            let h = null_histogram_check(stats, &law)?;
            (h.sample_mean, h.sample_variance, fmt_g(h.ks_statistic))
        } else {
            // Too few trials for a KS distance.
            let n = stats.len() as f64;
            let mean = stats.iter().sum::<f64>() / n;
            let var =
                if stats.len() > 1 { stats.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
            (mean, var, "nan".to_string())
        };
        summary.row(&[
            kind.label().to_string(),
            cfg.m.to_string(),
            cfg.l.to_string(),
            fmt_g(law.mean),
            fmt_g(law.variance),
            fmt_g(mean),
            fmt_g(var),
            ks,
            stats.len().to_string(),
        ]);
    }
    out.write("nulldist_summary.csv", &summary.into_string())?;
    out.finish(&settings, workers)?;
    Ok(())
}

pub fn roc(args: &RunArgs, workers: usize) -> CliResult<()> {
    let settings = Settings::resolve(
        "roc",
        args,
        None,
        Defaults { pfa: ExperimentConfig::default_pfa_grid(), snr_list: Vec::new() },
    )?;
    let cfg = settings.experiment();
    let mut out = OutputDir::create(&settings.out)?;
    let (h0, h1) = run_monte_carlo(&cfg, workers)?;
    let closed = cfg.noise.known_variance().is_some();
    let mut csv =
        Csv::new(&["detector", "pfa_target", "threshold", "pd_hat", "pfa_hat", "ci_halfwidth", "trials", "seed"]);
    for &kind in &cfg.detectors {
        let law =
            if closed && kind.has_closed_form_null() { Some(null_distribution(kind, cfg.m, cfg.l)?) } else { None };
        let curve =
            estimate_roc(kind, h0.get(kind).unwrap_or(&[]), h1.get(kind).unwrap_or(&[]), &cfg.pfa_grid, law.as_ref())?;
        for p in &curve.points {
            csv.row(&[
                kind.label().to_string(),
                fmt_g(p.pfa_target),
                fmt_g(p.threshold),
                fmt_g(p.pd_hat),
                fmt_g(p.pfa_hat),
                fmt_g(p.ci_halfwidth),
                cfg.trials.to_string(),
                cfg.seed.to_string(),
            ]);
        }
    }
    out.write("roc.csv", &csv.into_string())?;
    out.finish(&settings, workers)?;
    Ok(())
}

pub fn pd_vs_snr(args: &SweepArgs, workers: usize) -> CliResult<()> {
    let settings = Settings::resolve(
        "pd-vs-snr",
        &args.run,
        args.snr_list.as_deref(),
        Defaults { pfa: vec![0.01], snr_list: DEFAULT_SNR_LIST.to_vec() },
    )?;
    if settings.snr_list.is_empty() {
        return Err(CliError::Usage("SNR list is empty".into()));
    }
    let pfa = match settings.pfa.as_slice() {
        [p] => *p,
        _ => return Err(CliError::Usage("pd-vs-snr takes exactly one --pfa value".into())),
    };
    let cfg = settings.experiment();
    let mut out = OutputDir::create(&settings.out)?;
    let rows = pd_vs_snr_sweep(&cfg, &settings.snr_list, pfa, workers)?;
    let mut csv = Csv::new(&["detector", "snr_db", "pd_hat", "ci_halfwidth"]);
    // Group by detector so each curve is contiguous.
    for &kind in &cfg.detectors {
        for r in rows.iter().filter(|r| r.detector == kind) {
            csv.row(&[kind.label().to_string(), fmt_g(r.snr_db), fmt_g(r.pd_hat), fmt_g(r.ci_halfwidth)]);
        }
    }
    out.write("pd_vs_snr.csv", &csv.into_string())?;
    out.finish(&settings, workers)?;
    Ok(())
}

pub fn threshold(args: &ThresholdArgs, stdout: &mut impl Write) -> CliResult<()> {
    let kind: DetectorKind = args.detector.parse().map_err(|e: lss_sense::Error| CliError::Usage(e.to_string()))?;
    require_closed_form(kind)?;
    let law = null_distribution(kind, args.m, args.l)?;
    let tau = law.threshold(args.pfa)?;
    let mut csv = Csv::new(&["detector", "M", "L", "pfa", "mean", "variance", "threshold"]);
    csv.row(&[
        kind.label().to_string(),
        args.m.to_string(),
        args.l.to_string(),
        fmt_g(args.pfa),
        fmt_g(law.mean),
        fmt_g(law.variance),
        fmt_g(tau),
    ]);
    stdout.write_all(csv.into_string().as_bytes()).map_err(|e| CliError::Io(e.to_string()))
}
