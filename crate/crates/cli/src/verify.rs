//! One-shot cross-check of the closed forms against the numerical oracles.

use std::io::Write;

use num_complex::Complex64;

use lss_sense::detectors::{compute_scm_summary, t_hdl, t_hdq, t_hds, ObservationMatrix};
use lss_sense::oracle::{
    companion_stieltjes_numeric, hermitian_eigenvalues, lss_contour, mean_correction_numeric, mp_mass_numeric,
    mp_moment_numeric, Contour, LssFunction, Spectrum,
};
use lss_sense::rmt::{
    mp_moment, np_threshold, null_moments, q_function, q_inverse, sensitivity_partials, stieltjes_inverse, AspectRatio,
    DetectorKind, MpLaw,
};
use lss_sense::sim::{inverse_scm_bias_check, sample_h0, NoiseModel, Purpose, RandomStream};

use crate::args::VerifyArgs;
use crate::error::{CliError, CliResult};
use crate::format::fmt_g;

const ASPECT_RATIOS: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 3.0];
const HD: [DetectorKind; 3] = DetectorKind::HIGH_DIMENSIONAL;

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, run: impl FnOnce() -> lss_sense::Result<(bool, String)>) -> Check {
    match run() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn observation(seed: u64, trial: u64, m: usize, l: usize) -> lss_sense::Result<ObservationMatrix> {
    sample_h0(
        m,
        l,
        &NoiseModel::Calibrated { variance: 1.0 },
        &mut RandomStream::for_trial(seed, trial, Purpose::Spectrum),
    )
}

/// Random sizes with `M, L ≤ 12`.
fn small_dims(trial: u64) -> (usize, usize) {
    (1 + (trial * 7 % 12) as usize, 1 + (trial * 5 % 12) as usize)
}

fn spectrum(y: &ObservationMatrix) -> lss_sense::Result<Spectrum> {
    hermitian_eigenvalues(y.m(), &y.scm())?.into_psd()
}

/// Asymptotic covariances `v(f, g)` of the power kernels under white noise.
struct Covariances {
    z_z: f64,
    z2_z: f64,
    z2_z2: f64,
}

impl Covariances {
    fn at(c: f64, fault: bool) -> Self {
        let z_z = if fault { 1.05 * c } else { c };
        Self { z_z, z2_z: 2.0 * c * (1.0 + c), z2_z2: 4.0 * c * c * c + 10.0 * c * c + 4.0 * c }
    }

    fn variance(&self, kind: DetectorKind) -> f64 {
        match kind {
            DetectorKind::Hdl => self.z_z,
            DetectorKind::Hds => self.z2_z2,
            // (z−1)² = z² − 2z + 1
            _ => self.z2_z2 - 4.0 * self.z2_z + 4.0 * self.z_z,
        }
    }
}

pub fn run_checks(args: &VerifyArgs) -> Vec<Check> {
    let seed = args.seed;
    let nodes = args.nodes;
    let mut checks = Vec::new();

    checks.push(check("contour_closed_forms", || {
        let mut worst = 0.0_f64;
        for trial in 0..100 {
            let (m, l) = small_dims(trial);
            let y = observation(seed, trial, m, l)?;
            let s = spectrum(&y)?;
            let summary = compute_scm_summary(&y);
            let contour = Contour::around(&s, nodes)?;
            for g in LssFunction::ALL {
                let v = lss_contour(g, &s, m, l, &contour)?;
                worst = worst.max(rel(v.value, g.closed_form(&summary)));
            }
        }
        Ok((worst < 1e-6, format!("max_rel_err={}", fmt_g(worst))))
    }));

    checks.push(check("contour_node_doubling", || {
        let mut worst = 0.0_f64;
        for trial in 0..20 {
            let (m, l) = small_dims(trial + 900);
            let s = spectrum(&observation(seed, trial + 900, m, l)?)?;
            for g in LssFunction::ALL {
                let coarse = lss_contour(g, &s, m, l, &Contour::around(&s, nodes)?)?.value;
                let fine = lss_contour(g, &s, m, l, &Contour::around(&s, 2 * nodes)?)?.value;
                worst = worst.max((coarse - fine).abs());
            }
        }
        Ok((worst < 1e-7, format!("max_delta={}", fmt_g(worst))))
    }));

    checks.push(check("contour_margin_invariance", || {
        let mut worst = 0.0_f64;
        for trial in 0..20 {
            let (m, l) = small_dims(trial + 500);
            let s = spectrum(&observation(seed, trial + 500, m, l)?)?;
            for g in LssFunction::ALL {
                let a = lss_contour(g, &s, m, l, &Contour::with_margin(&s, nodes, 0.05)?)?.value;
                let b = lss_contour(g, &s, m, l, &Contour::with_margin(&s, nodes, 0.4)?)?.value;
                worst = worst.max((a - b).abs() / a.abs().max(1.0));
            }
        }
        Ok((worst < 1e-7, format!("max_delta={}", fmt_g(worst))))
    }));

    checks.push(check("mp_moments", || {
        let mut worst = 0.0_f64;
        for c in ASPECT_RATIOS {
            let ar = AspectRatio::new(c)?;
            for k in 1..=5 {
                worst = worst.max(rel(mp_moment_numeric(k, ar)?, mp_moment(k, ar)?));
            }
        }
        Ok((worst < 1e-8, format!("max_rel_err={}", fmt_g(worst))))
    }));

    checks.push(check("mean_corrections", || {
        let mut worst = 0.0_f64;
        for c in ASPECT_RATIOS {
            let ar = AspectRatio::new(c)?;
            worst = worst
                .max((mean_correction_numeric(LssFunction::Linear, ar) - 1.0).abs())
                .max((mean_correction_numeric(LssFunction::Square, ar) - (1.0 + c)).abs())
                .max((mean_correction_numeric(LssFunction::Quadratic, ar) - c).abs());
        }
        Ok((worst < 1e-8, format!("max_abs_err={}", fmt_g(worst))))
    }));

    checks.push(check("mp_mass", || {
        let mut worst = 0.0_f64;
        for c in ASPECT_RATIOS {
            let ar = AspectRatio::new(c)?;
            worst = worst.max((mp_mass_numeric(ar) - MpLaw::new(ar).continuous_mass()).abs());
        }
        Ok((worst < 1e-8, format!("max_abs_err={}", fmt_g(worst))))
    }));

    checks.push(check("stieltjes_inverse", || {
        let mut worst = 0.0_f64;
        for c in ASPECT_RATIOS {
            let ar = AspectRatio::new(c)?;
            for z in [-0.1, -0.5, -1.0, -3.0, -10.0] {
                let m = companion_stieltjes_numeric(z, ar)?;
                let back = stieltjes_inverse(Complex64::new(m, 0.0), c)?;
                worst = worst.max((back.re - z).abs() / z.abs()).max(back.im.abs());
            }
        }
        Ok((worst < 1e-8, format!("max_rel_err={}", fmt_g(worst))))
    }));

    checks.push(check("eigen_trace_identities", || {
        let mut worst = 0.0_f64;
        for trial in 0..60 {
            let (m, l) = small_dims(trial + 2000);
            let y = observation(seed, trial + 2000, m, l)?;
            let s = spectrum(&y)?;
            let summary = compute_scm_summary(&y);
            let sum: f64 = s.eigenvalues().iter().sum();
            let sum_sq: f64 = s.eigenvalues().iter().map(|x| x * x).sum();
            worst = worst.max(rel(sum, summary.trace_r)).max(rel(sum_sq, summary.trace_r2));
            let identity = (t_hdq(&summary) - (t_hds(&summary) - 2.0 * t_hdl(&summary))).abs();
            worst = worst.max(identity / t_hds(&summary).max(1.0));
        }
        Ok((worst < 1e-9, format!("max_rel_err={}", fmt_g(worst))))
    }));

    checks.push(check("eigen_gram_sides", || {
        let mut worst = 0.0_f64;
        for (i, &(m, l)) in [(8, 3), (3, 8), (12, 5), (6, 6)].iter().enumerate() {
            let y = observation(seed, 3000 + i as u64, m, l)?;
            let full = spectrum(&y)?;
            let (n, compact) = y.compact_scm();
            let small = hermitian_eigenvalues(n, &compact)?.into_psd()?.padded_with_zeros(m);
            let top = full.max().unwrap_or(1.0);
            for (a, b) in full.eigenvalues().iter().zip(small.eigenvalues()) {
                worst = worst.max((a - b).abs() / top);
            }
        }
        Ok((worst < 1e-8, format!("max_rel_err={}", fmt_g(worst))))
    }));

    checks.push(check("null_variances", || {
        let mut worst = 0.0_f64;
        for c in ASPECT_RATIOS {
            let v = Covariances::at(c, args.inject_fault);
            for kind in HD {
                let (_, var) = null_moments(kind, 30.0 * c, 30.0)?;
                worst = worst.max(rel(var, v.variance(kind)));
            }
        }
        Ok((worst < 1e-12, format!("max_rel_err={}", fmt_g(worst))))
    }));

    checks.push(check("sensitivity_partials", || {
        let h = 1e-5;
        let mut worst = 0.0_f64;
        for (m, l) in [(15usize, 30usize), (30, 30), (90, 30)] {
            let (mf, lf) = (m as f64, l as f64);
            let c = mf / lf;
            for kind in HD {
                let p = sensitivity_partials(kind, m, l)?;
                let sigma = |c: f64| null_moments(kind, c * lf, lf).map(|(_, v)| v.sqrt());
                let mean = |m: f64, l: f64| null_moments(kind, m, l).map(|(mu, _)| mu);
                let fd_sigma = (sigma(c + h)? - sigma(c - h)?) / (2.0 * h);
                let fd_l = (mean(mf, lf + h)? - mean(mf, lf - h)?) / (2.0 * h);
                let fd_m = (mean(mf + h, lf)? - mean(mf - h, lf)?) / (2.0 * h);
                worst = worst.max(rel(p.dsigma_dc, fd_sigma));
                // dμ/dL vanishes for HDL; compare absolutely there.
                worst = worst.max((p.dmu_dl - fd_l).abs() / p.dmu_dl.abs().max(1.0));
                worst = worst.max(rel(p.dmu_dm, fd_m));
            }
        }
        Ok((worst < 1e-6, format!("max_rel_err={}", fmt_g(worst))))
    }));

    checks.push(check("q_round_trip", || {
        let mut worst = 0.0_f64;
        for i in 0..=1100 {
            let x = -5.0 + 0.01 * i as f64;
            worst = worst.max((q_inverse(q_function(x))? - x).abs());
        }
        Ok((worst < 1e-9, format!("max_abs_err={}", fmt_g(worst))))
    }));

    checks.push(check("np_thresholds", || {
        let median = np_threshold(DetectorKind::Hdl, 70, 30, 0.5)?;
        let one_percent = np_threshold(DetectorKind::Hdl, 70, 30, 0.01)?;
        let passed = (median - 70.0).abs() < 1e-12 && (one_percent - 73.55355).abs() < 1e-4;
        Ok((passed, format!("tau(0.5)={} tau(0.01)={}", fmt_g(median), fmt_g(one_percent))))
    }));

    checks.push(check("inverse_scm_bias", || {
        let (m, l) = (4, 10);
        let scale = inverse_scm_bias_check(m, l, args.trials, seed)?;
        let expected = l as f64 / (l - m) as f64;
        Ok((rel(scale, expected) < 0.05, format!("scale={} expected={}", fmt_g(scale), fmt_g(expected))))
    }));

    checks
}

pub fn verify(args: &VerifyArgs, stdout: &mut impl Write) -> CliResult<()> {
    if args.nodes == 0 || args.trials == 0 {
        return Err(CliError::Usage("--nodes and --trials must be positive".into()));
    }
    let checks = run_checks(args);
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut report = String::new();
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        report.push_str(&format!("{status}  {:width$}  {}\n", c.name, c.detail));
    }
    stdout.write_all(report.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verify(failed.join(", ")))
    }
}
