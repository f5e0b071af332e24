//! Detector statistics computed from sample-covariance trace summaries.
//!
//! `R = YY*/L` is never diagonalised on this path: `tr R` is the energy of
//! `Y` and `tr R²` is the squared Frobenius norm of the smaller of the two
//! Gram matrices `YY*` and `Y*Y`, which share their non-zero spectrum.
//!
//! Two families of statistics live here:
//!
//! * [`t_hdl`], [`t_hds`], [`t_hdq`]: the high-dimensional LSS limits in
//!   their `1/M`-normalised trace form.
//! * [`decision_statistic`]: the unnormalised spectral sum `Σ g(λ_i)` for
//!   `g = z, z², (z-1)²`, which is the quantity whose null law is
//!   [`crate::rmt::null_distribution`]. Thresholds always apply to this one.

use num_complex::Complex64;

use crate::rmt::DetectorKind;
use crate::{Error, Result};

/// `M × L` block of complex baseband samples, one row per antenna.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationMatrix {
    m: usize,
    l: usize,
    data: Vec<Complex64>,
}

impl ObservationMatrix {
    /// Wraps row-major samples; every entry must be finite.
    pub fn new(m: usize, l: usize, data: Vec<Complex64>) -> Result<Self> {
        if m == 0 || l == 0 {
            return Err(Error::invalid(format!("observation must be at least 1x1, got {m}x{l}")));
        }
        if data.len() != m * l {
            return Err(Error::invalid(format!("expected {} samples for {m}x{l}, got {}", m * l, data.len())));
        }
        if let Some(pos) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { row: pos / l, col: pos % l });
        }
        Ok(Self { m, l, data })
    }

    pub fn from_fn(m: usize, l: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut data = Vec::with_capacity(m * l);
        for i in 0..m {
            for j in 0..l {
                data.push(f(i, j));
            }
        }
        Self::new(m, l, data)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.l + col]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.data[row * self.l..(row + 1) * self.l]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Left-multiplies by a `M × M` matrix given row-major (antenna-space transform).
    pub fn left_mul(&self, u: &[Complex64]) -> Result<Self> {
        if u.len() != self.m * self.m {
            return Err(Error::invalid("transform must be M x M"));
        }
        Self::from_fn(self.m, self.l, |i, j| (0..self.m).map(|k| u[i * self.m + k] * self.get(k, j)).sum())
    }

    pub fn scaled(&self, alpha: Complex64) -> Result<Self> {
        Self::new(self.m, self.l, self.data.iter().map(|z| z * alpha).collect())
    }

    /// The full `M × M` sample covariance `YY*/L`, row-major.
    pub fn scm(&self) -> Vec<Complex64> {
        let (m, l) = (self.m, self.l);
        let inv_l = 1.0 / l as f64;
        let mut r = vec![Complex64::new(0.0, 0.0); m * m];
        for i in 0..m {
            for j in i..m {
                let v = dot_conj(self.row(i), self.row(j)) * inv_l;
                r[i * m + j] = v;
                r[j * m + i] = v.conj();
            }
        }
        r
    }

    /// The smaller of `YY*/L` and `Y*Y/L` with its order. Both share the
    /// non-zero eigenvalues of `R`.
    pub fn compact_scm(&self) -> (usize, Vec<Complex64>) {
        if self.m <= self.l {
            return (self.m, self.scm());
        }
        let (m, l) = (self.m, self.l);
        let cols = self.columns();
        let inv_l = 1.0 / l as f64;
        let mut g = vec![Complex64::new(0.0, 0.0); l * l];
        for a in 0..l {
            for b in a..l {
                // (Y*Y)_ab = Σ_m conj(y_ma) y_mb
                let v = dot_conj(&cols[b * m..(b + 1) * m], &cols[a * m..(a + 1) * m]) * inv_l;
                g[a * l + b] = v;
                g[b * l + a] = v.conj();
            }
        }
        (l, g)
    }

    fn columns(&self) -> Vec<Complex64> {
        let (m, l) = (self.m, self.l);
        let mut cols = vec![Complex64::new(0.0, 0.0); m * l];
        for i in 0..m {
            for j in 0..l {
                cols[j * m + i] = self.data[i * l + j];
            }
        }
        cols
    }
}

/// `Σ_k x_k · conj(y_k)`
fn dot_conj(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        re += a.re * b.re + a.im * b.im;
        im += a.im * b.re - a.re * b.im;
    }
    Complex64::new(re, im)
}

/// Sufficient statistics `(tr R, tr R², M, L)` for the high-dimensional detectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScmSummary {
    pub trace_r: f64,
    pub trace_r2: f64,
    pub m: usize,
    pub l: usize,
}

impl ScmSummary {
    /// Validated constructor: `tr R ≥ 0` and `(tr R)²/M ≤ tr R² ≤ (tr R)²`
    /// up to rounding.
    pub fn new(trace_r: f64, trace_r2: f64, m: usize, l: usize) -> Result<Self> {
        if m == 0 || l == 0 {
            return Err(Error::invalid(format!("dimensions must be positive, got M={m}, L={l}")));
        }
        if !(trace_r.is_finite() && trace_r2.is_finite()) || trace_r < 0.0 || trace_r2 < 0.0 {
            return Err(Error::invalid(format!("traces must be finite and non-negative, got {trace_r}, {trace_r2}")));
        }
        let sq = trace_r * trace_r;
        let slack = 1e-12 * sq.max(f64::MIN_POSITIVE);
        if trace_r2 + slack < sq / m as f64 || trace_r2 > sq + slack {
            return Err(Error::invalid(format!(
                "tr R² = {trace_r2} outside [(tr R)²/M, (tr R)²] = [{}, {sq}]",
                sq / m as f64
            )));
        }
        Ok(Self { trace_r, trace_r2, m, l })
    }

    /// Summary of a spectrum with `M = eigenvalues.len()`.
    pub fn from_eigenvalues(eigenvalues: &[f64], l: usize) -> Result<Self> {
        let trace_r = eigenvalues.iter().sum();
        let trace_r2 = eigenvalues.iter().map(|x| x * x).sum();
        Self::new(trace_r, trace_r2, eigenvalues.len(), l)
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.m as f64 / self.l as f64
    }

    /// Summary of `Y/σ` given the summary of `Y`.
    pub fn normalized_by_noise(&self, noise_variance: f64) -> Self {
        Self {
            trace_r: self.trace_r / noise_variance,
            trace_r2: self.trace_r2 / (noise_variance * noise_variance),
            ..*self
        }
    }

    /// Whether the summary satisfies the eigenvalue bounds (used by property tests).
    pub fn satisfies_spectral_bounds(&self, rel_tol: f64) -> bool {
        let sq = self.trace_r * self.trace_r;
        let slack = rel_tol * sq.max(f64::MIN_POSITIVE);
        self.trace_r >= 0.0 && self.trace_r2 + slack >= sq / self.m as f64 && self.trace_r2 <= sq + slack
    }
}

/// Trace summary in `O(min(M,L)²·max(M,L))` using the cheaper Gram side.
pub fn compute_scm_summary(y: &ObservationMatrix) -> ScmSummary {
    let (n, g) = y.compact_scm();
    let mut trace_r = 0.0;
    let mut off = 0.0;
    let mut diag = 0.0;
    for i in 0..n {
        let d = g[i * n + i].re;
        trace_r += d;
        diag += d * d;
        for j in i + 1..n {
            off += g[i * n + j].norm_sqr();
        }
    }
    ScmSummary { trace_r, trace_r2: diag + 2.0 * off, m: y.m(), l: y.l() }
}

/// `tr R / M`
pub fn t_hdl(s: &ScmSummary) -> f64 {
    s.trace_r / s.m as f64
}

/// `tr R²/M + (tr R)²/(LM)`
pub fn t_hds(s: &ScmSummary) -> f64 {
    let m = s.m as f64;
    s.trace_r2 / m + s.trace_r * s.trace_r / (s.l as f64 * m)
}

/// `tr R²/M − 2 tr R/M + (tr R)²/(LM)`
pub fn t_hdq(s: &ScmSummary) -> f64 {
    let m = s.m as f64;
    s.trace_r2 / m - 2.0 * s.trace_r / m + s.trace_r * s.trace_r / (s.l as f64 * m)
}

/// `Σ g(λ_i)` for the detector's kernel, computed from traces.
///
/// | detector | kernel    | statistic              |
/// |----------|-----------|------------------------|
/// | HDL      | `z`       | `tr R`                 |
/// | HDS      | `z²`      | `tr R²`                |
/// | HDQ      | `(z-1)²`  | `tr R² − 2 tr R + M`   |
pub fn decision_statistic(kind: DetectorKind, s: &ScmSummary) -> Result<f64> {
    match kind {
        DetectorKind::Hdl => Ok(s.trace_r),
        DetectorKind::Hds => Ok(s.trace_r2),
        DetectorKind::Hdq => Ok(s.trace_r2 - 2.0 * s.trace_r + s.m as f64),
        other => Err(Error::invalid(format!("{other} is an eigenvalue statistic, not a trace statistic"))),
    }
}

fn check_spectrum(eigenvalues: &[f64]) -> Result<()> {
    if eigenvalues.is_empty() {
        return Err(Error::invalid("spectrum is empty"));
    }
    if let Some(bad) = eigenvalues.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::invalid(format!("eigenvalue {bad} is negative or non-finite")));
    }
    Ok(())
}

/// `λ_max / Σ λ_i`
pub fn baseline_glr(eigenvalues: &[f64]) -> Result<f64> {
    check_spectrum(eigenvalues)?;
    let total: f64 = eigenvalues.iter().sum();
    if total == 0.0 {
        return Err(Error::ZeroSpectrum);
    }
    let max = eigenvalues.iter().copied().fold(0.0, f64::max);
    Ok(max / total)
}

/// `(1/M) Σ λ_i²`
pub fn baseline_fn(eigenvalues: &[f64]) -> Result<f64> {
    check_spectrum(eigenvalues)?;
    Ok(eigenvalues.iter().map(|x| x * x).sum::<f64>() / eigenvalues.len() as f64)
}

/// `Σ (λ_i − 1)²`, i.e. `tr (R − I)²`.
pub fn baseline_rao(eigenvalues: &[f64]) -> Result<f64> {
    check_spectrum(eigenvalues)?;
    Ok(eigenvalues.iter().map(|x| (x - 1.0) * (x - 1.0)).sum())
}

/// Statistic of any detector from a full spectrum of `R` (length `M`).
pub fn statistic_from_spectrum(kind: DetectorKind, eigenvalues: &[f64], l: usize) -> Result<f64> {
    match kind {
        DetectorKind::BaselineGlr => baseline_glr(eigenvalues),
        DetectorKind::BaselineFn => baseline_fn(eigenvalues),
        DetectorKind::BaselineRao => baseline_rao(eigenvalues),
        hd => {
            check_spectrum(eigenvalues)?;
            decision_statistic(hd, &ScmSummary::from_eigenvalues(eigenvalues, l)?)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    /// Primary user absent.
    H0,
    /// Primary user present.
    H1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub statistic: f64,
    pub threshold: f64,
    pub declared: Hypothesis,
}

/// Declares H1 only when the statistic strictly exceeds the threshold.
pub fn decide(statistic: f64, threshold: f64) -> Decision {
    let declared = if statistic > threshold { Hypothesis::H1 } else { Hypothesis::H0 };
    Decision { statistic, threshold, declared }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Small deterministic pseudo-random matrix without pulling in the sim RNG.
    fn lcg_matrix(m: usize, l: usize, seed: u64) -> ObservationMatrix {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        ObservationMatrix::from_fn(m, l, |_, _| c(next(), next())).unwrap()
    }

    fn naive_traces(y: &ObservationMatrix) -> (f64, f64) {
        let m = y.m();
        let r = y.scm();
        let tr = (0..m).map(|i| r[i * m + i].re).sum();
        let tr2 = r.iter().map(|z| z.norm_sqr()).sum();
        (tr, tr2)
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(ObservationMatrix::new(0, 3, vec![]).is_err());
        assert!(ObservationMatrix::new(2, 2, vec![c(0.0, 0.0); 3]).is_err());
        let mut data = vec![c(1.0, 0.0); 6];
        data[4] = c(f64::NAN, 0.0);
        assert_eq!(ObservationMatrix::new(2, 3, data), Err(Error::NonFinite { row: 1, col: 1 }));
    }

    #[test]
    fn zero_observation() {
        let y = ObservationMatrix::new(3, 4, vec![c(0.0, 0.0); 12]).unwrap();
        let s = compute_scm_summary(&y);
        assert_eq!((s.trace_r, s.trace_r2), (0.0, 0.0));
        assert_eq!(t_hds(&s), 0.0);
    }

    #[test]
    fn scaled_identity_gives_identity_scm() {
        let y =
            ObservationMatrix::from_fn(2, 2, |i, j| if i == j { c(2f64.sqrt(), 0.0) } else { c(0.0, 0.0) }).unwrap();
        let s = compute_scm_summary(&y);
        assert!((s.trace_r - 2.0).abs() < 1e-15);
        assert!((s.trace_r2 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn gram_side_choice_agrees_with_full_scm() {
        for &(m, l) in &[(4, 8), (8, 4), (5, 5), (1, 7), (7, 1), (12, 3)] {
            let y = lcg_matrix(m, l, (m * 31 + l) as u64);
            let s = compute_scm_summary(&y);
            let (tr, tr2) = naive_traces(&y);
            assert!((s.trace_r - tr).abs() < 1e-12 * tr);
            assert!((s.trace_r2 - tr2).abs() < 1e-12 * tr2);
            assert!(s.satisfies_spectral_bounds(1e-12));
        }
    }

    #[test]
    fn statistics_on_known_spectra() {
        let s = ScmSummary::from_eigenvalues(&[1.0, 2.0, 3.0], 5).unwrap();
        assert_eq!(t_hdl(&s), 2.0);
        let s = ScmSummary::from_eigenvalues(&[1.0, 1.0], 2).unwrap();
        assert_eq!(t_hds(&s), 2.0);
        for m in [1, 5, 40] {
            for l in [3, 40] {
                let s = ScmSummary::from_eigenvalues(&vec![1.0; m], l).unwrap();
                assert_eq!(t_hdl(&s), 1.0);
                let expected = m as f64 / l as f64 - 1.0;
                assert!((t_hdq(&s) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn decision_statistics_are_spectral_sums() {
        let eig = [0.3, 1.7, 2.2, 0.0];
        let s = ScmSummary::from_eigenvalues(&eig, 6).unwrap();
        let sum = |g: fn(f64) -> f64| eig.iter().map(|&x| g(x)).sum::<f64>();
        assert!((decision_statistic(DetectorKind::Hdl, &s).unwrap() - sum(|x| x)).abs() < 1e-14);
        assert!((decision_statistic(DetectorKind::Hds, &s).unwrap() - sum(|x| x * x)).abs() < 1e-14);
        let rao = decision_statistic(DetectorKind::Hdq, &s).unwrap();
        assert!((rao - sum(|x| (x - 1.0) * (x - 1.0))).abs() < 1e-14);
        assert!((rao - baseline_rao(&eig).unwrap()).abs() < 1e-14);
        assert!(decision_statistic(DetectorKind::BaselineGlr, &s).is_err());
    }

    #[test]
    fn summary_invariants_are_enforced() {
        assert!(ScmSummary::new(2.0, 1.0, 2, 3).is_err()); // below (tr R)²/M
        assert!(ScmSummary::new(2.0, 5.0, 2, 3).is_err()); // above (tr R)²
        assert!(ScmSummary::new(-1.0, 1.0, 1, 1).is_err());
        assert!(ScmSummary::new(2.0, 2.0, 2, 3).is_ok());
    }

    #[test]
    fn baselines() {
        assert_eq!(baseline_glr(&[1.0; 4]).unwrap(), 0.25);
        assert_eq!(baseline_glr(&[9.0, 1.0]).unwrap(), 0.9);
        assert_eq!(baseline_glr(&[0.0, 0.0]), Err(Error::ZeroSpectrum));
        assert!(baseline_glr(&[]).is_err());
        assert_eq!(baseline_fn(&[1.0; 7]).unwrap(), 1.0);
        assert_eq!(baseline_fn(&[2.0, 0.0]).unwrap(), 2.0);
        assert_eq!(baseline_rao(&[1.0; 5]).unwrap(), 0.0);
        assert_eq!(baseline_rao(&[3.0]).unwrap(), 4.0);
        assert!(baseline_fn(&[-1.0]).is_err());
    }

    #[test]
    fn rao_baseline_against_hd_quadratic() {
        // Σ(λ-1)² = M·t_hdq + M − (Σλ)²/L
        let eig = [0.4, 0.9, 1.3, 2.8, 0.05];
        let l = 9;
        let s = ScmSummary::from_eigenvalues(&eig, l).unwrap();
        let m = eig.len() as f64;
        let expected = m * t_hdq(&s) + m - s.trace_r * s.trace_r / l as f64;
        assert!((baseline_rao(&eig).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn tie_goes_to_h0() {
        assert_eq!(decide(5.0, 5.0).declared, Hypothesis::H0);
        assert_eq!(decide(5.1, 5.0).declared, Hypothesis::H1);
        assert_eq!(decide(4.9, 5.0).declared, Hypothesis::H0);
    }

    #[test]
    fn scaling_laws() {
        let y = lcg_matrix(6, 9, 3);
        let s = compute_scm_summary(&y);
        let alpha = c(0.7, -1.1);
        let s2 = compute_scm_summary(&y.scaled(alpha).unwrap());
        let a2 = alpha.norm_sqr();
        assert!((t_hdl(&s2) - a2 * t_hdl(&s)).abs() < 1e-12 * t_hdl(&s2));
        assert!((t_hds(&s2) - a2 * a2 * t_hds(&s)).abs() < 1e-12 * t_hds(&s2));
    }
}
