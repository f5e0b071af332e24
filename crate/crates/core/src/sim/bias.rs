use num_complex::Complex64;

use super::models::{sample_h0, NoiseModel};
use super::rng::{Purpose, RandomStream};
use crate::{Error, Result};

/// Scale `α̂` of the best fit `α·I` (Frobenius norm) to the Monte Carlo
/// average of `R⁻¹` under unit white noise.
///
/// For complex Gaussian data `E[R⁻¹] = L/(L−M)·I`.
pub fn inverse_scm_bias_check(m: usize, l: usize, trials: usize, seed: u64) -> Result<f64> {
    if m == 0 || l <= m + 2 {
        return Err(Error::invalid(format!("need L > M + 2 with M >= 1, got M={m}, L={l}")));
    }
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let noise = NoiseModel::Calibrated { variance: 1.0 };
    let mut total = 0.0;
    for t in 0..trials as u64 {
        let mut stream = RandomStream::for_trial(seed, t, Purpose::Bias);
        let y = sample_h0(m, l, &noise, &mut stream)?;
        total += trace_of_inverse(m, &y.scm())?;
    }
    Ok(total / (trials as f64 * m as f64))
}

/// `tr A⁻¹ = ‖C⁻¹‖_F²` for the Cholesky factor `A = C C*`.
fn trace_of_inverse(n: usize, a: &[Complex64]) -> Result<f64> {
    let mut c = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut d = a[j * n + j].re;
        for k in 0..j {
            d -= c[j * n + k].norm_sqr();
        }
        if d <= 0.0 {
            return Err(Error::invalid("sample covariance is not positive definite"));
        }
        let d = d.sqrt();
        c[j * n + j] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= c[i * n + k] * c[j * n + k].conj();
            }
            c[i * n + j] = s / d;
        }
    }
    // Columns of C⁻¹ by forward substitution.
    let mut total = 0.0;
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for col in 0..n {
        for i in 0..n {
            let mut s = if i == col { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            for k in 0..i {
                s -= c[i * n + k] * x[k];
            }
            x[i] = s / c[i * n + i].re;
            total += x[i].norm_sqr();
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_of_known_inverse() {
        let a =
            [Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0), Complex64::new(2.0, 0.0)];
        // det = 3, tr A⁻¹ = (2 + 2)/3
        assert!((trace_of_inverse(2, &a).unwrap() - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_divergent_cases() {
        assert!(inverse_scm_bias_check(4, 6, 10, 0).is_err());
        assert!(inverse_scm_bias_check(2, 8, 0, 0).is_err());
    }

    #[test]
    fn scale_matches_complex_inverse_wishart() {
        for (m, l) in [(2usize, 8usize), (4, 10), (1, 100)] {
            let alpha = inverse_scm_bias_check(m, l, 20_000, 1).unwrap();
            let expected = l as f64 / (l - m) as f64;
            assert!((alpha - expected).abs() < 0.03 * expected, "M={m} L={l}: {alpha} vs {expected}");
        }
    }
}
