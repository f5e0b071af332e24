use super::{q_function, q_inverse, DetectorKind};
use crate::{Error, Result};

/// Gaussian law of a detector's decision statistic under the noise-only
/// hypothesis with unit noise power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullDistribution {
    pub detector: DetectorKind,
    pub mean: f64,
    pub variance: f64,
}

impl NullDistribution {
    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        q_function((self.mean - x) / self.std_dev())
    }

    /// Probability that the statistic exceeds `x`.
    pub fn tail(&self, x: f64) -> f64 {
        q_function((x - self.mean) / self.std_dev())
    }

    /// Neyman–Pearson level `σ·Q⁻¹(pfa) + μ`.
    pub fn threshold(&self, pfa: f64) -> Result<f64> {
        Ok(self.std_dev() * q_inverse(pfa)? + self.mean)
    }
}

/// Mean and variance of the null law, with `M` and `L` taken as reals.
///
/// | detector | mean     | variance          |
/// |----------|----------|-------------------|
/// | HDL      | `M`      | `c`               |
/// | HDS      | `M(1+c)` | `4c³ + 10c² + 4c` |
/// | HDQ      | `Mc`     | `2c²(1 + 2c)`     |
///
/// with `c = M/L`.
pub fn null_moments(kind: DetectorKind, m: f64, l: f64) -> Result<(f64, f64)> {
    if !(m.is_finite() && l.is_finite() && m > 0.0 && l > 0.0) {
        return Err(Error::invalid(format!("dimensions must be positive, got M={m}, L={l}")));
    }
    let c = m / l;
    match kind {
        DetectorKind::Hdl => Ok((m, c)),
        DetectorKind::Hds => Ok((m * (1.0 + c), 4.0 * c * c * c + 10.0 * c * c + 4.0 * c)),
        DetectorKind::Hdq => Ok((m * c, 2.0 * c * c * (1.0 + 2.0 * c))),
        other => Err(Error::NoClosedForm(other)),
    }
}

pub fn null_distribution(kind: DetectorKind, m: usize, l: usize) -> Result<NullDistribution> {
    if m == 0 || l == 0 {
        return Err(Error::invalid(format!("dimensions must be positive, got M={m}, L={l}")));
    }
    let (mean, variance) = null_moments(kind, m as f64, l as f64)?;
    Ok(NullDistribution { detector: kind, mean, variance })
}

pub fn np_threshold(kind: DetectorKind, m: usize, l: usize, pfa: f64) -> Result<f64> {
    null_distribution(kind, m, l)?.threshold(pfa)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityPartials {
    /// `∂σ/∂c`
    pub dsigma_dc: f64,
    /// `∂μ/∂L`
    pub dmu_dl: f64,
    /// `∂μ/∂M`
    pub dmu_dm: f64,
}

/// Partial derivatives of the null standard deviation and mean.
///
/// For HDQ the standard deviation is `c·√(2 + 4c)`, whose derivative is
/// `(3c+1)·√2/√(1+2c)`; the tabulated `(3c+2)/√(2(1+c))` belongs to a
/// variance of `2c²(1+c)` and does not match the null law above.
pub fn sensitivity_partials(kind: DetectorKind, m: usize, l: usize) -> Result<SensitivityPartials> {
    if m == 0 || l == 0 {
        return Err(Error::invalid(format!("dimensions must be positive, got M={m}, L={l}")));
    }
    let c = m as f64 / l as f64;
    partials_at(kind, c)
}

pub(crate) fn partials_at(kind: DetectorKind, c: f64) -> Result<SensitivityPartials> {
    match kind {
        DetectorKind::Hdl => Ok(SensitivityPartials { dsigma_dc: 0.5 / c.sqrt(), dmu_dl: 0.0, dmu_dm: 1.0 }),
        DetectorKind::Hds => Ok(SensitivityPartials {
            dsigma_dc: (6.0 * c * c + 10.0 * c + 2.0) / (4.0 * c * c * c + 10.0 * c * c + 4.0 * c).sqrt(),
            dmu_dl: -c * c,
            dmu_dm: 1.0 + 2.0 * c,
        }),
        DetectorKind::Hdq => Ok(SensitivityPartials {
            dsigma_dc: (3.0 * c + 1.0) * std::f64::consts::SQRT_2 / (1.0 + 2.0 * c).sqrt(),
            dmu_dl: -c * c,
            dmu_dm: 2.0 * c,
        }),
        other => Err(Error::NoClosedForm(other)),
    }
}

/// Rates of change of the NP threshold in `L` and `M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeRates {
    pub d_dl: f64,
    pub d_dm: f64,
}

pub fn threshold_slope_rates(kind: DetectorKind, m: usize, l: usize, pfa: f64) -> Result<SlopeRates> {
    let partials = sensitivity_partials(kind, m, l)?;
    let q = q_inverse(pfa)?;
    let l = l as f64;
    let c = m as f64 / l;
    Ok(SlopeRates {
        d_dl: -(c / l) * partials.dsigma_dc * q + partials.dmu_dl,
        d_dm: partials.dsigma_dc * q / l + partials.dmu_dm,
    })
}
