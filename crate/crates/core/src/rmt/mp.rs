use std::f64::consts::PI;

use num_complex::Complex64;

use super::AspectRatio;
use crate::{Error, Result};

/// Largest moment order [`mp_moment`] evaluates exactly.
pub const MAX_MOMENT_ORDER: u32 = 30;

/// Marcenko–Pastur law for white unit-variance noise at aspect ratio `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpLaw {
    pub c: AspectRatio,
    /// Lower edge `(1-√c)²` of the continuous part.
    pub a: f64,
    /// Upper edge `(1+√c)²`.
    pub b: f64,
    /// Weight of the atom at zero, `max(0, 1-1/c)`.
    pub mass_at_zero: f64,
}

impl MpLaw {
    pub fn new(c: AspectRatio) -> Self {
        let (a, b) = mp_support(c);
        let mass_at_zero = (1.0 - 1.0 / c.value()).max(0.0);
        Self { c, a, b, mass_at_zero }
    }

    /// Density of the continuous part; the atom is never folded in.
    pub fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 || x <= self.a || x >= self.b {
            return 0.0;
        }
        ((x - self.a) * (self.b - x)).sqrt() / (2.0 * PI * self.c.value() * x)
    }

    /// Total mass carried by the continuous part.
    pub fn continuous_mass(&self) -> f64 {
        1.0 - self.mass_at_zero
    }
}

pub fn mp_support(c: AspectRatio) -> (f64, f64) {
    let s = c.value().sqrt();
    ((1.0 - s).powi(2), (1.0 + s).powi(2))
}

pub fn mp_pdf(x: f64, c: AspectRatio) -> f64 {
    MpLaw::new(c).pdf(x)
}

/// `k`-th moment of the Marcenko–Pastur law (Narayana polynomial in `c`).
///
/// The coefficients `C(k,r)·C(k-1,r)/(r+1)` are Narayana numbers and are
/// accumulated in exact integer arithmetic before the single conversion to
/// floating point.
pub fn mp_moment(k: u32, c: AspectRatio) -> Result<f64> {
    if k == 0 || k > MAX_MOMENT_ORDER {
        return Err(Error::MomentOrder(k));
    }
    let c = c.value();
    // Horner over r, highest power first.
    let mut acc = 0.0;
    for r in (0..k).rev() {
        let coeff = binomial(k, r) * binomial(k - 1, r) / u128::from(r + 1);
        acc = acc * c + coeff as f64;
    }
    Ok(acc)
}

fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for i in 0..k {
        out = out * u128::from(n - i) / u128::from(i + 1);
    }
    out
}

/// Inverse Stieltjes transform of the companion MP law, `z = -1/m + c/(1+m)`.
///
/// `c` may be zero here (the degenerate law concentrated at one); it must be
/// finite and non-negative.
pub fn stieltjes_inverse(m: Complex64, c: f64) -> Result<Complex64> {
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::AspectRatio(c));
    }
    let one = Complex64::new(1.0, 0.0);
    if m.norm() == 0.0 || (m + one).norm() == 0.0 {
        return Err(Error::StieltjesPole(m));
    }
    Ok(-one / m + c / (one + m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ar(c: f64) -> AspectRatio {
        AspectRatio::new(c).unwrap()
    }

    #[test]
    fn pdf_at_interior_point() {
        let expected = 1.0 / (2.0 * PI);
        assert!((mp_pdf(2.0, ar(1.0)) - expected).abs() < 1e-15);
        assert!((expected - 0.159154).abs() < 1e-6);
    }

    #[test]
    fn pdf_outside_support_and_at_edges_is_zero() {
        assert_eq!(mp_pdf(5.0, ar(1.0)), 0.0);
        assert_eq!(mp_pdf(0.0, ar(1.0)), 0.0);
        assert_eq!(mp_pdf(-1.0, ar(0.25)), 0.0);
        let law = MpLaw::new(ar(0.25));
        assert_eq!(law.pdf(law.a), 0.0);
        assert_eq!(law.pdf(law.b), 0.0);
        assert_eq!(law.pdf(0.1), 0.0);
    }

    #[test]
    fn support_edges() {
        assert_eq!(mp_support(ar(1.0)), (0.0, 4.0));
        assert_eq!(mp_support(ar(0.25)), (0.25, 2.25));
        let (a, b) = mp_support(ar(3.0));
        assert!((a - 0.535898384862245).abs() < 1e-12);
        assert!((b - 7.464101615137754).abs() < 1e-12);
    }

    #[test]
    fn atom_weight() {
        assert_eq!(MpLaw::new(ar(0.5)).mass_at_zero, 0.0);
        assert!((MpLaw::new(ar(3.0)).mass_at_zero - 2.0 / 3.0).abs() < 1e-15);
        assert!((MpLaw::new(ar(3.0)).continuous_mass() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn low_order_moments() {
        for c in [0.1, 0.5, 1.0, 3.0, 7.5] {
            assert_eq!(mp_moment(1, ar(c)).unwrap(), 1.0);
            assert!((mp_moment(2, ar(c)).unwrap() - (1.0 + c)).abs() < 1e-12);
        }
        assert_eq!(mp_moment(2, ar(3.0)).unwrap(), 4.0);
        // 1 + 3c + c² at c = 2
        assert_eq!(mp_moment(3, ar(2.0)).unwrap(), 11.0);
        // Catalan number C_4 at c = 1
        assert_eq!(mp_moment(4, ar(1.0)).unwrap(), 14.0);
    }

    #[test]
    fn moments_at_unit_ratio_are_catalan_numbers() {
        let catalan = [1u64, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];
        for (k, &cat) in (1..=10).zip(catalan.iter()) {
            assert_eq!(mp_moment(k, ar(1.0)).unwrap(), cat as f64);
        }
        // C_30 is exactly representable in f64.
        assert_eq!(mp_moment(30, ar(1.0)).unwrap(), 3_814_986_502_092_304.0);
    }

    #[test]
    fn moment_order_guard() {
        assert_eq!(mp_moment(0, ar(1.0)), Err(Error::MomentOrder(0)));
        assert_eq!(mp_moment(31, ar(1.0)), Err(Error::MomentOrder(31)));
    }

    #[test]
    fn stieltjes_inverse_examples() {
        let j = Complex64::new(0.0, 1.0);
        assert!((stieltjes_inverse(j, 0.0).unwrap() - j).norm() < 1e-15);
        assert!(stieltjes_inverse(Complex64::new(1.0, 0.0), 2.0).unwrap().norm() < 1e-15);
        let z = stieltjes_inverse(Complex64::new(-2.0, 0.0), 3.0).unwrap();
        assert!((z - Complex64::new(-2.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn stieltjes_inverse_rejects_poles() {
        assert!(matches!(stieltjes_inverse(Complex64::new(0.0, 0.0), 1.0), Err(Error::StieltjesPole(_))));
        assert!(matches!(stieltjes_inverse(Complex64::new(-1.0, 0.0), 1.0), Err(Error::StieltjesPole(_))));
        assert!(stieltjes_inverse(Complex64::new(0.5, 0.5), -1.0).is_err());
    }
}
