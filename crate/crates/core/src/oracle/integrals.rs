//! Real-axis integrals against the Marcenko–Pastur law.
//!
//! All of them use the substitution `x = 1 + c − 2√c·cos ζ`, `ζ ∈ [0, π]`,
//! under which `f_c(x) dx = (2/π)·sin²ζ / x dζ` and the square-root edges
//! disappear.

use std::f64::consts::PI;

use super::contour::LssFunction;
use super::quadrature::integrate;
use crate::rmt::{AspectRatio, MpLaw};
use crate::{Error, Result};

const TOL: f64 = 1e-12;

/// `x(ζ)` written without cancellation near `ζ = 0`.
fn mp_point(zeta: f64, c: f64) -> f64 {
    let s = c.sqrt();
    let half = (0.5 * zeta).sin();
    (1.0 - s) * (1.0 - s) + 4.0 * s * half * half
}

/// `∫ h(x) f_c(x) dx` over the continuous part.
fn integrate_continuous(h: impl Fn(f64) -> f64, c: f64) -> f64 {
    integrate(
        |zeta| {
            let x = mp_point(zeta, c);
            let sin = zeta.sin();
            if x == 0.0 {
                // c = 1, ζ = 0: sin²ζ/x → 1
                return (2.0 / PI) * h(0.0);
            }
            (2.0 / PI) * h(x) * sin * sin / x
        },
        0.0,
        PI,
        TOL,
    )
    .value
}

/// `F^c(g) = ∫ g dF_c`, the per-antenna mean of the linear spectral
/// statistic under white noise. The atom at zero contributes
/// `max(0, 1 − 1/c)·g(0)`.
pub fn mean_correction_numeric(g: LssFunction, c: AspectRatio) -> f64 {
    let law = MpLaw::new(c);
    integrate_continuous(|x| g.eval_real(x), c.value()) + law.mass_at_zero * g.eval_real(0.0)
}

/// `∫ x^k dF_c` by quadrature, for `1 ≤ k ≤ 8`.
pub fn mp_moment_numeric(k: u32, c: AspectRatio) -> Result<f64> {
    if !(1..=8).contains(&k) {
        return Err(Error::MomentOrder(k));
    }
    Ok(integrate_continuous(|x| x.powi(k as i32), c.value()))
}

/// Mass of the continuous part of the law.
pub fn mp_mass_numeric(c: AspectRatio) -> f64 {
    integrate_continuous(|_| 1.0, c.value())
}

/// Stieltjes transform at real `z < 0` of the companion law
/// `(1 − c)·δ_0 + c·F_c`, whose inverse is
/// [`crate::rmt::stieltjes_inverse`].
pub fn companion_stieltjes_numeric(z: f64, c: AspectRatio) -> Result<f64> {
    if !(z < 0.0 && z.is_finite()) {
        return Err(Error::invalid(format!("evaluation point must be negative, got {z}")));
    }
    let law = MpLaw::new(c);
    let cv = c.value();
    let of_law = integrate_continuous(|x| 1.0 / (x - z), cv) + law.mass_at_zero / (-z);
    Ok((1.0 - cv) / (-z) + cv * of_law)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmt::{mp_moment, stieltjes_inverse};
    use num_complex::Complex64;

    fn ar(c: f64) -> AspectRatio {
        AspectRatio::new(c).unwrap()
    }

    #[test]
    fn continuous_mass() {
        assert!((mp_mass_numeric(ar(0.25)) - 1.0).abs() < 1e-10);
        assert!((mp_mass_numeric(ar(3.0)) - 1.0 / 3.0).abs() < 1e-10);
        assert!((mp_mass_numeric(ar(1.0)) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn mean_corrections() {
        for c in [0.1, 0.5, 1.0, 2.0, 3.0] {
            let linear = mean_correction_numeric(LssFunction::Linear, ar(c));
            let square = mean_correction_numeric(LssFunction::Square, ar(c));
            let quad = mean_correction_numeric(LssFunction::Quadratic, ar(c));
            assert!((linear - 1.0).abs() < 1e-10, "c={c}: {linear}");
            assert!((square - (1.0 + c)).abs() < 1e-10, "c={c}: {square}");
            assert!((quad - c).abs() < 1e-10, "c={c}: {quad}");
        }
    }

    #[test]
    fn moments_against_exact() {
        assert!((mp_moment_numeric(1, ar(3.0)).unwrap() - 1.0).abs() < 1e-10);
        assert!((mp_moment_numeric(2, ar(0.25)).unwrap() - 1.25).abs() < 1e-10);
        assert!((mp_moment_numeric(4, ar(1.0)).unwrap() - 14.0).abs() < 1e-9);
        for c in [0.1, 0.5, 1.0, 2.0, 3.0] {
            for k in 1..=8 {
                let exact = mp_moment(k, ar(c)).unwrap();
                let numeric = mp_moment_numeric(k, ar(c)).unwrap();
                assert!((numeric - exact).abs() < 1e-10 * exact.max(1.0), "k={k} c={c}");
            }
        }
        assert!(mp_moment_numeric(9, ar(1.0)).is_err());
        assert!(mp_moment_numeric(0, ar(1.0)).is_err());
    }

    #[test]
    fn stieltjes_round_trip() {
        for c in [0.25, 0.5, 2.0, 3.0] {
            for z in [-0.3, -1.0, -4.0] {
                let m = companion_stieltjes_numeric(z, ar(c)).unwrap();
                let back = stieltjes_inverse(Complex64::new(m, 0.0), c).unwrap();
                assert!((back.re - z).abs() < 1e-10 && back.im == 0.0, "c={c} z={z}: {back}");
            }
        }
    }
}
