use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use super::quadrature::gauss_legendre;
use super::Spectrum;
use crate::detectors::{t_hdl, t_hdq, t_hds, ScmSummary};
use crate::{Error, Result};

/// Nodes per Gauss–Legendre panel.
const PANEL_ORDER: usize = 16;
const MAX_SPLITS: u32 = 40;
/// Eigenvalues at or below this fraction of the largest carry no pole.
const ZERO_EIGENVALUE: f64 = 1e-9;

/// Kernels with a closed-form limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LssFunction {
    /// `g(z) = z`
    Linear,
    /// `g(z) = z²`
    Square,
    /// `g(z) = (z − 1)²`
    Quadratic,
}

impl LssFunction {
    pub const ALL: [LssFunction; 3] = [LssFunction::Linear, LssFunction::Square, LssFunction::Quadratic];

    pub fn eval(self, z: Complex64) -> Complex64 {
        match self {
            LssFunction::Linear => z,
            LssFunction::Square => z * z,
            LssFunction::Quadratic => (z - 1.0) * (z - 1.0),
        }
    }

    pub fn eval_real(self, x: f64) -> f64 {
        self.eval(Complex64::new(x, 0.0)).re
    }

    /// Closed form of the contour limit for a spectrum summarised by `s`.
    ///
    /// The quadratic statistic drops the constant term of
    /// `(z−1)² = z² − 2z + 1`, which contributes `(1/M)·Σ 1 = 1`.
    pub fn closed_form(self, s: &ScmSummary) -> f64 {
        match self {
            LssFunction::Linear => t_hdl(s),
            LssFunction::Square => t_hds(s),
            LssFunction::Quadratic => t_hdq(s) + 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LssFunction::Linear => "linear",
            LssFunction::Square => "square",
            LssFunction::Quadratic => "quadratic",
        }
    }
}

impl fmt::Display for LssFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Axis-aligned rectangle `[center ± half_width] × [± half_height]`,
/// traversed counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contour {
    pub center: f64,
    pub half_width: f64,
    pub half_height: f64,
    /// Base quadrature budget over the whole rectangle; panels near a pole
    /// are refined on top of it.
    pub nodes: usize,
}

impl Contour {
    pub const MIN_NODES: usize = 256;

    /// Rectangle with a 10% margin around the non-zero eigenvalues, its
    /// left edge kept at or right of `λ_min/2` so the origin stays outside.
    pub fn around(spectrum: &Spectrum, nodes: usize) -> Result<Self> {
        Self::with_margin(spectrum, nodes, 0.1)
    }

    /// As [`Contour::around`] with a relative margin other than 10%.
    pub fn with_margin(spectrum: &Spectrum, nodes: usize, margin: f64) -> Result<Self> {
        if !(margin > 0.0 && margin.is_finite()) {
            return Err(Error::Contour(format!("margin must be positive, got {margin}")));
        }
        let poles = poles(spectrum)?;
        let (lo, hi) = (poles[0], poles[poles.len() - 1]);
        let span = effective_span(lo, hi);
        let left = (lo - margin * span).max(0.5 * lo);
        let right = hi + margin * span;
        let contour = Self {
            center: 0.5 * (left + right),
            half_width: 0.5 * (right - left),
            half_height: (0.5 * span).max(0.1),
            nodes,
        };
        contour.validate(spectrum)?;
        Ok(contour)
    }

    fn left(&self) -> f64 {
        self.center - self.half_width
    }

    fn right(&self) -> f64 {
        self.center + self.half_width
    }

    /// Checks the rectangle excludes the origin, encloses every non-zero
    /// eigenvalue and keeps clear of each by `1e-6·span`.
    pub fn validate(&self, spectrum: &Spectrum) -> Result<()> {
        if self.nodes < Self::MIN_NODES {
            return Err(Error::Contour(format!("need at least {} nodes, got {}", Self::MIN_NODES, self.nodes)));
        }
        if !(self.half_width > 0.0 && self.half_height > 0.0 && self.center.is_finite()) {
            return Err(Error::Contour("rectangle must have positive extent".into()));
        }
        if self.left() <= 0.0 {
            return Err(Error::Contour(format!("left edge {} does not exclude the origin", self.left())));
        }
        let poles = poles(spectrum)?;
        let span = effective_span(poles[0], poles[poles.len() - 1]);
        let clearance = 1e-6 * span;
        for &p in &poles {
            if p <= self.left() || p >= self.right() {
                return Err(Error::Contour(format!("eigenvalue {p} lies outside [{}, {}]", self.left(), self.right())));
            }
            let gap = (p - self.left()).min(self.right() - p).min(self.half_height);
            if gap < clearance {
                return Err(Error::Contour(format!("eigenvalue {p} is within {gap:e} of the contour")));
            }
        }
        Ok(())
    }
}

/// Real and imaginary parts of a contour evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourValue {
    pub value: f64,
    /// Imaginary residue, zero in exact arithmetic.
    pub imag: f64,
}

fn poles(spectrum: &Spectrum) -> Result<Vec<f64>> {
    let top = spectrum.max().unwrap_or(0.0);
    if top <= 0.0 {
        return Err(Error::Contour("spectrum has no positive eigenvalue".into()));
    }
    if spectrum.min().unwrap_or(0.0) < -ZERO_EIGENVALUE * top {
        return Err(Error::Contour("spectrum has negative eigenvalues".into()));
    }
    Ok(spectrum.eigenvalues().iter().copied().filter(|&x| x > ZERO_EIGENVALUE * top).collect())
}

fn effective_span(lo: f64, hi: f64) -> f64 {
    let span = hi - lo;
    if span > 1e-6 * hi {
        span
    } else {
        hi
    }
}

/// Limit of the linear spectral statistic `(1/M)·Σ g(λ_i)` as given by the
/// contour representation
///
/// ```text
/// (L/M) · (1/2πj) ∮ g(z(ω)) · ψ(ω) / ω dω
/// z(ω) = ω · (1 − (1/L)·Σ λ_i/(λ_i − ω))
/// ψ(ω) = 1 − (1/L)·Σ λ_i²/(λ_i − ω)²
/// ```
///
/// plus the companion term `(1 − L/M)·(1/2πj)∮ g(z)/z dz`. Zero eigenvalues
/// add nothing to `z` or `ψ` and are skipped as poles; their weight is what
/// the companion term carries. It is integrated around the origin when
/// `M > L`, where `M − L` eigenvalues vanish, and is absent otherwise since
/// the `ω` contour excludes the origin.
pub fn lss_contour(g: LssFunction, spectrum: &Spectrum, m: usize, l: usize, contour: &Contour) -> Result<ContourValue> {
    if m == 0 || l == 0 {
        return Err(Error::invalid(format!("dimensions must be positive, got M={m}, L={l}")));
    }
    if spectrum.len() > m {
        return Err(Error::invalid(format!("spectrum has {} eigenvalues but M = {m}", spectrum.len())));
    }
    contour.validate(spectrum)?;
    let poles = poles(spectrum)?;
    let inv_l = 1.0 / l as f64;

    let integrand = |w: Complex64| -> Complex64 {
        let mut s1 = Complex64::new(0.0, 0.0);
        let mut s2 = Complex64::new(0.0, 0.0);
        for &lam in &poles {
            let r = 1.0 / (lam - w);
            s1 += lam * r;
            s2 += lam * lam * r * r;
        }
        let z = w * (1.0 - s1 * inv_l);
        let psi = 1.0 - s2 * inv_l;
        g.eval(z) * psi / w
    };

    // Singular points the panels must resolve: the poles and the origin.
    let mut singular = poles.clone();
    singular.push(0.0);

    let (x0, x1, h) = (contour.left(), contour.right(), contour.half_height);
    let corners = [Complex64::new(x0, -h), Complex64::new(x1, -h), Complex64::new(x1, h), Complex64::new(x0, h)];
    let perimeter = 4.0 * (contour.half_width + h);
    let (gx, gw) = gauss_legendre(PANEL_ORDER);

    let mut total = Complex64::new(0.0, 0.0);
    for side in 0..4 {
        let a = corners[side];
        let b = corners[(side + 1) % 4];
        let length = (b - a).norm();
        let base_panels = ((contour.nodes as f64 * length / perimeter) / PANEL_ORDER as f64).ceil().max(1.0) as usize;
        for k in 0..base_panels {
            let t0 = k as f64 / base_panels as f64;
            let t1 = (k + 1) as f64 / base_panels as f64;
            total += panel(&integrand, a, b, t0, t1, &singular, &gx, &gw, 0);
        }
    }
    let scale = l as f64 / m as f64;
    let mut value = total / Complex64::new(0.0, 2.0 * PI) * scale;
    if m > l {
        value += origin_term(g) * (1.0 - scale);
    }
    let out = ContourValue { value: value.re, imag: value.im };
    if out.imag.abs() > 1e-8 * out.value.abs().max(1.0) {
        return Err(Error::Contour(format!("imaginary residue {:e} exceeds tolerance", out.imag)));
    }
    Ok(out)
}

/// `(1/2πj)∮ g(z)/z dz` on the unit circle. The trapezoid rule with 64 nodes
/// is exact for the polynomial kernels here.
fn origin_term(g: LssFunction) -> Complex64 {
    const N: usize = 64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..N {
        let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / N as f64);
        // dz = j·z dθ, so g(z)/z dz / (2πj) = g(z) dθ / 2π
        acc += g.eval(z);
    }
    acc / N as f64
}

#[allow(clippy::too_many_arguments)]
fn panel(
    f: &impl Fn(Complex64) -> Complex64,
    a: Complex64,
    b: Complex64,
    t0: f64,
    t1: f64,
    singular: &[f64],
    gx: &[f64],
    gw: &[f64],
    depth: u32,
) -> Complex64 {
    let p0 = a + (b - a) * t0;
    let p1 = a + (b - a) * t1;
    let length = (p1 - p0).norm();
    let nearest =
        singular.iter().map(|&s| distance_to_segment(Complex64::new(s, 0.0), p0, p1)).fold(f64::INFINITY, f64::min);
    if length > nearest && depth < MAX_SPLITS {
        let mid = 0.5 * (t0 + t1);
        return panel(f, a, b, t0, mid, singular, gx, gw, depth + 1)
            + panel(f, a, b, mid, t1, singular, gx, gw, depth + 1);
    }
    let half = 0.5 * (p1 - p0);
    let center = 0.5 * (p0 + p1);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in gx.iter().zip(gw) {
        acc += f(center + half * *x) * *w;
    }
    acc * half
}

fn distance_to_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / ab.norm_sqr();
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}
