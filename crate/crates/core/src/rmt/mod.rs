//! Closed-form random-matrix results.

mod mp;
mod normal;
mod null;

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

pub use mp::{mp_moment, mp_pdf, mp_support, stieltjes_inverse, MpLaw, MAX_MOMENT_ORDER};
pub use normal::{q_function, q_inverse};
pub use null::{
    np_threshold, null_distribution, null_moments, sensitivity_partials, threshold_slope_rates, NullDistribution,
    SensitivityPartials, SlopeRates,
};

/// Ratio `c = M/L` of antennas to samples.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AspectRatio(f64);

impl AspectRatio {
    pub fn new(c: f64) -> Result<Self> {
        if c.is_finite() && c > 0.0 {
            Ok(Self(c))
        } else {
            Err(Error::AspectRatio(c))
        }
    }

    pub fn from_dims(m: usize, l: usize) -> Result<Self> {
        if m == 0 || l == 0 {
            return Err(Error::invalid(format!("dimensions must be positive, got M={m}, L={l}")));
        }
        Self::new(m as f64 / l as f64)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// The detectors this crate knows about.
///
/// The three high-dimensional kinds have Gaussian null laws in closed form;
/// the baselines are eigenvalue statistics without one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DetectorKind {
    Hdl,
    Hds,
    Hdq,
    BaselineGlr,
    BaselineFn,
    BaselineRao,
}

impl DetectorKind {
    pub const HIGH_DIMENSIONAL: [DetectorKind; 3] = [DetectorKind::Hdl, DetectorKind::Hds, DetectorKind::Hdq];
    pub const ALL: [DetectorKind; 6] = [
        DetectorKind::Hdl,
        DetectorKind::Hds,
        DetectorKind::Hdq,
        DetectorKind::BaselineGlr,
        DetectorKind::BaselineFn,
        DetectorKind::BaselineRao,
    ];

    pub fn has_closed_form_null(self) -> bool {
        matches!(self, DetectorKind::Hdl | DetectorKind::Hds | DetectorKind::Hdq)
    }

    /// Whether computing the statistic needs the eigenvalues of the SCM.
    pub fn needs_spectrum(self) -> bool {
        matches!(self, DetectorKind::BaselineGlr | DetectorKind::BaselineRao)
    }

    pub fn label(self) -> &'static str {
        match self {
            DetectorKind::Hdl => "HDL",
            DetectorKind::Hds => "HDS",
            DetectorKind::Hdq => "HDQ",
            DetectorKind::BaselineGlr => "GLR",
            DetectorKind::BaselineFn => "FN",
            DetectorKind::BaselineRao => "RAO",
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "HDL" => Ok(DetectorKind::Hdl),
            "HDS" => Ok(DetectorKind::Hds),
            "HDQ" => Ok(DetectorKind::Hdq),
            "GLR" => Ok(DetectorKind::BaselineGlr),
            "FN" => Ok(DetectorKind::BaselineFn),
            "RAO" => Ok(DetectorKind::BaselineRao),
            other => Err(Error::invalid(format!("unknown detector `{other}`"))),
        }
    }
}
