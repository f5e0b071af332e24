//! Trace-based spectrum sensing for large antenna arrays.
//!
//! The crate is organised in four layers:
//!
//! * [`rmt`] holds the closed-form random-matrix results: the
//!   Marcenko–Pastur law, Gaussian null distributions of the three
//!   high-dimensional detectors, Neyman–Pearson thresholds and the
//!   sensitivity partials of those thresholds in `M` and `L`.
//! * [`detectors`] computes sample-covariance trace summaries and the
//!   detector statistics from them, plus the eigenvalue-based baselines.
//! * [`sim`] generates observations under both hypotheses and runs seeded,
//!   worker-count-independent Monte Carlo experiments.
//! * [`oracle`] is independent verification machinery: a Jacobi eigensolver,
//!   numerical contour integration of the LSS limit and real-axis
//!   quadrature against the Marcenko–Pastur density.
//!
//! All noise powers are normalised to one; callers with a known noise
//! variance must scale observations by `1/σ` first.

pub mod detectors;
mod error;
pub mod oracle;
pub mod rmt;
pub mod sim;

pub use error::{Error, Result};

pub use detectors::{Decision, Hypothesis, ObservationMatrix, ScmSummary};
pub use rmt::{AspectRatio, DetectorKind, MpLaw, NullDistribution};
