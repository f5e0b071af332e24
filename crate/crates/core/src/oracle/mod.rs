//! Numerical cross-checks for the closed forms: a dense Hermitian
//! eigensolver, contour integration of the LSS limit and real-axis
//! quadrature against the Marcenko–Pastur density.

mod contour;
mod eigen;
mod integrals;
pub mod quadrature;

pub use contour::{lss_contour, Contour, ContourValue, LssFunction};
pub use eigen::{hermitian_eigenvalues, Spectrum, MAX_ORDER};
pub use integrals::{companion_stieltjes_numeric, mean_correction_numeric, mp_mass_numeric, mp_moment_numeric};
