//! Dense complex linear algebra: solves, Cholesky, spectra, exponentials, norms,
//! resolvents and trapezoid convolution of sampled matrix functions.

mod chol;
mod cmat;
mod convolve;
mod eig;
mod expm;
mod lu;
mod norm;
mod qr;
mod spectrum;

pub use chol::cholesky;
pub use cmat::{vec_norm, CMat, C64};
pub use convolve::{convolve, uniform_grid, SampledMatrixFunction};
pub use eig::{eigenvalues, sort_spectrum, spectral_abscissa};
pub use expm::matrix_exponential;
pub use lu::{inverse, resolvent, solve_linear, Lu, PIVOT_TOL};
pub use norm::{largest_hermitian_eigenvalue, operator_norm};
pub use qr::Qr;
pub use spectrum::{match_spectra, spectral_distance};

/// Shorthand for a real complex number.
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}
