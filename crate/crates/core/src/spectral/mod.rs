//! Periodic spectral fields on a cubic box.
//!
//! Coefficients are stored in FFT index order: entry `(i, j, k)` of an `n^3` array holds the
//! wavenumber `2 pi / L * (m(i), m(j), m(k))` with `m(i) = i` for `i < n/2` and `i - n`
//! otherwise. The forward transform carries the factor `1/n^3`, so a physical field is the
//! plain sum `f(x) = sum_k c_k exp(i k.x)` and `int |f|^2 dx = L^3 sum_k |c_k|^2`.
//!
//! Nyquist planes (`m = -n/2` along any axis) carry no content: constructors and transforms
//! zero them, and derivative symbols treat the Nyquist component of the wavevector as zero.

mod fft;
mod field;
mod grid;
mod ops;
mod snapshot;

pub use fft::Fft3;
pub use field::{FieldComponents, ScalarField, VectorField};
pub use grid::SpectralGrid;
pub use ops::{
    curl, divergence, e_par_from_density, gradient, helmholtz_decompose, inverse_laplacian,
    laplacian, sobolev_norm, sobolev_weight, vector_laplacian,
};
pub use snapshot::{read_snapshot, write_snapshot};
