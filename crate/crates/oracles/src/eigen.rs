use nalgebra::DMatrix;
use nsm_core::linalg::CMat;
use num_complex::Complex64;

use crate::{OracleError, Result};

pub fn to_dmatrix<const N: usize>(a: &CMat<N>) -> DMatrix<Complex64> {
    DMatrix::from_fn(N, N, |i, j| a[(i, j)])
}

/// Eigenvalues from a complex Schur decomposition, sorted by real then imaginary part.
pub fn dense_eigenvalues(a: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(OracleError::InvalidInput("matrix is not square".into()));
    }
    let schur = nalgebra::Schur::try_new(a.clone(), 1e-15, 100_000)
        .ok_or_else(|| OracleError::InvalidInput("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    let mut ev: Vec<Complex64> = (0..t.nrows()).map(|i| t[(i, i)]).collect();
    ev.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(ev)
}
