//! Direct separable discrete Fourier transforms on `n^3` storage-order arrays.

use num_complex::Complex64;
use std::f64::consts::PI;

fn along_axis(data: &mut [Complex64], n: usize, axis: usize, sign: f64) {
    let twiddle: Vec<Complex64> = (0..n).map(|p| Complex64::from_polar(1.0, sign * 2.0 * PI * p as f64 / n as f64)).collect();
    let stride = [n * n, n, 1][axis];
    let mut line = vec![Complex64::default(); n];
    for base in 0..n * n * n {
        let pos = (base / stride) % n;
        if pos != 0 {
            continue;
        }
        for (q, l) in line.iter_mut().enumerate() {
            *l = Complex64::default();
            for p in 0..n {
                *l += data[base + p * stride] * twiddle[(p * q) % n];
            }
        }
        for (q, l) in line.iter().enumerate() {
            data[base + q * stride] = *l;
        }
    }
}

/// Physical grid values `f(x_j) = sum_m c_m e^{i k_m x_j}` (real part).
pub fn to_physical(coeffs: &[Complex64], n: usize) -> Vec<f64> {
    assert_eq!(coeffs.len(), n * n * n);
    let mut data = coeffs.to_vec();
    for axis in 0..3 {
        along_axis(&mut data, n, axis, 1.0);
    }
    data.into_iter().map(|z| z.re).collect()
}

/// Coefficients `c_m = n^{-3} sum_j f(x_j) e^{-i k_m x_j}`.
pub fn to_spectral(values: &[f64], n: usize) -> Vec<Complex64> {
    assert_eq!(values.len(), n * n * n);
    let mut data: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    for axis in 0..3 {
        along_axis(&mut data, n, axis, -1.0);
    }
    let s = 1.0 / (n * n * n) as f64;
    data.into_iter().map(|z| z * s).collect()
}
