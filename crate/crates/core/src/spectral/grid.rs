use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A periodic cube `[0, L)^3` resolved by `n` points (and `n` Fourier modes) per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGrid {
    box_length: f64,
    resolution: usize,
}

impl SpectralGrid {
    pub fn new(box_length: f64, resolution: usize) -> Result<Self> {
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "box length must be positive, got {box_length}"
            )));
        }
        if resolution < 8 || resolution % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "resolution must be even and >= 8, got {resolution}"
            )));
        }
        Ok(SpectralGrid { box_length, resolution })
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Number of grid points (and Fourier coefficients).
    pub fn len(&self) -> usize {
        self.resolution.pow(3)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn volume(&self) -> f64 {
        self.box_length.powi(3)
    }

    pub fn spacing(&self) -> f64 {
        self.box_length / self.resolution as f64
    }

    /// Fundamental wavenumber `2 pi / L`.
    pub fn k0(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.resolution + j) * self.resolution + k
    }

    #[inline]
    pub fn unflatten(&self, idx: usize) -> (usize, usize, usize) {
        let n = self.resolution;
        (idx / (n * n), (idx / n) % n, idx % n)
    }

    /// Signed integer mode of storage position `i` along one axis.
    #[inline]
    pub fn signed_mode(&self, i: usize) -> i64 {
        let n = self.resolution;
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Storage position of signed mode `m`, which must satisfy `-n/2 <= m < n/2`.
    #[inline]
    pub fn position(&self, m: i64) -> usize {
        let n = self.resolution as i64;
        m.rem_euclid(n) as usize
    }

    /// Integer modes of a flat index.
    pub fn modes(&self, idx: usize) -> [i64; 3] {
        let (i, j, k) = self.unflatten(idx);
        [self.signed_mode(i), self.signed_mode(j), self.signed_mode(k)]
    }

    /// Flat index of the mode `-m`.
    pub fn negated(&self, idx: usize) -> usize {
        let n = self.resolution;
        let (i, j, k) = self.unflatten(idx);
        self.index((n - i) % n, (n - j) % n, (n - k) % n)
    }

    pub fn is_nyquist(&self, idx: usize) -> bool {
        let (i, j, k) = self.unflatten(idx);
        let h = self.resolution / 2;
        i == h || j == h || k == h
    }

    /// Wavevector used by derivative symbols; Nyquist components are zero.
    pub fn wavevector(&self, idx: usize) -> [f64; 3] {
        let h = (self.resolution / 2) as i64;
        let k0 = self.k0();
        self.modes(idx)
            .map(|m| if m == -h { 0.0 } else { k0 * m as f64 })
    }

    /// Wavevectors of all storage positions.
    pub fn wavevectors(&self) -> Vec<[f64; 3]> {
        (0..self.len()).map(|idx| self.wavevector(idx)).collect()
    }

    /// Modes kept by truncation at `fraction` of the maximal wavenumber along every axis;
    /// `fraction = 2/3` is the classical rule for quadratic products.
    pub fn dealias_mask(&self, fraction: f64) -> Vec<bool> {
        let cutoff = fraction * (self.resolution / 2) as f64;
        (0..self.len())
            .map(|idx| {
                !self.is_nyquist(idx)
                    && self.modes(idx).iter().all(|&m| (m.abs() as f64) <= cutoff)
            })
            .collect()
    }

    /// Physical coordinates of a grid point.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let (i, j, k) = self.unflatten(idx);
        let h = self.spacing();
        [i as f64 * h, j as f64 * h, k as f64 * h]
    }
}
