use num_complex::Complex64;

use super::grid::SpectralGrid;
use crate::error::{Error, Result};

/// A real scalar field held by its Fourier coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: SpectralGrid,
    coeffs: Vec<Complex64>,
}

/// A real vector field: three scalar components on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub c: [ScalarField; 3],
}

/// Uniform access to the scalar components of a field-like value.
pub trait FieldComponents {
    fn components(&self) -> Vec<&ScalarField>;
}

impl FieldComponents for ScalarField {
    fn components(&self) -> Vec<&ScalarField> {
        vec![self]
    }
}

impl FieldComponents for VectorField {
    fn components(&self) -> Vec<&ScalarField> {
        self.c.iter().collect()
    }
}

impl ScalarField {
    pub fn zeros(grid: SpectralGrid) -> Self {
        ScalarField { grid, coeffs: vec![Complex64::default(); grid.len()] }
    }

    /// Wraps a coefficient array; the caller is responsible for Hermitian symmetry.
    pub fn from_coeffs(grid: SpectralGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        Ok(ScalarField { grid, coeffs })
    }

    pub(crate) fn from_coeffs_unchecked(grid: SpectralGrid, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.len());
        ScalarField { grid, coeffs }
    }

    /// Builds coefficients from a function of the flat index and wavevector.
    pub fn from_spectral_fn(
        grid: SpectralGrid,
        mut f: impl FnMut(usize, [f64; 3]) -> Complex64,
    ) -> Self {
        let coeffs = (0..grid.len()).map(|idx| f(idx, grid.wavevector(idx))).collect();
        ScalarField { grid, coeffs }
    }

    /// The real field `2 Re(a exp(i k.x))`, i.e. coefficient `a` at mode `m` and `conj(a)`
    /// at `-m`.
    pub fn real_mode(grid: SpectralGrid, m: [i64; 3], a: Complex64) -> Result<Self> {
        let h = (grid.resolution() / 2) as i64;
        if m.iter().any(|&x| x <= -h || x >= h) {
            return Err(Error::InvalidParameter(format!("mode {m:?} is not representable")));
        }
        let mut f = ScalarField::zeros(grid);
        let idx = grid.index(grid.position(m[0]), grid.position(m[1]), grid.position(m[2]));
        if m == [0, 0, 0] {
            f.coeffs[idx] = Complex64::new(2.0 * a.re, 0.0);
        } else {
            f.coeffs[idx] = a;
            f.coeffs[grid.negated(idx)] = a.conj();
        }
        Ok(f)
    }

    pub fn grid(&self) -> SpectralGrid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// The zero-wavenumber coefficient (the spatial mean).
    pub fn mean(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Discrete `l2` norm of the coefficient array.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `L^2` norm over the box via Plancherel.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.volume() * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Real `L^2` inner product over the box.
    pub fn inner(&self, other: &ScalarField) -> f64 {
        assert_eq!(self.grid, other.grid);
        self.grid.volume()
            * self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| (a.conj() * b).re)
                .sum::<f64>()
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &ScalarField) {
        assert_eq!(self.grid, other.grid);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * s;
        }
    }

    pub fn scaled(&self, s: f64) -> ScalarField {
        let mut f = self.clone();
        f.coeffs.iter_mut().for_each(|c| *c *= s);
        f
    }

    /// Applies a per-mode complex multiplier.
    pub fn map_modes(&self, mut f: impl FnMut(usize, [f64; 3], Complex64) -> Complex64) -> Self {
        let g = self.grid;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, &c)| f(idx, g.wavevector(idx), c))
            .collect();
        ScalarField { grid: g, coeffs }
    }

    /// Replaces every coefficient pair by its Hermitian average and clears Nyquist planes.
    pub fn enforce_hermitian(&mut self) {
        let g = self.grid;
        for idx in 0..g.len() {
            if g.is_nyquist(idx) {
                self.coeffs[idx] = Complex64::default();
                continue;
            }
            let jdx = g.negated(idx);
            if jdx < idx {
                continue;
            }
            let avg = (self.coeffs[idx] + self.coeffs[jdx].conj()) * 0.5;
            self.coeffs[idx] = avg;
            self.coeffs[jdx] = avg.conj();
        }
    }

    /// Largest violation of `c(-k) = conj(c(k))`.
    pub fn hermitian_defect(&self) -> f64 {
        let g = self.grid;
        (0..g.len())
            .map(|idx| (self.coeffs[idx] - self.coeffs[g.negated(idx)].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Zeroes the modes outside `mask`.
    pub fn apply_mask(&mut self, mask: &[bool]) {
        for (c, &keep) in self.coeffs.iter_mut().zip(mask) {
            if !keep {
                *c = Complex64::default();
            }
        }
    }

    /// Errors unless the mean vanishes relative to the field's size.
    pub fn require_zero_mean(&self, what: &str) -> Result<()> {
        let m = self.mean().norm();
        if m > 1e-12 * self.coeff_norm() {
            return Err(Error::Constraint(format!("{what} has nonzero mean {m:e}")));
        }
        Ok(())
    }
}

impl VectorField {
    pub fn zeros(grid: SpectralGrid) -> Self {
        VectorField { c: std::array::from_fn(|_| ScalarField::zeros(grid)) }
    }

    pub fn new(x: ScalarField, y: ScalarField, z: ScalarField) -> Self {
        assert!(x.grid() == y.grid() && y.grid() == z.grid());
        VectorField { c: [x, y, z] }
    }

    pub fn grid(&self) -> SpectralGrid {
        self.c[0].grid()
    }

    pub fn l2_norm(&self) -> f64 {
        self.c.iter().map(|f| f.l2_norm().powi(2)).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &VectorField) -> f64 {
        (0..3).map(|d| self.c[d].inner(&other.c[d])).sum()
    }

    pub fn axpy(&mut self, s: f64, other: &VectorField) {
        for d in 0..3 {
            self.c[d].axpy(s, &other.c[d]);
        }
    }

    pub fn scaled(&self, s: f64) -> VectorField {
        VectorField { c: std::array::from_fn(|d| self.c[d].scaled(s)) }
    }

    pub fn coeff_norm(&self) -> f64 {
        self.c.iter().map(|f| f.coeff_norm().powi(2)).sum::<f64>().sqrt()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.c.iter().map(|f| f.max_abs_coeff()).fold(0.0, f64::max)
    }

    pub fn enforce_hermitian(&mut self) {
        self.c.iter_mut().for_each(|f| f.enforce_hermitian());
    }

    pub fn require_zero_mean(&self, what: &str) -> Result<()> {
        let m = self.c.iter().map(|f| f.mean().norm()).fold(0.0, f64::max);
        if m > 1e-12 * self.coeff_norm() {
            return Err(Error::Constraint(format!("{what} has nonzero mean {m:e}")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Fft3;
    use std::f64::consts::PI;

    #[test]
    fn real_mode_is_hermitian_and_real() {
        let g = SpectralGrid::new(2.0 * PI, 8).unwrap();
        let f = ScalarField::real_mode(g, [1, -2, 3], Complex64::new(0.3, -0.4)).unwrap();
        assert_eq!(f.hermitian_defect(), 0.0);
        let mut fft = Fft3::new(g);
        let mut phys = vec![0.0; g.len()];
        fft.to_physical(&f, &mut phys);
        for idx in 0..g.len() {
            let x = g.point(idx);
            let phase = x[0] - 2.0 * x[1] + 3.0 * x[2];
            let want = 2.0 * (0.3 * phase.cos() + 0.4 * phase.sin());
            assert!((phys[idx] - want).abs() < 1e-13);
        }
    }

    #[test]
    fn physical_roundtrip() {
        let g = SpectralGrid::new(3.0, 8).unwrap();
        let mut fft = Fft3::new(g);
        let f = ScalarField::real_mode(g, [2, 0, -1], Complex64::new(1.0, 2.0)).unwrap();
        let h = ScalarField::real_mode(g, [0, 3, 1], Complex64::new(-0.5, 0.1)).unwrap();
        let mut pf = vec![0.0; g.len()];
        let mut ph = vec![0.0; g.len()];
        fft.to_physical_pair(&f, &h, &mut pf, &mut ph);
        let (f2, h2) = fft.from_physical_pair(&pf, &ph);
        for (a, b) in f.coeffs().iter().zip(f2.coeffs()) {
            assert!((a - b).norm() < 1e-14);
        }
        for (a, b) in h.coeffs().iter().zip(h2.coeffs()) {
            assert!((a - b).norm() < 1e-14);
        }
        assert_eq!(f2.hermitian_defect(), 0.0);
    }

    #[test]
    fn parseval_matches_physical_quadrature() {
        let g = SpectralGrid::new(2.0, 8).unwrap();
        let mut fft = Fft3::new(g);
        let mut f = ScalarField::real_mode(g, [1, 1, 0], Complex64::new(0.7, 0.2)).unwrap();
        f.axpy(1.0, &ScalarField::real_mode(g, [3, -2, 1], Complex64::new(-0.1, 0.9)).unwrap());
        let mut phys = vec![0.0; g.len()];
        fft.to_physical(&f, &mut phys);
        let quad: f64 = phys.iter().map(|x| x * x).sum::<f64>() * g.spacing().powi(3);
        let spectral = f.l2_norm().powi(2);
        assert!(((quad - spectral) / spectral).abs() < 1e-12);
    }
}
