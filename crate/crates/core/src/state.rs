//! The eleven perturbation fields `[n, u, sigma, E, B]` on one spectral grid.

use num_complex::Complex64;

use crate::spectral::{FieldComponents, ScalarField, SpectralGrid, VectorField};

/// Number of scalar components in a state.
pub const STATE_DIM: usize = 11;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub n: ScalarField,
    pub u: VectorField,
    pub sigma: ScalarField,
    pub e: VectorField,
    pub b: VectorField,
}

impl StateVector {
    pub fn zeros(grid: SpectralGrid) -> Self {
        StateVector {
            n: ScalarField::zeros(grid),
            u: VectorField::zeros(grid),
            sigma: ScalarField::zeros(grid),
            e: VectorField::zeros(grid),
            b: VectorField::zeros(grid),
        }
    }

    pub fn grid(&self) -> SpectralGrid {
        self.n.grid()
    }

    /// Components in the order `n, u1, u2, u3, sigma, E1, E2, E3, B1, B2, B3`.
    pub fn fields(&self) -> [&ScalarField; STATE_DIM] {
        let [u0, u1, u2] = &self.u.c;
        let [e0, e1, e2] = &self.e.c;
        let [b0, b1, b2] = &self.b.c;
        [&self.n, u0, u1, u2, &self.sigma, e0, e1, e2, b0, b1, b2]
    }

    pub fn fields_mut(&mut self) -> [&mut ScalarField; STATE_DIM] {
        let [u0, u1, u2] = &mut self.u.c;
        let [e0, e1, e2] = &mut self.e.c;
        let [b0, b1, b2] = &mut self.b.c;
        [&mut self.n, u0, u1, u2, &mut self.sigma, e0, e1, e2, b0, b1, b2]
    }

    /// The eleven coefficients at one flat mode index.
    pub fn mode(&self, idx: usize) -> [Complex64; STATE_DIM] {
        let f = self.fields();
        std::array::from_fn(|c| f[c].coeffs()[idx])
    }

    pub fn set_mode(&mut self, idx: usize, v: &[Complex64; STATE_DIM]) {
        for (f, x) in self.fields_mut().into_iter().zip(v) {
            f.coeffs_mut()[idx] = *x;
        }
    }

    pub fn axpy(&mut self, s: f64, other: &StateVector) {
        for (a, b) in self.fields_mut().into_iter().zip(other.fields()) {
            a.axpy(s, b);
        }
    }

    pub fn scaled(&self, s: f64) -> StateVector {
        let mut out = self.clone();
        out.fields_mut().into_iter().for_each(|f| *f = f.scaled(s));
        out
    }

    /// `L^2` norm of all eleven components together.
    pub fn l2_norm(&self) -> f64 {
        self.fields().iter().map(|f| f.l2_norm().powi(2)).sum::<f64>().sqrt()
    }

    pub fn enforce_hermitian(&mut self) {
        self.fields_mut().into_iter().for_each(|f| f.enforce_hermitian());
    }

    pub fn apply_mask(&mut self, mask: &[bool]) {
        self.fields_mut().into_iter().for_each(|f| f.apply_mask(mask));
    }

    pub fn is_finite(&self) -> bool {
        self.fields()
            .iter()
            .all(|f| f.coeffs().iter().all(|c| c.re.is_finite() && c.im.is_finite()))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.fields().iter().map(|f| f.max_abs_coeff()).fold(0.0, f64::max)
    }
}

impl FieldComponents for StateVector {
    fn components(&self) -> Vec<&ScalarField> {
        self.fields().to_vec()
    }
}
