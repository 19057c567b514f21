use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::ScalarField;
use super::grid::SpectralGrid;

/// Three-dimensional FFT plans plus scratch space for one grid.
///
/// Real fields are transformed two at a time by packing them into the real and imaginary
/// parts of one complex array.
pub struct Fft3 {
    grid: SpectralGrid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    work: Vec<Complex64>,
    lines: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl std::fmt::Debug for Fft3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft3").field("grid", &self.grid).finish()
    }
}

impl Fft3 {
    pub fn new(grid: SpectralGrid) -> Self {
        let n = grid.resolution();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Fft3 {
            grid,
            forward,
            inverse,
            work: vec![Complex64::default(); grid.len()],
            lines: vec![Complex64::default(); grid.len()],
            scratch: vec![Complex64::default(); scratch_len],
        }
    }

    pub fn grid(&self) -> SpectralGrid {
        self.grid
    }

    /// In-place 3-D transform of a complex array in storage order; `forward` includes `1/n^3`.
    pub fn transform(&mut self, data: &mut [Complex64], forward: bool) {
        let n = self.grid.resolution();
        assert_eq!(data.len(), n * n * n);
        let plan = if forward { &self.forward } else { &self.inverse };
        // Last axis is contiguous.
        plan.process_with_scratch(data, &mut self.scratch);
        // Middle axis: transpose each (j, k) slab.
        for i in 0..n {
            let slab = &mut data[i * n * n..(i + 1) * n * n];
            for j in 0..n {
                for k in 0..n {
                    self.lines[k * n + j] = slab[j * n + k];
                }
            }
            plan.process_with_scratch(&mut self.lines[..n * n], &mut self.scratch);
            for j in 0..n {
                for k in 0..n {
                    slab[j * n + k] = self.lines[k * n + j];
                }
            }
        }
        // First axis: view as (n, n^2) and transpose.
        let m = n * n;
        for i in 0..n {
            for jk in 0..m {
                self.lines[jk * n + i] = data[i * m + jk];
            }
        }
        plan.process_with_scratch(&mut self.lines, &mut self.scratch);
        for i in 0..n {
            for jk in 0..m {
                data[i * m + jk] = self.lines[jk * n + i];
            }
        }
        if forward {
            let s = 1.0 / (n * n * n) as f64;
            data.iter_mut().for_each(|x| *x *= s);
        }
    }

    /// Physical values of one real field.
    pub fn to_physical(&mut self, f: &ScalarField, out: &mut [f64]) {
        self.work.copy_from_slice(f.coeffs());
        let mut work = std::mem::take(&mut self.work);
        self.transform(&mut work, false);
        for (o, w) in out.iter_mut().zip(&work) {
            *o = w.re;
        }
        self.work = work;
    }

    /// Physical values of two real fields with a single complex transform.
    pub fn to_physical_pair(
        &mut self,
        a: &ScalarField,
        b: &ScalarField,
        out_a: &mut [f64],
        out_b: &mut [f64],
    ) {
        let mut work = std::mem::take(&mut self.work);
        let i = Complex64::i();
        for ((w, x), y) in work.iter_mut().zip(a.coeffs()).zip(b.coeffs()) {
            *w = x + i * y;
        }
        self.transform(&mut work, false);
        for ((w, oa), ob) in work.iter().zip(out_a.iter_mut()).zip(out_b.iter_mut()) {
            *oa = w.re;
            *ob = w.im;
        }
        self.work = work;
    }

    /// Physical values of two real fields whose coefficients at each index are produced by
    /// `coeff(idx) -> (a, b)`.
    pub fn to_physical_with(
        &mut self,
        coeff: impl Fn(usize) -> (Complex64, Complex64),
        out_a: &mut [f64],
        out_b: &mut [f64],
    ) {
        let mut work = std::mem::take(&mut self.work);
        let i = Complex64::i();
        for (idx, w) in work.iter_mut().enumerate() {
            let (x, y) = coeff(idx);
            *w = x + i * y;
        }
        self.transform(&mut work, false);
        for ((w, oa), ob) in work.iter().zip(out_a.iter_mut()).zip(out_b.iter_mut()) {
            *oa = w.re;
            *ob = w.im;
        }
        self.work = work;
    }

    /// Spectral coefficients of one real field, exactly Hermitian with empty Nyquist planes.
    pub fn from_physical(&mut self, values: &[f64]) -> ScalarField {
        let zeros = vec![0.0; values.len()];
        self.from_physical_pair(values, &zeros).0
    }

    /// Spectral coefficients of two real fields, split from one complex transform.
    pub fn from_physical_pair(&mut self, a: &[f64], b: &[f64]) -> (ScalarField, ScalarField) {
        let g = self.grid;
        let mut work = std::mem::take(&mut self.work);
        for ((w, &x), &y) in work.iter_mut().zip(a).zip(b) {
            *w = Complex64::new(x, y);
        }
        self.transform(&mut work, true);
        let mut ca = vec![Complex64::default(); g.len()];
        let mut cb = vec![Complex64::default(); g.len()];
        for idx in 0..g.len() {
            if g.is_nyquist(idx) {
                continue;
            }
            let z = work[idx];
            let zc = work[g.negated(idx)].conj();
            ca[idx] = (z + zc) * 0.5;
            let d = (z - zc) * 0.5;
            // d / i
            cb[idx] = Complex64::new(d.im, -d.re);
        }
        self.work = work;
        (ScalarField::from_coeffs_unchecked(g, ca), ScalarField::from_coeffs_unchecked(g, cb))
    }
}
