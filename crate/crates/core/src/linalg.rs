//! Fixed-size complex matrices, the matrix exponential and a small eigenvalue solver.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense `N x N` complex matrix stored row-major on the stack.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat<const N: usize>(pub [[Complex64; N]; N]);

impl<const N: usize> Default for CMat<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> CMat<N> {
    pub fn zeros() -> Self {
        CMat([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|x| *x *= s);
        m
    }

    pub fn scale_real(&self, s: f64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|x| *x *= s);
        m
    }

    pub fn matvec(&self, v: &[Complex64; N]) -> [Complex64; N] {
        let mut out = [ZERO; N];
        for i in 0..N {
            let row = &self.0[i];
            let mut acc = ZERO;
            for j in 0..N {
                acc += row[j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..N)
            .map(|j| (0..N).map(|i| self.0[i][j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.re.is_finite() && x.im.is_finite())
    }

    /// Solves `self * X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        let mut a = *self;
        let mut b = *rhs;
        for k in 0..N {
            let p = (k..N)
                .max_by(|&i, &j| a.0[i][k].norm().total_cmp(&a.0[j][k].norm()))
                .unwrap_or(k);
            if a.0[p][k].norm() == 0.0 {
                return None;
            }
            a.0.swap(k, p);
            b.0.swap(k, p);
            let inv = ONE / a.0[k][k];
            for i in k + 1..N {
                let f = a.0[i][k] * inv;
                if f == ZERO {
                    continue;
                }
                for j in k..N {
                    let akj = a.0[k][j];
                    a.0[i][j] -= f * akj;
                }
                for j in 0..N {
                    let bkj = b.0[k][j];
                    b.0[i][j] -= f * bkj;
                }
            }
        }
        for k in (0..N).rev() {
            let inv = ONE / a.0[k][k];
            for j in 0..N {
                let mut acc = b.0[k][j];
                for m in k + 1..N {
                    acc -= a.0[k][m] * b.0[m][j];
                }
                b.0[k][j] = acc * inv;
            }
        }
        Some(b)
    }
}

impl<const N: usize> Index<(usize, usize)> for CMat<N> {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for CMat<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Sub for CMat<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Mul for CMat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

// Pade degrees and 1-norm thresholds for scaling and squaring (Higham 2005).
const PADE_THETA: [(usize, f64); 5] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
    (13, 5.371920351148152e0),
];

fn pade_coefficients(m: usize) -> Vec<f64> {
    // b_j = (2m - j)! m! / ((2m)! j! (m - j)!), built by the ratio b_{j+1} / b_j.
    let mut b = vec![1.0; m + 1];
    for j in 0..m {
        b[j + 1] = b[j] * (m - j) as f64 / (((2 * m - j) * (j + 1)) as f64);
    }
    b
}

/// Evaluates `p(A) = sum_j c_j A^j` split into odd and even parts `(U, V)` of the Pade pair.
fn pade_uv<const N: usize>(a: &CMat<N>, m: usize) -> (CMat<N>, CMat<N>) {
    let b = pade_coefficients(m);
    let id = CMat::<N>::identity();
    let a2 = *a * *a;
    if m < 13 {
        let mut powers = vec![id, a2];
        while powers.len() <= m / 2 {
            let last = *powers.last().unwrap();
            powers.push(last * a2);
        }
        let mut u = CMat::zeros();
        let mut v = CMat::zeros();
        for (k, p) in powers.iter().enumerate().take(m / 2 + 1) {
            u = u + p.scale_real(b[2 * k + 1]);
            v = v + p.scale_real(b[2 * k]);
        }
        (*a * u, v)
    } else {
        let a4 = a2 * a2;
        let a6 = a4 * a2;
        let u_hi = a6.scale_real(b[13]) + a4.scale_real(b[11]) + a2.scale_real(b[9]);
        let u_lo = a6.scale_real(b[7])
            + a4.scale_real(b[5])
            + a2.scale_real(b[3])
            + id.scale_real(b[1]);
        let u = *a * (a6 * u_hi + u_lo);
        let v_hi = a6.scale_real(b[12]) + a4.scale_real(b[10]) + a2.scale_real(b[8]);
        let v_lo = a6.scale_real(b[6])
            + a4.scale_real(b[4])
            + a2.scale_real(b[2])
            + id.scale_real(b[0]);
        (u, a6 * v_hi + v_lo)
    }
}

/// Matrix exponential by scaling and squaring with a diagonal Pade approximant of degree
/// at most 13.
pub fn expm<const N: usize>(a: &CMat<N>) -> Result<CMat<N>> {
    if !a.is_finite() {
        return Err(Error::Numeric("matrix exponential of non-finite matrix".into()));
    }
    let norm = a.norm1();
    let (m, s) = match PADE_THETA.iter().find(|(_, theta)| norm <= *theta) {
        Some(&(m, _)) => (m, 0),
        None => {
            let theta13 = PADE_THETA[4].1;
            let s = (norm / theta13).log2().ceil().max(0.0) as i32;
            (13, s)
        }
    };
    let scaled = a.scale_real(0.5f64.powi(s));
    let (u, v) = pade_uv(&scaled, m);
    let mut r = (v - u)
        .solve(&(v + u))
        .ok_or_else(|| Error::Numeric("singular Pade denominator".into()))?;
    for _ in 0..s {
        r = r * r;
    }
    if !r.is_finite() {
        return Err(Error::Numeric("matrix exponential overflowed".into()));
    }
    Ok(r)
}

/// `exp(A t) v` for `t >= 0`.
pub fn matrix_exponential_apply<const N: usize>(
    a: &CMat<N>,
    t: f64,
    v: &[Complex64; N],
) -> Result<[Complex64; N]> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("propagation time must be finite and >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(*v);
    }
    Ok(expm(&a.scale_real(t))?.matvec(v))
}

/// Eigenvalues by Householder reduction to Hessenberg form followed by shifted complex QR.
pub fn eigenvalues<const N: usize>(a: &CMat<N>) -> Result<[Complex64; N]> {
    if !a.is_finite() {
        return Err(Error::Numeric("eigenvalues of non-finite matrix".into()));
    }
    let mut h = hessenberg(a);
    let mut out = [ZERO; N];
    if N == 0 {
        return Ok(out);
    }
    let scale = h.frobenius().max(f64::MIN_POSITIVE);
    let mut hi = N - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        // Find the start of the unreduced trailing block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h.0[lo][lo - 1].norm();
            let diag = h.0[lo][lo].norm() + h.0[lo - 1][lo - 1].norm();
            let tol = f64::EPSILON * if diag > 0.0 { diag } else { scale };
            if sub <= tol {
                h.0[lo][lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out[hi] = h.0[hi][hi];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > 100 * N.max(10) {
            return Err(Error::Numeric("QR iteration failed to converge".into()));
        }
        let shift = if iter % 11 == 0 {
            // Exceptional shift to break cycles.
            h.0[hi][hi] + Complex64::new(0.75 * h.0[hi][hi - 1].norm(), 0.0)
        } else {
            wilkinson_shift(
                h.0[hi - 1][hi - 1],
                h.0[hi - 1][hi],
                h.0[hi][hi - 1],
                h.0[hi][hi],
            )
        };
        qr_sweep(&mut h, lo, hi, shift);
    }
    out[0] = h.0[0][0];
    Ok(out)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn qr_sweep<const N: usize>(h: &mut CMat<N>, lo: usize, hi: usize, shift: Complex64) {
    for k in lo..=hi {
        h.0[k][k] -= shift;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let a = h.0[k][k];
        let b = h.0[k + 1][k];
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 { (ONE, ZERO) } else { (a / r, b / r) };
        for j in k..=hi {
            let x = h.0[k][j];
            let y = h.0[k + 1][j];
            h.0[k][j] = c.conj() * x + s.conj() * y;
            h.0[k + 1][j] = -s * x + c * y;
        }
        rots.push((c, s));
    }
    for (idx, &(c, s)) in rots.iter().enumerate() {
        let k = lo + idx;
        for i in lo..=(k + 2).min(hi) {
            let x = h.0[i][k];
            let y = h.0[i][k + 1];
            h.0[i][k] = x * c + y * s;
            h.0[i][k + 1] = -x * s.conj() + y * c.conj();
        }
    }
    for k in lo..=hi {
        h.0[k][k] += shift;
    }
}

fn hessenberg<const N: usize>(a: &CMat<N>) -> CMat<N> {
    let mut h = *a;
    if N < 3 {
        return h;
    }
    for k in 0..N - 2 {
        let alpha_norm: f64 = (k + 1..N).map(|i| h.0[i][k].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = h.0[k + 1][k];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let mut v = [ZERO; N];
        for i in k + 1..N {
            v[i] = h.0[i][k];
        }
        v[k + 1] += phase * alpha_norm;
        let vnorm2: f64 = (k + 1..N).map(|i| v[i].norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // H <- (I - 2 v v^H / |v|^2) H (I - 2 v v^H / |v|^2)
        for j in 0..N {
            let mut dot = ZERO;
            for i in k + 1..N {
                dot += v[i].conj() * h.0[i][j];
            }
            let f = dot * (2.0 / vnorm2);
            for i in k + 1..N {
                h.0[i][j] -= v[i] * f;
            }
        }
        for i in 0..N {
            let mut dot = ZERO;
            for j in k + 1..N {
                dot += h.0[i][j] * v[j];
            }
            let f = dot * (2.0 / vnorm2);
            for j in k + 1..N {
                h.0[i][j] -= f * v[j].conj();
            }
        }
        for i in k + 2..N {
            h.0[i][k] = ZERO;
        }
    }
    h
}
