use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Settings for [`integrate_adaptive`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureOptions {
    /// Gauss-Legendre points per panel.
    pub order: usize,
    /// Required bound on the total coarse-versus-halved panel change, per component.
    pub rel_tol: f64,
    /// Number of geometrically shrinking panels next to the left endpoint.
    pub initial_levels: usize,
    pub max_panels: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { order: 16, rel_tol: 1e-8, initial_levels: 12, max_panels: 20_000 }
    }
}

struct Panel {
    a: f64,
    b: f64,
    /// Sum of the two half-panel rules.
    fine: Vec<f64>,
    /// `|fine - coarse|` per component.
    err: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
}

struct Rule {
    x: Vec<f64>,
    w: Vec<f64>,
    buf: Vec<f64>,
}

impl Rule {
    fn apply<F: FnMut(f64, &mut [f64])>(&mut self, f: &mut F, a: f64, b: f64, out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        let h = 0.5 * (b - a);
        let m = 0.5 * (a + b);
        for (xi, wi) in self.x.iter().zip(&self.w) {
            f(m + h * xi, &mut self.buf);
            for (o, v) in out.iter_mut().zip(&self.buf) {
                *o += h * wi * v;
            }
        }
    }
}

fn make_panel<F: FnMut(f64, &mut [f64])>(
    rule: &mut Rule,
    f: &mut F,
    a: f64,
    b: f64,
    coarse: Vec<f64>,
) -> Panel {
    let dim = coarse.len();
    let mid = 0.5 * (a + b);
    let mut left = vec![0.0; dim];
    let mut right = vec![0.0; dim];
    rule.apply(f, a, mid, &mut left);
    rule.apply(f, mid, b, &mut right);
    let fine: Vec<f64> = left.iter().zip(&right).map(|(l, r)| l + r).collect();
    let err = fine.iter().zip(&coarse).map(|(f, c)| (f - c).abs()).collect();
    Panel { a, b, fine, err, left, right }
}

/// Integrates a vector-valued function over `[a, b]` with adaptive composite Gauss-Legendre.
///
/// The initial partition is `a, a + (b-a)/2^L, ..., a + (b-a)/2, b`, refined near `a`
/// where radial integrands vary fastest. Panels are bisected until, for every component,
/// the summed difference between each panel's single rule and its two halves is below
/// `rel_tol` times the component's integral. Returns the halved-panel sums.
pub fn integrate_adaptive<F: FnMut(f64, &mut [f64])>(
    mut f: F,
    dim: usize,
    a: f64,
    b: f64,
    opts: &QuadratureOptions,
) -> Result<Vec<f64>> {
    if !(b > a) {
        return Err(Error::Domain(format!("empty integration interval [{a}, {b}]")));
    }
    let (x, w) = gauss_legendre(opts.order);
    let mut rule = Rule { x, w, buf: vec![0.0; dim] };
    let mut edges = vec![a];
    for l in (1..=opts.initial_levels).rev() {
        edges.push(a + (b - a) / 2f64.powi(l as i32));
    }
    edges.push(b);
    let mut panels = Vec::new();
    for pair in edges.windows(2) {
        let mut coarse = vec![0.0; dim];
        rule.apply(&mut f, pair[0], pair[1], &mut coarse);
        panels.push(make_panel(&mut rule, &mut f, pair[0], pair[1], coarse));
    }
    loop {
        let total: Vec<f64> = (0..dim).map(|c| panels.iter().map(|p| p.fine[c]).sum()).collect();
        let err: Vec<f64> = (0..dim).map(|c| panels.iter().map(|p| p.err[c]).sum()).collect();
        if total.iter().chain(&err).any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite quadrature value".into()));
        }
        let budget: Vec<f64> = total.iter().map(|t| opts.rel_tol * t.abs()).collect();
        let worst = (0..dim)
            .filter(|&c| err[c] > budget[c])
            .max_by(|&i, &j| (err[i] / budget[i]).total_cmp(&(err[j] / budget[j])));
        let Some(c) = worst else {
            return Ok(total);
        };
        if panels.len() >= opts.max_panels {
            let achieved = err[c] / total[c].abs().max(f64::MIN_POSITIVE);
            return Err(Error::Accuracy { achieved, requested: opts.rel_tol });
        }
        let idx = (0..panels.len())
            .max_by(|&i, &j| panels[i].err[c].total_cmp(&panels[j].err[c]))
            .expect("at least one panel");
        let p = panels.swap_remove(idx);
        let mid = 0.5 * (p.a + p.b);
        panels.push(make_panel(&mut rule, &mut f, p.a, mid, p.left));
        panels.push(make_panel(&mut rule, &mut f, mid, p.b, p.right));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        let (x, w) = gauss_legendre(16);
        for deg in 0..32 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn gaussian_moment() {
        let v = integrate_adaptive(
            |r, out| out[0] = r * r * (-r * r).exp(),
            1,
            0.0,
            12.0,
            &QuadratureOptions::default(),
        )
        .unwrap();
        let exact = std::f64::consts::PI.sqrt() / 4.0;
        assert!((v[0] - exact).abs() < 1e-13);
    }

    #[test]
    fn zero_integrand() {
        let v = integrate_adaptive(|_, out| out[0] = 0.0, 1, 0.0, 1.0, &Default::default())
            .unwrap();
        assert_eq!(v[0], 0.0);
    }

    #[test]
    fn unresolvable_integrand_reports_accuracy() {
        let opts = QuadratureOptions { max_panels: 20, ..Default::default() };
        let r = integrate_adaptive(|r, out| out[0] = (1e4 * r).sin().abs(), 1, 0.0, 1.0, &opts);
        assert!(matches!(r, Err(Error::Accuracy { .. })));
    }
}
