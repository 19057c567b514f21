//! Empirical checks of the pointwise symbol bounds and per-mode decay rates.

use super::propagate::{fluid_propagator, transverse_propagator};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::model::ModelParams;

/// A tensor grid of radii and times.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundGrid {
    pub r: Vec<f64>,
    pub t: Vec<f64>,
}

impl BoundGrid {
    /// `nr` log-spaced radii in `[r_min, r_max]` and `nt` uniform times in `[0, t_max]`.
    pub fn log_uniform(r_min: f64, r_max: f64, nr: usize, t_max: f64, nt: usize) -> Self {
        let lr = |i: usize| {
            let s = i as f64 / (nr - 1).max(1) as f64;
            (r_min.ln() + s * (r_max.ln() - r_min.ln())).exp()
        };
        let lt = |i: usize| t_max * i as f64 / (nt - 1).max(1) as f64;
        BoundGrid { r: (0..nr).map(lr).collect(), t: (0..nt).map(lt).collect() }
    }

    fn validate(&self) -> Result<()> {
        let ok_r = !self.r.is_empty() && self.r.iter().all(|r| r.is_finite() && *r > 0.0);
        let ok_t = !self.t.is_empty() && self.t.iter().all(|t| t.is_finite() && *t >= 0.0);
        let sorted = self.r.windows(2).all(|w| w[0] < w[1]) && self.t.windows(2).all(|w| w[0] < w[1]);
        if ok_r && ok_t && sorted {
            Ok(())
        } else {
            Err(Error::InvalidParameter("bound grids must be finite, positive and increasing".into()))
        }
    }
}

/// One line of a bound report: the supremum of `|||block||| / weight` over a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub block: String,
    pub domain: String,
    pub weight_formula: String,
    pub empirical_sup: f64,
    /// The decay constant (`lambda` or `c`) used in the weight.
    pub lambda_used: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub t_max: f64,
    /// The supremum over the outer tenth of an open grid edge exceeds the rest by over 1%.
    pub edge_growth: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    /// Every supremum finite and no edge-growth flag.
    pub fn all_bounded(&self) -> bool {
        self.rows.iter().all(|r| r.empirical_sup.is_finite() && !r.edge_growth)
    }
}

/// Which grid edges are open (the bound must hold all the way out).
#[derive(Clone, Copy)]
struct Edges {
    small_r: bool,
    large_r: bool,
}

/// `ratios[ir][it]`; returns (sup, edge_growth).
fn sup_with_edge(ratios: &[Vec<f64>], edges: Edges) -> (f64, bool) {
    let nr = ratios.len();
    let nt = ratios.first().map_or(0, |v| v.len());
    let band = |n: usize| (n / 10).max(1);
    let (br, bt) = (band(nr), band(nt));
    let mut edge = 0.0f64;
    let mut rest = 0.0f64;
    let mut all = 0.0f64;
    for (ir, row) in ratios.iter().enumerate() {
        for (it, &v) in row.iter().enumerate() {
            let v = if v.is_nan() { f64::INFINITY } else { v };
            all = all.max(v);
            let on_edge = it + bt >= nt
                || (edges.small_r && ir < br)
                || (edges.large_r && ir + br >= nr);
            if on_edge {
                edge = edge.max(v);
            } else {
                rest = rest.max(v);
            }
        }
    }
    let growth = if nr * nt <= 1 { false } else { edge > 1.01 * rest };
    (all, growth)
}

const FLUID_BLOCKS: [&str; 6] = ["N1", "N2", "M1", "M2", "Q1", "Q2"];

fn vec_norm(xs: &[num_complex::Complex64]) -> f64 {
    xs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Norms of the blocks `N1, N2, M1, M2, Q1, Q2` of the fluid propagator.
fn fluid_block_norms(e: &CMat<5>) -> [f64; 6] {
    let n1 = e[(0, 0)].norm();
    let n2 = vec_norm(&[e[(0, 1)], e[(0, 2)], e[(0, 3)], e[(0, 4)]]);
    let m1 = vec_norm(&[e[(1, 0)], e[(2, 0)], e[(3, 0)]]);
    let mut m2 = Vec::with_capacity(12);
    for k in 1..4 {
        for l in 1..5 {
            m2.push(e[(k, l)]);
        }
    }
    let q1 = vec_norm(&[e[(4, 0)], e[(4, 4)]]);
    let q2 = vec_norm(&[e[(4, 1)], e[(4, 2)], e[(4, 3)]]);
    [n1, n2, m1, vec_norm(&m2), q1, q2]
}

/// Block norms over a grid at `xi = r e1`: `out[block][ir][it]`.
fn fluid_norm_table(grid: &BoundGrid, p: &ModelParams) -> Result<Vec<Vec<Vec<f64>>>> {
    let mut out = vec![vec![vec![0.0; grid.t.len()]; grid.r.len()]; 6];
    for (ir, &r) in grid.r.iter().enumerate() {
        for (it, &t) in grid.t.iter().enumerate() {
            let e = fluid_propagator([r, 0.0, 0.0], t, p)?;
            for (b, v) in fluid_block_norms(&e).into_iter().enumerate() {
                out[b][ir][it] = v;
            }
        }
    }
    Ok(out)
}

fn restrict(grid: &BoundGrid, keep: impl Fn(f64) -> bool) -> BoundGrid {
    BoundGrid { r: grid.r.iter().copied().filter(|&r| keep(r)).collect(), t: grid.t.clone() }
}

/// Precomputed fluid block norms for repeated weight evaluation.
struct FluidTables {
    low: BoundGrid,
    high: BoundGrid,
    low_norms: Vec<Vec<Vec<f64>>>,
    high_norms: Vec<Vec<Vec<f64>>>,
}

impl FluidTables {
    fn new(low: &BoundGrid, high: &BoundGrid, p: &ModelParams, r1: f64) -> Result<Self> {
        low.validate()?;
        high.validate()?;
        if !(r1 > 0.0) {
            return Err(Error::InvalidParameter(format!("split radius must be positive, got {r1}")));
        }
        let low = restrict(low, |r| r <= r1);
        let high = restrict(high, |r| r >= r1);
        let low_norms = fluid_norm_table(&low, p)?;
        let high_norms = fluid_norm_table(&high, p)?;
        Ok(FluidTables { low, high, low_norms, high_norms })
    }

    fn report(&self, lambda: f64) -> BoundReport {
        let mut rows = Vec::new();
        // r-power of each block bound at low frequency: |||B||| <~ r^k e^{-lambda r^2 t}
        let low_power = [0, 1, -1, 0, 0, 1];
        let low_formula = [
            "e^{-lambda r^2 t}",
            "r e^{-lambda r^2 t}",
            "r^{-1} e^{-lambda r^2 t}",
            "e^{-lambda r^2 t}",
            "e^{-lambda r^2 t}",
            "r e^{-lambda r^2 t}",
        ];
        let span = |g: &BoundGrid| {
            (
                g.r.first().copied().unwrap_or(f64::NAN),
                g.r.last().copied().unwrap_or(f64::NAN),
                g.t.last().copied().unwrap_or(f64::NAN),
            )
        };
        if !self.low.r.is_empty() {
            let (r_min, r_max, t_max) = span(&self.low);
            for b in 0..6 {
                let ratios: Vec<Vec<f64>> = self
                    .low
                    .r
                    .iter()
                    .enumerate()
                    .map(|(ir, &r)| {
                        self.low.t
                            .iter()
                            .enumerate()
                            .map(|(it, &t)| {
                                let w = r.powi(low_power[b]) * (-lambda * r * r * t).exp();
                                self.low_norms[b][ir][it] / w
                            })
                            .collect()
                    })
                    .collect();
                let (sup, growth) = sup_with_edge(&ratios, Edges { small_r: true, large_r: false });
                rows.push(BoundRow {
                    block: FLUID_BLOCKS[b].into(),
                    domain: "low".into(),
                    weight_formula: low_formula[b].into(),
                    empirical_sup: sup,
                    lambda_used: lambda,
                    r_min,
                    r_max,
                    t_max,
                    edge_growth: growth,
                });
            }
        }
        if !self.high.r.is_empty() {
            let (r_min, r_max, t_max) = span(&self.high);
            for b in 0..6 {
                let ratios: Vec<Vec<f64>> = (0..self.high.r.len())
                    .map(|ir| {
                        self.high.t
                            .iter()
                            .enumerate()
                            .map(|(it, &t)| {
                                let w = (1.0 + t).powi(3) * (-lambda * t).exp();
                                self.high_norms[b][ir][it] / w
                            })
                            .collect()
                    })
                    .collect();
                let (sup, growth) = sup_with_edge(&ratios, Edges { small_r: false, large_r: true });
                rows.push(BoundRow {
                    block: FLUID_BLOCKS[b].into(),
                    domain: "high".into(),
                    weight_formula: "(1+t)^3 e^{-lambda t}".into(),
                    empirical_sup: sup,
                    lambda_used: lambda,
                    r_min,
                    r_max,
                    t_max,
                    edge_growth: growth,
                });
            }
        }
        BoundReport { rows }
    }
}

/// Suprema of the fluid propagator blocks against their low-frequency (`r <= r1`, from
/// `low`) and high-frequency (`r >= r1`, from `high`) bounds with decay constant `lambda`.
pub fn bound_check_fluid(
    low: &BoundGrid,
    high: &BoundGrid,
    params: &ModelParams,
    r1: f64,
    lambda: f64,
) -> Result<BoundReport> {
    Ok(FluidTables::new(low, high, params, r1)?.report(lambda))
}

/// Tries `trials` in decreasing order and returns the first report with every block
/// bounded, or the report for the smallest trial if none is.
pub fn search_fluid_lambda(
    low: &BoundGrid,
    high: &BoundGrid,
    params: &ModelParams,
    r1: f64,
    trials: &[f64],
) -> Result<BoundReport> {
    let tables = FluidTables::new(low, high, params, r1)?;
    let mut sorted = trials.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut last = None;
    for lambda in sorted {
        let rep = tables.report(lambda);
        if rep.all_bounded() {
            return Ok(rep);
        }
        last = Some(rep);
    }
    last.ok_or_else(|| Error::InvalidParameter("empty trial set".into()))
}

/// `sup_t |||M1(r, t)|||` for each radius, with no weight.
pub fn unweighted_m1_sup(radii: &[f64], times: &[f64], params: &ModelParams) -> Result<Vec<f64>> {
    radii
        .iter()
        .map(|&r| {
            let mut sup = 0.0f64;
            for &t in times {
                let e = fluid_propagator([r, 0.0, 0.0], t, params)?;
                sup = sup.max(fluid_block_norms(&e)[2]);
            }
            Ok(sup)
        })
        .collect()
}

const EM_NAMES: [&str; 3] = ["u", "E", "B"];

#[derive(Clone, Copy, PartialEq, Eq)]
enum EmDomain {
    Low,
    Mid,
    High,
}

impl EmDomain {
    fn name(&self) -> &'static str {
        match self {
            EmDomain::Low => "D0",
            EmDomain::Mid => "D1",
            EmDomain::High => "Dinf",
        }
    }
}

fn em_weight(d: EmDomain, i: usize, j: usize, r: f64, t: f64, c: f64) -> f64 {
    match d {
        EmDomain::Low => {
            let p1 = [[2, 4, 1], [4, 6, 3], [1, 3, 0]];
            let p2 = [[0, 0, 1], [0, 0, 1], [1, 1, 2]];
            r.powi(p1[i][j]) * (-c * r.powi(4) * t).exp() + r.powi(p2[i][j]) * (-c * r * r * t).exp()
        }
        EmDomain::High => {
            let q1 = [[0, -2, -3], [-2, -4, -5], [-3, -5, -6]];
            let q2 = [[-4, -2, -2], [-2, 0, 0], [-2, 0, 0]];
            r.powi(q1[i][j]) * (-c * r * r * t).exp() + r.powi(q2[i][j]) * (-c * t / (r * r)).exp()
        }
        EmDomain::Mid => (-c * t).exp(),
    }
}

fn em_formula(d: EmDomain, i: usize, j: usize) -> String {
    let pw = |k: i32| match k {
        0 => String::new(),
        1 => "|xi| ".to_string(),
        k => format!("|xi|^{k} "),
    };
    match d {
        EmDomain::Low => {
            let p1 = [[2, 4, 1], [4, 6, 3], [1, 3, 0]];
            let p2 = [[0, 0, 1], [0, 0, 1], [1, 1, 2]];
            format!(
                "{}e^{{-c|xi|^4 t}} + {}e^{{-c|xi|^2 t}}",
                pw(p1[i][j]),
                pw(p2[i][j])
            )
        }
        EmDomain::High => {
            let q1 = [[0, -2, -3], [-2, -4, -5], [-3, -5, -6]];
            let q2 = [[-4, -2, -2], [-2, 0, 0], [-2, 0, 0]];
            format!(
                "{}e^{{-c|xi|^2 t}} + {}e^{{-c|xi|^-2 t}}",
                pw(q1[i][j]),
                pw(q2[i][j])
            )
        }
        EmDomain::Mid => "e^{-c t}".into(),
    }
}

fn em_domain(r: f64, eps: f64, l: f64) -> EmDomain {
    let r2 = r * r;
    if r2 <= eps {
        EmDomain::Low
    } else if r2 >= l {
        EmDomain::High
    } else {
        EmDomain::Mid
    }
}

fn em_report_for(
    grid: &BoundGrid,
    table: &[Vec<[[f64; 3]; 3]>],
    domain: EmDomain,
    eps: f64,
    l: f64,
    c: f64,
) -> Vec<BoundRow> {
    let idx: Vec<usize> = (0..grid.r.len()).filter(|&i| em_domain(grid.r[i], eps, l) == domain).collect();
    if idx.is_empty() {
        return Vec::new();
    }
    let edges = Edges { small_r: domain == EmDomain::Low, large_r: domain == EmDomain::High };
    let mut rows = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let ratios: Vec<Vec<f64>> = idx
                .iter()
                .map(|&ir| {
                    let r = grid.r[ir];
                    grid.t
                        .iter()
                        .enumerate()
                        .map(|(it, &t)| table[ir][it][i][j] / em_weight(domain, i, j, r, t, c))
                        .collect()
                })
                .collect();
            let (sup, growth) = sup_with_edge(&ratios, edges);
            rows.push(BoundRow {
                block: format!("{}->{}", EM_NAMES[j], EM_NAMES[i]),
                domain: domain.name().into(),
                weight_formula: em_formula(domain, i, j),
                empirical_sup: sup,
                lambda_used: c,
                r_min: grid.r[idx[0]],
                r_max: grid.r[*idx.last().unwrap()],
                t_max: *grid.t.last().unwrap(),
                edge_growth: growth,
            });
        }
    }
    rows
}

fn em_table(grid: &BoundGrid, p: &ModelParams) -> Result<Vec<Vec<[[f64; 3]; 3]>>> {
    grid.r
        .iter()
        .map(|&r| {
            grid.t
                .iter()
                .map(|&t| {
                    let m = transverse_propagator(r, t, p)?;
                    Ok(std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)].norm())))
                })
                .collect()
        })
        .collect()
}

fn check_em_domains(eps: f64, l: f64) -> Result<()> {
    if !(eps > 0.0 && eps < l && l.is_finite()) {
        return Err(Error::InvalidParameter(format!("need 0 < eps < L, got eps = {eps}, L = {l}")));
    }
    Ok(())
}

/// Suprema of the transverse propagator entries against the three-domain bound pattern
/// with decay constant `c`. Domains split at `|xi|^2 = eps` and `|xi|^2 = l`.
pub fn bound_check_em(
    grid: &BoundGrid,
    params: &ModelParams,
    eps: f64,
    l: f64,
    c: f64,
) -> Result<BoundReport> {
    grid.validate()?;
    check_em_domains(eps, l)?;
    let table = em_table(grid, params)?;
    let mut rows = Vec::new();
    for d in [EmDomain::Low, EmDomain::Mid, EmDomain::High] {
        rows.extend(em_report_for(grid, &table, d, eps, l, c));
    }
    Ok(BoundReport { rows })
}

/// Per domain, the largest `c` from `trials` for which all nine entries stay bounded.
pub fn search_em_constant(
    grid: &BoundGrid,
    params: &ModelParams,
    eps: f64,
    l: f64,
    trials: &[f64],
) -> Result<BoundReport> {
    grid.validate()?;
    check_em_domains(eps, l)?;
    let table = em_table(grid, params)?;
    let mut sorted = trials.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    if sorted.is_empty() {
        return Err(Error::InvalidParameter("empty trial set".into()));
    }
    let mut rows = Vec::new();
    for d in [EmDomain::Low, EmDomain::Mid, EmDomain::High] {
        let mut chosen = None;
        for &c in &sorted {
            let rs = em_report_for(grid, &table, d, eps, l, c);
            let ok = rs.iter().all(|r| r.empirical_sup.is_finite() && !r.edge_growth);
            chosen = Some(rs);
            if ok {
                break;
            }
        }
        rows.extend(chosen.unwrap_or_default());
    }
    Ok(BoundReport { rows })
}

/// Which transverse propagator entries define a per-mode decay rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateBlock {
    /// `|B -> B|`.
    Magnetic,
    /// Frobenius norm of the `(E, B) -> (E, B)` block.
    ElectroMagnetic,
    /// Frobenius norm of the whole `(u, E, B)` propagator.
    Transverse,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub rate: f64,
    pub t_start: f64,
    pub t_end: f64,
    /// Largest deviation of `ln |||block|||` from the fitted line.
    pub residual: f64,
}

fn rate_norm(m: &CMat<3>, block: RateBlock) -> f64 {
    match block {
        RateBlock::Magnetic => m[(2, 2)].norm(),
        RateBlock::ElectroMagnetic => {
            vec_norm(&[m[(1, 1)], m[(1, 2)], m[(2, 1)], m[(2, 2)]])
        }
        RateBlock::Transverse => m.frobenius(),
    }
}

/// Fits `|||block(t)||| ~ C e^{-rate t}` at radius `r`.
///
/// The window starts at the first doubling time `t*` where the block norm has fallen by
/// `e^2` from its initial value, and spans `[t*, 4 t*]` with 17 samples.
pub fn slowest_decay_rate(r: f64, block: RateBlock, params: &ModelParams) -> Result<RateFit> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("rate fit needs r > 0, got {r}")));
    }
    let g = |t: f64| -> Result<f64> { Ok(rate_norm(&transverse_propagator(r, t, params)?, block)) };
    let g0 = g(0.0)?;
    let mut t = 1.0;
    let mut doublings = 0;
    while g(t)? > g0 * (-2.0f64).exp() {
        t *= 2.0;
        doublings += 1;
        if doublings > 80 {
            return Err(Error::Numeric(format!("no decay detected at r = {r}")));
        }
    }
    let (t0, t1) = (t, 4.0 * t);
    let pts: Vec<(f64, f64)> = (0..17)
        .map(|i| {
            let ti = t0 + (t1 - t0) * i as f64 / 16.0;
            g(ti).map(|v| (ti, v.ln()))
        })
        .collect::<Result<_>>()?;
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let residual = pts
        .iter()
        .map(|p| (p.1 - (my + slope * (p.0 - mx))).abs())
        .fold(0.0, f64::max);
    Ok(RateFit { rate: -slope, t_start: t0, t_end: t1, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_at_time_zero() {
        let p = ModelParams::default();
        let e = fluid_propagator([0.3, 0.0, 0.0], 0.0, &p).unwrap();
        let b = fluid_block_norms(&e);
        assert!((b[0] - 1.0).abs() < 1e-15);
        assert_eq!(b[2], 0.0);
        let grid = BoundGrid { r: vec![0.05, 1.0, 20.0], t: vec![0.0] };
        let rep = bound_check_em(&grid, &p, 0.1, 10.0, 0.01).unwrap();
        for row in rep.rows {
            let diag = matches!(row.block.as_str(), "u->u" | "E->E" | "B->B");
            if !diag {
                assert_eq!(row.empirical_sup, 0.0, "{}", row.block);
            }
        }
        let m = transverse_propagator(20.0, 0.0, &p).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((m[(i, j)].norm() - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn edge_detection() {
        let flat = vec![vec![1.0; 20]; 20];
        assert!(!sup_with_edge(&flat, Edges { small_r: true, large_r: false }).1);
        let growing: Vec<Vec<f64>> = (0..20).map(|i| vec![1.0 / (i as f64 + 1.0); 20]).collect();
        assert!(sup_with_edge(&growing, Edges { small_r: true, large_r: false }).1);
        assert!(!sup_with_edge(&growing, Edges { small_r: false, large_r: true }).1);
    }

    #[test]
    fn rejects_bad_domains() {
        let grid = BoundGrid { r: vec![1.0], t: vec![0.0] };
        assert!(bound_check_em(&grid, &ModelParams::default(), 1.0, 0.5, 0.1).is_err());
    }
}
