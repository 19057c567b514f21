//! Least-squares decay exponents.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `v = A (1+t)^p`
    Power,
    /// `v = A (1+t)^p ln(1+t)`
    PowerLog,
}

impl FitModel {
    pub fn name(&self) -> &'static str {
        match self {
            FitModel::Power => "power",
            FitModel::PowerLog => "power_log",
        }
    }

    pub fn parse(s: &str) -> Option<FitModel> {
        match s {
            "power" => Some(FitModel::Power),
            "power_log" => Some(FitModel::PowerLog),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub exponent: f64,
    pub amplitude: f64,
    /// Largest relative deviation of the fitted curve from the data in the window.
    pub residual: f64,
    pub model: FitModel,
    pub window: (f64, f64),
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FitError {
    #[error("domain: {0}")]
    Domain(String),
    #[error("{found} points in the window, at least {needed} required")]
    TooFewPoints { found: usize, needed: usize },
    #[error("window is rank deficient (all times coincide)")]
    RankDeficient,
}

pub const MIN_POINTS: usize = 10;

/// Fits every sample.
pub fn fit_decay(times: &[f64], values: &[f64], model: FitModel) -> Result<FitResult, FitError> {
    let lo = times.first().copied().unwrap_or(0.0);
    let hi = times.last().copied().unwrap_or(0.0);
    fit_decay_window(times, values, model, (lo, hi))
}

/// Fits the samples with `window.0 <= t <= window.1`.
pub fn fit_decay_window(
    times: &[f64],
    values: &[f64],
    model: FitModel,
    window: (f64, f64),
) -> Result<FitResult, FitError> {
    if times.len() != values.len() {
        return Err(FitError::Domain("times and values differ in length".into()));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(FitError::Domain("times must be strictly increasing".into()));
    }
    let eps = 1e-12 * window.1.abs().max(1.0);
    let sel: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= window.0 - eps && **t <= window.1 + eps)
        .map(|(t, v)| (*t, *v))
        .collect();
    if sel.len() < MIN_POINTS {
        return Err(FitError::TooFewPoints { found: sel.len(), needed: MIN_POINTS });
    }
    if let Some((t, v)) = sel.iter().find(|(t, v)| !(*v > 0.0) || !v.is_finite() || *t < 0.0) {
        return Err(FitError::Domain(format!("value {v} at t = {t} is not positive")));
    }
    let correction = |t: f64| match model {
        FitModel::Power => Ok(0.0),
        FitModel::PowerLog if t > 0.0 => Ok(t.ln_1p().ln()),
        FitModel::PowerLog => Err(FitError::Domain("power_log needs t > 0".into())),
    };
    let mut xs = Vec::with_capacity(sel.len());
    let mut ys = Vec::with_capacity(sel.len());
    for &(t, v) in &sel {
        xs.push(t.ln_1p());
        ys.push(v.ln() - correction(t)?);
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 1e-24 * m {
        return Err(FitError::RankDeficient);
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let p = sxy / sxx;
    let ln_a = my - p * mx;
    let residual = sel
        .iter()
        .zip(&xs)
        .map(|(&(t, v), x)| {
            let fitted = (ln_a + p * x + correction(t).unwrap_or(0.0)).exp();
            ((fitted - v) / v).abs()
        })
        .fold(0.0, f64::max);
    Ok(FitResult {
        exponent: p,
        amplitude: ln_a.exp(),
        residual,
        model,
        window: (sel[0].0, sel[sel.len() - 1].0),
        points: sel.len(),
    })
}

/// `count` log-spaced times in `[start, end]`.
pub fn log_spaced(start: f64, end: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let (a, b) = (start.ln(), end.ln());
    (0..count)
        .map(|i| {
            if i == 0 {
                start
            } else if i + 1 == count {
                end
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}
