//! Decay studies of the linearized flow by whole-space radial quadrature.

use rayon::prelude::*;

use nsm_core::semigroup::{period_averaged_l2, whole_space_l2_all, Component, Family, QuadratureOptions};
use nsm_core::ModelParams;

use crate::config::{LinearConfig, StudyConfig};
use crate::error::Result;
use crate::fit::{fit_decay_window, log_spaced, FitModel, FitResult};
use crate::report::params_hash;

/// Exponent of `(1+t)^p` expected for a component under a data family.
pub fn theoretical_exponent(family: Family, component: Component) -> Option<f64> {
    use Component::*;
    match family {
        Family::Compatible => match component {
            Density => Some(-1.25),
            VelocityPar | Temperature | ElectricPar | Velocity | Electric | M1Density => Some(-0.75),
            _ => None,
        },
        Family::Generic => match component {
            M1Density => Some(-0.25),
            _ => None,
        },
        Family::Transverse => match component {
            Magnetic => Some(-0.375),
            VelocityPerp | Velocity => Some(-0.625),
            ElectricPerp => Some(-0.75),
            _ => None,
        },
        Family::TransverseNoMagnetic => match component {
            VelocityPerp | ElectricPerp => Some(-0.75),
            Magnetic => Some(-0.625),
            _ => None,
        },
        Family::Full => match component {
            Density => Some(-1.25),
            Velocity => Some(-0.625),
            Magnetic => Some(-0.375),
            Temperature | Electric => Some(-0.75),
            _ => None,
        },
    }
}

/// One sample of a decay curve.
#[derive(Debug, Clone, PartialEq)]
pub struct DecaySample {
    pub t: f64,
    pub value: f64,
    pub component: Component,
    pub family: Family,
    pub params_hash: String,
}

/// One line of the exponent table.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentRow {
    pub family: Family,
    pub component: Component,
    pub fit: FitResult,
    pub theoretical: Option<f64>,
    pub tolerance: f64,
    /// `None` when there is no theoretical exponent to compare with.
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearReport {
    pub samples: Vec<DecaySample>,
    pub table: Vec<ExponentRow>,
}

impl LinearReport {
    pub fn all_pass(&self) -> bool {
        self.table.iter().all(|r| r.pass != Some(false))
    }
}

/// Norms of every component on the study's time grid, evaluated in parallel over times.
pub fn decay_curves(
    study: &StudyConfig,
    linear: &LinearConfig,
    params: &ModelParams,
) -> Result<(Vec<f64>, Vec<[f64; Component::ALL.len()]>)> {
    let data = study.family()?.data();
    let opts = QuadratureOptions { rel_tol: linear.quadrature_rel_tol, ..QuadratureOptions::default() };
    let times = log_spaced(study.time.start, study.time.end, study.time.count);
    let values = times
        .par_iter()
        .map(|&t| {
            if linear.period_average {
                period_averaged_l2(&data, t, linear.average_window, linear.average_nodes, params, &opts)
            } else {
                whole_space_l2_all(&data, t, params, &opts)
            }
        })
        .collect::<nsm_core::Result<Vec<_>>>()?;
    Ok((times, values))
}

pub fn run_study(study: &StudyConfig, linear: &LinearConfig, params: &ModelParams) -> Result<LinearReport> {
    let family = study.family()?;
    let hash = params_hash(&format!(
        "{params:?}{study:?}{}{}{}",
        linear.period_average, linear.average_window, linear.average_nodes
    ));
    let (times, values) = decay_curves(study, linear, params)?;
    let mut report = LinearReport::default();
    for component in study.components()? {
        let series: Vec<f64> = values.iter().map(|v| v[component.index()]).collect();
        for (&t, &value) in times.iter().zip(&series) {
            report.samples.push(DecaySample { t, value, component, family, params_hash: hash.clone() });
        }
        let model = study.fit_models.get(component.name()).copied().unwrap_or(FitModel::Power);
        let fit = fit_decay_window(&times, &series, model, study.window())?;
        let theoretical =
            study.expected.get(component.name()).copied().or_else(|| theoretical_exponent(family, component));
        let tolerance = study.tolerances.get(component.name()).copied().unwrap_or(linear.tolerance);
        let pass = theoretical.filter(|_| !study.informational).map(|p| (fit.exponent - p).abs() <= tolerance);
        log::info!(
            "{} {}: p = {:.4} (theory {:?}, window {:?})",
            family.name(),
            component.name(),
            fit.exponent,
            theoretical,
            fit.window
        );
        report.table.push(ExponentRow { family, component, fit, theoretical, tolerance, pass });
    }
    Ok(report)
}

/// Runs every configured study in order.
pub fn run_linear_study(linear: &LinearConfig, params: &ModelParams) -> Result<LinearReport> {
    let mut out = LinearReport::default();
    for study in &linear.studies {
        let r = run_study(study, linear, params)?;
        out.samples.extend(r.samples);
        out.table.extend(r.table);
    }
    Ok(out)
}
