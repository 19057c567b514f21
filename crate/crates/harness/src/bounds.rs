//! Empirical symbol bounds and per-mode decay rates.

use nsm_core::semigroup::{
    search_em_constant, search_fluid_lambda, slowest_decay_rate, unweighted_m1_sup, BoundReport, RateBlock,
};
use nsm_core::ModelParams;

use crate::config::BoundConfig;
use crate::error::{HarnessError, Result};
use crate::report::Check;

pub fn parse_block(s: &str) -> Result<RateBlock> {
    match s {
        "magnetic" => Ok(RateBlock::Magnetic),
        "electromagnetic" => Ok(RateBlock::ElectroMagnetic),
        "transverse" => Ok(RateBlock::Transverse),
        _ => Err(HarnessError::Config(format!(
            "unknown rate block '{s}' (magnetic, electromagnetic, transverse)"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub block: String,
    pub radius: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundStudy {
    pub fluid: Option<BoundReport>,
    /// `(r, sup_t |||M1(r, t)|||)`.
    pub m1: Vec<(f64, f64)>,
    pub em: Option<BoundReport>,
    pub rates: Vec<RateRow>,
    pub checks: Vec<Check>,
}

impl BoundStudy {
    /// Fluid and electromagnetic rows in one list.
    pub fn rows(&self) -> Vec<&nsm_core::semigroup::BoundRow> {
        self.fluid.iter().chain(&self.em).flat_map(|r| &r.rows).collect()
    }
}

pub fn run_bound_study(cfg: &BoundConfig, params: &ModelParams) -> Result<BoundStudy> {
    let mut out = BoundStudy::default();
    if cfg.fluid {
        let rep = search_fluid_lambda(&cfg.low.grid(), &cfg.high.grid(), params, cfg.r1, &cfg.lambda_trials)?;
        for row in &rep.rows {
            out.checks.push(Check::flag(
                format!("fluid {} on {} bounded (lambda = {})", row.block, row.domain, row.lambda_used),
                row.empirical_sup,
                row.empirical_sup.is_finite() && !row.edge_growth,
            ));
        }
        out.fluid = Some(rep);
    }
    if !cfg.m1_radii.is_empty() {
        let times: Vec<f64> = (0..=400).map(|i| cfg.m1_t_max * i as f64 / 400.0).collect();
        let sups = unweighted_m1_sup(&cfg.m1_radii, &times, params)?;
        out.m1 = cfg.m1_radii.iter().copied().zip(sups.iter().copied()).collect();
        for w in out.m1.windows(2) {
            let decades = (w[0].0 / w[1].0).log10();
            let ratio = (w[1].1 / w[0].1).powf(1.0 / decades);
            out.checks.push(Check::target(
                format!("M1 sup growth per decade, r = {:e} -> {:e}", w[0].0, w[1].0),
                ratio,
                cfg.m1_ratio,
                cfg.m1_ratio_tolerance,
            ));
        }
    }
    if cfg.em {
        let rep = search_em_constant(&cfg.em_grid.grid(), params, cfg.eps, cfg.big_l, &cfg.c_trials)?;
        for row in &rep.rows {
            out.checks.push(Check::flag(
                format!("EM {} on {} bounded (c = {})", row.block, row.domain, row.lambda_used),
                row.empirical_sup,
                row.empirical_sup.is_finite() && !row.edge_growth,
            ));
        }
        out.em = Some(rep);
    }
    for rc in &cfg.rates {
        let block = parse_block(&rc.block)?;
        let a = slowest_decay_rate(rc.radii[0], block, params)?;
        let b = slowest_decay_rate(rc.radii[1], block, params)?;
        out.rates.push(RateRow { block: rc.block.clone(), radius: rc.radii[0], rate: a.rate });
        out.rates.push(RateRow { block: rc.block.clone(), radius: rc.radii[1], rate: b.rate });
        out.checks.push(Check::target(
            format!("{} rate ratio r = {} vs {}", rc.block, rc.radii[0], rc.radii[1]),
            a.rate / b.rate,
            rc.expected_ratio,
            rc.tolerance,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RateCheckConfig;

    #[test]
    fn block_names() {
        assert_eq!(parse_block("magnetic").unwrap(), RateBlock::Magnetic);
        assert!(parse_block("fluid").is_err());
    }

    #[test]
    fn rate_checks_only() {
        let cfg = BoundConfig {
            fluid: false,
            m1_radii: vec![],
            rates: vec![RateCheckConfig::default()],
            ..BoundConfig::default()
        };
        let s = run_bound_study(&cfg, &ModelParams::default()).unwrap();
        assert_eq!(s.rates.len(), 2);
        assert!(s.checks[0].pass, "{:?}", s.checks);
    }
}
