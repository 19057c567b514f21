//! CSV tables, pass/fail checks and markdown summaries.

use std::fmt::Write as _;
use std::io::Write;

use nsm_core::energy::MonitorReport;
use nsm_core::semigroup::BoundRow;
use nsm_core::solver::Diagnostics;

use crate::error::Result;
use crate::linear::{DecaySample, ExponentRow};

/// One line of a pass/fail table.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    pub target: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    /// `|measured - target| <= tolerance`.
    pub fn target(label: impl Into<String>, measured: f64, target: f64, tolerance: f64) -> Self {
        let pass = (measured - target).abs() <= tolerance;
        Check { label: label.into(), measured, target: Some(target), tolerance: Some(tolerance), pass }
    }

    /// `measured <= limit`.
    pub fn at_most(label: impl Into<String>, measured: f64, limit: f64) -> Self {
        Check { label: label.into(), measured, target: None, tolerance: Some(limit), pass: measured <= limit }
    }

    /// A verdict computed elsewhere.
    pub fn flag(label: impl Into<String>, measured: f64, pass: bool) -> Self {
        Check { label: label.into(), measured, target: None, tolerance: None, pass }
    }

    pub fn line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        match (self.target, self.tolerance) {
            (Some(t), Some(tol)) => {
                format!("{verdict} {}: measured {:.4} target {} +/- {}", self.label, self.measured, t, tol)
            }
            (None, Some(lim)) => format!("{verdict} {}: measured {:.3e} limit {:.1e}", self.label, self.measured, lim),
            _ => format!("{verdict} {}: measured {:.4e}", self.label, self.measured),
        }
    }
}

impl From<&ExponentRow> for Check {
    fn from(r: &ExponentRow) -> Self {
        let label = format!("{} {} exponent", r.family.name(), r.component.name());
        match r.theoretical {
            Some(p) => Check::target(label, r.fit.exponent, p, r.tolerance),
            None => Check::flag(label, r.fit.exponent, true),
        }
    }
}

/// 64-bit FNV-1a digest in hex.
pub fn params_hash(text: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

pub fn write_decay_csv<W: Write>(w: W, samples: &[DecaySample]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "value", "component", "family", "params_hash"])?;
    for s in samples {
        out.write_record([num(s.t), num(s.value), s.component.name().into(), s.family.name().into(), s.params_hash.clone()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_exponent_csv<W: Write>(w: W, table: &[ExponentRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "family", "component", "model", "fitted_p", "theoretical_p", "tolerance", "residual", "window_start",
        "window_end", "points", "pass",
    ])?;
    for r in table {
        out.write_record([
            r.family.name().to_string(),
            r.component.name().to_string(),
            r.fit.model.name().to_string(),
            num(r.fit.exponent),
            r.theoretical.map(num).unwrap_or_default(),
            num(r.tolerance),
            num(r.fit.residual),
            num(r.fit.window.0),
            num(r.fit.window.1),
            r.fit.points.to_string(),
            r.pass.map(|p| p.to_string()).unwrap_or_default(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_bound_csv<W: Write>(w: W, rows: &[&BoundRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["block", "domain", "weight_formula", "empirical_sup", "lambda_used", "r_min", "r_max", "t_max"])?;
    for r in rows {
        out.write_record([
            r.block.clone(),
            r.domain.clone(),
            r.weight_formula.clone(),
            num(r.empirical_sup),
            num(r.lambda_used),
            num(r.r_min),
            num(r.r_max),
            num(r.t_max),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_trajectory_csv<W: Write>(w: W, rows: &[Diagnostics]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "t", "l2_n", "l2_u", "l2_sigma", "l2_E", "l2_B", "hN_total", "energy_EN", "dissipation_DN", "res_divE",
        "res_divB",
    ])?;
    for d in rows {
        out.write_record(
            [d.t, d.l2_n, d.l2_u, d.l2_sigma, d.l2_e, d.l2_b, d.h_n_total, d.energy, d.dissipation, d.res_div_e, d.res_div_b]
                .map(num),
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_monitor_csv<W: Write>(w: W, report: &MonitorReport) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "E_N", "D_N", "dEdt", "max_admissible_c", "violated"])?;
    for r in &report.rows {
        out.write_record([
            num(r.t),
            num(r.energy),
            num(r.dissipation),
            num(r.d_energy_dt),
            num(r.max_admissible_c),
            r.violated.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Markdown document with a title, free-form notes and the pass/fail table.
pub fn markdown_summary(title: &str, notes: &[String], checks: &[Check]) -> String {
    let mut s = format!("# {title}\n\n");
    for n in notes {
        let _ = writeln!(s, "- {n}");
    }
    if !notes.is_empty() {
        s.push('\n');
    }
    s.push_str("| check | measured | target | tolerance | verdict |\n|---|---|---|---|---|\n");
    for c in checks {
        let _ = writeln!(
            s,
            "| {} | {:.6e} | {} | {} | {} |",
            c.label,
            c.measured,
            c.target.map(|t| t.to_string()).unwrap_or_else(|| "-".into()),
            c.tolerance.map(|t| format!("{t:e}")).unwrap_or_else(|| "-".into()),
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    let _ = writeln!(s, "\n{} checks, {} failed.", checks.len(), failed);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_reference_values() {
        assert_eq!(params_hash(""), "cbf29ce484222325");
        assert_eq!(params_hash("a"), "af63dc4c8601ec8c");
    }

    #[test]
    fn check_verdicts() {
        assert!(Check::target("x", -0.74, -0.75, 0.1).pass);
        assert!(!Check::target("x", -0.6, -0.75, 0.1).pass);
        assert!(Check::at_most("r", 1e-12, 1e-8).pass);
        assert!(Check::target("x", -0.74, -0.75, 0.1).line().starts_with("PASS"));
    }

    #[test]
    fn summary_counts_failures() {
        let s = markdown_summary("t", &["note".into()], &[Check::flag("a", 1.0, false)]);
        assert!(s.contains("1 checks, 1 failed."));
        assert!(s.contains("- note"));
    }

    #[test]
    fn trajectory_header() {
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &[Diagnostics::default()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,l2_n,l2_u,l2_sigma,l2_E,l2_B,hN_total,energy_EN,dissipation_DN,res_divE,res_divB\n"));
    }
}
