//! Executes a configuration and writes its outputs.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use crate::bounds::run_bound_study;
use crate::config::{ExperimentConfig, Mode, NonlinearKind};
use crate::error::{HarnessError, Result};
use crate::linear::run_linear_study;
use crate::nonlinear::{partial_trajectory, run_consistency_study, run_energy_monitor, run_nonlinear_study};
use crate::report::{self, Check};

/// Checks of one execution and the files written.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

struct Sink<'a> {
    dir: Option<&'a Path>,
    files: Vec<PathBuf>,
}

impl Sink<'_> {
    fn write(&mut self, name: &str, f: impl FnOnce(BufWriter<File>) -> Result<()>) -> Result<()> {
        if let Some(dir) = self.dir {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(name);
            f(BufWriter::new(File::create(&path)?))?;
            self.files.push(path);
        }
        Ok(())
    }
}

/// Runs `cfg` in `mode`. With `out = None` nothing is written.
pub fn execute(cfg: &ExperimentConfig, mode: Mode, out: Option<&Path>, seed: u64) -> Result<Outcome> {
    let params = cfg.model.params()?;
    let mut sink = Sink { dir: out, files: Vec::new() };
    let mut outcome = Outcome::default();
    match mode {
        Mode::LinearDecay => {
            let rep = run_linear_study(&cfg.linear, &params)?;
            sink.write("decay_curves.csv", |w| report::write_decay_csv(w, &rep.samples))?;
            sink.write("exponents.csv", |w| report::write_exponent_csv(w, &rep.table))?;
            for r in &rep.table {
                let note = format!(
                    "{} {}: p = {:.4} ({} model, window [{}, {}], residual {:.2e})",
                    r.family.name(),
                    r.component.name(),
                    r.fit.exponent,
                    r.fit.model.name(),
                    r.fit.window.0,
                    r.fit.window.1,
                    r.fit.residual
                );
                outcome.notes.push(note);
                if r.pass.is_some() {
                    outcome.checks.push(r.into());
                }
            }
        }
        Mode::BoundCheck => {
            let study = run_bound_study(&cfg.bounds, &params)?;
            sink.write("bounds.csv", |w| report::write_bound_csv(w, &study.rows()))?;
            for (r, s) in &study.m1 {
                outcome.notes.push(format!("unweighted M1 sup at r = {r:e}: {s:.6e}"));
            }
            for r in &study.rates {
                outcome.notes.push(format!("{} rate at r = {}: {:.6e}", r.block, r.radius, r.rate));
            }
            for r in study.rows().iter().filter(|r| r.edge_growth) {
                outcome.notes.push(format!("edge growth: {} on {}", r.block, r.domain));
            }
            outcome.checks = study.checks;
        }
        Mode::NonlinearRun => match cfg.nonlinear.kind {
            NonlinearKind::Trajectory => {
                let rep = match run_nonlinear_study(&cfg.nonlinear, &params, seed, cfg.monitor.c_trial) {
                    Ok(r) => r,
                    Err(e) => {
                        if let Some(t) = partial_trajectory(&e) {
                            sink.write("trajectory_partial.csv", |w| report::write_trajectory_csv(w, &t.rows))?;
                        }
                        return Err(e);
                    }
                };
                sink.write("trajectory.csv", |w| report::write_trajectory_csv(w, &rep.trajectory.rows))?;
                sink.write("monitor.csv", |w| report::write_monitor_csv(w, &rep.monitor))?;
                outcome.notes.push(format!("max relative E_N increase: {:.3e}", rep.max_energy_increase));
                outcome.notes.push(format!(
                    "max constraint residuals: div E + n {:.3e}, div B {:.3e}",
                    rep.max_res_div_e, rep.max_res_div_b
                ));
                outcome.notes.push(format!("largest admissible c: {:.4e}", rep.monitor.max_admissible_c));
                outcome.checks = rep.checks;
            }
            NonlinearKind::Consistency => {
                let rep = run_consistency_study(&cfg.nonlinear.consistency, &cfg.nonlinear, &params, seed)?;
                for (e, r) in &rep.remainder {
                    outcome.notes.push(format!("eps = {e:e}: remainder {r:.6e}"));
                }
                for (dt, r) in &rep.stepping {
                    outcome.notes.push(format!("dt = {dt}: error {r:.6e}"));
                }
                outcome.checks = rep.checks;
            }
        },
        Mode::EnergyMonitor => {
            let sweep = run_energy_monitor(&cfg.monitor, &params, seed)?;
            for (amp, m) in &sweep.runs {
                sink.write(&format!("monitor_amp_{amp:e}.csv"), |w| report::write_monitor_csv(w, m))?;
                outcome.notes.push(format!("amplitude {amp:e}: largest admissible c {:.4e}", m.max_admissible_c));
            }
            outcome.checks = sweep.checks;
        }
    }
    let title = format!("{} summary", mode.name());
    let summary = report::markdown_summary(&title, &outcome.notes, &outcome.checks);
    sink.write("summary.md", |mut w| {
        use std::io::Write;
        w.write_all(summary.as_bytes())?;
        Ok(())
    })?;
    outcome.files = sink.files;
    Ok(outcome)
}

/// The mode named in the file, or an error if it disagrees with the requested one.
pub fn resolve_mode(cfg: &ExperimentConfig, requested: Mode) -> Result<Mode> {
    match cfg.mode {
        Some(m) if m != requested => Err(HarnessError::Config(format!(
            "config declares mode '{}' but '{}' was requested",
            m.name(),
            requested.name()
        ))),
        _ => Ok(requested),
    }
}
