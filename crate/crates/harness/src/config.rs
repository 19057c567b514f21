//! Experiment configuration files (TOML). Unknown keys are rejected.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use nsm_core::energy::EnergyWeights;
use nsm_core::semigroup::{Component, Family};
use nsm_core::{ModelParams, PressureModel};

use crate::error::{HarnessError, Result};
use crate::fit::FitModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    LinearDecay,
    NonlinearRun,
    BoundCheck,
    EnergyMonitor,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::LinearDecay => "linear-decay",
            Mode::NonlinearRun => "nonlinear-run",
            Mode::BoundCheck => "bound-check",
            Mode::EnergyMonitor => "energy-monitor",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Option<Mode>,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub linear: LinearConfig,
    #[serde(default)]
    pub nonlinear: NonlinearConfig,
    #[serde(default)]
    pub bounds: BoundConfig,
    #[serde(default)]
    pub monitor: MonitorConfig,
}

impl ExperimentConfig {
    pub fn defaults(mode: Mode) -> Self {
        ExperimentConfig {
            mode: Some(mode),
            output: None,
            model: ModelConfig::default(),
            linear: LinearConfig::default(),
            nonlinear: NonlinearConfig::default(),
            bounds: BoundConfig::default(),
            monitor: MonitorConfig::default(),
        }
    }

    pub fn from_toml(text: &str, path: &Path) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|source| HarnessError::Parse { path: path.to_path_buf(), source })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text, path)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.params()?;
        self.linear.validate()?;
        self.nonlinear.validate()?;
        self.bounds.validate()?;
        self.monitor.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PressureKind {
    IdealGas,
    Polytropic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub mu: f64,
    pub mu_prime: f64,
    pub kappa: f64,
    pub c_nu: f64,
    pub pressure: PressureKind,
    /// Exponent of the polytropic law `P = rho^gamma theta`.
    pub gamma: Option<f64>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig { mu: 1.0, mu_prime: 0.0, kappa: 1.0, c_nu: 1.5, pressure: PressureKind::IdealGas, gamma: None }
    }
}

impl ModelConfig {
    pub fn params(&self) -> Result<ModelParams> {
        let law = match (self.pressure, self.gamma) {
            (PressureKind::IdealGas, None) => PressureModel::IdealGas,
            (PressureKind::IdealGas, Some(_)) => {
                return Err(HarnessError::Config("gamma is only meaningful for the polytropic law".into()))
            }
            (PressureKind::Polytropic, Some(gamma)) => PressureModel::Polytropic { gamma },
            (PressureKind::Polytropic, None) => {
                return Err(HarnessError::Config("the polytropic law needs gamma".into()))
            }
        };
        Ok(ModelParams::new(self.mu, self.mu_prime, self.kappa, self.c_nu, law)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeGridConfig {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Default for TimeGridConfig {
    fn default() -> Self {
        TimeGridConfig { start: 50.0, end: 1000.0, count: 40 }
    }
}

/// One family and the components fitted on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub family: String,
    /// Defaults to every component with a theoretical exponent for the family.
    #[serde(default)]
    pub components: Vec<String>,
    #[serde(default)]
    pub time: TimeGridConfig,
    /// Defaults to the whole time grid.
    pub fit_window: Option<[f64; 2]>,
    /// Per-component fit model; `power` where absent.
    #[serde(default)]
    pub fit_models: BTreeMap<String, FitModel>,
    /// Per-component exponent targets overriding the built-in table.
    #[serde(default)]
    pub expected: BTreeMap<String, f64>,
    /// Per-component tolerances overriding `LinearConfig::tolerance`.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Report the fits without a verdict.
    #[serde(default)]
    pub informational: bool,
}

impl StudyConfig {
    pub fn new(family: Family, components: &[Component]) -> Self {
        StudyConfig {
            family: family.name().to_string(),
            components: components.iter().map(|c| c.name().to_string()).collect(),
            time: TimeGridConfig::default(),
            fit_window: None,
            fit_models: BTreeMap::new(),
            expected: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            informational: false,
        }
    }

    pub fn family(&self) -> Result<Family> {
        Family::parse(&self.family).ok_or_else(|| HarnessError::Config(format!("unknown family '{}'", self.family)))
    }

    pub fn components(&self) -> Result<Vec<Component>> {
        let family = self.family()?;
        if self.components.is_empty() {
            return Ok(Component::ALL
                .into_iter()
                .filter(|c| crate::linear::theoretical_exponent(family, *c).is_some())
                .collect());
        }
        self.components
            .iter()
            .map(|s| Component::parse(s).ok_or_else(|| HarnessError::Config(format!("unknown component '{s}'"))))
            .collect()
    }

    pub fn window(&self) -> (f64, f64) {
        match self.fit_window {
            Some([a, b]) => (a, b),
            None => (self.time.start, self.time.end),
        }
    }

    fn validate(&self, averaging_window: Option<f64>) -> Result<()> {
        self.family()?;
        let comps = self.components()?;
        let t = &self.time;
        if !(t.start > 0.0 && t.end > t.start && t.end.is_finite()) {
            return Err(HarnessError::Config(format!("time grid [{}, {}] is not a positive interval", t.start, t.end)));
        }
        if t.count < 20 {
            return Err(HarnessError::Config(format!("time grid has {} points; fitting needs at least 20", t.count)));
        }
        let (a, b) = self.window();
        if !(a >= t.start && b <= t.end && a < b) {
            return Err(HarnessError::Config(format!(
                "fit window [{a}, {b}] is not inside the time grid [{}, {}]",
                t.start, t.end
            )));
        }
        if let Some(w) = averaging_window {
            if t.start < 0.5 * w {
                return Err(HarnessError::Config(format!(
                    "time grid starts at {} but the averaging window needs t >= {}",
                    t.start,
                    0.5 * w
                )));
            }
        }
        for key in self.fit_models.keys().chain(self.expected.keys()).chain(self.tolerances.keys()) {
            let c = Component::parse(key).ok_or_else(|| HarnessError::Config(format!("unknown component '{key}'")))?;
            if !comps.contains(&c) {
                return Err(HarnessError::Config(format!("'{key}' is not among the selected components")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinearConfig {
    #[serde(rename = "study")]
    pub studies: Vec<StudyConfig>,
    pub tolerance: f64,
    /// Average the norms over `[t - w/2, t + w/2]` before fitting.
    pub period_average: bool,
    pub average_window: f64,
    pub average_nodes: usize,
    pub quadrature_rel_tol: f64,
}

impl Default for LinearConfig {
    fn default() -> Self {
        LinearConfig {
            studies: vec![StudyConfig::new(
                Family::Compatible,
                &[Component::Density, Component::VelocityPar, Component::Temperature, Component::ElectricPar],
            )],
            tolerance: 0.1,
            period_average: true,
            average_window: 2.0 * PI,
            average_nodes: 16,
            quadrature_rel_tol: 1e-8,
        }
    }
}

impl LinearConfig {
    fn validate(&self) -> Result<()> {
        if self.studies.is_empty() {
            return Err(HarnessError::Config("linear: no [[linear.study]] entries".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(HarnessError::Config("linear.tolerance must be positive".into()));
        }
        if self.period_average && !(self.average_window > 0.0 && self.average_nodes >= 2) {
            return Err(HarnessError::Config("averaging needs a positive window and >= 2 nodes".into()));
        }
        if !(self.quadrature_rel_tol > 0.0 && self.quadrature_rel_tol < 1e-2) {
            return Err(HarnessError::Config("linear.quadrature_rel_tol must lie in (0, 1e-2)".into()));
        }
        let w = self.period_average.then_some(self.average_window);
        self.studies.iter().try_for_each(|s| s.validate(w))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnergyConfig {
    pub order: usize,
    pub kappa1: f64,
    pub kappa2: f64,
}

impl Default for EnergyConfig {
    fn default() -> Self {
        let w = EnergyWeights::default();
        EnergyConfig { order: w.order, kappa1: w.kappa1, kappa2: w.kappa2 }
    }
}

impl EnergyConfig {
    pub fn weights(&self) -> Result<EnergyWeights> {
        Ok(EnergyWeights::new(self.order, self.kappa1, self.kappa2)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonlinearKind {
    /// A single trajectory with energy and constraint checks.
    Trajectory,
    /// Amplitude sweep of the nonlinear remainder and time-step self-convergence.
    Consistency,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NonlinearConfig {
    pub kind: NonlinearKind,
    pub resolution: usize,
    pub box_length: f64,
    pub dt: f64,
    pub t_end: f64,
    pub amplitude: f64,
    pub dealias_fraction: f64,
    /// Steps between diagnostic rows.
    pub stride: usize,
    pub energy: EnergyConfig,
    /// Allowed relative increase of `E_N` between consecutive rows.
    pub monotone_tolerance: f64,
    /// Allowed constraint residual relative to the state norm.
    pub residual_tolerance: f64,
    pub consistency: ConsistencyConfig,
}

impl Default for NonlinearConfig {
    fn default() -> Self {
        NonlinearConfig {
            kind: NonlinearKind::Trajectory,
            resolution: 32,
            box_length: 2.0 * PI,
            dt: 0.01,
            t_end: 50.0,
            amplitude: 1e-2,
            dealias_fraction: 2.0 / 3.0,
            stride: 1,
            energy: EnergyConfig::default(),
            monotone_tolerance: 1e-10,
            residual_tolerance: 1e-8,
            consistency: ConsistencyConfig::default(),
        }
    }
}

impl NonlinearConfig {
    fn validate(&self) -> Result<()> {
        nsm_core::spectral::SpectralGrid::new(self.box_length, self.resolution)?;
        if !(self.amplitude > 0.0 && self.amplitude < 0.9) {
            return Err(HarnessError::Config("nonlinear.amplitude must lie in (0, 0.9)".into()));
        }
        if self.stride == 0 {
            return Err(HarnessError::Config("nonlinear.stride must be >= 1".into()));
        }
        self.energy.weights()?;
        self.consistency.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConsistencyConfig {
    pub resolution: usize,
    pub epsilons: Vec<f64>,
    pub order_target: f64,
    pub order_tolerance: f64,
    pub dts: Vec<f64>,
    pub t_end: f64,
    pub amplitude: f64,
    /// The reference run uses `min(dts) / reference_refinement`.
    pub reference_refinement: usize,
    pub dt_order_target: f64,
    pub dt_order_tolerance: f64,
}

impl Default for ConsistencyConfig {
    fn default() -> Self {
        ConsistencyConfig {
            resolution: 16,
            epsilons: vec![1e-1, 1e-2, 1e-3],
            order_target: 2.0,
            order_tolerance: 0.1,
            dts: vec![0.1, 0.05, 0.025],
            t_end: 1.0,
            amplitude: 5e-2,
            reference_refinement: 8,
            dt_order_target: 2.0,
            dt_order_tolerance: 0.2,
        }
    }
}

impl ConsistencyConfig {
    fn validate(&self) -> Result<()> {
        if self.epsilons.len() < 2 || self.dts.len() < 2 {
            return Err(HarnessError::Config("consistency sweeps need at least two values each".into()));
        }
        if self.epsilons.iter().chain(&self.dts).any(|x| !(*x > 0.0)) {
            return Err(HarnessError::Config("consistency sweep values must be positive".into()));
        }
        if self.reference_refinement < 2 {
            return Err(HarnessError::Config("reference_refinement must be >= 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub nr: usize,
    pub t_max: f64,
    pub nt: usize,
}

impl GridConfig {
    fn new(r_min: f64, r_max: f64, t_max: f64) -> Self {
        GridConfig { r_min, r_max, nr: 60, t_max, nt: 200 }
    }

    pub fn grid(&self) -> nsm_core::semigroup::BoundGrid {
        nsm_core::semigroup::BoundGrid::log_uniform(self.r_min, self.r_max, self.nr, self.t_max, self.nt)
    }

    fn validate(&self, what: &str) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_max > self.r_min && self.t_max > 0.0 && self.nr >= 2 && self.nt >= 2) {
            return Err(HarnessError::Config(format!("bounds.{what}: invalid grid {self:?}")));
        }
        Ok(())
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig::new(1e-3, 1.0, 200.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RateCheckConfig {
    pub block: String,
    pub radii: [f64; 2],
    /// Target for `rate(radii[0]) / rate(radii[1])`; list the faster-decaying radius first.
    pub expected_ratio: f64,
    pub tolerance: f64,
}

impl Default for RateCheckConfig {
    fn default() -> Self {
        RateCheckConfig { block: "electromagnetic".into(), radii: [10.0, 20.0], expected_ratio: 4.0, tolerance: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundConfig {
    pub fluid: bool,
    pub low: GridConfig,
    pub high: GridConfig,
    pub r1: f64,
    pub lambda_trials: Vec<f64>,
    /// Radii, decreasing by decades, for the unweighted `M1` growth check.
    pub m1_radii: Vec<f64>,
    pub m1_t_max: f64,
    pub m1_ratio: f64,
    pub m1_ratio_tolerance: f64,
    pub em: bool,
    pub em_grid: GridConfig,
    pub eps: f64,
    pub big_l: f64,
    pub c_trials: Vec<f64>,
    #[serde(rename = "rate")]
    pub rates: Vec<RateCheckConfig>,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            fluid: true,
            low: GridConfig::new(1e-3, 1.0, 200.0),
            high: GridConfig::new(1.0, 30.0, 50.0),
            r1: 1.0,
            lambda_trials: vec![2.0, 1.0, 0.5, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01],
            m1_radii: vec![1e-1, 1e-2, 1e-3],
            m1_t_max: 200.0,
            m1_ratio: 10.0,
            m1_ratio_tolerance: 2.0,
            em: false,
            em_grid: GridConfig::new(1e-2, 30.0, 200.0),
            eps: 1e-2,
            big_l: 4.0,
            c_trials: vec![0.2, 0.1, 0.05, 0.02, 0.01, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4, 5e-5, 2e-5, 1e-5],
            rates: Vec::new(),
        }
    }
}

impl BoundConfig {
    fn validate(&self) -> Result<()> {
        self.low.validate("low")?;
        self.high.validate("high")?;
        self.em_grid.validate("em_grid")?;
        if self.lambda_trials.is_empty() || self.c_trials.is_empty() {
            return Err(HarnessError::Config("bounds: trial sets must be nonempty".into()));
        }
        if self.m1_radii.windows(2).any(|w| !(w[1] < w[0])) || self.m1_radii.iter().any(|r| !(*r > 0.0)) {
            return Err(HarnessError::Config("bounds.m1_radii must be positive and decreasing".into()));
        }
        for r in &self.rates {
            crate::bounds::parse_block(&r.block)?;
            if r.radii.iter().any(|x| !(*x > 0.0)) {
                return Err(HarnessError::Config("bounds.rate radii must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MonitorConfig {
    pub c_trial: f64,
    pub amplitudes: Vec<f64>,
    /// Largest allowed ratio between the admissible constants of the sweep.
    pub max_c_ratio: f64,
    /// Solver settings for the monitor runs; the `amplitude` entry is ignored.
    pub run: NonlinearConfig,
}

impl Default for MonitorConfig {
    fn default() -> Self {
        MonitorConfig {
            c_trial: 0.01,
            amplitudes: vec![1e-3, 1e-2],
            max_c_ratio: 2.0,
            run: NonlinearConfig { resolution: 16, t_end: 5.0, stride: 10, ..NonlinearConfig::default() },
        }
    }
}

impl MonitorConfig {
    fn validate(&self) -> Result<()> {
        if self.amplitudes.is_empty() || self.amplitudes.iter().any(|a| !(*a > 0.0 && *a < 0.9)) {
            return Err(HarnessError::Config("monitor.amplitudes must be nonempty and in (0, 0.9)".into()));
        }
        if !(self.c_trial >= 0.0) {
            return Err(HarnessError::Config("monitor.c_trial must be >= 0".into()));
        }
        self.run.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig> {
        ExperimentConfig::from_toml(text, Path::new("test.toml"))
    }

    #[test]
    fn empty_file_gives_defaults() {
        let c = parse("").unwrap();
        assert_eq!(c.model, ModelConfig::default());
        assert_eq!(c.linear.studies.len(), 1);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(parse("mdoe = \"linear-decay\""), Err(HarnessError::Parse { .. })));
        assert!(parse("[model]\nmu = 1.0\nmuu = 2.0").is_err());
        assert!(parse("[[linear.study]]\nfamily = \"compatible\"\nwindow = [1, 2]").is_err());
    }

    #[test]
    fn study_parsing_and_validation() {
        let text = r#"
mode = "linear-decay"
[[linear.study]]
family = "generic"
components = ["M1_n0"]
time = { start = 50.0, end = 1000.0, count = 40 }
fit_window = [100.0, 1000.0]
expected = { M1_n0 = -0.25 }
"#;
        let c = parse(text).unwrap();
        assert_eq!(c.mode, Some(Mode::LinearDecay));
        assert_eq!(c.linear.studies[0].window(), (100.0, 1000.0));
        let bad = text.replace("[100.0, 1000.0]", "[10.0, 1000.0]");
        assert!(matches!(parse(&bad), Err(HarnessError::Config(_))));
        let few = text.replace("count = 40", "count = 10");
        assert!(parse(&few).is_err());
        let family = text.replace("\"generic\"", "\"gneric\"");
        assert!(parse(&family).is_err());
    }

    #[test]
    fn pressure_law_selection() {
        let c = parse("[model]\npressure = \"polytropic\"\ngamma = 1.4").unwrap();
        assert_eq!(c.model.params().unwrap().pressure, PressureModel::Polytropic { gamma: 1.4 });
        assert!(parse("[model]\npressure = \"polytropic\"").is_err());
        assert!(parse("[model]\ngamma = 1.4").is_err());
    }
}
