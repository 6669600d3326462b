//! Flat TOML run configuration with `--set key=value` overrides.

use std::path::Path;

use movbeam::assembly::InitialProjection;
use movbeam::geometry::{BeamParameters, BoundaryKind, MovingBoundary, WeakForm};
use movbeam::integrator::{GGradient, GNorm};
use movbeam::verification::{CaseId, Experiment, ManufacturedCase, StudyMode};
use movbeam::Execution;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub dim: usize,
    /// Reference interval `[lo, hi]`, used on every axis.
    #[serde(rename = "box")]
    pub interval: [f64; 2],
    /// `S1` or `S2`.
    pub case: String,
    /// `manufactured` (source from the case) or `none` (homogeneous).
    pub forcing: String,
    /// `case` (interpolate the case at t = 0) or `zero`.
    pub initial: String,
    /// `B1`, `B2`, `constant`, `linear` or `saturating`.
    pub boundary: String,
    pub boundary_base: f64,
    pub boundary_slope: f64,
    pub boundary_amplitude: f64,
    pub boundary_rate: f64,
    pub zeta0: f64,
    pub zeta1: f64,
    pub nu: f64,
    pub theta: f64,
    pub h: f64,
    /// Overrides `h` when positive.
    pub cells_per_axis: usize,
    pub dt: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    /// Overrides `T` when positive: `T = N dt`.
    #[serde(rename = "N")]
    pub steps: usize,
    pub relaxed_h1: bool,
    pub legacy_g_gradient: bool,
    /// `consistent` or `verbatim`.
    pub weak_form: String,
    /// `gradient` or `value`.
    pub g_norm: String,
    /// `nodal` or `l2`.
    pub projection: String,
    pub parallel: bool,
    pub newton_max_iter: usize,
    pub divergence_threshold: f64,
    /// Snapshot times for `solve`; empty means the final time only.
    pub snapshots: Vec<f64>,
    /// `coupled`, `fix_h` or `fix_dt`.
    pub study_mode: String,
    pub levels: Vec<usize>,
    pub sweep_h: Vec<f64>,
    pub sweep_theta: Vec<f64>,
    pub fit_start: f64,
    /// Defaults to `T` when not positive.
    pub fit_end: f64,
    pub energy_level: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = BeamParameters::default();
        RunConfig {
            dim: 1,
            interval: [-1.0, 1.0],
            case: "S1".into(),
            forcing: "manufactured".into(),
            initial: "case".into(),
            boundary: "B1".into(),
            boundary_base: 64.0,
            boundary_slope: 0.0,
            boundary_amplitude: 0.0,
            boundary_rate: 1.0,
            zeta0: p.zeta0,
            zeta1: p.zeta1,
            nu: p.nu,
            theta: 0.25,
            h: 2f64.powi(-6),
            cells_per_axis: 0,
            dt: 2f64.powi(-7),
            horizon: 1.0,
            steps: 0,
            relaxed_h1: false,
            legacy_g_gradient: false,
            weak_form: "consistent".into(),
            g_norm: "gradient".into(),
            projection: "nodal".into(),
            parallel: true,
            newton_max_iter: 50,
            divergence_threshold: 1e8,
            snapshots: Vec::new(),
            study_mode: "coupled".into(),
            levels: (1..=6).collect(),
            sweep_h: (1..=6).map(|i| 2f64.powi(-i)).collect(),
            sweep_theta: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            fit_start: 1.0,
            fit_end: 0.0,
            energy_level: 1e-10,
        }
    }
}

/// Reads `path`, applies the overrides in order and validates the result.
pub fn load(path: &Path, overrides: &[String]) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse(&text, overrides).map_err(|e| match e {
        CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse(text: &str, overrides: &[String]) -> Result<RunConfig, CliError> {
    let mut table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
    for item in overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--set {item}: expected key=value")))?;
        let key = key.trim();
        table.insert(key.to_string(), parse_value(key, value.trim())?);
    }
    let cfg: RunConfig = table
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Config(e.message().to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// TOML literal if it parses as one, bare string otherwise.
fn parse_value(key: &str, raw: &str) -> Result<toml::Value, CliError> {
    let doc = format!("v = {raw}");
    match doc.parse::<toml::Table>() {
        Ok(mut t) => Ok(t.remove("v").expect("single key")),
        Err(_) if !raw.is_empty() && !raw.contains(['[', '{', '"', '\'']) => {
            Ok(toml::Value::String(raw.into()))
        }
        Err(e) => Err(CliError::Config(format!("--set {key}: {}", e.message()))),
    }
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "{name} = {v} must be positive and finite"
        )))
    }
}

fn finite(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} = {v} must be finite")))
    }
}

fn one_of<'a>(name: &str, v: &'a str, allowed: &[&str]) -> Result<&'a str, CliError> {
    if allowed.iter().any(|a| a.eq_ignore_ascii_case(v)) {
        Ok(v)
    } else {
        Err(CliError::Config(format!(
            "{name} = `{v}`; expected one of {allowed:?}"
        )))
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.dim != 1 && self.dim != 2 {
            return Err(CliError::Config(format!(
                "dim = {} must be 1 or 2",
                self.dim
            )));
        }
        let [lo, hi] = self.interval;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(CliError::Config(format!(
                "box = [{lo}, {hi}] must be a finite interval with lo < hi"
            )));
        }
        one_of("case", &self.case, &["S1", "S2"])?;
        one_of("forcing", &self.forcing, &["manufactured", "none"])?;
        one_of("initial", &self.initial, &["case", "zero"])?;
        one_of(
            "boundary",
            &self.boundary,
            &["B1", "B2", "constant", "linear", "saturating"],
        )?;
        one_of("weak_form", &self.weak_form, &["consistent", "verbatim"])?;
        one_of("g_norm", &self.g_norm, &["gradient", "value"])?;
        one_of("projection", &self.projection, &["nodal", "l2"])?;
        one_of(
            "study_mode",
            &self.study_mode,
            &["coupled", "fix_h", "fix_dt"],
        )?;
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(CliError::Config(format!(
                "theta = {} outside [0, 1]",
                self.theta
            )));
        }
        positive("h", self.h)?;
        positive("dt", self.dt)?;
        positive("T", self.horizon)?;
        positive("divergence_threshold", self.divergence_threshold)?;
        positive("energy_level", self.energy_level)?;
        for (name, v) in [
            ("boundary_base", self.boundary_base),
            ("boundary_slope", self.boundary_slope),
            ("boundary_amplitude", self.boundary_amplitude),
            ("boundary_rate", self.boundary_rate),
            ("zeta0", self.zeta0),
            ("zeta1", self.zeta1),
            ("nu", self.nu),
            ("fit_start", self.fit_start),
            ("fit_end", self.fit_end),
        ] {
            finite(name, v)?;
        }
        if self.newton_max_iter == 0 {
            return Err(CliError::Config(
                "newton_max_iter must be at least 1".into(),
            ));
        }
        for &t in &self.snapshots {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!(
                    "snapshot time {t} must be nonnegative"
                )));
            }
        }
        for &h in &self.sweep_h {
            positive("sweep_h", h)?;
        }
        for &th in &self.sweep_theta {
            if !(0.0..=1.0).contains(&th) {
                return Err(CliError::Config(format!(
                    "sweep_theta entry {th} outside [0, 1]"
                )));
            }
        }
        if self.levels.iter().any(|&l| l == 0 || l > 30) {
            return Err(CliError::Config("levels must lie in 1..=30".into()));
        }
        self.params()
            .validate(true)
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(())
    }

    pub fn params(&self) -> BeamParameters {
        BeamParameters {
            zeta0: self.zeta0,
            zeta1: self.zeta1,
            nu: self.nu,
        }
    }

    pub fn case_id(&self) -> CaseId {
        self.case.parse().expect("validated")
    }

    pub fn manufactured_case(&self) -> ManufacturedCase {
        let id = self.case_id();
        if self.initial.eq_ignore_ascii_case("zero") {
            ManufacturedCase::with_amplitude(id, self.dim, 0.0)
        } else {
            ManufacturedCase::new(id, self.dim).expect("validated")
        }
    }

    pub fn moving_boundary(&self) -> MovingBoundary {
        match self.boundary.to_ascii_lowercase().as_str() {
            "b1" => MovingBoundary::b1(self.dim),
            "b2" => MovingBoundary::b2(self.dim),
            "constant" => MovingBoundary::constant(self.boundary_base),
            "linear" => MovingBoundary::new(BoundaryKind::LinearDrift {
                base: self.boundary_base,
                slope: self.boundary_slope,
            }),
            _ => MovingBoundary::new(BoundaryKind::ExponentialSaturation {
                base: self.boundary_base,
                amplitude: self.boundary_amplitude,
                rate: self.boundary_rate,
            }),
        }
    }

    pub fn execution(&self) -> Execution {
        if self.parallel {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }

    /// Effective horizon after applying `N`.
    pub fn horizon(&self) -> f64 {
        if self.steps > 0 {
            self.steps as f64 * self.dt
        } else {
            self.horizon
        }
    }

    /// Effective cell size after applying `cells_per_axis`.
    pub fn cell_size(&self) -> f64 {
        if self.cells_per_axis > 0 {
            (self.interval[1] - self.interval[0]) / self.cells_per_axis as f64
        } else {
            self.h
        }
    }

    pub fn fit_window(&self) -> (f64, f64) {
        let end = if self.fit_end > 0.0 {
            self.fit_end
        } else {
            self.horizon()
        };
        (self.fit_start, end)
    }

    pub fn study_mode(&self) -> StudyMode {
        match self.study_mode.to_ascii_lowercase().as_str() {
            "fix_h" => StudyMode::FixHVaryDt {
                h: self.cell_size(),
            },
            "fix_dt" => StudyMode::FixDtVaryH { dt: self.dt },
            _ => StudyMode::Coupled,
        }
    }

    pub fn experiment(&self) -> Experiment {
        let mut e = Experiment::new(self.manufactured_case(), self.moving_boundary());
        e.params = self.params();
        e.interval = self.interval;
        e.theta = self.theta;
        e.horizon = self.horizon();
        e.forced = self.forcing.eq_ignore_ascii_case("manufactured");
        e.weak_form = if self.weak_form.eq_ignore_ascii_case("verbatim") {
            WeakForm::Verbatim
        } else {
            WeakForm::Consistent
        };
        e.g_norm = if self.g_norm.eq_ignore_ascii_case("value") {
            GNorm::Value
        } else {
            GNorm::Gradient
        };
        e.g_gradient = if self.legacy_g_gradient {
            GGradient::LegacyDiagonal
        } else {
            GGradient::Exact
        };
        e.projection = if self.projection.eq_ignore_ascii_case("l2") {
            InitialProjection::L2
        } else {
            InitialProjection::Nodal
        };
        e
    }
}
