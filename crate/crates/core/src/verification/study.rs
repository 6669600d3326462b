//! Manufactured-solution runs, convergence tables and theta sweeps.

use crate::assembly::{interpolate_initial, InitialProjection, SystemOperators};
use crate::error::Result;
use crate::exec::Execution;
use crate::geometry::{BeamParameters, MovingBoundary, WeakForm};
use crate::integrator::{advance, GGradient, GNorm, NewmarkConfig, Problem, Trajectory};
use crate::mesh::{HermiteSpace, Mesh};

use super::manufactured::{manufactured_load, ManufacturedCase, BOX_HI, BOX_LO};
use super::norms::{error_norms, ErrorReport};

/// Everything that defines a run except the discretization sizes.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub case: ManufacturedCase,
    pub boundary: MovingBoundary,
    pub params: BeamParameters,
    /// Interval `[lo, hi]` used on every axis of the reference box.
    pub interval: [f64; 2],
    pub theta: f64,
    pub horizon: f64,
    /// Drive the run with the manufactured source; otherwise only the initial data.
    pub forced: bool,
    pub weak_form: WeakForm,
    pub g_norm: GNorm,
    pub g_gradient: GGradient,
    pub projection: InitialProjection,
}

impl Experiment {
    pub fn new(case: ManufacturedCase, boundary: MovingBoundary) -> Self {
        Experiment {
            case,
            boundary,
            params: BeamParameters::default(),
            interval: [BOX_LO[0], BOX_HI[0]],
            theta: 0.25,
            horizon: 1.0,
            forced: true,
            weak_form: WeakForm::default(),
            g_norm: GNorm::default(),
            g_gradient: GGradient::default(),
            projection: InitialProjection::default(),
        }
    }

    pub fn dim(&self) -> usize {
        self.case.dim
    }

    /// Clamped space on the box with cells of size `h`.
    pub fn space(&self, h: f64) -> Result<HermiteSpace> {
        let [lo, hi] = self.interval;
        HermiteSpace::new(Mesh::with_cell_size(self.dim(), [lo; 2], [hi; 2], h)?)
    }

    pub fn newmark(&self, dt: f64) -> Result<NewmarkConfig> {
        let mut cfg = NewmarkConfig::new(self.theta, dt, self.horizon)?;
        cfg.weak_form = self.weak_form;
        cfg.g_norm = self.g_norm;
        cfg.g_gradient = self.g_gradient;
        Ok(cfg)
    }

    /// Assembles, interpolates the initial data and integrates.
    pub fn simulate(&self, h: f64, dt: f64, exec: Execution) -> Result<Simulation> {
        let space = self.space(h)?;
        let cfg = self.newmark(dt)?;
        let trajectory = self.simulate_on(&space, &cfg, exec)?;
        Ok(Simulation { space, trajectory })
    }

    pub fn simulate_on(
        &self,
        space: &HermiteSpace,
        cfg: &NewmarkConfig,
        exec: Execution,
    ) -> Result<Trajectory> {
        let ops = SystemOperators::assemble(space, exec);
        let (d0, d1) = interpolate_initial(
            space,
            &self.case.initial_displacement(),
            &self.case.initial_velocity(),
            self.projection,
            exec,
        )?;
        let load =
            |t: f64| manufactured_load(space, &self.case, &self.boundary, &self.params, t, exec);
        let problem = Problem {
            ops: &ops,
            boundary: &self.boundary,
            params: self.params,
            d0,
            d1,
            load: if self.forced { Some(&load) } else { None },
        };
        advance(&problem, cfg)
    }

    /// Runs one `(h, dt)` pair and measures the error against the case.
    pub fn error(&self, h: f64, dt: f64, exec: Execution) -> Result<ErrorReport> {
        let sim = self.simulate(h, dt, exec)?;
        Ok(error_norms(&sim.trajectory, &self.case, &sim.space, exec))
    }
}

pub struct Simulation {
    pub space: HermiteSpace,
    pub trajectory: Trajectory,
}

/// How `(h, dt)` vary with the level index `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StudyMode {
    /// `h` fixed, `dt = 2^-(i+1)`.
    FixHVaryDt { h: f64 },
    /// `dt` fixed, `h = 2^-i`.
    FixDtVaryH { dt: f64 },
    /// `dt = 2^-(i+1)` and `h = 2 dt`.
    Coupled,
}

impl StudyMode {
    pub fn sizes(&self, level: usize) -> (f64, f64) {
        let p = 2f64.powi(-(level as i32));
        match *self {
            StudyMode::FixHVaryDt { h } => (h, 0.5 * p),
            StudyMode::FixDtVaryH { dt } => (p, dt),
            StudyMode::Coupled => (p, 0.5 * p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub level: usize,
    pub h: f64,
    pub dt: f64,
    /// `None` when the level diverged.
    pub error: Option<f64>,
    /// `log2(e_{i-1} / e_i)`, absent on the first row and next to diverged rows.
    pub rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Builds rows from `(level, h, dt, error)` and fills the rates.
    pub fn from_errors(entries: &[(usize, f64, f64, Option<f64>)]) -> Self {
        let mut rows: Vec<ConvergenceRow> = entries
            .iter()
            .map(|&(level, h, dt, error)| ConvergenceRow {
                level,
                h,
                dt,
                error,
                rate: None,
            })
            .collect();
        for i in 1..rows.len() {
            if let (Some(a), Some(b)) = (rows[i - 1].error, rows[i].error) {
                rows[i].rate = Some((a / b).log2());
            }
        }
        ConvergenceTable { rows }
    }

    pub fn rates(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.rate).collect()
    }

    pub fn errors(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.error).collect()
    }
}

/// Runs every level (concurrently under [`Execution::Parallel`]) and tabulates
/// the `L_inf(L2)` errors in level order.
pub fn convergence_study(
    exp: &Experiment,
    mode: StudyMode,
    levels: &[usize],
    exec: Execution,
) -> Result<ConvergenceTable> {
    let results = exec.map(levels.len(), |i| {
        let (h, dt) = mode.sizes(levels[i]);
        exp.error(h, dt, exec)
            .map(|r| (levels[i], h, dt, r.linf_l2()))
    });
    let entries = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable::from_errors(&entries))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub h: f64,
    pub theta: f64,
    /// `None` marks divergence.
    pub error: Option<f64>,
}

/// Error for every `(h, theta)` pair at fixed `dt`, ordered by `h` then `theta`.
pub fn theta_sweep(
    exp: &Experiment,
    hs: &[f64],
    thetas: &[f64],
    dt: f64,
    exec: Execution,
) -> Result<Vec<SweepCell>> {
    let nt = thetas.len();
    let cells = exec.map(hs.len() * nt, |k| {
        let h = hs[k / nt];
        let theta = thetas[k % nt];
        let e = Experiment {
            theta,
            ..exp.clone()
        };
        e.error(h, dt, exec).map(|r| SweepCell {
            h,
            theta,
            error: r.linf_l2(),
        })
    });
    cells.into_iter().collect()
}
