//! Newmark-theta time stepping of the Galerkin system
//! `A d'' + G(t, d) K1 d + L1(t) d' + L2(t) d = F(t)` with a Newton solve per step.
//!
//! The first step uses the ghost state `d^-1 = d^1 - 2 dt d'(0)`. Runs are
//! strictly sequential in time; independent runs may execute concurrently.

mod config;
mod newton;
mod step;

pub use config::{GGradient, GNorm, NewmarkConfig};
pub use newton::{NewtonOutcome, RankOne, StepSystem};
pub use step::{g_eval, g_grad, KirchhoffFactor, LevelOperators, StepOperators};

use crate::assembly::SystemOperators;
use crate::band::BandMatrix;
use crate::error::{BeamError, Result};
use crate::geometry::{BeamParameters, MovingBoundary, SeparableCoefficients};

/// Load vector `F(t)` over the free DOFs.
pub type LoadFn<'a> = dyn Fn(f64) -> Result<Vec<f64>> + Sync + 'a;

pub struct Problem<'a> {
    pub ops: &'a SystemOperators,
    pub boundary: &'a MovingBoundary,
    pub params: BeamParameters,
    /// Initial displacement coefficients.
    pub d0: Vec<f64>,
    /// Initial velocity coefficients.
    pub d1: Vec<f64>,
    pub load: Option<&'a LoadFn<'a>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub step: usize,
    pub t: f64,
    pub newton_iters: usize,
    pub residual: f64,
    pub dinf: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Completed,
    /// `step` is the first level that could not be computed or exceeded the threshold.
    Diverged {
        step: usize,
        cause: String,
    },
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub dt: f64,
    /// `d^0 .. d^N` (shorter when diverged).
    pub d: Vec<Vec<f64>>,
    /// Newton iterations spent on `d^1 .. d^N`.
    pub newton_iterations: Vec<usize>,
    pub trace: Vec<TraceRecord>,
    pub status: RunStatus,
}

impl Trajectory {
    pub fn is_completed(&self) -> bool {
        self.status == RunStatus::Completed
    }

    pub fn time(&self, step: usize) -> f64 {
        step as f64 * self.dt
    }

    pub fn max_newton_iterations(&self) -> usize {
        self.newton_iterations.iter().copied().max().unwrap_or(0)
    }
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, a| m.max(a.abs()))
}

impl Problem<'_> {
    fn norm_matrix(&self, cfg: &NewmarkConfig) -> &BandMatrix {
        match cfg.g_norm {
            GNorm::Gradient => &self.ops.constant.stiffness_grad,
            GNorm::Value => &self.ops.constant.mass,
        }
    }

    /// `L1`, `L2`, `b1` and `F` at time `t`.
    pub fn level(&self, cfg: &NewmarkConfig, t: f64) -> Result<LevelOperators> {
        let s = self.boundary.eval_positive(t)?;
        let sep = SeparableCoefficients::new(&s, &self.params, self.ops.dim, cfg.weak_form);
        let load = match self.load {
            Some(f) => f(t)?,
            None => vec![0.0; self.ops.n()],
        };
        Ok(LevelOperators {
            t,
            b1: sep.b1,
            damping: self.ops.damping(self.params.nu, &sep),
            stiffness: self.ops.linear_stiffness(&sep),
            load,
        })
    }

    /// `G^eta(d)` with the norm chosen in `cfg`.
    pub fn g_value(&self, cfg: &NewmarkConfig, b1: f64, d: &[f64]) -> f64 {
        g_eval(b1, self.norm_matrix(cfg), d)
    }

    /// Step operators for level `eta >= 1` given `d^eta`.
    pub fn build_step_operators(
        &self,
        cfg: &NewmarkConfig,
        levels: [&LevelOperators; 3],
        d_now: &[f64],
    ) -> StepOperators {
        let g_now = self.g_value(cfg, levels[1].b1, d_now);
        StepOperators::new(
            &self.ops.constant.mass,
            &self.ops.constant.stiffness_grad,
            levels,
            g_now,
            cfg.theta,
            cfg.dt,
        )
    }

    /// Newton system for `X = d^{eta+1}`, `eta >= 1`.
    pub fn step_system<'s>(
        &'s self,
        cfg: &NewmarkConfig,
        levels: [&LevelOperators; 3],
        d_now: &[f64],
        d_prev: &[f64],
    ) -> StepSystem<'s> {
        let ops = self.build_step_operators(cfg, levels, d_now);
        let k1 = &self.ops.constant.stiffness_grad;
        let norm = self.norm_matrix(cfg);
        let dt2 = cfg.dt * cfg.dt;
        let theta_dt2 = cfg.theta * dt2;
        let g_prev = g_eval(levels[0].b1, norm, d_prev);
        let a = ops.m2.matvec(d_now);
        let b = ops.m3.matvec(d_prev);
        let c = k1.matvec(d_prev);
        let gamma = (0..a.len())
            .map(|i| a[i] + b[i] + theta_dt2 * g_prev * c[i] - dt2 * ops.load[i])
            .collect();
        StepSystem {
            linear: ops.m1,
            k1,
            theta_dt2,
            factors: vec![KirchhoffFactor {
                coef: levels[2].b1,
                norm,
                shift: None,
            }],
            ghost: None,
            gamma,
            g_gradient: cfg.g_gradient,
        }
    }

    /// Newton system for `X = d^1` built from `d^-1 = X - 2 dt d'(0)`, with
    /// `M3^-1 ~ M3^0`, `b1^-1 ~ b1^0` and `F^theta = theta F^1 + (1 - theta) F^0`.
    pub fn first_step_system<'s>(
        &'s self,
        cfg: &NewmarkConfig,
        level0: &LevelOperators,
        level1: &LevelOperators,
    ) -> StepSystem<'s> {
        let ops = self.build_step_operators(cfg, [level0, level0, level1], &self.d0);
        let k1 = &self.ops.constant.stiffness_grad;
        let norm = self.norm_matrix(cfg);
        let dt = cfg.dt;
        let dt2 = dt * dt;
        let theta_dt2 = cfg.theta * dt2;
        let a = ops.m2.matvec(&self.d0);
        let b = ops.m3.matvec(&self.d1);
        let gamma = (0..a.len())
            .map(|i| a[i] - 2.0 * dt * b[i] - dt2 * ops.load[i])
            .collect();
        let shift = self.d1.iter().map(|v| 2.0 * dt * v).collect();
        StepSystem {
            linear: BandMatrix::combine(&[(1.0, &ops.m1), (1.0, &ops.m3)]),
            k1,
            theta_dt2,
            factors: vec![
                KirchhoffFactor {
                    coef: level1.b1,
                    norm,
                    shift: None,
                },
                KirchhoffFactor {
                    coef: level0.b1,
                    norm,
                    shift: Some(shift),
                },
            ],
            // (M3 + theta dt^2 G^-1 K1)(X - 2 dt d1) leaves -2 theta dt^3 G^-1 K1 d1
            ghost: Some((1, -2.0 * cfg.theta * dt2 * dt, k1.matvec(&self.d1))),
            gamma,
            g_gradient: cfg.g_gradient,
        }
    }
}

/// Runs the scheme on `[0, N dt]`. Newton failures and blow-up end the run
/// with [`RunStatus::Diverged`]; boundary and load errors are returned.
pub fn advance(problem: &Problem<'_>, cfg: &NewmarkConfig) -> Result<Trajectory> {
    advance_with(problem, cfg, |_| {})
}

/// [`advance`] with a callback invoked after each completed step.
pub fn advance_with<F: FnMut(&TraceRecord)>(
    problem: &Problem<'_>,
    cfg: &NewmarkConfig,
    mut observe: F,
) -> Result<Trajectory> {
    let n = problem.ops.n();
    if problem.d0.len() != n || problem.d1.len() != n {
        return Err(BeamError::Config(format!(
            "initial data has {} / {} entries, expected {n}",
            problem.d0.len(),
            problem.d1.len()
        )));
    }
    let mut traj = Trajectory {
        dt: cfg.dt,
        d: Vec::with_capacity(cfg.steps + 1),
        newton_iterations: Vec::with_capacity(cfg.steps),
        trace: Vec::with_capacity(cfg.steps + 1),
        status: RunStatus::Completed,
    };
    let record0 = TraceRecord {
        step: 0,
        t: 0.0,
        newton_iters: 0,
        residual: 0.0,
        dinf: norm_inf(&problem.d0),
    };
    observe(&record0);
    traj.trace.push(record0);
    traj.d.push(problem.d0.clone());
    if cfg.steps == 0 {
        return Ok(traj);
    }

    let mut prev = problem.level(cfg, 0.0)?;
    let mut now = problem.level(cfg, cfg.time(1))?;

    for eta in 0..cfg.steps {
        let target = eta + 1;
        let outcome = if eta == 0 {
            let sys = problem.first_step_system(cfg, &prev, &now);
            sys.solve(
                &problem.d0,
                cfg.newton_tol_step,
                cfg.newton_tol_resid,
                cfg.newton_max_iter,
            )
        } else {
            let next = problem.level(cfg, cfg.time(target))?;
            let d_now = &traj.d[eta];
            let d_prev = &traj.d[eta - 1];
            let sys = problem.step_system(cfg, [&prev, &now, &next], d_now, d_prev);
            let out = sys.solve(
                d_now,
                cfg.newton_tol_step,
                cfg.newton_tol_resid,
                cfg.newton_max_iter,
            );
            prev = std::mem::replace(&mut now, next);
            out
        };
        let out = match outcome {
            Ok(o) => o,
            Err(e) => {
                traj.status = RunStatus::Diverged {
                    step: target,
                    cause: e.at_step(target).to_string(),
                };
                return Ok(traj);
            }
        };
        let dinf = norm_inf(&out.x);
        if !dinf.is_finite() || dinf > cfg.divergence_threshold {
            traj.status = RunStatus::Diverged {
                step: target,
                cause: format!("|d|_inf = {dinf:e} exceeds {:e}", cfg.divergence_threshold),
            };
            return Ok(traj);
        }
        let rec = TraceRecord {
            step: target,
            t: cfg.time(target),
            newton_iters: out.iterations,
            residual: out.residual,
            dinf,
        };
        observe(&rec);
        traj.trace.push(rec);
        traj.newton_iterations.push(out.iterations);
        traj.d.push(out.x);
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;
    use crate::mesh::{HermiteSpace, Mesh};

    fn setup(dim: usize, cells: usize) -> (HermiteSpace, SystemOperators) {
        let lo = [-1.0, -1.0];
        let hi = [1.0, 1.0];
        let space = HermiteSpace::new(Mesh::new(dim, lo, hi, cells).unwrap()).unwrap();
        let ops = SystemOperators::assemble(&space, Execution::Sequential);
        (space, ops)
    }

    fn pseudo_random(n: usize, seed: f64, scale: f64) -> Vec<f64> {
        (0..n)
            .map(|i| scale * ((i as f64 + 1.0) * seed).sin())
            .collect()
    }

    fn fd_jacobian_error(sys: &StepSystem<'_>, x: &[f64]) -> f64 {
        let j = sys.jacobian_dense(x);
        let n = x.len();
        let mut worst: f64 = 0.0;
        // the residual is cubic, so Richardson on central differences is exact up to rounding
        let central = |k: usize, e: f64| -> Vec<f64> {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[k] += e;
            xm[k] -= e;
            let rp = sys.residual(&xp);
            let rm = sys.residual(&xm);
            (0..n).map(|i| (rp[i] - rm[i]) / (2.0 * e)).collect()
        };
        for k in 0..n {
            let e = 1e-3 * x[k].abs().max(1e-2);
            let wide = central(k, e);
            let narrow = central(k, 0.5 * e);
            let col: Vec<f64> = (0..n).map(|i| (4.0 * narrow[i] - wide[i]) / 3.0).collect();
            let scale = (0..n).fold(0.0f64, |m, i| m.max(j[i][k].abs()));
            let err = (0..n).fold(0.0f64, |m, i| m.max((col[i] - j[i][k]).abs()));
            worst = worst.max(err / scale);
        }
        worst
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        for (dim, cells) in [(1, 16), (2, 4)] {
            let (_space, ops) = setup(dim, cells);
            let b = MovingBoundary::b2(dim);
            // large zeta1 so the rank-one terms are visible against the band
            let params = BeamParameters {
                zeta0: 128.0,
                zeta1: 2e7,
                nu: 1.0,
            };
            let n = ops.n();
            let problem = Problem {
                ops: &ops,
                boundary: &b,
                params,
                d0: pseudo_random(n, 0.7, 0.1),
                d1: pseudo_random(n, 1.3, 0.5),
                load: None,
            };
            let cfg = NewmarkConfig::with_steps(0.25, 2f64.powi(-5), 4);
            let l0 = problem.level(&cfg, 0.0).unwrap();
            let l1 = problem.level(&cfg, cfg.dt).unwrap();
            let l2 = problem.level(&cfg, 2.0 * cfg.dt).unwrap();
            let x = pseudo_random(n, 2.9, 0.2);
            let sys0 = problem.first_step_system(&cfg, &l0, &l1);
            let e0 = fd_jacobian_error(&sys0, &x);
            assert!(e0 < 1e-6, "first step {dim}D: {e0}");
            let sys1 = problem.step_system(&cfg, [&l0, &l1, &l2], &problem.d1, &problem.d0);
            assert!(fd_jacobian_error(&sys1, &x) < 1e-6);
        }
    }

    #[test]
    fn linear_jacobian_is_m1() {
        let (_space, ops) = setup(1, 8);
        let b = MovingBoundary::b1(1);
        let params = BeamParameters {
            zeta1: 0.0,
            ..Default::default()
        };
        let n = ops.n();
        let problem = Problem {
            ops: &ops,
            boundary: &b,
            params,
            d0: vec![0.0; n],
            d1: vec![0.0; n],
            load: None,
        };
        let cfg = NewmarkConfig::with_steps(0.25, 0.01, 4);
        let l: Vec<_> = (0..3)
            .map(|i| problem.level(&cfg, i as f64 * 0.01).unwrap())
            .collect();
        let ops_step = problem.build_step_operators(&cfg, [&l[0], &l[1], &l[2]], &problem.d0);
        let sys = problem.step_system(&cfg, [&l[0], &l[1], &l[2]], &problem.d0, &problem.d0);
        let expect = ops_step.m1.to_dense();
        for x in [vec![0.0; n], pseudo_random(n, 0.4, 3.0)] {
            assert_eq!(sys.jacobian_dense(&x), expect);
        }
    }

    #[test]
    fn step_operator_consistency() {
        let (_space, ops) = setup(1, 8);
        let b = MovingBoundary::b2(1);
        let params = BeamParameters::default();
        let n = ops.n();
        let problem = Problem {
            ops: &ops,
            boundary: &b,
            params,
            d0: pseudo_random(n, 0.3, 0.1),
            d1: vec![0.0; n],
            load: None,
        };
        let theta = 0.3;
        let dt = 0.05;
        let cfg = NewmarkConfig::with_steps(theta, dt, 4);
        let l: Vec<_> = (0..3)
            .map(|i| problem.level(&cfg, 0.2 + i as f64 * dt).unwrap())
            .collect();
        let s = problem.build_step_operators(&cfg, [&l[0], &l[1], &l[2]], &problem.d0);
        let g = problem.g_value(&cfg, l[1].b1, &problem.d0);
        let k1 = &ops.constant.stiffness_grad;
        let sum = BandMatrix::combine(&[(1.0, &s.m1), (1.0, &s.m2), (1.0, &s.m3)]);
        let dt2 = dt * dt;
        let expect = BandMatrix::combine(&[
            (dt2 * (1.0 - 2.0 * theta) * g, k1),
            (dt2 * (1.0 - 2.0 * theta), &l[1].stiffness),
            (dt2 * theta, &l[2].stiffness),
            (dt2 * theta, &l[0].stiffness),
            (0.5 * dt, &l[2].damping),
            (-0.5 * dt, &l[0].damping),
        ]);
        let mut diff = sum.clone();
        diff.axpy(-1.0, &expect);
        assert!(diff.max_abs() <= 1e-13);
    }

    #[test]
    fn zero_data_stays_zero() {
        let (_space, ops) = setup(1, 8);
        let b = MovingBoundary::b1(1);
        let n = ops.n();
        let problem = Problem {
            ops: &ops,
            boundary: &b,
            params: BeamParameters::default(),
            d0: vec![0.0; n],
            d1: vec![0.0; n],
            load: None,
        };
        let cfg = NewmarkConfig::new(0.25, 2f64.powi(-5), 1.0).unwrap();
        let traj = advance(&problem, &cfg).unwrap();
        assert!(traj.is_completed());
        assert_eq!(traj.d.len(), 33);
        assert!(traj.d.iter().flatten().all(|v| *v == 0.0));
    }

    #[test]
    fn wrong_initial_length_is_rejected() {
        let (_space, ops) = setup(1, 4);
        let b = MovingBoundary::b1(1);
        let problem = Problem {
            ops: &ops,
            boundary: &b,
            params: BeamParameters::default(),
            d0: vec![0.0; 2],
            d1: vec![0.0; ops.n()],
            load: None,
        };
        let cfg = NewmarkConfig::with_steps(0.25, 0.1, 2);
        assert!(matches!(advance(&problem, &cfg), Err(BeamError::Config(_))));
    }

    #[test]
    fn blow_up_reports_divergence() {
        let (_space, ops) = setup(1, 8);
        let b = MovingBoundary::constant(1.0);
        let n = ops.n();
        // strongly unstable explicit run: huge tension with theta = 0
        let params = BeamParameters {
            zeta0: 1e6,
            zeta1: 0.0,
            nu: 0.0,
        };
        let problem = Problem {
            ops: &ops,
            boundary: &b,
            params,
            d0: pseudo_random(n, 0.9, 0.1),
            d1: vec![0.0; n],
            load: None,
        };
        let cfg = NewmarkConfig::with_steps(0.0, 0.1, 200);
        let traj = advance(&problem, &cfg).unwrap();
        match traj.status {
            RunStatus::Diverged { step, .. } => assert!(step < 200),
            RunStatus::Completed => panic!("expected divergence"),
        }
        assert!(traj.d.iter().flatten().all(|v| v.is_finite()));
    }
}
