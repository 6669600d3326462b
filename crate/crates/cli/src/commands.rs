//! One function per subcommand. Each returns the paths it wrote.

use std::path::{Path, PathBuf};

use movbeam::geometry::validate_hypotheses;
use movbeam::integrator::{RunStatus, Trajectory};
use movbeam::verification::{
    convergence_study, decay_fit, energy_series, error_norms, theta_sweep, time_to_level,
    ErrorReport, Simulation,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output;

/// Fails with the hypothesis category unless the boundary is admissible on `[0, T]`.
pub fn check_hypotheses(cfg: &RunConfig, horizon: f64) -> Result<String, CliError> {
    let report = validate_hypotheses(
        &cfg.moving_boundary(),
        &cfg.params(),
        horizon,
        cfg.relaxed_h1,
    );
    if report.passed() {
        Ok(report.to_string())
    } else {
        Err(CliError::Hypothesis(report.to_string()))
    }
}

pub fn validate(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let text = check_hypotheses(cfg, cfg.horizon())?;
    print!("{text}");
    Ok(Vec::new())
}

fn simulate(cfg: &RunConfig) -> Result<Simulation, CliError> {
    check_hypotheses(cfg, cfg.horizon())?;
    Ok(cfg
        .experiment()
        .simulate(cfg.cell_size(), cfg.dt, cfg.execution())?)
}

fn divergence(traj: &Trajectory) -> Result<(), CliError> {
    match &traj.status {
        RunStatus::Completed => Ok(()),
        RunStatus::Diverged { step, cause } => {
            Err(CliError::Divergence(format!("step {step}: {cause}")))
        }
    }
}

pub fn solve(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let sim = simulate(cfg)?;
    let traj = &sim.trajectory;
    let mut written = vec![output::write_trace(out, &traj.trace)?];
    let times = if cfg.snapshots.is_empty() {
        vec![cfg.horizon()]
    } else {
        cfg.snapshots.clone()
    };
    for t in times {
        let step = (t / traj.dt).round() as usize;
        if step >= traj.d.len() {
            continue;
        }
        let nodes = sim.space.nodal_values(&traj.d[step]);
        written.push(output::write_solution(
            out,
            cfg.dim,
            traj.time(step),
            &nodes,
        )?);
    }
    divergence(traj)?;
    Ok(written)
}

pub fn mms(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let sim = simulate(cfg)?;
    let exp = cfg.experiment();
    let mut written = vec![output::write_trace(out, &sim.trajectory.trace)?];
    match error_norms(&sim.trajectory, &exp.case, &sim.space, cfg.execution()) {
        ErrorReport::Completed(n) => {
            written.push(output::write_errors(out, &n.per_step)?);
            println!("linf_l2 = {}", output::num(n.linf_l2));
            println!("linf_h2 = {}", output::num(n.linf_h2));
        }
        ErrorReport::Diverged { .. } => divergence(&sim.trajectory)?,
    }
    Ok(written)
}

pub fn convergence(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    check_hypotheses(cfg, cfg.horizon())?;
    let table = convergence_study(
        &cfg.experiment(),
        cfg.study_mode(),
        &cfg.levels,
        cfg.execution(),
    )?;
    for r in &table.rows {
        let e = r
            .error
            .map_or_else(|| output::DIVERGE.to_string(), output::num);
        let rate = r
            .rate
            .map_or_else(|| "-".to_string(), |v| format!("{v:.3}"));
        println!(
            "level {} h {} dt {} error {e} rate {rate}",
            r.level,
            output::num(r.h),
            output::num(r.dt)
        );
    }
    Ok(vec![output::write_convergence(out, &table)?])
}

pub fn sweep(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    check_hypotheses(cfg, cfg.horizon())?;
    let cells = theta_sweep(
        &cfg.experiment(),
        &cfg.sweep_h,
        &cfg.sweep_theta,
        cfg.dt,
        cfg.execution(),
    )?;
    Ok(vec![output::write_theta_sweep(out, &cells)?])
}

pub fn energy(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let sim = simulate(cfg)?;
    divergence(&sim.trajectory)?;
    let exp = cfg.experiment();
    let series = energy_series(
        &sim.trajectory,
        &sim.space,
        &exp.boundary,
        &exp.params,
        cfg.execution(),
    )?;
    let mut written = vec![output::write_energy(out, &series)?];
    let window = cfg.fit_window();
    let fit = decay_fit(&series, window.0, window.1)?;
    let t_level = time_to_level(&series, cfg.energy_level);
    println!(
        "A0 = {}  A1 = {}  R^2 = {}",
        output::num(fit.a0),
        output::num(fit.a1),
        output::num(fit.r_squared)
    );
    written.push(output::write_fit(out, &fit, window, t_level)?);
    Ok(written)
}
