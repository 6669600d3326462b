//! Physical energy of a discrete state and its exponential decay fit.

use crate::error::{BeamError, Result};
use crate::exec::Execution;
use crate::geometry::{BeamParameters, MovingBoundary};
use crate::integrator::Trajectory;
use crate::mesh::HermiteSpace;
use crate::quadrature::{GaussRule, LOAD_POINTS};

/// `E = 1/2 int_{Omega_t} [u'^2 + (Delta u)^2 + zeta0 |grad u|^2 + zeta1/2 |grad u|^4] dx`
/// evaluated on the reference box, with `u' = v' - (K'/K) y . grad v`.
pub fn energy(
    space: &HermiteSpace,
    boundary: &MovingBoundary,
    params: &BeamParameters,
    t: f64,
    d: &[f64],
    d_dot: &[f64],
) -> Result<f64> {
    if d.iter().chain(d_dot).any(|v| !v.is_finite()) {
        return Err(BeamError::NonFinite);
    }
    let s = boundary.eval_positive(t)?;
    let dim = space.dim();
    let r = s.kp / s.k;
    let k2 = s.k * s.k;
    let jac = s.k.powi(dim as i32);
    let rule = GaussRule::new(LOAD_POINTS).tensor(dim);
    let shapes: Vec<_> = rule.iter().map(|(p, _)| space.shape(*p)).collect();
    let cell: f64 = space.mesh.h[..dim].iter().product();
    let mut total = 0.0;
    for e in 0..space.mesh.element_count() {
        for ((p, w), sh) in rule.iter().zip(&shapes) {
            let y = space.mesh.to_global(e, *p);
            let v = space.eval_on_element(e, d, sh);
            let vt = space.eval_on_element(e, d_dot, sh).value;
            let grad2: f64 = v.grad[..dim].iter().map(|g| g * g).sum();
            let ydotgrad: f64 = (0..dim).map(|i| y[i] * v.grad[i]).sum();
            let u_t = vt - r * ydotgrad;
            let lap = v.laplacian();
            let density = u_t * u_t
                + lap * lap / (k2 * k2)
                + params.zeta0 * grad2 / k2
                + 0.5 * params.zeta1 * grad2 * grad2 / (k2 * k2);
            total += w * cell * density;
        }
    }
    Ok(0.5 * jac * total)
}

/// Discrete velocity at every level: central differences inside, one-sided
/// second order at the ends (first order if only two levels exist).
pub fn discrete_velocity(d: &[Vec<f64>], dt: f64, step: usize) -> Vec<f64> {
    let n = d.len();
    let comb = |c: &[(usize, f64)], scale: f64| -> Vec<f64> {
        (0..d[0].len())
            .map(|i| c.iter().map(|(k, w)| w * d[*k][i]).sum::<f64>() / scale)
            .collect()
    };
    match (step, n) {
        (_, 0 | 1) => vec![0.0; d.first().map_or(0, Vec::len)],
        (0, 2) => comb(&[(0, -1.0), (1, 1.0)], dt),
        (1, 2) => comb(&[(0, -1.0), (1, 1.0)], dt),
        (0, _) => comb(&[(0, -3.0), (1, 4.0), (2, -1.0)], 2.0 * dt),
        (s, _) if s == n - 1 => comb(&[(s, 3.0), (s - 1, -4.0), (s - 2, 1.0)], 2.0 * dt),
        (s, _) => comb(&[(s + 1, 1.0), (s - 1, -1.0)], 2.0 * dt),
    }
}

/// `(t, E(t))` at every stored level.
pub fn energy_series(
    trajectory: &Trajectory,
    space: &HermiteSpace,
    boundary: &MovingBoundary,
    params: &BeamParameters,
    exec: Execution,
) -> Result<Vec<(f64, f64)>> {
    exec.map(trajectory.d.len(), |step| {
        let t = trajectory.time(step);
        let v = discrete_velocity(&trajectory.d, trajectory.dt, step);
        energy(space, boundary, params, t, &trajectory.d[step], &v).map(|e| (t, e))
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub a0: f64,
    pub a1: f64,
    pub r_squared: f64,
    pub samples: usize,
}

/// Least-squares line through `(t, ln E)` for `t` in `[t0, t1]`, giving `E ~ A0 exp(-A1 t)`.
pub fn decay_fit(series: &[(f64, f64)], t0: f64, t1: f64) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .copied()
        .filter(|(t, _)| *t >= t0 && *t <= t1)
        .collect();
    if pts.len() < 2 {
        return Err(BeamError::FitDomain(format!(
            "fewer than two samples in [{t0}, {t1}]"
        )));
    }
    if let Some((t, e)) = pts.iter().find(|(_, e)| !(*e > 0.0) || !e.is_finite()) {
        return Err(BeamError::FitDomain(format!(
            "energy {e} at t = {t} is not positive"
        )));
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ml = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let mut stt = 0.0;
    let mut stl = 0.0;
    let mut sll = 0.0;
    for (t, e) in &pts {
        let dt = t - mt;
        let dl = e.ln() - ml;
        stt += dt * dt;
        stl += dt * dl;
        sll += dl * dl;
    }
    if stt == 0.0 {
        return Err(BeamError::FitDomain("all samples share one time".into()));
    }
    let slope = stl / stt;
    let intercept = ml - slope * mt;
    let r_squared = if sll == 0.0 {
        1.0
    } else {
        stl * stl / (stt * sll)
    };
    Ok(DecayFit {
        a0: intercept.exp(),
        a1: -slope,
        r_squared,
        samples: pts.len(),
    })
}

/// First time at which the series falls to `level` or below.
pub fn time_to_level(series: &[(f64, f64)], level: f64) -> Option<f64> {
    series.iter().find(|(_, e)| *e <= level).map(|(t, _)| *t)
}
