use crate::error::{BeamError, Result};
use crate::geometry::WeakForm;

/// Which squared norm enters the Kirchhoff factor `G(t, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GNorm {
    /// `b1 |grad v_h|^2 = b1 d^T K1 d`.
    #[default]
    Gradient,
    /// `b1 |v_h|^2 = b1 d^T A d` (experiment only).
    Value,
}

/// How `dG/dX` is formed inside the Newton Jacobian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GGradient {
    /// `2 b1 N X`, the exact differential.
    #[default]
    Exact,
    /// `2 b1 X_k N_kk`: diagonal of the norm matrix only.
    LegacyDiagonal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewmarkConfig {
    pub theta: f64,
    pub dt: f64,
    pub steps: usize,
    pub newton_tol_step: f64,
    pub newton_tol_resid: f64,
    pub newton_max_iter: usize,
    pub divergence_threshold: f64,
    pub g_norm: GNorm,
    pub g_gradient: GGradient,
    pub weak_form: WeakForm,
}

impl NewmarkConfig {
    /// Scheme on `[0, horizon]`; `horizon / dt` must be an integer.
    pub fn new(theta: f64, dt: f64, horizon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(BeamError::Config(format!("theta = {theta} outside [0, 1]")));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(BeamError::Config(format!("dt = {dt} must be positive")));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(BeamError::Config(format!("T = {horizon} must be positive")));
        }
        let steps = (horizon / dt).round();
        if steps < 1.0 || (steps * dt - horizon).abs() > 1e-12 * horizon {
            return Err(BeamError::Config(format!(
                "T = {horizon} is not an integer multiple of dt = {dt}"
            )));
        }
        Ok(Self::with_steps(theta, dt, steps as usize))
    }

    pub fn with_steps(theta: f64, dt: f64, steps: usize) -> Self {
        NewmarkConfig {
            theta,
            dt,
            steps,
            newton_tol_step: 1e-14,
            newton_tol_resid: 1e-14,
            newton_max_iter: 50,
            divergence_threshold: 1e8,
            g_norm: GNorm::Gradient,
            g_gradient: GGradient::Exact,
            weak_form: WeakForm::Consistent,
        }
    }

    pub fn horizon(&self) -> f64 {
        self.dt * self.steps as f64
    }

    pub fn time(&self, step: usize) -> f64 {
        step as f64 * self.dt
    }
}
