//! Space-time error norms of a computed trajectory against an exact solution.

use crate::exec::Execution;
use crate::integrator::{RunStatus, Trajectory};
use crate::mesh::HermiteSpace;
use crate::quadrature::{GaussRule, LOAD_POINTS};

use super::manufactured::ManufacturedCase;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepError {
    pub step: usize,
    pub t: f64,
    /// `|v_h - v|_0`
    pub l2: f64,
    /// `|Delta (v_h - v)|_0`
    pub h2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorNorms {
    /// Max over steps of the L2 error.
    pub linf_l2: f64,
    /// Max over steps of the Laplacian seminorm error.
    pub linf_h2: f64,
    pub per_step: Vec<StepError>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ErrorReport {
    Completed(ErrorNorms),
    /// The run stopped at `step` and carries no norms.
    Diverged {
        step: usize,
    },
}

impl ErrorReport {
    pub fn linf_l2(&self) -> Option<f64> {
        match self {
            ErrorReport::Completed(n) => Some(n.linf_l2),
            ErrorReport::Diverged { .. } => None,
        }
    }

    pub fn linf_h2(&self) -> Option<f64> {
        match self {
            ErrorReport::Completed(n) => Some(n.linf_h2),
            ErrorReport::Diverged { .. } => None,
        }
    }

    pub fn is_diverged(&self) -> bool {
        matches!(self, ErrorReport::Diverged { .. })
    }
}

/// `(|v_h - v|_0, |Delta(v_h - v)|_0)` where `exact(y)` returns `(v, Delta v)`.
pub fn spatial_errors<F>(space: &HermiteSpace, d: &[f64], exact: F) -> (f64, f64)
where
    F: Fn([f64; 2]) -> (f64, f64),
{
    let rule = GaussRule::new(LOAD_POINTS).tensor(space.dim());
    let shapes: Vec<_> = rule.iter().map(|(p, _)| space.shape(*p)).collect();
    let cell: f64 = space.mesh.h[..space.dim()].iter().product();
    let mut l2 = 0.0;
    let mut h2 = 0.0;
    for e in 0..space.mesh.element_count() {
        for ((p, w), s) in rule.iter().zip(&shapes) {
            let y = space.mesh.to_global(e, *p);
            let pv = space.eval_on_element(e, d, s);
            let (v, lap) = exact(y);
            l2 += w * cell * (pv.value - v).powi(2);
            h2 += w * cell * (pv.laplacian() - lap).powi(2);
        }
    }
    (l2.sqrt(), h2.sqrt())
}

/// Errors at every stored level, evaluated concurrently across steps.
pub fn error_norms(
    trajectory: &Trajectory,
    case: &ManufacturedCase,
    space: &HermiteSpace,
    exec: Execution,
) -> ErrorReport {
    if let RunStatus::Diverged { step, .. } = trajectory.status {
        return ErrorReport::Diverged { step };
    }
    let per_step: Vec<StepError> = exec.map(trajectory.d.len(), |step| {
        let t = trajectory.time(step);
        let (l2, h2) = spatial_errors(space, &trajectory.d[step], |y| {
            (case.value(y, t), case.laplacian(y, t))
        });
        StepError { step, t, l2, h2 }
    });
    let linf_l2 = per_step.iter().fold(0.0, |m: f64, s| m.max(s.l2));
    let linf_h2 = per_step.iter().fold(0.0, |m: f64, s| m.max(s.h2));
    ErrorReport::Completed(ErrorNorms {
        linf_l2,
        linf_h2,
        per_step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Mesh;
    use crate::verification::manufactured::{CaseId, BOX_HI, BOX_LO};

    fn space(dim: usize, cells: usize) -> HermiteSpace {
        HermiteSpace::new(Mesh::new(dim, BOX_LO, BOX_HI, cells).unwrap()).unwrap()
    }

    fn exact_trajectory(
        space: &HermiteSpace,
        case: &ManufacturedCase,
        dt: f64,
        steps: usize,
    ) -> Trajectory {
        let d = (0..=steps)
            .map(|i| space.interpolate(&case.slice(i as f64 * dt, 0)).unwrap())
            .collect();
        Trajectory {
            dt,
            d,
            newton_iterations: vec![0; steps],
            trace: Vec::new(),
            status: RunStatus::Completed,
        }
    }

    #[test]
    fn zero_against_zero() {
        let s = space(1, 4);
        let case = ManufacturedCase::with_amplitude(CaseId::S1, 1, 0.0);
        let traj = exact_trajectory(&s, &case, 0.1, 3);
        let r = error_norms(&traj, &case, &s, Execution::Sequential);
        assert_eq!(r.linf_l2(), Some(0.0));
        assert_eq!(r.linf_h2(), Some(0.0));
    }

    #[test]
    fn interpolation_error_is_fourth_order() {
        let case = ManufacturedCase::new(CaseId::S1, 1).unwrap();
        let errs: Vec<f64> = [4, 8, 16]
            .iter()
            .map(|&c| {
                let s = space(1, c);
                let traj = exact_trajectory(&s, &case, 0.25, 4);
                error_norms(&traj, &case, &s, Execution::Parallel)
                    .linf_l2()
                    .unwrap()
            })
            .collect();
        for w in errs.windows(2) {
            assert!(w[0] / w[1] >= 12.0, "{errs:?}");
        }
    }

    #[test]
    fn divergence_marker() {
        let s = space(1, 2);
        let case = ManufacturedCase::new(CaseId::S1, 1).unwrap();
        let mut traj = exact_trajectory(&s, &case, 0.1, 2);
        traj.status = RunStatus::Diverged {
            step: 2,
            cause: "test".into(),
        };
        let r = error_norms(&traj, &case, &s, Execution::Sequential);
        assert_eq!(r, ErrorReport::Diverged { step: 2 });
        assert!(r.linf_l2().is_none());
    }

    #[test]
    fn sequential_matches_parallel() {
        let s = space(2, 3);
        let case = ManufacturedCase::new(CaseId::S1, 2).unwrap();
        let mut traj = exact_trajectory(&s, &case, 0.1, 3);
        for d in &mut traj.d {
            d.iter_mut().for_each(|v| *v *= 1.01);
        }
        let a = error_norms(&traj, &case, &s, Execution::Sequential);
        let b = error_norms(&traj, &case, &s, Execution::Parallel);
        assert_eq!(a, b);
        assert!(a.linf_l2().unwrap() > 0.0);
    }
}
