//! Agreement between the assembled weak operator and the strong operator used
//! to build manufactured sources.
//!
//! For a smooth `v` and a clamped test function `w`, integration by parts makes
//! `a_t(v, w) = (S v, w)` where `S` is the spatial part of the strong operator.
//! A mismatch between the two sides points at a sign or coefficient error.

use crate::assembly::{assemble_load_default, SystemOperators};
use crate::error::Result;
use crate::exec::Execution;
use crate::geometry::{
    coefficients_at, BeamParameters, MovingBoundary, SeparableCoefficients, WeakForm,
};
use crate::integrator::g_eval;
use crate::mesh::{Field, HermiteSpace};
use crate::quadrature::{GaussRule, ASSEMBLY_POINTS};

use super::manufactured::{Derivative, ManufacturedCase};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConsistencyMode {
    /// Weak integrand evaluated with the exact `v` and its derivatives.
    ExactTrial,
    /// Weak side from the assembled matrices applied to the interpolant of `v`.
    Interpolated,
}

/// `|a_t(v, w_h) - (S v, w_h)|` at time `t`, with `w_h` the interpolant of `w`.
#[allow(clippy::too_many_arguments)]
pub fn weak_strong_residual(
    space: &HermiteSpace,
    case: &ManufacturedCase,
    w: &dyn Field,
    boundary: &MovingBoundary,
    params: &BeamParameters,
    t: f64,
    form: WeakForm,
    mode: ConsistencyMode,
    exec: Execution,
) -> Result<f64> {
    let wd = space.interpolate(w)?;
    let ev = case.source_at(boundary, params, t)?;
    let strong = assemble_load_default(space, |y, _| ev.operator(y), t, exec)?;
    let strong: f64 = strong.iter().zip(&wd).map(|(a, b)| a * b).sum();
    let weak = match mode {
        ConsistencyMode::Interpolated => {
            let ops = SystemOperators::assemble(space, exec);
            let s = boundary.eval_positive(t)?;
            let sep = SeparableCoefficients::new(&s, params, space.dim(), form);
            let v = space.interpolate(&case.slice(t, 0))?;
            let vt = space.interpolate(&case.slice(t, 1))?;
            let g = g_eval(sep.b1, &ops.constant.stiffness_grad, &v);
            let mut lhs = ops.linear_stiffness(&sep).matvec(&v);
            let kv = ops.constant.stiffness_grad.matvec(&v);
            let l1 = ops.damping(params.nu, &sep).matvec(&vt);
            for i in 0..lhs.len() {
                lhs[i] += g * kv[i] + l1[i];
            }
            lhs.iter().zip(&wd).map(|(a, b)| a * b).sum()
        }
        ConsistencyMode::ExactTrial => exact_weak(space, case, &wd, boundary, params, t, form)?,
    };
    Ok((weak - strong).abs())
}

fn exact_weak(
    space: &HermiteSpace,
    case: &ManufacturedCase,
    wd: &[f64],
    boundary: &MovingBoundary,
    params: &BeamParameters,
    t: f64,
    form: WeakForm,
) -> Result<f64> {
    let s = boundary.eval_positive(t)?;
    let dim = space.dim();
    let gn = case.grad_norm_sq(t);
    let rule = GaussRule::new(ASSEMBLY_POINTS).tensor(dim);
    let shapes: Vec<_> = rule.iter().map(|(p, _)| space.shape(*p)).collect();
    let cell: f64 = space.mesh.h[..dim].iter().product();
    let mut total = 0.0;
    for e in 0..space.mesh.element_count() {
        for ((p, wq), sh) in rule.iter().zip(&shapes) {
            let y = space.mesh.to_global(e, *p);
            let c = coefficients_at(&s, params, &y[..dim], form);
            let w = space.eval_on_element(e, wd, sh);
            let dv = |i: usize, k: u8, time: u8| {
                case.eval(
                    y,
                    t,
                    Derivative {
                        time,
                        ..Derivative::dy(i, k)
                    },
                )
            };
            let lap = case.laplacian(y, t);
            let mut density = c.b2 * lap * w.laplacian()
                + params.nu * case.eval(y, t, Derivative::new([0, 0], 1))? * w.value;
            for i in 0..dim {
                density += (c.b1 * gn + c.a1[i]) * dv(i, 1, 0)? * w.grad[i];
                for j in 0..dim {
                    density -= c.a2[i][j] * dv(i, 1, 0)? * w.grad[j];
                }
                density += c.weak_velocity[i] * dv(i, 1, 1)? * w.value;
                density += c.weak_advection[i] * dv(i, 1, 0)? * w.value;
            }
            total += wq * cell * density;
        }
    }
    Ok(total)
}

/// Clamped smooth test function `prod_i sin^2(pi (y_i + 1) / 2) (1 + a_i sin(b_i y_i + c_i))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClampedTrig {
    pub dim: usize,
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub c: [f64; 2],
}

impl ClampedTrig {
    fn factor(&self, i: usize, y: f64) -> [f64; 3] {
        use std::f64::consts::PI;
        let arg = 0.5 * PI * (y + 1.0);
        let (s, co) = arg.sin_cos();
        let bump = s * s;
        let bump_d = PI * s * co;
        let (m, md) = (
            1.0 + self.a[i] * (self.b[i] * y + self.c[i]).sin(),
            self.a[i] * self.b[i] * (self.b[i] * y + self.c[i]).cos(),
        );
        [bump * m, bump_d * m + bump * md, 0.0]
    }
}

impl Field for ClampedTrig {
    fn value(&self, y: [f64; 2]) -> f64 {
        (0..self.dim).map(|i| self.factor(i, y[i])[0]).product()
    }
    fn gradient(&self, y: [f64; 2]) -> Option<[f64; 2]> {
        let f0 = self.factor(0, y[0]);
        if self.dim == 1 {
            return Some([f0[1], 0.0]);
        }
        let f1 = self.factor(1, y[1]);
        Some([f0[1] * f1[0], f0[0] * f1[1]])
    }
    fn cross_derivative(&self, y: [f64; 2]) -> Option<f64> {
        if self.dim == 1 {
            return Some(0.0);
        }
        Some(self.factor(0, y[0])[1] * self.factor(1, y[1])[1])
    }
}
