//! Assembly of the mass, stiffness and coefficient-weighted matrices and of
//! load vectors over the free DOFs of a [`HermiteSpace`].
//!
//! Rows index the test function `phi_l`, columns the trial function `phi_k`,
//! so `M d` applies the operator to the coefficient vector `d` directly.

use crate::band::BandMatrix;
use crate::error::{BeamError, Result};
use crate::exec::Execution;
use crate::geometry::{
    coefficients_at, BeamParameters, MovingBoundary, SeparableCoefficients, WeakForm,
};
use crate::hermite::{ShapeValues, MAX_BASIS};
use crate::mesh::{Field, HermiteSpace};
use crate::quadrature::{GaussRule, ASSEMBLY_POINTS, LOAD_POINTS};

pub type LocalMatrix = [[f64; MAX_BASIS]; MAX_BASIS];

const ZERO_LOCAL: LocalMatrix = [[0.0; MAX_BASIS]; MAX_BASIS];
const CHUNK: usize = 512;

/// One quadrature point of an element: global coordinate, shapes and the
/// weight including the cell measure.
pub struct QuadPoint<'a> {
    pub y: [f64; 2],
    pub shape: &'a ShapeValues,
    pub weight: f64,
}

/// Element-by-element assembly of `count` matrices. Element contributions are
/// computed in parallel per chunk and scattered in element order.
pub fn assemble_matrices<F>(
    space: &HermiteSpace,
    exec: Execution,
    points: usize,
    count: usize,
    kernel: F,
) -> Vec<BandMatrix>
where
    F: Fn(&QuadPoint<'_>, &mut [LocalMatrix]) + Sync + Send,
{
    let rule = GaussRule::new(points).tensor(space.dim());
    let shapes: Vec<ShapeValues> = rule.iter().map(|(p, _)| space.shape(*p)).collect();
    let cell = space.mesh.h[..space.dim()].iter().product::<f64>();
    let nb = space.basis_len();
    let mut out = vec![BandMatrix::zeros(space.n_free, space.bandwidth()); count];
    let n_el = space.mesh.element_count();

    let local = |e: usize| {
        let mut mats = vec![ZERO_LOCAL; count];
        for ((p, w), s) in rule.iter().zip(&shapes) {
            let q = QuadPoint {
                y: space.mesh.to_global(e, *p),
                shape: s,
                weight: w * cell,
            };
            kernel(&q, &mut mats);
        }
        mats
    };

    for start in (0..n_el).step_by(CHUNK) {
        let len = CHUNK.min(n_el - start);
        let blocks = exec.map(len, |i| local(start + i));
        for (i, mats) in blocks.into_iter().enumerate() {
            let dofs = space.element_dofs(start + i);
            for (m, loc) in out.iter_mut().zip(&mats) {
                for l in 0..nb {
                    let Some(row) = dofs[l] else { continue };
                    for k in 0..nb {
                        if let Some(col) = dofs[k] {
                            m.add(row, col, loc[l][k]);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Element-by-element assembly of a vector `v_l = sum_q w_q g(y_q) phi_l(y_q)`.
pub fn assemble_vector<F>(
    space: &HermiteSpace,
    exec: Execution,
    points: usize,
    g: F,
) -> Result<Vec<f64>>
where
    F: Fn([f64; 2]) -> f64 + Sync + Send,
{
    let rule = GaussRule::new(points).tensor(space.dim());
    let shapes: Vec<ShapeValues> = rule.iter().map(|(p, _)| space.shape(*p)).collect();
    let cell = space.mesh.h[..space.dim()].iter().product::<f64>();
    let nb = space.basis_len();
    let n_el = space.mesh.element_count();
    let mut out = vec![0.0; space.n_free];
    for start in (0..n_el).step_by(CHUNK) {
        let len = CHUNK.min(n_el - start);
        let blocks = exec.map(
            len,
            |i| -> std::result::Result<[f64; MAX_BASIS], [f64; 2]> {
                let e = start + i;
                let mut loc = [0.0; MAX_BASIS];
                for ((p, w), s) in rule.iter().zip(&shapes) {
                    let y = space.mesh.to_global(e, *p);
                    let gv = g(y);
                    if !gv.is_finite() {
                        return Err(y);
                    }
                    for l in 0..nb {
                        loc[l] += w * cell * gv * s.val[l];
                    }
                }
                Ok(loc)
            },
        );
        for (i, loc) in blocks.into_iter().enumerate() {
            let loc = loc.map_err(|y| BeamError::SourceEvaluation { y, t: f64::NAN })?;
            for (l, dof) in space.element_dofs(start + i).iter().enumerate() {
                if let Some(r) = dof {
                    out[*r] += loc[l];
                }
            }
        }
    }
    Ok(out)
}

/// Mass `A`, gradient stiffness `K1` and bi-Laplacian stiffness `K2`.
#[derive(Debug, Clone, PartialEq)]
pub struct AssembledOperators {
    pub mass: BandMatrix,
    pub stiffness_grad: BandMatrix,
    pub stiffness_lap: BandMatrix,
    pub bandwidth: usize,
}

pub fn assemble_constant(space: &HermiteSpace, exec: Execution) -> AssembledOperators {
    let nb = space.basis_len();
    let dim = space.dim();
    let mut m = assemble_matrices(space, exec, ASSEMBLY_POINTS, 3, |q, loc| {
        let s = q.shape;
        for l in 0..nb {
            for k in 0..nb {
                let g: f64 = (0..dim).map(|i| s.grad[k][i] * s.grad[l][i]).sum();
                loc[0][l][k] += q.weight * s.val[k] * s.val[l];
                loc[1][l][k] += q.weight * g;
                loc[2][l][k] += q.weight * s.laplacian(k) * s.laplacian(l);
            }
        }
    });
    let stiffness_lap = m.pop().unwrap();
    let stiffness_grad = m.pop().unwrap();
    let mass = m.pop().unwrap();
    AssembledOperators {
        mass,
        stiffness_grad,
        stiffness_lap,
        bandwidth: space.bandwidth(),
    }
}

/// Time-dependent matrices: `B1 = (a1_i d_i phi_k, d_i phi_l)`,
/// `B2 = (a2_ij d_i phi_k, d_j phi_l)`, and the first-order terms
/// `B3 = (c_i d_i phi_k, phi_l)` on the velocity and `B4` on the displacement.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeDependentOperators {
    pub tension: BandMatrix,
    pub cross: BandMatrix,
    pub velocity: BandMatrix,
    pub advection: BandMatrix,
}

/// Direct quadrature of the pointwise coefficients at time `t`.
pub fn assemble_time_dependent(
    space: &HermiteSpace,
    boundary: &MovingBoundary,
    params: &BeamParameters,
    t: f64,
    form: WeakForm,
    exec: Execution,
) -> Result<TimeDependentOperators> {
    let state = boundary.eval_positive(t)?;
    let nb = space.basis_len();
    let dim = space.dim();
    let mut m = assemble_matrices(space, exec, ASSEMBLY_POINTS, 4, |q, loc| {
        let c = coefficients_at(&state, params, &q.y[..dim], form);
        let s = q.shape;
        for l in 0..nb {
            for k in 0..nb {
                let mut b1 = 0.0;
                let mut b2 = 0.0;
                let mut b3 = 0.0;
                let mut b4 = 0.0;
                for i in 0..dim {
                    b1 += c.a1[i] * s.grad[k][i] * s.grad[l][i];
                    for j in 0..dim {
                        b2 += c.a2[i][j] * s.grad[k][i] * s.grad[l][j];
                    }
                    b3 += c.weak_velocity[i] * s.grad[k][i] * s.val[l];
                    b4 += c.weak_advection[i] * s.grad[k][i] * s.val[l];
                }
                loc[0][l][k] += q.weight * b1;
                loc[1][l][k] += q.weight * b2;
                loc[2][l][k] += q.weight * b3;
                loc[3][l][k] += q.weight * b4;
            }
        }
    });
    let advection = m.pop().unwrap();
    let velocity = m.pop().unwrap();
    let cross = m.pop().unwrap();
    let tension = m.pop().unwrap();
    Ok(TimeDependentOperators {
        tension,
        cross,
        velocity,
        advection,
    })
}

/// Time-independent pieces of the coefficient matrices:
/// `(y_i^2 d_i phi_k, d_i phi_l)`, `(y_i y_j d_i phi_k, d_j phi_l)` and
/// `(y_i d_i phi_k, phi_l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceOperators {
    pub stretch: BandMatrix,
    pub cross: BandMatrix,
    pub first_order: BandMatrix,
}

pub fn assemble_reference(space: &HermiteSpace, exec: Execution) -> ReferenceOperators {
    let nb = space.basis_len();
    let dim = space.dim();
    let mut m = assemble_matrices(space, exec, ASSEMBLY_POINTS, 3, |q, loc| {
        let s = q.shape;
        let y = q.y;
        for l in 0..nb {
            for k in 0..nb {
                let mut st = 0.0;
                let mut cr = 0.0;
                let mut fo = 0.0;
                for i in 0..dim {
                    st += y[i] * y[i] * s.grad[k][i] * s.grad[l][i];
                    for j in 0..dim {
                        cr += y[i] * y[j] * s.grad[k][i] * s.grad[l][j];
                    }
                    fo += y[i] * s.grad[k][i] * s.val[l];
                }
                loc[0][l][k] += q.weight * st;
                loc[1][l][k] += q.weight * cr;
                loc[2][l][k] += q.weight * fo;
            }
        }
    });
    let first_order = m.pop().unwrap();
    let cross = m.pop().unwrap();
    let stretch = m.pop().unwrap();
    ReferenceOperators {
        stretch,
        cross,
        first_order,
    }
}

/// Everything needed to form the time-dependent matrices at any `t` without
/// re-running quadrature.
#[derive(Debug, Clone)]
pub struct SystemOperators {
    pub dim: usize,
    pub constant: AssembledOperators,
    pub reference: ReferenceOperators,
}

impl SystemOperators {
    pub fn assemble(space: &HermiteSpace, exec: Execution) -> Self {
        SystemOperators {
            dim: space.dim(),
            constant: assemble_constant(space, exec),
            reference: assemble_reference(space, exec),
        }
    }

    pub fn n(&self) -> usize {
        self.constant.mass.dim()
    }

    pub fn time_dependent(&self, sep: &SeparableCoefficients) -> TimeDependentOperators {
        let r = &self.reference;
        TimeDependentOperators {
            tension: BandMatrix::combine(&[
                (sep.tension, &self.constant.stiffness_grad),
                (-sep.stretch, &r.stretch),
            ]),
            cross: BandMatrix::combine(&[(sep.cross, &r.cross)]),
            velocity: BandMatrix::combine(&[(sep.velocity, &r.first_order)]),
            advection: BandMatrix::combine(&[(sep.advection, &r.first_order)]),
        }
    }

    /// Damping operator `L1 = nu A + B3`.
    pub fn damping(&self, nu: f64, sep: &SeparableCoefficients) -> BandMatrix {
        BandMatrix::combine(&[
            (nu, &self.constant.mass),
            (sep.velocity, &self.reference.first_order),
        ])
    }

    /// Linear stiffness `L2 = b2 K2 + B1 - B2 + B4`.
    pub fn linear_stiffness(&self, sep: &SeparableCoefficients) -> BandMatrix {
        let r = &self.reference;
        BandMatrix::combine(&[
            (sep.b2, &self.constant.stiffness_lap),
            (sep.tension, &self.constant.stiffness_grad),
            (-sep.stretch, &r.stretch),
            (-sep.cross, &r.cross),
            (sep.advection, &r.first_order),
        ])
    }
}

/// `F_l = (f(., t), phi_l)` with `points` Gauss points per axis.
pub fn assemble_load<F>(
    space: &HermiteSpace,
    f: F,
    t: f64,
    points: usize,
    exec: Execution,
) -> Result<Vec<f64>>
where
    F: Fn([f64; 2], f64) -> f64 + Sync + Send,
{
    assemble_vector(space, exec, points, |y| f(y, t)).map_err(|e| match e {
        BeamError::SourceEvaluation { y, .. } => BeamError::SourceEvaluation { y, t },
        other => other,
    })
}

pub fn assemble_load_default<F>(
    space: &HermiteSpace,
    f: F,
    t: f64,
    exec: Execution,
) -> Result<Vec<f64>>
where
    F: Fn([f64; 2], f64) -> f64 + Sync + Send,
{
    assemble_load(space, f, t, LOAD_POINTS, exec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialProjection {
    /// Each DOF takes the exact nodal value or derivative.
    #[default]
    Nodal,
    /// Solves `A d = (v, phi)`.
    L2,
}

/// Coefficient vectors `(d0, d1)` for the initial displacement and velocity.
pub fn interpolate_initial(
    space: &HermiteSpace,
    v0: &dyn Field,
    v1: &dyn Field,
    mode: InitialProjection,
    exec: Execution,
) -> Result<(Vec<f64>, Vec<f64>)> {
    match mode {
        InitialProjection::Nodal => Ok((space.interpolate(v0)?, space.interpolate(v1)?)),
        InitialProjection::L2 => {
            let ops = assemble_constant(space, exec);
            let lu = ops.mass.factor()?;
            let r0 = assemble_vector(space, exec, LOAD_POINTS, |y| v0.value(y))?;
            let r1 = assemble_vector(space, exec, LOAD_POINTS, |y| v1.value(y))?;
            Ok((lu.solve(&r0), lu.solve(&r1)))
        }
    }
}
