//! Closed-form test solutions and the sources they induce.
//!
//! Both cases share the clamped profile `P(y) = prod_i (y_i^2 - 1)^2` on the
//! box `(-1, 1)^n`; they differ in amplitude and temporal factor.

use std::f64::consts::PI;

use crate::assembly::assemble_load_default;
use crate::error::{BeamError, Result};
use crate::exec::Execution;
use crate::geometry::{coefficients_at, BeamParameters, BoundaryState, MovingBoundary, WeakForm};
use crate::mesh::{Field, HermiteSpace};
use crate::quadrature::GaussRule;

pub const BOX_LO: [f64; 2] = [-1.0, -1.0];
pub const BOX_HI: [f64; 2] = [1.0, 1.0];

const NORM_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseId {
    /// `cos(2 pi t)` in time.
    S1,
    /// `sin(2 pi t)` in time.
    S2,
}

impl std::str::FromStr for CaseId {
    type Err = BeamError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "S1" => Ok(CaseId::S1),
            "S2" => Ok(CaseId::S2),
            other => Err(BeamError::Config(format!("unknown case `{other}`"))),
        }
    }
}

/// Orders of differentiation per spatial axis and in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Derivative {
    pub space: [u8; 2],
    pub time: u8,
}

impl Derivative {
    pub const VALUE: Derivative = Derivative {
        space: [0, 0],
        time: 0,
    };

    pub const fn new(space: [u8; 2], time: u8) -> Self {
        Derivative { space, time }
    }

    pub const fn dy(axis: usize, order: u8) -> Self {
        let mut space = [0, 0];
        space[axis] = order;
        Derivative { space, time: 0 }
    }
}

pub const MAX_SPACE_ORDER: u8 = 4;
pub const MAX_TIME_ORDER: u8 = 2;

/// `d^k/ds^k (s^2 - 1)^2`.
fn profile(s: f64, k: u8) -> f64 {
    match k {
        0 => (s * s - 1.0).powi(2),
        1 => 4.0 * s * (s * s - 1.0),
        2 => 12.0 * s * s - 4.0,
        3 => 24.0 * s,
        4 => 24.0,
        _ => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedCase {
    pub id: CaseId,
    pub dim: usize,
    pub amplitude: f64,
    /// `int |grad P|^2 dy` over the box.
    grad_norm_unit: f64,
}

impl ManufacturedCase {
    pub fn new(id: CaseId, dim: usize) -> Result<Self> {
        let amplitude = match (id, dim) {
            (CaseId::S1, 1 | 2) => 1e-1,
            (CaseId::S2, 1) => 1e-3,
            (CaseId::S2, 2) => 1e-7,
            _ => return Err(BeamError::Config(format!("dimension {dim} is not 1 or 2"))),
        };
        Ok(Self::with_amplitude(id, dim, amplitude))
    }

    /// Same shape with a chosen amplitude (used for homogeneous runs and tests).
    pub fn with_amplitude(id: CaseId, dim: usize, amplitude: f64) -> Self {
        let rule = GaussRule::new(NORM_POINTS);
        // map [0, 1] onto [-1, 1]
        let one = |k: u8| rule.integrate(|x| 2.0 * profile(2.0 * x - 1.0, k).powi(2));
        let grad_norm_unit = match dim {
            1 => one(1),
            _ => 2.0 * one(1) * one(0),
        };
        ManufacturedCase {
            id,
            dim,
            amplitude,
            grad_norm_unit,
        }
    }

    /// `k`-th time derivative of the temporal factor.
    pub fn temporal(&self, t: f64, k: u8) -> f64 {
        let w = 2.0 * PI;
        let (sin, cos) = (w * t).sin_cos();
        // S2 is S1 shifted by one derivative: sin = -(d/dt cos)/w
        let shift = match self.id {
            CaseId::S1 => 0,
            CaseId::S2 => 3,
        };
        let trig = match (k + shift) % 4 {
            0 => cos,
            1 => -sin,
            2 => -cos,
            _ => sin,
        };
        w.powi(k as i32) * trig
    }

    /// Spatial factor without amplitude.
    fn spatial(&self, y: [f64; 2], order: [u8; 2]) -> f64 {
        match self.dim {
            1 => {
                if order[1] != 0 {
                    0.0
                } else {
                    profile(y[0], order[0])
                }
            }
            _ => profile(y[0], order[0]) * profile(y[1], order[1]),
        }
    }

    pub fn eval(&self, y: [f64; 2], t: f64, d: Derivative) -> Result<f64> {
        if d.space.iter().any(|&o| o > MAX_SPACE_ORDER) || d.time > MAX_TIME_ORDER {
            return Err(BeamError::Config(format!("unsupported derivative {d:?}")));
        }
        Ok(self.eval_unchecked(y, t, d))
    }

    fn eval_unchecked(&self, y: [f64; 2], t: f64, d: Derivative) -> f64 {
        self.amplitude * self.spatial(y, d.space) * self.temporal(t, d.time)
    }

    pub fn value(&self, y: [f64; 2], t: f64) -> f64 {
        self.eval_unchecked(y, t, Derivative::VALUE)
    }

    pub fn laplacian(&self, y: [f64; 2], t: f64) -> f64 {
        (0..self.dim)
            .map(|i| self.eval_unchecked(y, t, Derivative::dy(i, 2)))
            .sum()
    }

    /// `|grad v(., t)|_0^2` on the box.
    pub fn grad_norm_sq(&self, t: f64) -> f64 {
        (self.amplitude * self.temporal(t, 0)).powi(2) * self.grad_norm_unit
    }

    /// `d^k v / dt^k (., t)` as a field for interpolation.
    pub fn slice(&self, t: f64, time_order: u8) -> CaseSlice {
        CaseSlice {
            case: *self,
            t,
            time_order,
        }
    }

    pub fn initial_displacement(&self) -> CaseSlice {
        self.slice(0.0, 0)
    }

    pub fn initial_velocity(&self) -> CaseSlice {
        self.slice(0.0, 1)
    }

    /// Source at a fixed time with the boundary state and `|grad v|^2` cached.
    pub fn source_at(
        &self,
        boundary: &MovingBoundary,
        params: &BeamParameters,
        t: f64,
    ) -> Result<SourceEvaluator> {
        Ok(SourceEvaluator {
            case: *self,
            state: boundary.eval_positive(t)?,
            params: *params,
            t,
            grad_norm_sq: self.grad_norm_sq(t),
        })
    }
}

/// Time slice of a case, usable as an interpolation target.
#[derive(Debug, Clone, Copy)]
pub struct CaseSlice {
    case: ManufacturedCase,
    t: f64,
    time_order: u8,
}

impl Field for CaseSlice {
    fn value(&self, y: [f64; 2]) -> f64 {
        self.case
            .eval_unchecked(y, self.t, Derivative::new([0, 0], self.time_order))
    }
    fn gradient(&self, y: [f64; 2]) -> Option<[f64; 2]> {
        let d = |axis| {
            self.case.eval_unchecked(
                y,
                self.t,
                Derivative {
                    time: self.time_order,
                    ..Derivative::dy(axis, 1)
                },
            )
        };
        Some([d(0), d(1)])
    }
    fn cross_derivative(&self, y: [f64; 2]) -> Option<f64> {
        Some(
            self.case
                .eval_unchecked(y, self.t, Derivative::new([1, 1], self.time_order)),
        )
    }
}

/// Evaluates the strong operator applied to a case at one time.
#[derive(Debug, Clone, Copy)]
pub struct SourceEvaluator {
    case: ManufacturedCase,
    state: BoundaryState,
    params: BeamParameters,
    t: f64,
    grad_norm_sq: f64,
}

impl SourceEvaluator {
    /// Spatial part: everything except the inertia term `v_tt`.
    pub fn operator(&self, y: [f64; 2]) -> f64 {
        let c = &self.case;
        let t = self.t;
        let n = c.dim;
        let co = coefficients_at(&self.state, &self.params, &y[..n], WeakForm::Consistent);
        let v = |d: Derivative| c.eval_unchecked(y, t, d);
        let lap = c.laplacian(y, t);
        let mut bilap = 0.0;
        for i in 0..n {
            bilap += v(Derivative::dy(i, 4));
        }
        if n == 2 {
            bilap += 2.0 * v(Derivative::new([2, 2], 0));
        }
        let mut f = -co.b1 * self.grad_norm_sq * lap
            + co.b2 * bilap
            + self.params.nu * v(Derivative::new([0, 0], 1));
        for i in 0..n {
            for j in 0..n {
                let mut order = [0u8; 2];
                order[i] += 1;
                order[j] += 1;
                f += co.a2[i][j] * v(Derivative::new(order, 0));
            }
            f -= co.a1[i] * v(Derivative::dy(i, 2));
            f -= co.a3[i] * v(Derivative::dy(i, 1));
            f -= co.a4[i]
                * v(Derivative {
                    time: 1,
                    ..Derivative::dy(i, 1)
                });
        }
        f
    }

    pub fn source(&self, y: [f64; 2]) -> f64 {
        self.case
            .eval_unchecked(y, self.t, Derivative::new([0, 0], 2))
            + self.operator(y)
    }
}

/// `f(y, t)` such that the case solves the transformed equation with source `f`.
pub fn manufactured_source(
    case: &ManufacturedCase,
    boundary: &MovingBoundary,
    params: &BeamParameters,
    y: [f64; 2],
    t: f64,
) -> Result<f64> {
    let f = case.source_at(boundary, params, t)?.source(y);
    if f.is_finite() {
        Ok(f)
    } else {
        Err(BeamError::SourceEvaluation { y, t })
    }
}

/// Load vector `F(t)` for the case on `space`.
pub fn manufactured_load(
    space: &HermiteSpace,
    case: &ManufacturedCase,
    boundary: &MovingBoundary,
    params: &BeamParameters,
    t: f64,
    exec: Execution,
) -> Result<Vec<f64>> {
    let ev = case.source_at(boundary, params, t)?;
    assemble_load_default(space, |y, _| ev.source(y), t, exec)
}
