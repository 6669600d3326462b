//! Cubic Hermite shape functions (1D) and their Bogner–Fox–Schmit tensor
//! products (2D). Derivative DOFs are scaled by the cell size so that each
//! shape function takes the value 1 at its own DOF.

use crate::error::{BeamError, Result};

pub const MAX_BASIS: usize = 16;

/// Shape functions and their `y`-derivatives at one point of a cell.
/// Hessian entries are stored as `[yy_11, yy_22, yy_12]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeValues {
    pub len: usize,
    pub val: [f64; MAX_BASIS],
    pub grad: [[f64; 2]; MAX_BASIS],
    pub hess: [[f64; 3]; MAX_BASIS],
}

impl ShapeValues {
    pub fn laplacian(&self, k: usize) -> f64 {
        self.hess[k][0] + self.hess[k][1]
    }
}

/// Values, first and second derivatives of the four cubic Hermite functions
/// on a cell of length `len`, at local coordinate `xi`.
/// Order: value at 0, slope at 0, value at 1, slope at 1.
pub fn hermite_1d(xi: f64, len: f64) -> [[f64; 3]; 4] {
    let x2 = xi * xi;
    let x3 = x2 * xi;
    [
        [
            1.0 - 3.0 * x2 + 2.0 * x3,
            (-6.0 * xi + 6.0 * x2) / len,
            (-6.0 + 12.0 * xi) / (len * len),
        ],
        [
            len * (xi - 2.0 * x2 + x3),
            1.0 - 4.0 * xi + 3.0 * x2,
            (-4.0 + 6.0 * xi) / len,
        ],
        [
            3.0 * x2 - 2.0 * x3,
            (6.0 * xi - 6.0 * x2) / len,
            (6.0 - 12.0 * xi) / (len * len),
        ],
        [
            len * (-x2 + x3),
            -2.0 * xi + 3.0 * x2,
            (-2.0 + 6.0 * xi) / len,
        ],
    ]
}

/// Local DOFs per node: `(value, d/dy)` in 1D, `(value, d/dy1, d/dy2, d2/dy1dy2)` in 2D.
pub fn dofs_per_node(dim: usize) -> usize {
    if dim == 1 {
        2
    } else {
        4
    }
}

pub fn basis_len(dim: usize) -> usize {
    if dim == 1 {
        4
    } else {
        16
    }
}

/// Evaluates the element basis at `local` in `[0,1]^dim` for a cell with
/// sides `h`. 2D local nodes are ordered `(0,0), (1,0), (0,1), (1,1)`.
pub fn shape_eval(dim: usize, h: [f64; 2], local: [f64; 2]) -> Result<ShapeValues> {
    const TOL: f64 = 1e-12;
    let inside = |c: f64| (-TOL..=1.0 + TOL).contains(&c);
    if !inside(local[0]) || (dim == 2 && !inside(local[1])) {
        return Err(BeamError::OutOfCell { coord: local });
    }
    Ok(shape_eval_unchecked(dim, h, local))
}

pub(crate) fn shape_eval_unchecked(dim: usize, h: [f64; 2], local: [f64; 2]) -> ShapeValues {
    let mut s = ShapeValues {
        len: basis_len(dim),
        val: [0.0; MAX_BASIS],
        grad: [[0.0; 2]; MAX_BASIS],
        hess: [[0.0; 3]; MAX_BASIS],
    };
    let hx = hermite_1d(local[0], h[0]);
    if dim == 1 {
        for k in 0..4 {
            s.val[k] = hx[k][0];
            s.grad[k][0] = hx[k][1];
            s.hess[k][0] = hx[k][2];
        }
        return s;
    }
    let hy = hermite_1d(local[1], h[1]);
    for (node, (ax, ay)) in [(0, 0), (1, 0), (0, 1), (1, 1)].into_iter().enumerate() {
        for dof in 0..4 {
            let ix = 2 * ax + usize::from(dof == 1 || dof == 3);
            let iy = 2 * ay + usize::from(dof == 2 || dof == 3);
            let (fx, fy) = (hx[ix], hy[iy]);
            let k = 4 * node + dof;
            s.val[k] = fx[0] * fy[0];
            s.grad[k] = [fx[1] * fy[0], fx[0] * fy[1]];
            s.hess[k] = [fx[2] * fy[0], fx[0] * fy[2], fx[1] * fy[1]];
        }
    }
    s
}
