//! Uniform box meshes and the clamped C1 Hermite space on them.

use crate::error::{BeamError, Result};
use crate::hermite::{basis_len, dofs_per_node, shape_eval_unchecked, ShapeValues, MAX_BASIS};

/// Uniform mesh of an axis-aligned box with the same cell count per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub dim: usize,
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    pub cells_per_axis: usize,
    pub h: [f64; 2],
}

impl Mesh {
    pub fn new(dim: usize, lo: [f64; 2], hi: [f64; 2], cells_per_axis: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(BeamError::Config(format!("dimension {dim} not supported")));
        }
        if cells_per_axis == 0 {
            return Err(BeamError::Config("cells_per_axis must be positive".into()));
        }
        let mut h = [0.0; 2];
        for a in 0..dim {
            if !(hi[a] > lo[a]) || !lo[a].is_finite() || !hi[a].is_finite() {
                return Err(BeamError::Config(format!("empty box along axis {a}")));
            }
            h[a] = (hi[a] - lo[a]) / cells_per_axis as f64;
        }
        Ok(Mesh {
            dim,
            lo,
            hi,
            cells_per_axis,
            h,
        })
    }

    /// Mesh whose cell size along the first axis is `h`. The box length must
    /// be an integer multiple of `h`.
    pub fn with_cell_size(dim: usize, lo: [f64; 2], hi: [f64; 2], h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(BeamError::Config(format!("h = {h} must be positive")));
        }
        let ratio = (hi[0] - lo[0]) / h;
        let cells = ratio.round();
        if cells < 1.0 || (ratio - cells).abs() > 1e-9 * ratio.max(1.0) {
            return Err(BeamError::Config(format!(
                "box length {} is not a multiple of h = {h}",
                hi[0] - lo[0]
            )));
        }
        Self::new(dim, lo, hi, cells as usize)
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.cells_per_axis + 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes_per_axis().pow(self.dim as u32)
    }

    pub fn element_count(&self) -> usize {
        self.cells_per_axis.pow(self.dim as u32)
    }

    /// `(ix, iy)` grid index of element `e`.
    pub fn element_index(&self, e: usize) -> [usize; 2] {
        if self.dim == 1 {
            [e, 0]
        } else {
            [e % self.cells_per_axis, e / self.cells_per_axis]
        }
    }

    pub fn element_origin(&self, e: usize) -> [f64; 2] {
        let [ix, iy] = self.element_index(e);
        [
            self.lo[0] + ix as f64 * self.h[0],
            self.lo[1] + iy as f64 * self.h[1],
        ]
    }

    pub fn to_global(&self, e: usize, local: [f64; 2]) -> [f64; 2] {
        let o = self.element_origin(e);
        [o[0] + local[0] * self.h[0], o[1] + local[1] * self.h[1]]
    }

    /// Global node ids of element `e` in local node order.
    pub fn element_nodes(&self, e: usize) -> ([usize; 4], usize) {
        let [ix, iy] = self.element_index(e);
        if self.dim == 1 {
            ([ix, ix + 1, 0, 0], 2)
        } else {
            let n = self.nodes_per_axis();
            let base = iy * n + ix;
            ([base, base + 1, base + n, base + n + 1], 4)
        }
    }

    pub fn node_grid_index(&self, node: usize) -> [usize; 2] {
        if self.dim == 1 {
            [node, 0]
        } else {
            let n = self.nodes_per_axis();
            [node % n, node / n]
        }
    }

    pub fn node_coord(&self, node: usize) -> [f64; 2] {
        let [i, j] = self.node_grid_index(node);
        [
            self.lo[0] + i as f64 * self.h[0],
            self.lo[1] + j as f64 * self.h[1],
        ]
    }

    pub fn is_boundary_node(&self, node: usize) -> bool {
        let last = self.cells_per_axis;
        self.node_grid_index(node)[..self.dim]
            .iter()
            .any(|&i| i == 0 || i == last)
    }

    /// Element containing `y` and the local coordinates of `y` in it.
    pub fn locate(&self, y: [f64; 2]) -> Option<(usize, [f64; 2])> {
        let mut idx = [0usize; 2];
        let mut local = [0.0; 2];
        for a in 0..self.dim {
            let s = (y[a] - self.lo[a]) / self.h[a];
            if !(s >= -1e-12 && s <= self.cells_per_axis as f64 + 1e-12) {
                return None;
            }
            let i = (s.floor().max(0.0) as usize).min(self.cells_per_axis - 1);
            idx[a] = i;
            local[a] = (s - i as f64).clamp(0.0, 1.0);
        }
        let e = if self.dim == 1 {
            idx[0]
        } else {
            idx[1] * self.cells_per_axis + idx[0]
        };
        Some((e, local))
    }

    pub fn measure(&self) -> f64 {
        (0..self.dim).map(|a| self.hi[a] - self.lo[a]).product()
    }
}

/// A smooth function on the box with the derivatives that Hermite DOFs sample.
pub trait Field: Sync {
    fn value(&self, y: [f64; 2]) -> f64;
    fn gradient(&self, _y: [f64; 2]) -> Option<[f64; 2]> {
        None
    }
    /// `d2/dy1dy2`, needed only in 2D.
    fn cross_derivative(&self, _y: [f64; 2]) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroField;

impl Field for ZeroField {
    fn value(&self, _y: [f64; 2]) -> f64 {
        0.0
    }
    fn gradient(&self, _y: [f64; 2]) -> Option<[f64; 2]> {
        Some([0.0; 2])
    }
    fn cross_derivative(&self, _y: [f64; 2]) -> Option<f64> {
        Some(0.0)
    }
}

pub type GradientFn = Box<dyn Fn([f64; 2]) -> [f64; 2] + Send + Sync>;
pub type ScalarFn = Box<dyn Fn([f64; 2]) -> f64 + Send + Sync>;

/// Field given by closures for the value and, optionally, the derivative DOFs.
pub struct FnField<V> {
    pub value: V,
    pub gradient: Option<GradientFn>,
    pub cross: Option<ScalarFn>,
}

impl<V: Fn([f64; 2]) -> f64 + Sync> Field for FnField<V> {
    fn value(&self, y: [f64; 2]) -> f64 {
        (self.value)(y)
    }
    fn gradient(&self, y: [f64; 2]) -> Option<[f64; 2]> {
        self.gradient.as_ref().map(|g| g(y))
    }
    fn cross_derivative(&self, y: [f64; 2]) -> Option<f64> {
        self.cross.as_ref().map(|c| c(y))
    }
}

/// Value, gradient and Hessian `[11, 22, 12]` of a discrete function at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PointValue {
    pub value: f64,
    pub grad: [f64; 2],
    pub hess: [f64; 3],
}

impl PointValue {
    pub fn laplacian(&self) -> f64 {
        self.hess[0] + self.hess[1]
    }
}

/// Clamped C1 Hermite space. Value and all derivative DOFs on boundary nodes
/// are eliminated; the remaining DOFs are numbered in node order.
#[derive(Debug, Clone)]
pub struct HermiteSpace {
    pub mesh: Mesh,
    pub dofs_per_node: usize,
    /// Global DOF (`node * dofs_per_node + k`) to free index.
    pub free_index: Vec<Option<usize>>,
    pub n_free: usize,
    element_dofs: Vec<[Option<usize>; MAX_BASIS]>,
    bandwidth: usize,
}

impl HermiteSpace {
    pub fn new(mesh: Mesh) -> Result<Self> {
        let dpn = dofs_per_node(mesh.dim);
        let mut free_index = vec![None; mesh.node_count() * dpn];
        let mut n_free = 0;
        for node in 0..mesh.node_count() {
            if mesh.is_boundary_node(node) {
                continue;
            }
            for k in 0..dpn {
                free_index[node * dpn + k] = Some(n_free);
                n_free += 1;
            }
        }
        if n_free == 0 {
            return Err(BeamError::Config(
                "mesh too coarse: no interior degrees of freedom".into(),
            ));
        }
        let nb = basis_len(mesh.dim);
        let mut element_dofs = Vec::with_capacity(mesh.element_count());
        let mut bandwidth = 0;
        for e in 0..mesh.element_count() {
            let (nodes, nn) = mesh.element_nodes(e);
            let mut map = [None; MAX_BASIS];
            for (a, &node) in nodes[..nn].iter().enumerate() {
                for k in 0..dpn {
                    map[a * dpn + k] = free_index[node * dpn + k];
                }
            }
            let ids: Vec<usize> = map[..nb].iter().flatten().copied().collect();
            if let (Some(lo), Some(hi)) = (ids.iter().min(), ids.iter().max()) {
                bandwidth = bandwidth.max(hi - lo);
            }
            element_dofs.push(map);
        }
        Ok(HermiteSpace {
            mesh,
            dofs_per_node: dpn,
            free_index,
            n_free,
            element_dofs,
            bandwidth,
        })
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim
    }

    pub fn basis_len(&self) -> usize {
        basis_len(self.mesh.dim)
    }

    /// Half-bandwidth of every assembled operator.
    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Free index of each local basis function of element `e` (`None` when clamped).
    pub fn element_dofs(&self, e: usize) -> &[Option<usize>] {
        &self.element_dofs[e][..self.basis_len()]
    }

    pub fn shape(&self, local: [f64; 2]) -> ShapeValues {
        shape_eval_unchecked(self.mesh.dim, self.mesh.h, local)
    }

    /// Evaluates `sum_k d_k phi_k` on element `e` from precomputed shapes.
    pub fn eval_on_element(&self, e: usize, d: &[f64], s: &ShapeValues) -> PointValue {
        let mut p = PointValue::default();
        for (k, dof) in self.element_dofs(e).iter().enumerate() {
            if let Some(i) = *dof {
                let c = d[i];
                p.value += c * s.val[k];
                p.grad[0] += c * s.grad[k][0];
                p.grad[1] += c * s.grad[k][1];
                p.hess[0] += c * s.hess[k][0];
                p.hess[1] += c * s.hess[k][1];
                p.hess[2] += c * s.hess[k][2];
            }
        }
        p
    }

    /// Evaluates the discrete function at an arbitrary point of the box.
    pub fn evaluate(&self, d: &[f64], y: [f64; 2]) -> Result<PointValue> {
        let (e, local) = self
            .mesh
            .locate(y)
            .ok_or(BeamError::OutOfCell { coord: y })?;
        Ok(self.eval_on_element(e, d, &self.shape(local)))
    }

    /// Nodal Hermite interpolant: each free DOF takes the exact value or
    /// derivative of `f` at its node.
    pub fn interpolate(&self, f: &dyn Field) -> Result<Vec<f64>> {
        let mut d = vec![0.0; self.n_free];
        let dpn = self.dofs_per_node;
        for node in 0..self.mesh.node_count() {
            let Some(first) = self.free_index[node * dpn] else {
                continue;
            };
            let y = self.mesh.node_coord(node);
            d[first] = f.value(y);
            let g = f.gradient(y).ok_or_else(|| {
                BeamError::Config("nodal interpolation needs the gradient of the datum".into())
            })?;
            d[first + 1] = g[0];
            if dpn == 4 {
                d[first + 2] = g[1];
                d[first + 3] = f.cross_derivative(y).ok_or_else(|| {
                    BeamError::Config(
                        "nodal interpolation needs the mixed derivative of the datum".into(),
                    )
                })?;
            }
        }
        Ok(d)
    }

    /// Grid coordinates and value DOFs of every node (clamped nodes report 0).
    pub fn nodal_values(&self, d: &[f64]) -> Vec<([f64; 2], f64)> {
        let dpn = self.dofs_per_node;
        (0..self.mesh.node_count())
            .map(|node| {
                let v = self.free_index[node * dpn].map_or(0.0, |i| d[i]);
                (self.mesh.node_coord(node), v)
            })
            .collect()
    }
}
