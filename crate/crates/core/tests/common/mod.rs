//! Independent oracles shared by the property and acceptance targets.
//!
//! Element matrices are rebuilt from a monomial representation of the cubic
//! Hermite basis (obtained by solving the interpolation conditions) and
//! integrated exactly, with a DOF numbering derived from the grid alone.

#![allow(dead_code)]

use movbeam::assembly::{assemble_constant, assemble_reference};
use movbeam::band::BandMatrix;
use movbeam::geometry::{coefficients_at, BeamParameters, MovingBoundary, WeakForm};
use movbeam::mesh::{HermiteSpace, Mesh};
use movbeam::verification::{CaseId, ClampedTrig, ConsistencyMode, Experiment, ManufacturedCase};
use movbeam::Execution;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type Poly = Vec<f64>;

pub fn poly_mul(a: &[f64], b: &[f64]) -> Poly {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_deriv(a: &[f64], order: usize) -> Poly {
    let mut p = a.to_vec();
    for _ in 0..order {
        p = if p.len() <= 1 {
            vec![0.0]
        } else {
            p.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| i as f64 * c)
                .collect()
        };
    }
    p
}

/// Exact integral over `[0, len]`.
pub fn poly_integral(a: &[f64], len: f64) -> f64 {
    a.iter()
        .enumerate()
        .map(|(i, c)| c * len.powi(i as i32 + 1) / (i as f64 + 1.0))
        .sum()
}

/// Solves a small dense system by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

/// Cubics on `[0, len]` dual to (value at 0, slope at 0, value at len, slope at len).
pub fn hermite_monomials(len: f64) -> [Poly; 4] {
    let conditions = vec![
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
        vec![1.0, len, len * len, len.powi(3)],
        vec![0.0, 1.0, 2.0 * len, 3.0 * len * len],
    ];
    std::array::from_fn(|j| {
        let mut rhs = vec![0.0; 4];
        rhs[j] = 1.0;
        dense_solve(conditions.clone(), rhs)
    })
}

/// `int_0^len w(s) D^da phi_p D^db phi_q ds`.
fn pair_integral(
    basis: &[Poly; 4],
    p: usize,
    da: usize,
    q: usize,
    db: usize,
    w: &[f64],
    len: f64,
) -> f64 {
    let f = poly_mul(&poly_deriv(&basis[p], da), &poly_deriv(&basis[q], db));
    poly_integral(&poly_mul(&f, w), len)
}

/// Dense oracle matrices over the free DOFs, ordered as in [`OracleSet::names`].
pub struct OracleSet {
    pub mats: Vec<Vec<Vec<f64>>>,
}

impl OracleSet {
    pub fn names() -> [&'static str; 6] {
        [
            "mass",
            "stiffness_grad",
            "stiffness_lap",
            "stretch",
            "cross",
            "first_order",
        ]
    }
}

/// Free index of `(node, dof)` on a clamped grid with `n` cells per axis.
fn free_dof(dim: usize, n: usize, ix: usize, iy: usize, k: usize) -> Option<usize> {
    let interior = |i: usize| i > 0 && i < n;
    if dim == 1 {
        return interior(ix).then(|| (ix - 1) * 2 + k);
    }
    if !(interior(ix) && interior(iy)) {
        return None;
    }
    Some(((iy - 1) * (n - 1) + (ix - 1)) * 4 + k)
}

pub fn oracle_matrices(dim: usize, lo: f64, hi: f64, n: usize) -> OracleSet {
    let len = (hi - lo) / n as f64;
    let basis = hermite_monomials(len);
    let size = if dim == 1 {
        2 * (n - 1)
    } else {
        4 * (n - 1) * (n - 1)
    };
    let mut mats = vec![vec![vec![0.0; size]; size]; 6];
    let one = [1.0];

    if dim == 1 {
        for e in 0..n {
            let o = lo + e as f64 * len;
            let y = [o, 1.0];
            let y2 = [o * o, 2.0 * o, 1.0];
            for l in 0..4 {
                let Some(row) = free_dof(1, n, e + l / 2, 0, l % 2) else {
                    continue;
                };
                for k in 0..4 {
                    let Some(col) = free_dof(1, n, e + k / 2, 0, k % 2) else {
                        continue;
                    };
                    let j = |da, db, w: &[f64]| pair_integral(&basis, k, da, l, db, w, len);
                    mats[0][row][col] += j(0, 0, &one);
                    mats[1][row][col] += j(1, 1, &one);
                    mats[2][row][col] += j(2, 2, &one);
                    mats[3][row][col] += j(1, 1, &y2);
                    mats[4][row][col] += j(1, 1, &y2);
                    mats[5][row][col] += j(1, 0, &y);
                }
            }
        }
        return OracleSet { mats };
    }

    // 2D: basis (node a, dof k) = X_p(x) Y_q(y), p = 2 a_x + (k & 1), q = 2 a_y + (k >> 1)
    let local = |a: usize, k: usize| (2 * (a % 2) + (k & 1), 2 * (a / 2) + (k >> 1));
    for ey in 0..n {
        for ex in 0..n {
            let ox = lo + ex as f64 * len;
            let oy = lo + ey as f64 * len;
            let wx = [ox, 1.0];
            let wy = [oy, 1.0];
            let wx2 = [ox * ox, 2.0 * ox, 1.0];
            let wy2 = [oy * oy, 2.0 * oy, 1.0];
            for la in 0..16 {
                let (an, ak) = (la / 4, la % 4);
                let Some(row) = free_dof(2, n, ex + an % 2, ey + an / 2, ak) else {
                    continue;
                };
                let (p2, q2) = local(an, ak);
                for ka in 0..16 {
                    let (bn, bk) = (ka / 4, ka % 4);
                    let Some(col) = free_dof(2, n, ex + bn % 2, ey + bn / 2, bk) else {
                        continue;
                    };
                    let (p, q) = local(bn, bk);
                    let jx = |da, db, w: &[f64]| pair_integral(&basis, p, da, p2, db, w, len);
                    let jy = |da, db, w: &[f64]| pair_integral(&basis, q, da, q2, db, w, len);
                    mats[0][row][col] += jx(0, 0, &one) * jy(0, 0, &one);
                    mats[1][row][col] +=
                        jx(1, 1, &one) * jy(0, 0, &one) + jx(0, 0, &one) * jy(1, 1, &one);
                    mats[2][row][col] += jx(2, 2, &one) * jy(0, 0, &one)
                        + jx(2, 0, &one) * jy(0, 2, &one)
                        + jx(0, 2, &one) * jy(2, 0, &one)
                        + jx(0, 0, &one) * jy(2, 2, &one);
                    let sx = jx(1, 1, &wx2) * jy(0, 0, &one);
                    let sy = jx(0, 0, &one) * jy(1, 1, &wy2);
                    mats[3][row][col] += sx + sy;
                    mats[4][row][col] +=
                        sx + sy + jx(1, 0, &wx) * jy(0, 1, &wy) + jx(0, 1, &wx) * jy(1, 0, &wy);
                    mats[5][row][col] +=
                        jx(1, 0, &wx) * jy(0, 0, &one) + jx(0, 0, &one) * jy(1, 0, &wy);
                }
            }
        }
    }
    OracleSet { mats }
}

pub fn space(dim: usize, cells: usize) -> HermiteSpace {
    HermiteSpace::new(Mesh::new(dim, [-1.0, -1.0], [1.0, 1.0], cells).unwrap()).unwrap()
}

/// Largest relative deviation (scaled per matrix) between assembled and oracle matrices.
pub fn element_matrix_deviation(dim: usize, cells: usize) -> f64 {
    let s = space(dim, cells);
    let c = assemble_constant(&s, Execution::Parallel);
    let r = assemble_reference(&s, Execution::Parallel);
    let assembled: [&BandMatrix; 6] = [
        &c.mass,
        &c.stiffness_grad,
        &c.stiffness_lap,
        &r.stretch,
        &r.cross,
        &r.first_order,
    ];
    let oracle = oracle_matrices(dim, -1.0, 1.0, cells);
    let mut worst: f64 = 0.0;
    for (m, o) in assembled.iter().zip(&oracle.mats) {
        let dense = m.to_dense();
        assert_eq!(dense.len(), o.len(), "free DOF count");
        let scale = o.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs()));
        for (ra, ro) in dense.iter().zip(o) {
            for (a, b) in ra.iter().zip(ro) {
                worst = worst.max((a - b).abs() / scale);
            }
        }
    }
    worst
}

/// Largest jump of value or gradient across interior cell faces, and largest
/// value or gradient on the clamped boundary, for a random coefficient vector.
pub fn conformity_jump(dim: usize, cells: usize, seed: u64) -> f64 {
    let s = space(dim, cells);
    let mut rng = StdRng::seed_from_u64(seed);
    let d: Vec<f64> = (0..s.n_free).map(|_| rng.random_range(-1.0..1.0)).collect();
    let eval = |e: usize, local: [f64; 2]| {
        let p = s.eval_on_element(e, &d, &s.shape(local));
        [p.value, p.grad[0], p.grad[1]]
    };
    let diff = |a: [f64; 3], b: [f64; 3]| (0..3).fold(0.0f64, |m, i| m.max((a[i] - b[i]).abs()));
    let norm = |a: [f64; 3]| a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let samples = [0.0, 0.21, 0.5, 0.83, 1.0];
    let mut worst: f64 = 0.0;
    if dim == 1 {
        for e in 0..cells - 1 {
            worst = worst.max(diff(eval(e, [1.0, 0.0]), eval(e + 1, [0.0, 0.0])));
        }
        worst = worst
            .max(norm(eval(0, [0.0, 0.0])))
            .max(norm(eval(cells - 1, [1.0, 0.0])));
        return worst;
    }
    for iy in 0..cells {
        for ix in 0..cells {
            let e = iy * cells + ix;
            for &t in &samples {
                if ix + 1 < cells {
                    worst = worst.max(diff(eval(e, [1.0, t]), eval(e + 1, [0.0, t])));
                }
                if iy + 1 < cells {
                    worst = worst.max(diff(eval(e, [t, 1.0]), eval(e + cells, [t, 0.0])));
                }
                if ix == 0 {
                    worst = worst.max(norm(eval(e, [0.0, t])));
                }
                if ix + 1 == cells {
                    worst = worst.max(norm(eval(e, [1.0, t])));
                }
                if iy == 0 {
                    worst = worst.max(norm(eval(e, [t, 0.0])));
                }
                if iy + 1 == cells {
                    worst = worst.max(norm(eval(e, [t, 1.0])));
                }
            }
        }
    }
    worst
}

/// Weak/strong residuals of the interpolated manufactured state on successive meshes.
pub fn consistency_residuals(dim: usize, cells: &[usize]) -> Vec<f64> {
    let case = ManufacturedCase::new(CaseId::S1, dim).unwrap();
    let w = ClampedTrig {
        dim,
        a: [0.3, -0.2],
        b: [1.7, 2.3],
        c: [0.4, 1.1],
    };
    cells
        .iter()
        .map(|&n| {
            movbeam::verification::weak_strong_residual(
                &space(dim, n),
                &case,
                &w,
                &MovingBoundary::b1(dim),
                &BeamParameters::default(),
                0.3,
                WeakForm::Consistent,
                ConsistencyMode::Interpolated,
                Execution::Parallel,
            )
            .unwrap()
        })
        .collect()
}

/// Largest deviation of the coefficient set from closed forms written out here,
/// over random points and times on both moving boundaries and a fixed one.
pub fn coefficient_identity_error(seed: u64) -> f64 {
    let mut rng = StdRng::seed_from_u64(seed);
    let params = BeamParameters::default();
    let mut worst: f64 = 0.0;
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-6);
    for dim in [1usize, 2] {
        for boundary in [
            MovingBoundary::b1(dim),
            MovingBoundary::b2(dim),
            MovingBoundary::constant(64.0),
        ] {
            for _ in 0..50 {
                let t: f64 = rng.random_range(0.0..3.0);
                let y: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
                let s = boundary.eval(t).unwrap();
                let (k, kp, kpp) = (s.k, s.kp, s.kpp);
                let c = coefficients_at(&s, &params, &y, WeakForm::Verbatim);
                worst = worst.max(rel(c.b1, params.zeta1 / k.powi(4)));
                worst = worst.max(rel(c.b2, 1.0 / k.powi(4)));
                for i in 0..dim {
                    let a3 = (2.0 * y[i] * kp * kp - y[i] * k * (params.nu * kp + kpp)) / (k * k);
                    let a4 = -2.0 * y[i] * kp / k;
                    worst = worst.max(rel(
                        c.a1[i],
                        (params.zeta0 - 4.0 * (y[i] * kp).powi(2)) / (k * k),
                    ));
                    worst = worst.max(rel(c.a3[i], a3));
                    worst = worst.max(rel(c.a4[i], a4));
                    worst = worst.max(rel(c.a5[i], a3 + 2.0 * (kp / k) * a4));
                    for j in 0..dim {
                        worst = worst.max(rel(c.a2[i][j], 4.0 * y[i] * y[j] * (kp / k).powi(2)));
                    }
                }
                if kp == 0.0 && kpp == 0.0 {
                    // fixed domain: only the constant tension survives, and both forms agree
                    let cc = coefficients_at(&s, &params, &y, WeakForm::Consistent);
                    assert_eq!(c, cc, "weak forms differ on a fixed domain");
                    for i in 0..dim {
                        worst = worst.max(rel(c.a1[i], params.zeta0 / (k * k)));
                        for v in [
                            c.a3[i],
                            c.a4[i],
                            c.a5[i],
                            c.weak_velocity[i],
                            c.weak_advection[i],
                        ] {
                            worst = worst.max(v.abs());
                        }
                        for j in 0..dim {
                            worst = worst.max(c.a2[i][j].abs());
                        }
                    }
                }
            }
        }
    }
    worst
}

/// Trajectory of a short forced run rendered as CSV text.
pub fn trajectory_csv(dim: usize, exec: Execution) -> String {
    let case = ManufacturedCase::new(CaseId::S1, dim).unwrap();
    let exp = Experiment {
        horizon: 0.25,
        ..Experiment::new(case, MovingBoundary::b1(dim))
    };
    let sim = exp.simulate(0.25, 1.0 / 32.0, exec).unwrap();
    let mut out = String::from("step,t,newton_iters,res_norm,dinf\n");
    for r in &sim.trajectory.trace {
        out += &format!(
            "{},{:.12e},{},{:.12e},{:.12e}\n",
            r.step, r.t, r.newton_iters, r.residual, r.dinf
        );
    }
    for d in &sim.trajectory.d {
        let row: Vec<String> = d.iter().map(|v| format!("{v:.12e}")).collect();
        out += &row.join(",");
        out.push('\n');
    }
    out
}
