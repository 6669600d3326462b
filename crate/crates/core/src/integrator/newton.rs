//! Newton iteration for one implicit Newmark step.

use crate::band::{solve_low_rank, BandMatrix};
use crate::error::{BeamError, Result};

use super::config::GGradient;
use super::step::KirchhoffFactor;

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, a| m.max(a.abs()))
}

/// Residual `F(X) = M X + theta dt^2 (sum_g G_g(X)) K1 X + c G_b(X) K1 d1 + Gamma`.
/// The ghost term is present only on the first step.
pub struct StepSystem<'a> {
    pub linear: BandMatrix,
    pub k1: &'a BandMatrix,
    pub theta_dt2: f64,
    pub factors: Vec<KirchhoffFactor<'a>>,
    /// `(index into factors, c, K1 d1)`
    pub ghost: Option<(usize, f64, Vec<f64>)>,
    pub gamma: Vec<f64>,
    pub g_gradient: GGradient,
}

/// `(u, v)` standing for the update `u v^T`.
pub type RankOne = (Vec<f64>, Vec<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

impl StepSystem<'_> {
    pub fn dim(&self) -> usize {
        self.linear.dim()
    }

    fn g_sum(&self, x: &[f64]) -> f64 {
        self.factors.iter().map(|g| g.value(x)).sum()
    }

    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        let mut r = self.linear.matvec(x);
        let kx = self.k1.matvec(x);
        let g = self.theta_dt2 * self.g_sum(x);
        for ((ri, ki), gi) in r.iter_mut().zip(&kx).zip(&self.gamma) {
            *ri += g * ki + gi;
        }
        if let Some((idx, c, kd1)) = &self.ghost {
            let gb = c * self.factors[*idx].value(x);
            for (ri, ki) in r.iter_mut().zip(kd1) {
                *ri += gb * ki;
            }
        }
        r
    }

    /// Band part and rank-one corrections `(u, v)` of the Jacobian `B + sum u v^T`.
    pub fn jacobian_parts(&self, x: &[f64]) -> (BandMatrix, Vec<RankOne>) {
        let band = BandMatrix::combine(&[
            (1.0, &self.linear),
            (self.theta_dt2 * self.g_sum(x), self.k1),
        ]);
        let mut updates = Vec::with_capacity(2);
        if !self.factors.is_empty() {
            let mut v = vec![0.0; self.dim()];
            for g in &self.factors {
                for (vi, gi) in v.iter_mut().zip(g.gradient(x, self.g_gradient)) {
                    *vi += self.theta_dt2 * gi;
                }
            }
            updates.push((self.k1.matvec(x), v));
        }
        if let Some((idx, c, kd1)) = &self.ghost {
            let v = self.factors[*idx]
                .gradient(x, self.g_gradient)
                .into_iter()
                .map(|gi| c * gi)
                .collect();
            updates.push((kd1.clone(), v));
        }
        (band, updates)
    }

    pub fn jacobian_dense(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let (band, updates) = self.jacobian_parts(x);
        let mut j = band.to_dense();
        for (u, v) in &updates {
            for (row, ui) in j.iter_mut().zip(u) {
                for (e, vj) in row.iter_mut().zip(v) {
                    *e += ui * vj;
                }
            }
        }
        j
    }

    /// Newton from `x0`; stops on `|step|_inf < tol_step` or `|F|_inf < tol_resid`.
    /// At least one update is always taken, so a tiny residual at a warm start
    /// (small-amplitude data) cannot end the iteration before any solve.
    pub fn solve(
        &self,
        x0: &[f64],
        tol_step: f64,
        tol_resid: f64,
        max_iter: usize,
    ) -> Result<NewtonOutcome> {
        let mut x = x0.to_vec();
        for it in 0..=max_iter {
            let r = self.residual(&x);
            let rn = norm_inf(&r);
            if !rn.is_finite() {
                return Err(BeamError::NonFinite);
            }
            if it > 0 && rn < tol_resid {
                return Ok(NewtonOutcome {
                    x,
                    iterations: it,
                    residual: rn,
                });
            }
            if it == max_iter {
                return Err(BeamError::NewtonNoConvergence {
                    iterations: it,
                    residual: rn,
                });
            }
            let (band, updates) = self.jacobian_parts(&x);
            let lu = band.factor()?;
            let neg: Vec<f64> = r.iter().map(|v| -v).collect();
            let s = solve_low_rank(&lu, &updates, &neg)?;
            let sn = norm_inf(&s);
            if !sn.is_finite() {
                return Err(BeamError::NonFinite);
            }
            for (xi, si) in x.iter_mut().zip(&s) {
                *xi += si;
            }
            if sn < tol_step {
                let residual = norm_inf(&self.residual(&x));
                return Ok(NewtonOutcome {
                    x,
                    iterations: it + 1,
                    residual,
                });
            }
        }
        unreachable!()
    }
}
