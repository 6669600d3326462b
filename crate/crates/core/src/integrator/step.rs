//! Three-level Newmark-theta operators and the Kirchhoff factor `G`.

use crate::band::BandMatrix;

use super::config::GGradient;

/// `G(X) = coef * (X - s)^T N (X - s)` where `N` is the matrix of the chosen
/// norm and `s` an optional shift (the ghost state of the first step).
#[derive(Debug, Clone)]
pub struct KirchhoffFactor<'a> {
    pub coef: f64,
    pub norm: &'a BandMatrix,
    pub shift: Option<Vec<f64>>,
}

impl KirchhoffFactor<'_> {
    fn shifted(&self, x: &[f64]) -> Vec<f64> {
        match &self.shift {
            Some(s) => x.iter().zip(s).map(|(a, b)| a - b).collect(),
            None => x.to_vec(),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let z = self.shifted(x);
        self.coef * self.norm.quad_form(&z, &z)
    }

    pub fn gradient(&self, x: &[f64], mode: GGradient) -> Vec<f64> {
        let z = self.shifted(x);
        match mode {
            GGradient::Exact => self
                .norm
                .matvec(&z)
                .into_iter()
                .map(|v| 2.0 * self.coef * v)
                .collect(),
            GGradient::LegacyDiagonal => z
                .iter()
                .enumerate()
                .map(|(k, zk)| 2.0 * self.coef * zk * self.norm.get(k, k))
                .collect(),
        }
    }
}

/// `G(t, d) = b1(t) d^T K1 d`.
pub fn g_eval(b1: f64, k1: &BandMatrix, d: &[f64]) -> f64 {
    KirchhoffFactor {
        coef: b1,
        norm: k1,
        shift: None,
    }
    .value(d)
}

/// Exact gradient `2 b1 K1 d`, or the diagonal-only legacy form.
pub fn g_grad(b1: f64, k1: &BandMatrix, d: &[f64], mode: GGradient) -> Vec<f64> {
    KirchhoffFactor {
        coef: b1,
        norm: k1,
        shift: None,
    }
    .gradient(d, mode)
}

/// Operators of one time level.
#[derive(Debug, Clone)]
pub struct LevelOperators {
    pub t: f64,
    pub b1: f64,
    /// `L1 = nu A + B3`
    pub damping: BandMatrix,
    /// `L2 = b2 K2 + B1 - B2 + B4`
    pub stiffness: BandMatrix,
    pub load: Vec<f64>,
}

/// `M1^{n+1}`, `M2^n`, `M3^{n-1}` and the averaged load `F^{n+theta}`.
#[derive(Debug, Clone)]
pub struct StepOperators {
    pub m1: BandMatrix,
    pub m2: BandMatrix,
    pub m3: BandMatrix,
    pub load: Vec<f64>,
}

impl StepOperators {
    /// `g_now` is `G^n(d^n)`; `levels` are the operators at `t_{n-1}, t_n, t_{n+1}`.
    pub fn new(
        mass: &BandMatrix,
        k1: &BandMatrix,
        levels: [&LevelOperators; 3],
        g_now: f64,
        theta: f64,
        dt: f64,
    ) -> Self {
        let [prev, now, next] = levels;
        let dt2 = dt * dt;
        let m1 = BandMatrix::combine(&[
            (1.0, mass),
            (0.5 * dt, &next.damping),
            (theta * dt2, &next.stiffness),
        ]);
        let c = dt2 * (1.0 - 2.0 * theta);
        let m2 = BandMatrix::combine(&[(c * g_now, k1), (c, &now.stiffness), (-2.0, mass)]);
        let m3 = BandMatrix::combine(&[
            (1.0, mass),
            (-0.5 * dt, &prev.damping),
            (theta * dt2, &prev.stiffness),
        ]);
        let load = prev
            .load
            .iter()
            .zip(&now.load)
            .zip(&next.load)
            .map(|((a, b), c)| theta * a + (1.0 - 2.0 * theta) * b + theta * c)
            .collect();
        StepOperators { m1, m2, m3, load }
    }
}
