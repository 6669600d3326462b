//! Gauss–Legendre rules on the unit interval and their tensor products.

use std::f64::consts::PI;

/// Points per axis used for operator assembly (exact to degree 9).
pub const ASSEMBLY_POINTS: usize = 5;
/// Points per axis for load vectors and error norms.
pub const LOAD_POINTS: usize = 6;

/// `n`-point Gauss–Legendre rule mapped to `[0, 1]`; exact for degree `2n - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "at least one quadrature point");
        let mut points = vec![0.0; n];
        let mut weights = vec![0.0; n];
        // roots are symmetric; solve for the upper half on [-1, 1]
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // map to [0, 1]
            points[i] = 0.5 * (1.0 - x);
            points[n - 1 - i] = 0.5 * (1.0 + x);
            weights[i] = 0.5 * w;
            weights[n - 1 - i] = 0.5 * w;
        }
        GaussRule { points, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `∫_0^1 f`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Tensor rule on `[0,1]^dim`: `(local point, weight)` pairs, first axis fastest.
    pub fn tensor(&self, dim: usize) -> Vec<([f64; 2], f64)> {
        match dim {
            1 => self
                .points
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| ([x, 0.0], w))
                .collect(),
            2 => {
                let mut out = Vec::with_capacity(self.len() * self.len());
                for (&y, &wy) in self.points.iter().zip(&self.weights) {
                    for (&x, &wx) in self.points.iter().zip(&self.weights) {
                        out.push(([x, y], wx * wy));
                    }
                }
                out
            }
            _ => panic!("dimension must be 1 or 2"),
        }
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
