//! Square band matrices with equal lower and upper half-bandwidth, an
//! unpivoted band LU, and a Woodbury solve for low-rank corrections.

use crate::error::{BeamError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, bw: usize) -> Self {
        let bw = bw.min(n.saturating_sub(1));
        BandMatrix {
            n,
            bw,
            data: vec![0.0; n * (2 * bw + 1)],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, 0);
        for i in 0..n {
            m.add(i, i, 1.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    fn width(&self) -> usize {
        2 * self.bw + 1
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i.abs_diff(j) <= self.bw);
        i * self.width() + j + self.bw - i
    }

    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && i.abs_diff(j) <= self.bw
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.idx(i, j)]
        } else {
            0.0
        }
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside the band");
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    /// Column range stored for row `i`.
    #[inline]
    fn cols(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.bw)..(i + self.bw + 1).min(self.n)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        for (i, yi) in y.iter_mut().enumerate() {
            let r = self.cols(i);
            let row = &self.data[self.idx(i, r.start)..=self.idx(i, r.end - 1)];
            *yi = row.iter().zip(&x[r]).map(|(a, b)| a * b).sum();
        }
    }

    /// `x^T M y`.
    pub fn quad_form(&self, x: &[f64], y: &[f64]) -> f64 {
        self.matvec(y).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `sum_k c_k M_k` over matrices of equal size; the band is the widest one.
    pub fn combine(terms: &[(f64, &BandMatrix)]) -> BandMatrix {
        let n = terms[0].1.n;
        let bw = terms.iter().map(|(_, m)| m.bw).max().unwrap_or(0);
        let mut out = BandMatrix::zeros(n, bw);
        for (c, m) in terms {
            out.axpy(*c, m);
        }
        out
    }

    /// `self += c * other`; `other` must fit inside this band.
    pub fn axpy(&mut self, c: f64, other: &BandMatrix) {
        assert_eq!(self.n, other.n);
        assert!(other.bw <= self.bw);
        if c == 0.0 {
            return;
        }
        if other.bw == self.bw {
            for (a, b) in self.data.iter_mut().zip(&other.data) {
                *a += c * b;
            }
            return;
        }
        for i in 0..self.n {
            for j in other.cols(i) {
                let v = other.data[other.idx(i, j)];
                let k = self.idx(i, j);
                self.data[k] += c * v;
            }
        }
    }

    pub fn scale(&mut self, c: f64) {
        self.data.iter_mut().for_each(|a| *a *= c);
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    /// `max |M - M^T|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in self.cols(i) {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// In-place LU without pivoting. Fails on a pivot that is zero relative to
    /// the largest entry of the matrix.
    pub fn factor(mut self) -> Result<BandLu> {
        let n = self.n;
        let bw = self.bw;
        let w = self.width();
        let tiny = self.max_abs() * f64::EPSILON * 16.0;
        for k in 0..n {
            let pivot = self.data[k * w + bw];
            if !pivot.is_finite() {
                return Err(BeamError::NonFinite);
            }
            if pivot.abs() <= tiny {
                return Err(BeamError::SingularJacobian { row: k, pivot });
            }
            let end = (k + bw + 1).min(n);
            let (head, tail) = self.data.split_at_mut((k + 1) * w);
            // row k, columns k+1..end
            let urow = &head[k * w + bw + 1..k * w + bw + (end - k)];
            for i in k + 1..end {
                let row = &mut tail[(i - k - 1) * w..(i - k) * w];
                let lk = k + bw - i;
                let l = row[lk] / pivot;
                row[lk] = l;
                if l != 0.0 {
                    for (a, u) in row[lk + 1..lk + (end - k)].iter_mut().zip(urow) {
                        *a -= l * u;
                    }
                }
            }
        }
        Ok(BandLu { lu: self })
    }
}

#[derive(Debug, Clone)]
pub struct BandLu {
    lu: BandMatrix,
}

impl BandLu {
    pub fn dim(&self) -> usize {
        self.lu.n
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let m = &self.lu;
        let n = m.n;
        assert_eq!(x.len(), n);
        for i in 0..n {
            let lo = i.saturating_sub(m.bw);
            let mut s = x[i];
            for j in lo..i {
                s -= m.data[m.idx(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let hi = (i + m.bw + 1).min(n);
            let mut s = x[i];
            for j in i + 1..hi {
                s -= m.data[m.idx(i, j)] * x[j];
            }
            x[i] = s / m.data[m.idx(i, i)];
        }
    }
}

/// Solves `(B + sum_k u_k v_k^T) x = b` given a factorization of `B`.
pub fn solve_low_rank(
    lu: &BandLu,
    updates: &[(Vec<f64>, Vec<f64>)],
    b: &[f64],
) -> Result<Vec<f64>> {
    let mut x = lu.solve(b);
    let r = updates.len();
    if r == 0 {
        return Ok(x);
    }
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    // Z = B^-1 U
    let z: Vec<Vec<f64>> = updates.iter().map(|(u, _)| lu.solve(u)).collect();
    // capacitance C = I + V^T Z, rhs = V^T x
    let mut cap = vec![vec![0.0; r]; r];
    let mut rhs = vec![0.0; r];
    for (i, (_, v)) in updates.iter().enumerate() {
        for j in 0..r {
            cap[i][j] = dot(v, &z[j]) + if i == j { 1.0 } else { 0.0 };
        }
        rhs[i] = dot(v, &x);
    }
    let coef = solve_small(cap, rhs)?;
    for (zj, cj) in z.iter().zip(&coef) {
        for (xi, zi) in x.iter_mut().zip(zj) {
            *xi -= cj * zi;
        }
    }
    Ok(x)
}

/// Dense Gaussian elimination with partial pivoting for tiny systems.
fn solve_small(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap();
        if a[p][k] == 0.0 || !a[p][k].is_finite() {
            return Err(BeamError::SingularJacobian {
                row: k,
                pivot: a[p][k],
            });
        }
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let l = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= l * a[k][j];
            }
            b[i] -= l * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Ok(x)
}
