//! Small dense linear algebra used throughout the crate.
//!
//! Everything here is sized for desk-scale problems (dimensions up to a few
//! dozen), row-major and allocation-light. Nothing is tuned for cache
//! behaviour.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Row-major dense real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds a matrix from row-major data. Fails when the length does not
    /// match `rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            if col.len() != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    found: col.len(),
                });
            }
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `selfᵀ v` without forming the transpose.
    pub fn tr_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, v.len(), "tr_mul_vec shape mismatch");
        let mut out = vec![0.0; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: f64, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "elementwise shape mismatch"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// `AB − BA`
    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        norm_inf(&self.data)
    }

    /// Induced 1-norm (maximum absolute column sum).
    pub fn norm_1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| libm::fabs(self[(i, j)])).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        libm::sqrt(dot(&self.data, &self.data))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn is_exactly_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn inverse(&self) -> Result<Self> {
        Lu::new(self)?.inverse()
    }

    pub fn determinant(&self) -> Result<f64> {
        Ok(Lu::new(self)?.determinant())
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Dense rank-3 array `t[a][b][c]`, all three extents equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    pub fn from_flat(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n * n,
                found: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.n + b) * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, v: f64) {
        self.data[(a * self.n + b) * self.n + c] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `Σ_{b,c} t[a][b][c] x_b y_c` for every `a`.
    pub fn contract(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for (a, o) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for (b, &xb) in x.iter().enumerate() {
                if xb == 0.0 {
                    continue;
                }
                let row = &self.data[(a * n + b) * n..(a * n + b + 1) * n];
                s += xb * dot(row, y);
            }
            *o = s;
        }
        out
    }

    /// Matrix `M[a][c] = Σ_b t[a][b][c] x_b`, i.e. the map `y ↦ t(x, y)`.
    pub fn left_slice(&self, x: &[f64]) -> Mat {
        let n = self.n;
        let mut m = Mat::zeros(n, n);
        for a in 0..n {
            for (b, &xb) in x.iter().enumerate() {
                if xb == 0.0 {
                    continue;
                }
                for c in 0..n {
                    m[(a, c)] += xb * self.get(a, b, c);
                }
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        norm_inf(&self.data)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| libm::fabs(a - b))
            .fold(0.0, f64::max)
    }
}

/// Dense rank-4 array `t[a][b][c][d]`, all extents equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor4 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let n = self.n;
        self.data[((a * n + b) * n + c) * n + d]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: f64) {
        let n = self.n;
        self.data[((a * n + b) * n + c) * n + d] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        norm_inf(&self.data)
    }
}

/// LU factorization with partial pivoting.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: Mat,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn new(a: &Mat) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                found: a.cols(),
            });
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, libm::fabs(lu[(i, k)])))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax <= f64::EPSILON * scale * n as f64 {
                return Err(Error::SingularMatrix);
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu[(i, j)] -= f * lu[(k, j)];
                    }
                }
            }
        }
        Ok(Self { lu, perm, sign })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n);
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn inverse(&self) -> Result<Mat> {
        let n = self.lu.rows();
        let mut cols = Vec::with_capacity(n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            cols.push(self.solve(&e));
        }
        Mat::from_columns(&cols)
    }

    pub fn determinant(&self) -> f64 {
        (0..self.lu.rows()).map(|i| self.lu[(i, i)]).product::<f64>() * self.sign
    }
}

/// Householder QR with column pivoting, `A P = Q R`.
#[derive(Clone, Debug)]
pub struct ColPivQr {
    /// Householder vectors below the diagonal, `R` on and above.
    qr: Mat,
    tau: Vec<f64>,
    perm: Vec<usize>,
}

impl ColPivQr {
    pub fn new(a: &Mat) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let mut qr = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut tau = Vec::with_capacity(m.min(n));
        let mut norms: Vec<f64> = (0..n)
            .map(|j| (0..m).map(|i| qr[(i, j)] * qr[(i, j)]).sum())
            .collect();
        for k in 0..m.min(n) {
            // Recompute the trailing column norms from scratch; cheap at this
            // scale and avoids the downdating cancellation issue.
            for (j, nj) in norms.iter_mut().enumerate().skip(k) {
                *nj = (k..m).map(|i| qr[(i, j)] * qr[(i, j)]).sum();
            }
            let p = (k..n).fold(k, |best, j| if norms[j] > norms[best] { j } else { best });
            if p != k {
                for i in 0..m {
                    let t = qr[(i, k)];
                    qr[(i, k)] = qr[(i, p)];
                    qr[(i, p)] = t;
                }
                perm.swap(k, p);
                norms.swap(k, p);
            }
            let alpha = libm::sqrt((k..m).map(|i| qr[(i, k)] * qr[(i, k)]).sum::<f64>());
            if alpha == 0.0 {
                tau.push(0.0);
                continue;
            }
            let beta = if qr[(k, k)] > 0.0 { -alpha } else { alpha };
            let v0 = qr[(k, k)] - beta;
            for i in k + 1..m {
                qr[(i, k)] /= v0;
            }
            let t = (beta - qr[(k, k)]) / beta;
            qr[(k, k)] = beta;
            tau.push(t);
            for j in k + 1..n {
                let mut s = qr[(k, j)];
                for i in k + 1..m {
                    s += qr[(i, k)] * qr[(i, j)];
                }
                s *= t;
                qr[(k, j)] -= s;
                for i in k + 1..m {
                    let vik = qr[(i, k)];
                    qr[(i, j)] -= s * vik;
                }
            }
        }
        Self { qr, tau, perm }
    }

    /// Column permutation: column `k` of `A P` is column `perm[k]` of `A`.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// `|R[k][k]|` for `k < min(m, n)`, non-increasing.
    pub fn r_diagonal(&self) -> Vec<f64> {
        (0..self.tau.len()).map(|k| libm::fabs(self.qr[(k, k)])).collect()
    }

    /// Numerical rank: number of `|R_kk|` above `rel_tol · |R_00|`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let d = self.r_diagonal();
        match d.first() {
            None => 0,
            Some(&0.0) => 0,
            Some(&r0) => d.iter().take_while(|&&r| r > rel_tol * r0).count(),
        }
    }

    fn apply_qt(&self, b: &mut [f64]) {
        let m = self.qr.rows();
        for (k, &t) in self.tau.iter().enumerate() {
            if t == 0.0 {
                continue;
            }
            let mut s = b[k];
            for i in k + 1..m {
                s += self.qr[(i, k)] * b[i];
            }
            s *= t;
            b[k] -= s;
            for i in k + 1..m {
                b[i] -= s * self.qr[(i, k)];
            }
        }
    }

    /// Euclidean norm of the least-squares residual `‖b − A x‖` when `x`
    /// uses the leading `rank` pivoted columns.
    pub fn residual_norm(&self, b: &[f64], rank: usize) -> f64 {
        let mut qtb = b.to_vec();
        self.apply_qt(&mut qtb);
        norm2(&qtb[rank.min(qtb.len())..])
    }

    /// Least-squares solution of `A x = b` restricted to the leading `rank`
    /// pivoted columns (the rest are set to zero).
    pub fn solve_least_squares(&self, b: &[f64], rank: usize) -> Vec<f64> {
        let (m, n) = (self.qr.rows(), self.qr.cols());
        assert_eq!(b.len(), m);
        let mut qtb = b.to_vec();
        self.apply_qt(&mut qtb);
        let r = rank.min(self.tau.len());
        let mut y = vec![0.0; r];
        for i in (0..r).rev() {
            let mut s = qtb[i];
            for j in i + 1..r {
                s -= self.qr[(i, j)] * y[j];
            }
            y[i] = s / self.qr[(i, i)];
        }
        let mut x = vec![0.0; n];
        for (k, &yk) in y.iter().enumerate() {
            x[self.perm[k]] = yk;
        }
        x
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues(a: &Mat) -> Vec<f64> {
    assert!(a.is_square());
    let n = a.rows();
    let mut m = a.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        if off <= 1e-30 * dot(&m.data, &m.data).max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = libm::copysign(1.0, theta) / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Taylor order used on the scaled block.
const EXPM_ORDER: usize = 12;
/// Scale until the 1-norm is at most this.
const EXPM_SCALED_NORM: f64 = 0.5;

/// Matrix exponential by scaling and squaring with a truncated Taylor series
/// on the scaled block.
pub fn expm(a: &Mat) -> Mat {
    assert!(a.is_square(), "expm requires a square matrix");
    let n = a.rows();
    let norm = a.norm_1();
    let mut squarings = 0u32;
    let mut s = 1.0;
    while norm * s > EXPM_SCALED_NORM {
        s *= 0.5;
        squarings += 1;
    }
    let scaled = a.scale(s);
    // Horner form: I + A(I + A/2(I + A/3(...)))
    let mut acc = Mat::identity(n);
    for k in (1..=EXPM_ORDER).rev() {
        acc = scaled.matmul(&acc).scale(1.0 / k as f64);
        for i in 0..n {
            acc[(i, i)] += 1.0;
        }
    }
    for _ in 0..squarings {
        acc = acc.matmul(&acc);
    }
    acc
}

/// Nearest orthogonal matrix (polar factor) by Newton iteration
/// `X ← (X + X⁻ᵀ)/2`.
pub fn polar_orthogonal(a: &Mat) -> Result<Mat> {
    let mut x = a.clone();
    for _ in 0..20 {
        let next = x.add(&x.inverse()?.transpose()).scale(0.5);
        let delta = next.sub(&x).max_abs();
        x = next;
        if delta <= 1e-15 {
            break;
        }
    }
    Ok(x)
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, &x| m.max(libm::fabs(x)))
}

#[inline]
pub fn norm2(v: &[f64]) -> f64 {
    libm::sqrt(dot(v, v))
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| libm::fabs(x - y))
        .fold(0.0, f64::max)
}

/// Weights `w` with `f'(nodes[at]) ≈ Σ w_k f(nodes[k])`, from differentiating
/// the Lagrange interpolant through `nodes`.
pub fn lagrange_derivative_weights(nodes: &[f64], at: usize) -> Vec<f64> {
    let x = nodes[at];
    let m = nodes.len();
    let mut w = vec![0.0; m];
    for j in 0..m {
        let mut sum = 0.0;
        for k in 0..m {
            if k == j {
                continue;
            }
            let mut prod = 1.0 / (nodes[j] - nodes[k]);
            for l in 0..m {
                if l != j && l != k {
                    prod *= (x - nodes[l]) / (nodes[j] - nodes[l]);
                }
            }
            sum += prod;
        }
        w[j] = sum;
    }
    w
}

/// Window of up to `width` consecutive indices around `i`, clipped to
/// `0..len`. Returns `(start, end)`.
pub fn stencil_window(i: usize, len: usize, width: usize) -> (usize, usize) {
    let w = width.min(len);
    let start = i.saturating_sub(w / 2).min(len - w);
    (start, start + w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rot_z(theta: f64) -> Mat {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        Mat::from_rows(&[vec![c, -s, 0.0], vec![s, c, 0.0], vec![0.0, 0.0, 1.0]]).unwrap()
    }

    #[test]
    fn expm_of_zero_is_identity() {
        assert_eq!(expm(&Mat::zeros(4, 4)), Mat::identity(4));
    }

    #[test]
    fn expm_rotation_generator() {
        let gen = Mat::from_rows(&[vec![0.0, -1.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0; 3]]).unwrap();
        for &theta in &[0.1, 1.0, 3.0, 25.0] {
            let e = expm(&gen.scale(theta));
            assert!(e.sub(&rot_z(theta)).max_abs() < 1e-12, "theta {theta}");
        }
    }

    #[test]
    fn expm_nilpotent_is_exact_polynomial() {
        let n = Mat::from_rows(&[vec![0.0, 2.0, 3.0], vec![0.0, 0.0, 4.0], vec![0.0; 3]]).unwrap();
        let expected = Mat::identity(3).add(&n).add(&n.matmul(&n).scale(0.5));
        assert!(expm(&n).sub(&expected).max_abs() < 1e-13);
    }

    #[test]
    fn lu_solve_and_inverse() {
        let a = Mat::from_rows(&[vec![0.0, 2.0, 1.0], vec![1.0, 1.0, 0.0], vec![3.0, 0.0, 1.0]]).unwrap();
        let inv = a.inverse().unwrap();
        assert!(a.matmul(&inv).sub(&Mat::identity(3)).max_abs() < 1e-14);
        assert!((a.determinant().unwrap() - (-5.0)).abs() < 1e-14);
        let singular = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(Lu::new(&singular).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn qr_rank_and_least_squares() {
        let a = Mat::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 3.0, 4.0],
            vec![2.0, 0.0, 2.0],
        ])
        .unwrap();
        let qr = ColPivQr::new(&a);
        assert_eq!(qr.rank(1e-10), 2);
        // b in the range: b = A (1, 1, 0)
        let b = a.mul_vec(&[1.0, 1.0, 0.0]);
        let x = qr.solve_least_squares(&b, 2);
        assert!(max_abs_diff(&a.mul_vec(&x), &b) < 1e-13);
    }

    #[test]
    fn jacobi_eigenvalues_indefinite() {
        let a = Mat::from_rows(&[vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 0.0], vec![0.0, 0.0, -3.0]]).unwrap();
        let ev = symmetric_eigenvalues(&a);
        assert!(max_abs_diff(&ev, &[-3.0, 1.0, 3.0]) < 1e-13);
    }

    #[test]
    fn derivative_weights_exact_on_cubics() {
        let nodes = [0.0, 0.3, 0.5, 1.1, 1.6];
        let f = |t: f64| 2.0 * t * t * t - t + 1.0;
        let df = |t: f64| 6.0 * t * t - 1.0;
        for at in 0..nodes.len() {
            let w = lagrange_derivative_weights(&nodes, at);
            let approx: f64 = w.iter().zip(&nodes).map(|(w, &t)| w * f(t)).sum();
            assert!((approx - df(nodes[at])).abs() < 1e-12);
        }
    }

    #[test]
    fn stencil_window_clips() {
        assert_eq!(stencil_window(0, 10, 5), (0, 5));
        assert_eq!(stencil_window(5, 10, 5), (3, 8));
        assert_eq!(stencil_window(9, 10, 5), (5, 10));
        assert_eq!(stencil_window(1, 3, 5), (0, 3));
    }

    #[test]
    fn polar_recovers_rotation() {
        let r = rot_z(0.7);
        let mut perturbed = r.clone();
        perturbed[(0, 0)] += 1e-6;
        let p = polar_orthogonal(&perturbed).unwrap();
        let drift = p.transpose().matmul(&p).sub(&Mat::identity(3)).max_abs();
        assert!(drift < 1e-14);
        assert!(p.sub(&r).max_abs() < 2e-6);
    }
}
