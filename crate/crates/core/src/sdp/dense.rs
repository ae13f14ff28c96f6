//! Square real matrices for the interior-point iterations. Only what the
//! solver needs: products, Cholesky, symmetric eigenvalues, linear solves.

use std::ops::{Index, IndexMut};

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RealMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> RealMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a - *b).collect(),
        }
    }

    /// `self + s · other`.
    pub fn axpy(&self, s: T, other: &Self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a + s * *b).collect(),
        }
    }

    pub fn add_diag(&mut self, s: T) {
        for i in 0..self.n {
            self[(i, i)] += s;
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == T::zero() {
                    continue;
                }
                let src = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(src) {
                    *d += a * *b;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// `(M + Mᵀ) / 2`.
    pub fn sym(&self) -> Self {
        let n = self.n;
        let half = T::lit(0.5);
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (self[(i, j)] + self[(j, i)]) * half;
            }
        }
        out
    }

    /// Frobenius inner product.
    pub fn dot(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).map(|(a, b)| *a * *b).sum()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Lower Cholesky factor, or `None` if the matrix is not numerically
    /// positive definite.
    pub fn cholesky(&self) -> Option<Self> {
        let n = self.n;
        let mut l = Self::zeros(n);
        for j in 0..n {
            let mut d = self[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if d.is_nan() || d <= T::zero() {
                return None;
            }
            let d = d.sqrt();
            l[(j, j)] = d;
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / d;
            }
        }
        Some(l)
    }

    /// Inverse of a lower-triangular matrix.
    pub fn lower_inverse(&self) -> Self {
        let n = self.n;
        let mut inv = Self::zeros(n);
        for col in 0..n {
            for i in col..n {
                let mut s = if i == col { T::one() } else { T::zero() };
                for k in col..i {
                    s -= self[(i, k)] * inv[(k, col)];
                }
                inv[(i, col)] = s / self[(i, i)];
            }
        }
        inv
    }

    /// Inverse of a symmetric positive definite matrix.
    pub fn spd_inverse(&self) -> Option<Self> {
        let linv = self.cholesky()?.lower_inverse();
        Some(linv.transpose().matmul(&linv).sym())
    }

    /// Eigenvalues of a symmetric matrix (cyclic Jacobi), unordered.
    pub fn sym_eigenvalues(&self) -> Vec<T> {
        let n = self.n;
        let mut a = self.sym();
        let threshold = T::epsilon() * a.data.iter().map(|v| *v * *v).sum::<T>().sqrt() * T::lit(1e-2);
        for _ in 0..80 {
            let mut off = T::zero();
            for p in 0..n {
                for q in p + 1..n {
                    off += a[(p, q)] * a[(p, q)];
                }
            }
            if off.sqrt() <= threshold || off == T::zero() {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq.abs() <= T::min_positive_value() {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (apq + apq);
                    let mag = T::one() / (theta.abs() + theta.hypot(T::one()));
                    let t = if theta < T::zero() { -mag } else { mag };
                    let c = T::one() / t.hypot(T::one());
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    a[(p, q)] = T::zero();
                    a[(q, p)] = T::zero();
                }
            }
        }
        (0..n).map(|i| a[(i, i)]).collect()
    }

    pub fn min_sym_eigenvalue(&self) -> T {
        self.sym_eigenvalues().into_iter().fold(T::infinity(), T::min)
    }
}

impl<T> Index<(usize, usize)> for RealMatrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for RealMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

/// Solves `M x = rhs` for symmetric `M`: Cholesky first, then Gaussian
/// elimination with partial pivoting if `M` has lost definiteness to roundoff.
pub(crate) fn solve_symmetric<T: Real>(m: &RealMatrix<T>, rhs: &[T]) -> Option<Vec<T>> {
    let n = m.n();
    if let Some(l) = m.cholesky() {
        let mut z = rhs.to_vec();
        for i in 0..n {
            for k in 0..i {
                let v = l[(i, k)] * z[k];
                z[i] -= v;
            }
            z[i] /= l[(i, i)];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let v = l[(k, i)] * z[k];
                z[i] -= v;
            }
            z[i] /= l[(i, i)];
        }
        return Some(z);
    }
    let mut a = m.clone();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[(i, col)].abs().partial_cmp(&a[(j, col)].abs()).unwrap())?;
        if a[(piv, col)].abs() <= T::min_positive_value() {
            return None;
        }
        if piv != col {
            for k in 0..n {
                let tmp = a[(col, k)];
                a[(col, k)] = a[(piv, k)];
                a[(piv, k)] = tmp;
            }
            b.swap(col, piv);
        }
        for i in col + 1..n {
            let f = a[(i, col)] / a[(col, col)];
            if f == T::zero() {
                continue;
            }
            for k in col..n {
                let v = f * a[(col, k)];
                a[(i, k)] -= v;
            }
            let v = f * b[col];
            b[i] -= v;
        }
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            let v = a[(i, k)] * b[k];
            b[i] -= v;
        }
        b[i] /= a[(i, i)];
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize) -> RealMatrix<f64> {
        let mut m = RealMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = ((i * 7 + j * 3) as f64).sin() + if i == j { n as f64 } else { 0.0 };
            }
        }
        m.sym()
    }

    #[test]
    fn cholesky_and_inverse() {
        let m = sample(6);
        let l = m.cholesky().unwrap();
        let back = l.matmul(&l.transpose());
        assert!(back.sub(&m).max_abs() < 1e-12);
        let inv = m.spd_inverse().unwrap();
        assert!(inv.matmul(&m).sub(&RealMatrix::identity(6)).max_abs() < 1e-12);
        let mut neg = RealMatrix::identity(2);
        neg[(1, 1)] = -1.0;
        assert!(neg.cholesky().is_none());
    }

    #[test]
    fn eigenvalues_match_trace_and_det_2x2() {
        let mut m = RealMatrix::zeros(2);
        m[(0, 0)] = 2.0;
        m[(1, 1)] = -1.0;
        m[(0, 1)] = 3.0;
        m[(1, 0)] = 3.0;
        let mut ev = m.sym_eigenvalues();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // λ = (1 ± √(9 + 36)) / 2
        let r = 45f64.sqrt();
        assert!((ev[0] - (1.0 - r) / 2.0).abs() < 1e-12);
        assert!((ev[1] - (1.0 + r) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn solve_both_paths() {
        let m = sample(5);
        let x: Vec<f64> = (0..5).map(|i| i as f64 - 1.5).collect();
        let rhs: Vec<f64> = (0..5).map(|i| (0..5).map(|j| m[(i, j)] * x[j]).sum()).collect();
        let got = solve_symmetric(&m, &rhs).unwrap();
        assert!(got.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-12));

        let mut indef = m.clone();
        indef[(0, 0)] = -10.0;
        let rhs: Vec<f64> = (0..5).map(|i| (0..5).map(|j| indef[(i, j)] * x[j]).sum()).collect();
        let got = solve_symmetric(&indef, &rhs).unwrap();
        assert!(got.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-11));
    }
}
