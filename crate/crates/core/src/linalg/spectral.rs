//! Hermitian spectral kernel (cyclic complex Jacobi) and the quantities
//! derived from it.

use num_traits::Zero;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{c, Real, C};

const MAX_SWEEPS: usize = 80;

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigen<T: Real> {
    /// Ascending.
    pub values: Vec<T>,
    /// Unitary; column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> Eigen<T> {
    /// `V diag(f(λ)) V*`.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.values.len();
        let v = &self.vectors;
        let mapped: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in mapped.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.reconstruct_with(|l| l)
    }

    pub fn min(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn max(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn eig_hermitian<T: Real>(h: &ComplexMatrix<T>) -> Result<Eigen<T>> {
    h.require_hermitian()?;
    Ok(jacobi(h.hermitian_part()))
}

fn jacobi<T: Real>(mut a: ComplexMatrix<T>) -> Eigen<T> {
    let n = a.dim();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let threshold = T::epsilon() * scale * T::lit(1e-2);

    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<T>()
            .sqrt();
        if off <= threshold || off.is_zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Eigen { values, vectors }
}

/// Annihilates `a[p,q]` with the unitary `G = diag(1, ē)·[[c, s], [-s, c]]`
/// acting on coordinates `p, q`, where `e` is the phase of `a[p,q]`.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b <= T::min_positive_value() {
        return;
    }
    let n = a.dim();
    let e = apq / b;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (b + b);
    let t = {
        let mag = T::one() / (theta.abs() + theta.hypot(T::one()));
        if theta < T::zero() {
            -mag
        } else {
            mag
        }
    };
    let cs = T::one() / t.hypot(T::one());
    let sn = t * cs;

    let g_qp = -(e.conj() * sn);
    let g_qq = e.conj() * cs;
    // A <- A G, V <- V G
    for m in [&mut *a, &mut *v] {
        for k in 0..n {
            let mkp = m[(k, p)];
            let mkq = m[(k, q)];
            m[(k, p)] = mkp * cs + mkq * g_qp;
            m[(k, q)] = mkp * sn + mkq * g_qq;
        }
    }
    // A <- G* A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * cs + aqk * g_qp.conj();
        a[(q, k)] = apk * sn + aqk * g_qq.conj();
    }
    a[(p, q)] = C::zero();
    a[(q, p)] = C::zero();
    a[(p, p)] = c(a[(p, p)].re);
    a[(q, q)] = c(a[(q, q)].re);
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue<T: Real>(h: &ComplexMatrix<T>) -> Result<T> {
    Ok(eig_hermitian(h)?.min())
}

/// True iff the smallest eigenvalue is at least `-tol`.
pub fn is_psd<T: Real>(h: &ComplexMatrix<T>, tol: T) -> Result<bool> {
    Ok(min_eigenvalue(h)? >= -tol)
}

/// Principal square root of a positive semidefinite matrix. Eigenvalues in
/// `[-PSD_TOL, 0)` are treated as zero.
pub fn sqrt_psd<T: Real>(p: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let eig = eig_hermitian(p)?;
    if eig.min() < -T::lit(T::PSD_TOL) {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.min().as_f64(),
        });
    }
    Ok(eig.reconstruct_with(|l| l.max(T::zero()).sqrt()).hermitian_part())
}

/// Sum of singular values, computed from the spectrum of `M* M`.
pub fn trace_norm<T: Real>(m: &ComplexMatrix<T>) -> T {
    let gram = (&m.adjoint() * m).hermitian_part();
    jacobi(gram).values.into_iter().map(|l| l.max(T::zero()).sqrt()).sum()
}

/// `‖√p √r‖₁²`.
pub fn fidelity_squared<T: Real>(p: &ComplexMatrix<T>, r: &ComplexMatrix<T>) -> Result<T> {
    if p.shape() != r.shape() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity of {:?} and {:?}",
            p.shape(),
            r.shape()
        )));
    }
    let f = trace_norm(&(&sqrt_psd(p)? * &sqrt_psd(r)?));
    Ok(f * f)
}
