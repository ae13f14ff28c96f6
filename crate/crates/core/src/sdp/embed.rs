//! Real symmetric embedding of the complex partial-trace program.
//!
//! A Hermitian `H` (n x n) maps to `R(H) = [[Re H, -Im H], [Im H, Re H]]`
//! (2n x 2n), with `⟨R(A), R(B)⟩ = 2⟨A, B⟩`. The constraint
//! `Tr_Y(X) = 1_X` becomes `⟨R(1_Y ⊗ E_k), R(X)⟩ = 2 Tr(E_k)` for an
//! orthonormal basis `{E_k}` of `Herm(X)`.

use num_complex::Complex;
use num_traits::Zero;

use super::dense::RealMatrix;
use crate::linalg::ComplexMatrix;
use crate::scalar::{Real, C};

pub(crate) fn embed<T: Real>(h: &ComplexMatrix<T>) -> RealMatrix<T> {
    let n = h.rows();
    let mut r = RealMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            r[(i, j)] = z.re;
            r[(n + i, n + j)] = z.re;
            r[(i, n + j)] = -z.im;
            r[(n + i, j)] = z.im;
        }
    }
    r
}

/// Inverse of [`embed`] on structured matrices; averages the redundant
/// blocks otherwise.
pub(crate) fn extract<T: Real>(r: &RealMatrix<T>) -> ComplexMatrix<T> {
    let n = r.n() / 2;
    let half = T::lit(0.5);
    ComplexMatrix::from_fn(n, n, |i, j| {
        Complex::new(
            (r[(i, j)] + r[(n + i, n + j)]) * half,
            (r[(n + i, j)] - r[(i, n + j)]) * half,
        )
    })
    .hermitian_part()
}

/// Projects onto the image of [`embed`] (matrices commuting with the complex
/// structure), symmetrizing as well.
pub(crate) fn project<T: Real>(r: &RealMatrix<T>) -> RealMatrix<T> {
    embed(&extract(r))
}

/// Sparse symmetric constraint matrix as `(row, col, value)` triplets.
#[derive(Debug, Clone)]
pub(crate) struct SparseSym<T> {
    pub entries: Vec<(usize, usize, T)>,
}

impl<T: Real> SparseSym<T> {
    pub fn dot(&self, x: &RealMatrix<T>) -> T {
        self.entries.iter().map(|&(r, c, v)| v * x[(r, c)]).sum()
    }

    pub fn add_scaled_into(&self, s: T, out: &mut RealMatrix<T>) {
        for &(r, c, v) in &self.entries {
            out[(r, c)] += s * v;
        }
    }
}

/// Orthonormal Hermitian basis of `Herm(C^d)`: `e_ii`, then for `i < j` the
/// pair `(e_ij + e_ji)/√2`, `i(e_ij - e_ji)/√2`. Each element is a short list
/// of nonzero entries.
pub(crate) fn hermitian_basis<T: Real>(d: usize) -> Vec<Vec<(usize, usize, C<T>)>> {
    let r = T::FRAC_1_SQRT_2();
    let mut basis = Vec::with_capacity(d * d);
    for i in 0..d {
        basis.push(vec![(i, i, Complex::new(T::one(), T::zero()))]);
    }
    for i in 0..d {
        for j in i + 1..d {
            basis.push(vec![
                (i, j, Complex::new(r, T::zero())),
                (j, i, Complex::new(r, T::zero())),
            ]);
            basis.push(vec![
                (i, j, Complex::new(T::zero(), r)),
                (j, i, Complex::new(T::zero(), -r)),
            ]);
        }
    }
    basis
}

/// Constraint data in the embedded space.
pub(crate) struct Constraints<T> {
    pub dim_x: usize,
    pub ops: Vec<SparseSym<T>>,
    pub rhs: Vec<T>,
    basis: Vec<Vec<(usize, usize, C<T>)>>,
}

impl<T: Real> Constraints<T> {
    pub fn new(dim_x: usize, dim_y: usize) -> Self {
        let n = dim_x * dim_y;
        let basis = hermitian_basis::<T>(dim_x);
        let mut ops = Vec::with_capacity(basis.len());
        let mut rhs = Vec::with_capacity(basis.len());
        for element in &basis {
            let mut entries = Vec::new();
            let mut trace = T::zero();
            for &(a, b, v) in element {
                if a == b {
                    trace += v.re;
                }
                for y in 0..dim_y {
                    let (r, c) = (y * dim_x + a, y * dim_x + b);
                    if !v.re.is_zero() {
                        entries.push((r, c, v.re));
                        entries.push((n + r, n + c, v.re));
                    }
                    if !v.im.is_zero() {
                        entries.push((r, n + c, -v.im));
                        entries.push((n + r, c, v.im));
                    }
                }
            }
            ops.push(SparseSym { entries });
            rhs.push(trace + trace);
        }
        Self { dim_x, ops, rhs, basis }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    /// `A(X)`.
    pub fn apply(&self, x: &RealMatrix<T>) -> Vec<T> {
        self.ops.iter().map(|a| a.dot(x)).collect()
    }

    /// `A*(y) = Σ y_k A_k`.
    pub fn adjoint(&self, y: &[T], n: usize) -> RealMatrix<T> {
        let mut out = RealMatrix::zeros(n);
        for (a, &yk) in self.ops.iter().zip(y) {
            a.add_scaled_into(yk, &mut out);
        }
        out
    }

    /// Schur complement `M_kl = Tr(A_k X A_l Z⁻¹)`.
    pub fn schur(&self, x: &RealMatrix<T>, z_inv: &RealMatrix<T>) -> RealMatrix<T> {
        let m = self.len();
        let mut out = RealMatrix::zeros(m);
        for k in 0..m {
            for l in k..m {
                let mut acc = T::zero();
                for &(r, s, alpha) in &self.ops[k].entries {
                    for &(t, u, beta) in &self.ops[l].entries {
                        acc += alpha * beta * x[(s, t)] * z_inv[(u, r)];
                    }
                }
                out[(k, l)] = acc;
                out[(l, k)] = acc;
            }
        }
        out
    }

    /// `Σ y_k E_k` as a complex Hermitian matrix on `X`.
    pub fn hermitian_from_coeffs(&self, y: &[T]) -> ComplexMatrix<T> {
        let mut out = ComplexMatrix::zeros(self.dim_x, self.dim_x);
        for (element, &yk) in self.basis.iter().zip(y) {
            for &(i, j, v) in element {
                out[(i, j)] += v * yk;
            }
        }
        out
    }

    /// Coefficients of `h` in the basis (`h` Hermitian).
    pub fn coeffs_from_hermitian(&self, h: &ComplexMatrix<T>) -> Vec<T> {
        self.basis
            .iter()
            .map(|element| {
                // ⟨E_k, h⟩ is real for Hermitian h
                element
                    .iter()
                    .fold(C::zero(), |acc: C<T>, &(i, j, v)| acc + v.conj() * h[(i, j)])
                    .re
            })
            .collect()
    }
}
