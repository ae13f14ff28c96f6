//! Seeded random operators: Ginibre matrices, Haar-like unitaries, density
//! operators and channels.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::ChoiOperator;
use crate::linalg::{eig_hermitian, partial_trace, tensor, ComplexMatrix, SystemDims};
use crate::scalar::{Real, C};

pub fn ginibre<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(T::lit(re), T::lit(im))
    })
}

/// Random unitary from Gram–Schmidt on a Ginibre matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix<T> {
    let g = ginibre::<T, R>(rng, n, n);
    let mut cols: Vec<Vec<C<T>>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.col(j);
        // two passes keep the result orthonormal to working precision
        for _ in 0..2 {
            for u in &cols {
                let proj: C<T> = u.iter().zip(&v).map(|(a, b)| a.conj() * *b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= proj * *y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
        cols.push(v);
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Random full-rank density operator `G G* / Tr(G G*)`.
pub fn random_density<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix<T> {
    let g = ginibre::<T, R>(rng, n, n);
    let p = (&g * &g.adjoint()).hermitian_part();
    let tr = p.trace_re();
    p.scale(T::one() / tr)
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix<T> {
    ginibre::<T, R>(rng, n, n).hermitian_part()
}

/// Random PSD Choi matrix whitened so that `Tr_Y(J) = 1`:
/// `J = (1 ⊗ T^{-1/2}) P (1 ⊗ T^{-1/2})` with `T = Tr_Y(P)`.
pub fn random_channel<T: Real, R: Rng + ?Sized>(rng: &mut R, dim_in: usize, dim_out: usize) -> ChoiOperator<T> {
    let n = dim_in * dim_out;
    let g = ginibre::<T, R>(rng, n, n);
    let p = (&g * &g.adjoint()).hermitian_part();
    whiten(&p, dim_in, dim_out)
}

pub(crate) fn whiten<T: Real>(p: &ComplexMatrix<T>, dim_in: usize, dim_out: usize) -> ChoiOperator<T> {
    let dims = SystemDims::new([dim_out, dim_in]).expect("positive dimensions");
    let t = partial_trace(p, &dims, 0).expect("consistent dimensions");
    let w = eig_hermitian(&t.hermitian_part())
        .expect("Hermitian partial trace")
        .reconstruct_with(|l| T::one() / l.sqrt());
    let lift = tensor(&ComplexMatrix::identity(dim_out), &w);
    let j = (&(&lift * p) * &lift).hermitian_part();
    ChoiOperator::new(dim_in, dim_out, j).expect("consistent dimensions")
}

/// Random unitary channel (`dim_in == dim_out`) or random isometric channel
/// (`dim_out > dim_in`); `None` when no isometry exists.
pub fn random_unitary_channel<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    dim_in: usize,
    dim_out: usize,
) -> Option<ChoiOperator<T>> {
    if dim_out < dim_in {
        return None;
    }
    let u = random_unitary::<T, R>(rng, dim_out);
    let v = ComplexMatrix::from_fn(dim_out, dim_in, |i, j| u[(i, j)]);
    Some(ChoiOperator::from_kraus(&[v], dim_in, dim_out).expect("isometry shape"))
}
