//! Linear maps `L(X) → L(Y)` represented by their Choi–Jamiołkowski
//! operators `J(Φ) = Σ Φ(|i⟩⟨j|) ⊗ |i⟩⟨j|` on `Y ⊗ X` (output factor first).

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, partial_trace, permute_systems, tensor, ComplexMatrix, SystemDims};
use crate::scalar::{Real, C};

/// Choi operator of a map from a `dim_in`-dimensional space to a
/// `dim_out`-dimensional one.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiOperator<T: Real> {
    dim_in: usize,
    dim_out: usize,
    matrix: ComplexMatrix<T>,
}

/// CP/TP diagnostics for a Choi operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelValidity<T> {
    pub completely_positive: bool,
    pub trace_preserving: bool,
    /// `-λ_min(J)` clamped at zero (plus any Hermiticity defect).
    pub cp_residual: T,
    /// `max |Tr_Y(J) - 1|` over entries.
    pub tp_residual: T,
}

impl<T> ChannelValidity<T> {
    pub fn is_channel(&self) -> bool {
        self.completely_positive && self.trace_preserving
    }
}

impl<T: Real> ChoiOperator<T> {
    pub fn new(dim_in: usize, dim_out: usize, matrix: ComplexMatrix<T>) -> Result<Self> {
        let n = dim_in * dim_out;
        if n == 0 || matrix.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix {:?} for dim_in {dim_in}, dim_out {dim_out}",
                matrix.shape()
            )));
        }
        Ok(Self {
            dim_in,
            dim_out,
            matrix,
        })
    }

    /// `J = Σ_r vec(K_r) vec(K_r)*` with `vec(K)[(y, x)] = K[y, x]`.
    pub fn from_kraus(kraus: &[ComplexMatrix<T>], dim_in: usize, dim_out: usize) -> Result<Self> {
        let n = dim_in * dim_out;
        let mut j = ComplexMatrix::zeros(n, n);
        for k in kraus {
            if k.shape() != (dim_out, dim_in) {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {:?}, expected ({dim_out}, {dim_in})",
                    k.shape()
                )));
            }
            // row-major storage of K is exactly vec(K) in the Y⊗X ordering
            j = &j + &ComplexMatrix::outer(k.data());
        }
        Self::new(dim_in, dim_out, j)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    /// Factor layout `[dim_out, dim_in]` of the Choi matrix.
    pub fn dims(&self) -> SystemDims {
        SystemDims::new([self.dim_out, self.dim_in]).expect("positive dimensions")
    }
}

/// Choi operator of the identity channel on a `dim`-dimensional space.
pub fn choi_identity<T: Real>(dim: usize) -> ChoiOperator<T> {
    let n = dim * dim;
    let m = ComplexMatrix::from_fn(n, n, |r, c| {
        if r % (dim + 1) == 0 && c % (dim + 1) == 0 {
            C::one()
        } else {
            C::zero()
        }
    });
    ChoiOperator {
        dim_in: dim,
        dim_out: dim,
        matrix: m,
    }
}

/// Choi operator of the completely dephasing channel.
pub fn choi_dephasing<T: Real>(dim: usize) -> ChoiOperator<T> {
    let diag: Vec<T> = (0..dim * dim)
        .map(|k| if k % (dim + 1) == 0 { T::one() } else { T::zero() })
        .collect();
    ChoiOperator {
        dim_in: dim,
        dim_out: dim,
        matrix: ComplexMatrix::from_real_diag(&diag),
    }
}

/// Choi operator of `X ↦ u X u*`.
pub fn choi_from_unitary<T: Real>(u: &ComplexMatrix<T>) -> Result<ChoiOperator<T>> {
    let residual = u.unitarity_residual().ok_or(Error::NotUnitary {
        residual: f64::INFINITY,
    })?;
    if residual > T::lit(T::HERMITIAN_TOL) {
        return Err(Error::NotUnitary {
            residual: residual.as_f64(),
        });
    }
    let d = u.rows();
    let lift = tensor(u, &ComplexMatrix::identity(d));
    let m = &(&lift * choi_identity::<T>(d).matrix()) * &lift.adjoint();
    ChoiOperator::new(d, d, m)
}

pub fn validate<T: Real>(j: &ChoiOperator<T>, tol: T) -> ChannelValidity<T> {
    let m = &j.matrix;
    let asym = m.hermitian_check().max_asymmetry;
    let min_eig = eig_hermitian(&m.hermitian_part())
        .map(|e| e.min())
        .unwrap_or_else(|_| -T::infinity());
    let cp_residual = (-min_eig).max(T::zero()) + asym;
    let tp_residual = partial_trace(m, &j.dims(), 0)
        .map(|t| t.max_abs_diff(&ComplexMatrix::identity(j.dim_in)))
        .unwrap_or_else(|_| T::infinity());
    ChannelValidity {
        completely_positive: cp_residual <= tol,
        trace_preserving: tp_residual <= tol,
        cp_residual,
        tp_residual,
    }
}

/// Kraus operators `K_r` (each `dim_out x dim_in`) from the spectral
/// decomposition of `J`. Eigenvalues in `[-PSD_TOL, 0)` are clamped to zero.
pub fn kraus_from_choi<T: Real>(j: &ChoiOperator<T>) -> Result<Vec<ComplexMatrix<T>>> {
    let eig = eig_hermitian(&j.matrix)?;
    if eig.min() < -T::lit(T::PSD_TOL) {
        return Err(Error::NotCompletelyPositive {
            min_eigenvalue: eig.min().as_f64(),
        });
    }
    let n = eig.values.len();
    let cut = T::epsilon() * T::lit(64.0 * n as f64) * eig.max().max(T::one());
    let mut out = Vec::new();
    for (k, &lambda) in eig.values.iter().enumerate().rev() {
        if lambda <= cut {
            continue;
        }
        let s = lambda.sqrt();
        out.push(ComplexMatrix::from_fn(j.dim_out, j.dim_in, |y, x| {
            eig.vectors[(y * j.dim_in + x, k)] * s
        }));
    }
    Ok(out)
}

/// `(Φ ⊗ 1_Z)(ρ)` for `ρ` on `X ⊗ Z`, via Kraus operators. `dims` is
/// `[dim_x, dim_z]`; the result lives on `Y ⊗ Z`.
pub fn apply_extended<T: Real>(
    j: &ChoiOperator<T>,
    rho: &ComplexMatrix<T>,
    dims: &SystemDims,
) -> Result<ComplexMatrix<T>> {
    let f = dims.factors();
    if f.len() != 2 || f[0] != j.dim_in || rho.shape() != (dims.total(), dims.total()) {
        return Err(Error::DimensionMismatch(format!(
            "state {:?} on factors {:?} for a channel with input dimension {}",
            rho.shape(),
            f,
            j.dim_in
        )));
    }
    rho.require_hermitian()?;
    let id_z = ComplexMatrix::identity(f[1]);
    let n = j.dim_out * f[1];
    let mut out = ComplexMatrix::zeros(n, n);
    for k in kraus_from_choi(j)? {
        let lifted = tensor(&k, &id_z);
        out = &out + &(&(&lifted * rho) * &lifted.adjoint());
    }
    Ok(out)
}

/// `(1_Y ⊗ Ψ_A)(B)` where `Ψ_A : L(Z) → L(X)` is the map with
/// `J(Ψ_A) = conj(A)`. Built from the elementary rule
/// `Ψ_{|i⟩⟨j|⊗|k⟩⟨l|}(W) = |i⟩⟨k| W |l⟩⟨j|`, extended conjugate-linearly in `A`.
///
/// `a` acts on `X ⊗ Z`, `b` on `Y ⊗ Z`; the result acts on `Y ⊗ X`.
pub fn psi_apply<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    dim_x: usize,
    dim_y: usize,
    dim_z: usize,
) -> Result<ComplexMatrix<T>> {
    let (nxz, nyz) = (dim_x * dim_z, dim_y * dim_z);
    if a.shape() != (nxz, nxz) || b.shape() != (nyz, nyz) {
        return Err(Error::DimensionMismatch(format!(
            "psi_apply with A {:?}, B {:?} and (x, y, z) = ({dim_x}, {dim_y}, {dim_z})",
            a.shape(),
            b.shape()
        )));
    }
    let n = dim_y * dim_x;
    let mut out = ComplexMatrix::zeros(n, n);
    for y in 0..dim_y {
        for y2 in 0..dim_y {
            for i in 0..dim_x {
                for j in 0..dim_x {
                    let mut acc = C::zero();
                    for k in 0..dim_z {
                        for l in 0..dim_z {
                            acc += a[(i * dim_z + k, j * dim_z + l)].conj() * b[(y * dim_z + k, y2 * dim_z + l)];
                        }
                    }
                    out[(y * dim_x + i, y2 * dim_x + j)] = acc;
                }
            }
        }
    }
    Ok(out)
}

/// Choi operator of `Φ₁ ⊗ Φ₂`, on `(Y₁⊗Y₂) ⊗ (X₁⊗X₂)`.
pub fn choi_tensor<T: Real>(j1: &ChoiOperator<T>, j2: &ChoiOperator<T>) -> ChoiOperator<T> {
    let dims = SystemDims::new([j1.dim_out, j1.dim_in, j2.dim_out, j2.dim_in]).expect("positive dimensions");
    let m = permute_systems(&tensor(&j1.matrix, &j2.matrix), &dims, &[0, 2, 1, 3]).expect("consistent dimensions");
    ChoiOperator {
        dim_in: j1.dim_in * j2.dim_in,
        dim_out: j1.dim_out * j2.dim_out,
        matrix: m,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner;
    use crate::random::{random_channel, random_unitary};
    use crate::scalar::c;
    use num_complex::Complex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type M = ComplexMatrix<f64>;

    #[test]
    fn identity_choi_examples() {
        assert_eq!(choi_identity::<f64>(1).matrix(), &M::identity(1));
        let j = choi_identity::<f64>(2);
        for r in 0..4 {
            for col in 0..4 {
                let want = if [0, 3].contains(&r) && [0, 3].contains(&col) {
                    1.0
                } else {
                    0.0
                };
                assert_eq!(j.matrix()[(r, col)], c(want));
            }
        }
        for d in 1..4 {
            assert!(validate(&choi_identity::<f64>(d), 1e-12).is_channel());
        }
    }

    #[test]
    fn validate_examples() {
        let zero = ChoiOperator::new(2, 2, M::zeros(4, 4)).unwrap();
        let v = validate(&zero, 1e-9);
        assert!(v.completely_positive && !v.trace_preserving);
        assert_eq!(v.tp_residual, 1.0);
        let doubled = ChoiOperator::new(2, 2, choi_identity::<f64>(2).matrix().scale(2.0)).unwrap();
        let v = validate(&doubled, 1e-9);
        assert!(v.completely_positive && !v.trace_preserving);
        let neg = ChoiOperator::new(1, 2, M::from_real_diag(&[1.5, -0.5])).unwrap();
        assert!(!validate(&neg, 1e-9).completely_positive);
    }

    #[test]
    fn unitary_choi_examples() {
        assert_eq!(choi_from_unitary(&M::identity(2)).unwrap(), choi_identity(2));
        let j = choi_from_unitary(&M::from_real_diag(&[1.0, -1.0])).unwrap();
        let m = j.matrix();
        assert_eq!(m[(0, 0)], c(1.0));
        assert_eq!(m[(0, 3)], c(-1.0));
        assert_eq!(m[(3, 0)], c(-1.0));
        assert_eq!(m[(3, 3)], c(1.0));
        assert!(matches!(
            choi_from_unitary(&M::from_real_diag(&[1.0, 0.5])),
            Err(Error::NotUnitary { .. })
        ));
        let flip = choi_from_unitary(&M::from_real_diag(&[-1.0, 1.0, 1.0, 1.0])).unwrap();
        assert!(validate(&flip, 1e-12).is_channel());
    }

    fn same_up_to_phase(a: &M, b: &M) -> bool {
        let ip = inner(a, b).unwrap();
        let ph = ip / ip.norm();
        a.scale_complex(ph).max_abs_diff(b) < 1e-10
    }

    #[test]
    fn kraus_examples() {
        let k = kraus_from_choi(&choi_identity::<f64>(2)).unwrap();
        assert_eq!(k.len(), 1);
        assert!(same_up_to_phase(&k[0], &M::identity(2)));

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_unitary::<f64, _>(&mut rng, 3);
        let k = kraus_from_choi(&choi_from_unitary(&u).unwrap()).unwrap();
        assert_eq!(k.len(), 1);
        assert!(same_up_to_phase(&k[0], &u));

        let k = kraus_from_choi(&choi_dephasing::<f64>(2)).unwrap();
        assert_eq!(k.len(), 2);
        let p0 = M::from_real_diag(&[1.0, 0.0]);
        let p1 = M::from_real_diag(&[0.0, 1.0]);
        assert!(k.iter().any(|m| same_up_to_phase(m, &p0)));
        assert!(k.iter().any(|m| same_up_to_phase(m, &p1)));

        let bad = ChoiOperator::new(1, 2, M::from_real_diag(&[1.5, -0.5])).unwrap();
        assert!(matches!(
            kraus_from_choi(&bad),
            Err(Error::NotCompletelyPositive { .. })
        ));
    }

    #[test]
    fn kraus_round_trip_and_completeness() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (dx, dy) in [(2, 2), (2, 3), (3, 2)] {
            let j = random_channel::<f64, _>(&mut rng, dx, dy);
            let k = kraus_from_choi(&j).unwrap();
            let back = ChoiOperator::from_kraus(&k, dx, dy).unwrap();
            assert!(back.matrix().max_abs_diff(j.matrix()) < 1e-8);
            let sum = k.iter().fold(M::zeros(dx, dx), |acc, m| &acc + &(&m.adjoint() * m));
            assert!(sum.max_abs_diff(&M::identity(dx)) < 1e-8);
        }
    }

    #[test]
    fn apply_identity_leaves_state() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = [c(h), c(0.0), c(0.0), c(h)];
        let uu = M::outer(&u);
        let dims = SystemDims::new([2, 2]).unwrap();
        let out = apply_extended(&choi_identity(2), &uu, &dims).unwrap();
        assert!(out.max_abs_diff(&uu) < 1e-12);
        assert!(apply_extended(&choi_identity(3), &uu, &dims).is_err());
    }

    #[test]
    fn apply_preserves_the_untouched_marginal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = crate::random::random_density::<f64, _>(&mut rng, 6);
        let j = random_channel::<f64, _>(&mut rng, 2, 3);
        let sigma = apply_extended(&j, &rho, &SystemDims::new([2, 3]).unwrap()).unwrap();
        let before = partial_trace(&rho, &SystemDims::new([2, 3]).unwrap(), 0).unwrap();
        let after = partial_trace(&sigma, &SystemDims::new([3, 3]).unwrap(), 0).unwrap();
        assert!(before.max_abs_diff(&after) < 1e-10);
    }

    #[test]
    fn psi_elementary_rule() {
        // A = |i⟩⟨j| ⊗ |k⟩⟨l|, B = |y⟩⟨y'| ⊗ W gives |y⟩⟨y'| ⊗ |i⟩⟨k| W |l⟩⟨j|
        let (dx, dy, dz) = (2, 2, 3);
        let unit =
            |n: usize, r: usize, s: usize| M::from_fn(n, n, |a, b| if (a, b) == (r, s) { c(1.0) } else { c(0.0) });
        let ket_bra = |rows: usize, cols: usize, r: usize, s: usize| {
            M::from_fn(rows, cols, |a, b| if (a, b) == (r, s) { c(1.0) } else { c(0.0) })
        };
        let w = M::from_fn(dz, dz, |a, b| Complex::new(a as f64 + 1.0, b as f64 - 0.5));
        for (i, j, k, l) in [(0, 1, 2, 0), (1, 1, 0, 1), (0, 0, 1, 2)] {
            let a = tensor(&unit(dx, i, j), &{
                let mut m = M::zeros(dz, dz);
                m[(k, l)] = c(1.0);
                m
            });
            let b = tensor(&unit(dy, 1, 0), &w);
            let got = psi_apply(&a, &b, dx, dy, dz).unwrap();
            let psi_w = &(&ket_bra(dx, dz, i, k) * &w) * &ket_bra(dz, dx, l, j);
            let want = tensor(&unit(dy, 1, 0), &psi_w);
            assert!(got.max_abs_diff(&want) < 1e-15);
        }
    }

    #[test]
    fn psi_of_psd_is_cp() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = crate::random::random_density::<f64, _>(&mut rng, 6);
        // the Choi matrix of Ψ_A is conj(A); recover it by feeding B = J(1_Z)
        // through 1 ⊗ Ψ_A with Y = Z.
        let dz = 3;
        let id_z = choi_identity::<f64>(dz);
        let j_psi = psi_apply(&a, id_z.matrix(), 2, dz, dz).unwrap();
        assert!(crate::linalg::is_psd(&j_psi, 1e-12).unwrap());
        let swapped = permute_systems(&j_psi, &SystemDims::new([dz, 2]).unwrap(), &[1, 0]).unwrap();
        assert!(swapped.max_abs_diff(&crate::linalg::entrywise_conjugate(&a)) < 1e-15);
    }

    #[test]
    fn lemma_adjoint_identity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (dx, dy, dz) in [(2, 2, 2), (2, 3, 1), (3, 2, 2)] {
            let phi = random_channel::<f64, _>(&mut rng, dx, dy);
            let a = crate::random::random_density::<f64, _>(&mut rng, dx * dz);
            let b = crate::random::random_hermitian::<f64, _>(&mut rng, dy * dz);
            let lhs = inner(
                &b,
                &apply_extended(&phi, &a, &SystemDims::new([dx, dz]).unwrap()).unwrap(),
            )
            .unwrap();
            let rhs = inner(&psi_apply(&a, &b, dx, dy, dz).unwrap(), phi.matrix()).unwrap();
            assert!((lhs - rhs).norm() < 1e-10, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn choi_tensor_examples() {
        assert_eq!(
            choi_tensor(&choi_identity::<f64>(2), &choi_identity(2)),
            choi_identity(4)
        );
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let u1 = random_unitary::<f64, _>(&mut rng, 2);
        let u2 = random_unitary::<f64, _>(&mut rng, 3);
        let lhs = choi_tensor(&choi_from_unitary(&u1).unwrap(), &choi_from_unitary(&u2).unwrap());
        let rhs = choi_from_unitary(&tensor(&u1, &u2)).unwrap();
        assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-12);
        let j1 = random_channel::<f64, _>(&mut rng, 2, 3);
        let j2 = random_channel::<f64, _>(&mut rng, 3, 2);
        assert!(validate(&choi_tensor(&j1, &j2), 1e-9).is_channel());
    }
}
