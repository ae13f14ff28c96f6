use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Per-factor dimensions of a composite space, leftmost factor most
/// significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemDims(Vec<usize>);

impl SystemDims {
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::DimensionMismatch(format!("invalid factor dimensions {dims:?}")));
        }
        Ok(Self(dims))
    }

    pub fn factors(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    fn check_square(&self, m: &ComplexMatrix<impl Real>) -> Result<()> {
        if !m.is_square() || m.rows() != self.total() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix does not match factors {:?}",
                m.rows(),
                m.cols(),
                self.0
            )));
        }
        Ok(())
    }

    /// Dimensions reordered so that output factor `k` is input factor `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        validate_perm(perm, self.len())?;
        Ok(Self(perm.iter().map(|&p| self.0[p]).collect()))
    }

    /// For each flat index of the permuted space, the flat index of the same
    /// basis vector in the original ordering.
    fn permutation_map(&self, perm: &[usize]) -> Vec<usize> {
        let n = self.len();
        let out_dims: Vec<usize> = perm.iter().map(|&p| self.0[p]).collect();
        // stride of each input factor in the input flat index
        let mut in_strides = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            in_strides[k] = in_strides[k + 1] * self.0[k + 1];
        }
        let total = self.total();
        let mut map = Vec::with_capacity(total);
        let mut digits = vec![0usize; n];
        for _ in 0..total {
            map.push(digits.iter().zip(perm).map(|(&d, &p)| d * in_strides[p]).sum());
            for k in (0..n).rev() {
                digits[k] += 1;
                if digits[k] < out_dims[k] {
                    break;
                }
                digits[k] = 0;
            }
        }
        map
    }
}

impl From<SystemDims> for Vec<usize> {
    fn from(d: SystemDims) -> Self {
        d.0
    }
}

fn validate_perm(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidPermutation(perm.to_vec()));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Kronecker product `a ⊗ b`.
pub fn tensor<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (br, bc) = b.shape();
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

pub fn tensor_vector<T: Real>(a: &[C<T>], b: &[C<T>]) -> Vec<C<T>> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

/// Traces out factor `traced` of a square operator on `dims`.
pub fn partial_trace<T: Real>(m: &ComplexMatrix<T>, dims: &SystemDims, traced: usize) -> Result<ComplexMatrix<T>> {
    dims.check_square(m)?;
    if traced >= dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "no factor {traced} in {:?}",
            dims.factors()
        )));
    }
    let f = dims.factors();
    let left: usize = f[..traced].iter().product();
    let mid = f[traced];
    let right: usize = f[traced + 1..].iter().product();
    let out_dim = left * right;
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for l in 0..left {
        for r in 0..right {
            for l2 in 0..left {
                for r2 in 0..right {
                    let mut acc = C::zero();
                    for a in 0..mid {
                        acc += m[((l * mid + a) * right + r, (l2 * mid + a) * right + r2)];
                    }
                    out[(l * right + r, l2 * right + r2)] = acc;
                }
            }
        }
    }
    Ok(out)
}

/// Reorders tensor factors: output factor `k` is input factor `perm[k]`.
///
/// Equivalent to conjugating by the permutation unitary, done here by index
/// relabeling so it is exact.
pub fn permute_systems<T: Real>(m: &ComplexMatrix<T>, dims: &SystemDims, perm: &[usize]) -> Result<ComplexMatrix<T>> {
    dims.check_square(m)?;
    validate_perm(perm, dims.len())?;
    let map = dims.permutation_map(perm);
    Ok(ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(map[i], map[j])]))
}

/// Same relabeling as [`permute_systems`] applied to a ket.
pub fn permute_vector<T: Real>(v: &[C<T>], dims: &SystemDims, perm: &[usize]) -> Result<Vec<C<T>>> {
    if v.len() != dims.total() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} vs factors {:?}",
            v.len(),
            dims.factors()
        )));
    }
    validate_perm(perm, dims.len())?;
    Ok(dims.permutation_map(perm).into_iter().map(|k| v[k]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    type M = ComplexMatrix<f64>;

    fn seq(n: usize, offset: f64) -> M {
        M::from_fn(n, n, |i, j| {
            Complex::new((i * n + j) as f64 + offset, (i as f64) - (j as f64) * 0.5)
        })
    }

    #[test]
    fn tensor_examples() {
        let a = seq(3, 1.0);
        let one = M::identity(1);
        assert_eq!(tensor(&one, &a), a);
        assert_eq!(tensor(&M::identity(2), &M::identity(2)), M::identity(4));
        let z = M::from_real_diag(&[-1.0, 1.0]);
        assert_eq!(tensor(&z, &z), M::from_real_diag(&[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn tensor_index_convention() {
        let a = seq(2, 0.0);
        let b = seq(3, 7.0);
        let ab = tensor(&a, &b);
        for (i1, i2, j1, j2) in [(0, 2, 1, 0), (1, 1, 0, 2), (1, 0, 1, 1)] {
            assert_eq!(ab[(i1 * 3 + i2, j1 * 3 + j2)], a[(i1, j1)] * b[(i2, j2)]);
        }
    }

    #[test]
    fn partial_trace_of_product_state() {
        let r1 = M::from_real_rows(&[&[0.7, 0.1], &[0.1, 0.3]]);
        let r2 = M::from_real_rows(&[&[0.25, 0.0, 0.1], &[0.0, 0.5, 0.0], &[0.1, 0.0, 0.25]]);
        let dims = SystemDims::new([2, 3]).unwrap();
        let joint = tensor(&r1, &r2);
        assert!(partial_trace(&joint, &dims, 0).unwrap().max_abs_diff(&r2) < 1e-15);
        assert!(partial_trace(&joint, &dims, 1).unwrap().max_abs_diff(&r1) < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        let dims = SystemDims::new([2, 2]).unwrap();
        assert!(partial_trace(&M::identity(3), &dims, 0).is_err());
        assert!(partial_trace(&M::identity(4), &dims, 2).is_err());
        assert!(SystemDims::new([2, 0]).is_err());
    }

    #[test]
    fn swap_permutation() {
        let a = seq(2, 0.0);
        let b = seq(3, 1.0);
        let dims = SystemDims::new([2, 3]).unwrap();
        let swapped = permute_systems(&tensor(&a, &b), &dims, &[1, 0]).unwrap();
        assert_eq!(swapped, tensor(&b, &a));
        assert_eq!(
            permute_systems(&tensor(&a, &b), &dims, &[0, 1]).unwrap(),
            tensor(&a, &b)
        );
        assert!(permute_systems(&tensor(&a, &b), &dims, &[0, 0]).is_err());
    }

    #[test]
    fn permute_vector_matches_matrix() {
        let dims = SystemDims::new([2, 3, 2]).unwrap();
        let v: Vec<C<f64>> = (0..12).map(|k| Complex::new(k as f64, 1.0 - k as f64)).collect();
        let perm = [2, 0, 1];
        let pv = permute_vector(&v, &dims, &perm).unwrap();
        let pm = permute_systems(&M::outer(&v), &dims, &perm).unwrap();
        assert_eq!(pm, M::outer(&pv));
    }
}
