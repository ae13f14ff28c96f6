//! Reference answers that bypass the interior-point solver.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{PartialTraceSdp, Sense};
use crate::channel::{choi_identity, ChoiOperator};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::random::{random_channel, random_unitary_channel};
use crate::scalar::Real;

/// Largest number of deterministic functions [`classical_exact`] enumerates.
pub const ENUMERATION_CAP: u128 = 1_000_000;

/// Optimum over deterministic strategies `f: basis(X) → basis(Y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalOptimum<T: Real> {
    pub value: T,
    /// Choi operator `Σ_i |f(i)⟩⟨f(i)| ⊗ |i⟩⟨i|`.
    pub strategy: ChoiOperator<T>,
    /// `(f(0), …, f(dim_x - 1))`.
    pub choice: Vec<usize>,
    /// Diagonal dual `Y = diag_x(best_y q(y, x))`, optimal with zero gap.
    pub dual_y: ComplexMatrix<T>,
}

/// Exact optimum of a diagonal program by enumerating all `dim_y^dim_x`
/// functions in lexicographic order; ties keep the first.
pub fn classical_exact<T: Real>(p: &PartialTraceSdp<T>) -> Result<ClassicalOptimum<T>> {
    let (dx, dy) = (p.dim_x(), p.dim_y());
    let q = p.q();
    let off = q.max_off_diagonal();
    if off > T::lit(T::HERMITIAN_TOL) {
        return Err(Error::NotDiagonal {
            max_off_diagonal: off.as_f64(),
        });
    }
    let count = (dy as u128).checked_pow(dx as u32).unwrap_or(u128::MAX);
    if count > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            count,
            cap: ENUMERATION_CAP,
        });
    }

    let weight = |y: usize, x: usize| q[(y * dx + x, y * dx + x)].re;
    let better = |a: T, b: T| match p.sense() {
        Sense::Max => a > b,
        Sense::Min => a < b,
    };

    let mut f = vec![0usize; dx];
    let mut best: Option<(T, Vec<usize>)> = None;
    loop {
        let value = f.iter().enumerate().map(|(x, &y)| weight(y, x)).sum::<T>();
        if best.as_ref().is_none_or(|(b, _)| better(value, *b)) {
            best = Some((value, f.clone()));
        }
        // odometer with f(0) most significant
        let mut k = dx;
        loop {
            if k == 0 {
                let (value, choice) = best.expect("at least one function");
                return Ok(optimum(p, value, choice));
            }
            k -= 1;
            f[k] += 1;
            if f[k] < dy {
                break;
            }
            f[k] = 0;
        }
    }
}

fn optimum<T: Real>(p: &PartialTraceSdp<T>, value: T, choice: Vec<usize>) -> ClassicalOptimum<T> {
    let (dx, dy) = (p.dim_x(), p.dim_y());
    let n = dx * dy;
    let mut j = ComplexMatrix::zeros(n, n);
    for (x, &y) in choice.iter().enumerate() {
        j[(y * dx + x, y * dx + x)].re = T::one();
    }
    let dual: Vec<T> = (0..dx)
        .map(|x| {
            let col = (0..dy).map(|y| p.q()[(y * dx + x, y * dx + x)].re);
            match p.sense() {
                Sense::Max => col.fold(T::neg_infinity(), T::max),
                Sense::Min => col.fold(T::infinity(), T::min),
            }
        })
        .collect();
    ClassicalOptimum {
        value,
        strategy: ChoiOperator::new(dx, dy, j).expect("deterministic strategy"),
        choice,
        dual_y: ComplexMatrix::from_real_diag(&dual),
    }
}

/// Best objective over sampled channels: the identity (when the spaces
/// match), then alternately whitened random PSD Choi matrices and random
/// unitary or isometric channels. A lower bound for max sense, an upper bound
/// for min sense.
pub fn random_strategy_bound<T: Real>(p: &PartialTraceSdp<T>, samples: usize, seed: u64) -> Result<T> {
    if samples == 0 {
        return Err(Error::InvalidQuery("samples must be at least 1".into()));
    }
    let (dx, dy) = (p.dim_x(), p.dim_y());
    if dy == 1 {
        return Ok(p.q().trace_re());
    }
    let pick = |a: T, b: T| match p.sense() {
        Sense::Max => a.max(b),
        Sense::Min => a.min(b),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = match p.sense() {
        Sense::Max => T::neg_infinity(),
        Sense::Min => T::infinity(),
    };
    if dx == dy {
        best = pick(best, p.objective(choi_identity::<T>(dx).matrix())?);
    }
    for k in 0..samples {
        let j = if k % 2 == 1 {
            random_unitary_channel(&mut rng, dx, dy).unwrap_or_else(|| random_channel(&mut rng, dx, dy))
        } else {
            random_channel(&mut rng, dx, dy)
        };
        best = pick(best, p.objective(j.matrix())?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn echo_q(a: &str) -> ComplexMatrix<f64> {
        // ρ = ½(|00⟩⟨00| + |11⟩⟨11|), accept when y = z: Q_1 = ½ Σ_x |x⟩⟨x|_Y ⊗ |x⟩⟨x|_X
        let accept = if a == "1" {
            [0.5, 0.0, 0.0, 0.5]
        } else {
            [0.0, 0.5, 0.5, 0.0]
        };
        ComplexMatrix::from_real_diag(&accept)
    }

    #[test]
    fn echo_enumeration() {
        let p = PartialTraceSdp::new(echo_q("1"), 2, 2, Sense::Max).unwrap();
        let opt = classical_exact(&p).unwrap();
        assert_eq!(opt.value, 1.0);
        assert_eq!(opt.choice, vec![0, 1]);
        let opt = classical_exact(&p.with_sense(Sense::Min)).unwrap();
        assert_eq!(opt.value, 0.0);
        assert_eq!(opt.choice, vec![1, 0]);
    }

    #[test]
    fn ties_keep_first_function() {
        // uncorrelated: every function scores ½
        let q = ComplexMatrix::from_real_diag(&[0.25, 0.25, 0.25, 0.25]);
        for sense in [Sense::Max, Sense::Min] {
            let opt = classical_exact(&PartialTraceSdp::new(q.clone(), 2, 2, sense).unwrap()).unwrap();
            assert_eq!(opt.value, 0.5);
            assert_eq!(opt.choice, vec![0, 0]);
        }
    }

    #[test]
    fn rejects_off_diagonal_and_oversized() {
        let mut q = ComplexMatrix::<f64>::identity(4);
        q[(0, 1)].re = 0.1;
        q[(1, 0)].re = 0.1;
        let p = PartialTraceSdp::new(q, 2, 2, Sense::Max).unwrap();
        assert!(matches!(classical_exact(&p), Err(Error::NotDiagonal { .. })));

        // 4^10 > 10^6
        let p = PartialTraceSdp::new(ComplexMatrix::<f64>::identity(40), 10, 4, Sense::Max).unwrap();
        assert!(matches!(
            classical_exact(&p),
            Err(Error::EnumerationCap { count: 1_048_576, .. })
        ));
    }

    #[test]
    fn one_dimensional_bound_is_exact() {
        let p = PartialTraceSdp::new(ComplexMatrix::<f64>::from_real_diag(&[0.37]), 1, 1, Sense::Max).unwrap();
        assert_eq!(random_strategy_bound(&p, 5, 0).unwrap(), 0.37);
        assert!(random_strategy_bound(&p, 0, 0).is_err());
    }

    #[test]
    fn sampling_is_seeded() {
        let p = PartialTraceSdp::new(echo_q("1"), 2, 2, Sense::Min).unwrap();
        let a = random_strategy_bound(&p, 50, 9).unwrap();
        assert_eq!(a, random_strategy_bound(&p, 50, 9).unwrap());
        assert!(a >= 0.0);
    }
}
