//! Infeasible-start primal-dual path following (HKM direction, Mehrotra
//! predictor-corrector) on the real symmetric embedding.
//!
//! Standard form in the embedded space:
//!
//! ```text
//!   min ⟨C, X⟩  s.t. ⟨A_k, X⟩ = b_k, X ≥ 0
//!   max bᵀy     s.t. Z = C - Σ y_k A_k ≥ 0
//! ```
//!
//! with `C = R(-Q)` for a maximization (min-sense programs negate `Q`
//! first). Complex values are recovered as `-⟨C, X⟩ / 2` and `-bᵀy / 2`.

use super::dense::{solve_symmetric, RealMatrix};
use super::embed::{embed, extract, project, Constraints};
use super::{IterateRecord, PartialTraceSdp, SdpOptions, SdpSolution, Sense};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, partial_trace, ComplexMatrix};
use crate::scalar::Real;

/// Margins of the scalar-multiple-of-identity points `X = 1/dim_y` and
/// `Y = λ·1`, `λ = ‖Q‖_∞ + 1` (negated for min sense).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrictFeasibility<T> {
    pub primal_min_eigenvalue: T,
    pub primal_residual: T,
    pub dual_slack_min_eigenvalue: T,
}

impl<T: Real> StrictFeasibility<T> {
    pub fn holds(&self, tol: T) -> bool {
        self.primal_min_eigenvalue > T::zero()
            && self.primal_residual <= tol
            && self.dual_slack_min_eigenvalue > T::zero()
    }
}

pub fn strict_feasibility<T: Real>(p: &PartialTraceSdp<T>) -> Result<StrictFeasibility<T>> {
    let n = p.dim_x * p.dim_y;
    let x = ComplexMatrix::identity(n).scale(T::one() / T::lit(p.dim_y as f64));
    let lambda = p.q.max_row_sum() + T::one();
    let y = ComplexMatrix::identity(p.dim_x).scale(match p.sense {
        Sense::Max => lambda,
        Sense::Min => -lambda,
    });
    Ok(StrictFeasibility {
        primal_min_eigenvalue: eig_hermitian(&x)?.min(),
        primal_residual: partial_trace(&x, &p.choi_dims(), 0)?.max_abs_diff(&ComplexMatrix::identity(p.dim_x)),
        dual_slack_min_eigenvalue: eig_hermitian(&p.dual_slack(&y)?)?.min(),
    })
}

pub fn solve<T: Real>(p: &PartialTraceSdp<T>, tol: T, max_iter: usize) -> Result<SdpSolution<T>> {
    solve_with(
        p,
        &SdpOptions {
            tol,
            max_iter,
            ..SdpOptions::default()
        },
    )
}

/// Solves `p`. A run that stops before meeting `tol` still returns its last
/// iterate, with `converged == false`.
pub fn solve_with<T: Real>(p: &PartialTraceSdp<T>, opts: &SdpOptions<T>) -> Result<SdpSolution<T>> {
    let tol = opts.tol;
    if !(tol >= T::lit(1e-12) && tol <= T::lit(1e-2)) {
        return Err(Error::InvalidTolerance(tol.as_f64()));
    }
    if !strict_feasibility(p)?.holds(T::lit(T::CHANNEL_TOL)) {
        return Err(Error::CheckFailed(
            "identity multiples are not strictly feasible".into(),
        ));
    }

    let (dx, dy) = (p.dim_x, p.dim_y);
    let nr = 2 * dx * dy;
    let sign = match p.sense {
        Sense::Max => T::one(),
        Sense::Min => -T::one(),
    };
    let q_max = p.q.scale(sign);
    let cons = Constraints::<T>::new(dx, dy);
    let c = embed(&q_max.scale(-T::one()));
    let b = cons.rhs.clone();
    let half = T::lit(0.5);

    let mut x = RealMatrix::identity(nr).scale(T::one() / T::lit(dy as f64));
    let lambda = q_max.max_row_sum() + T::one();
    let mut y = cons.coeffs_from_hermitian(&ComplexMatrix::identity(dx).scale(-lambda));
    let mut z = c.sub(&cons.adjoint(&y, nr));

    let mut history = Vec::new();
    let mut steps = (T::zero(), T::zero());
    let mut iterations = 0;

    let finish =
        |x: &RealMatrix<T>, y: &[T], iterations: usize, history: Vec<IterateRecord<T>>| -> Result<SdpSolution<T>> {
            let x_c = extract(x);
            // max-form dual variable is -Σ y_k E_k; min-sense flips it back
            let y_c = cons.hermitian_from_coeffs(y).scale(-sign);
            let mut sol = SdpSolution::from_pair(p, x_c, y_c, tol)?;
            sol.iterations = iterations;
            sol.converged = sol.meets(tol);
            sol.history = history;
            Ok(sol)
        };

    loop {
        let pobj = c.dot(&x);
        let dobj: T = b.iter().zip(&y).map(|(bk, yk)| *bk * *yk).sum();
        let rp: Vec<T> = b.iter().zip(cons.apply(&x)).map(|(bk, ax)| *bk - ax).collect();
        let rd = c.sub(&cons.adjoint(&y, nr)).sub(&z);
        let mu = x.dot(&z) / T::lit(nr as f64);
        history.push(IterateRecord {
            iteration: iterations,
            primal_value: -pobj * half * sign,
            dual_value: -dobj * half * sign,
            mu,
            primal_step: steps.0,
            dual_step: steps.1,
        });

        let gap = (pobj - dobj) * half;
        let rp_norm = rp.iter().fold(T::zero(), |m, v| m.max(v.abs())) * half;
        let rd_norm = rd.max_abs();
        if gap.abs() <= tol * half && rp_norm <= tol * half && rd_norm <= tol * half {
            let sol = finish(&x, &y, iterations, history.clone())?;
            if sol.converged {
                return Ok(sol);
            }
        }
        if iterations >= opts.max_iter {
            break;
        }

        let Some(z_inv) = z.spd_inverse() else { break };
        let schur = cons.schur(&x, &z_inv);
        let xz = x.matmul(&z);

        let direction = |rc: &RealMatrix<T>| -> Option<(RealMatrix<T>, Vec<T>, RealMatrix<T>)> {
            let t = rc.matmul(&z_inv).sub(&x.matmul(&rd).matmul(&z_inv));
            let rhs: Vec<T> = rp.iter().zip(&cons.ops).map(|(r, a)| *r - a.dot(&t)).collect();
            let dy = solve_symmetric(&schur, &rhs)?;
            let dz = rd.sub(&cons.adjoint(&dy, nr));
            let dx = rc.sub(&x.matmul(&dz)).matmul(&z_inv).sym();
            Some((dx, dy, dz))
        };

        // predictor
        let rc_aff = xz.scale(-T::one());
        let Some((dx_a, _, dz_a)) = direction(&rc_aff) else {
            break;
        };
        let ap_a = max_step(&x, &dx_a).min(T::one());
        let ad_a = max_step(&z, &dz_a).min(T::one());
        let mu_aff = x.axpy(ap_a, &dx_a).dot(&z.axpy(ad_a, &dz_a)) / T::lit(nr as f64);
        let sigma = if mu > T::zero() {
            (mu_aff / mu).max(T::zero()).min(T::one()).powi(3)
        } else {
            T::zero()
        };

        // corrector
        let mut rc = xz.scale(-T::one()).sub(&dx_a.matmul(&dz_a));
        rc.add_diag(sigma * mu);
        let Some((dx_c, dy_c, dz_c)) = direction(&rc) else {
            break;
        };
        let ap = (opts.step_fraction * max_step(&x, &dx_c)).min(T::one());
        let ad = (opts.step_fraction * max_step(&z, &dz_c)).min(T::one());
        if !(ap > T::zero() && ad > T::zero()) {
            break;
        }

        x = project(&x.axpy(ap, &dx_c));
        for (yk, dk) in y.iter_mut().zip(&dy_c) {
            *yk += ad * *dk;
        }
        z = project(&z.axpy(ad, &dz_c));
        steps = (ap, ad);
        iterations += 1;
    }

    finish(&x, &y, iterations, history)
}

/// Largest `α` with `m + α·d ≥ 0` (`+∞` if unbounded), for `m ≻ 0`.
fn max_step<T: Real>(m: &RealMatrix<T>, d: &RealMatrix<T>) -> T {
    let Some(l) = m.cholesky() else { return T::zero() };
    let linv = l.lower_inverse();
    let s = linv.matmul(d).matmul(&linv.transpose());
    let lmin = s.min_sym_eigenvalue();
    if lmin >= T::zero() {
        T::infinity()
    } else {
        -T::one() / lmin
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::choi_identity;
    use crate::scalar::c;

    type M = ComplexMatrix<f64>;

    #[test]
    fn one_dimensional_program() {
        let p = PartialTraceSdp::new(M::from_real_diag(&[0.3]), 1, 1, Sense::Max).unwrap();
        let s = solve(&p, 1e-9, 200).unwrap();
        assert!(s.converged);
        assert!((s.value() - 0.3).abs() < 1e-9);
    }

    #[test]
    fn trivial_output_space() {
        // dim_y = 1: the only channel is the trace, X = 1_X
        let q = M::from_real_rows(&[&[0.5, 0.1], &[0.1, 0.2]]);
        for sense in [Sense::Max, Sense::Min] {
            let s = solve(&PartialTraceSdp::new(q.clone(), 2, 1, sense).unwrap(), 1e-9, 200).unwrap();
            assert!(s.converged);
            assert!((s.value() - 0.7).abs() < 1e-8);
        }
    }

    #[test]
    fn identity_objective_is_constant() {
        // ⟨1, X⟩ = Tr X = dim_x for every feasible X
        let p = PartialTraceSdp::new(M::identity(6), 2, 3, Sense::Min).unwrap();
        let s = solve(&p, 1e-9, 200).unwrap();
        assert!(s.converged);
        assert!((s.value() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn maximally_entangled_objective() {
        // max ⟨J(1), X⟩ over channels on C^d is d², attained by the identity
        for d in [2, 3] {
            let q = choi_identity::<f64>(d).into_matrix();
            let s = solve(&PartialTraceSdp::new(q, d, d, Sense::Max).unwrap(), 1e-9, 200).unwrap();
            assert!(s.converged, "{s:?}");
            assert!((s.value() - (d * d) as f64).abs() < 1e-7);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let q = M::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            PartialTraceSdp::new(q, 2, 1, Sense::Max),
            Err(Error::NotHermitian { .. })
        ));
        assert!(PartialTraceSdp::new(M::identity(3), 2, 2, Sense::Max).is_err());
        let p = PartialTraceSdp::new(M::identity(2), 2, 1, Sense::Max).unwrap();
        assert!(matches!(solve(&p, 1.0, 10), Err(Error::InvalidTolerance(_))));
        assert!(matches!(solve(&p, 1e-13, 10), Err(Error::InvalidTolerance(_))));
    }

    #[test]
    fn iteration_cap_flags_non_convergence() {
        let q = M::from_fn(4, 4, |i, j| c(((i + j) as f64).cos())).hermitian_part();
        let p = PartialTraceSdp::new(q, 2, 2, Sense::Max).unwrap();
        let s = solve(&p, 1e-10, 2).unwrap();
        assert!(!s.converged);
        assert_eq!(s.iterations, 2);
        assert!(s.ensure_converged().is_err());
    }

    #[test]
    fn strict_feasibility_of_identity_multiples() {
        let q = M::from_fn(6, 6, |i, j| c(((i * j) as f64).sin())).hermitian_part();
        for sense in [Sense::Max, Sense::Min] {
            let f = strict_feasibility(&PartialTraceSdp::new(q.clone(), 3, 2, sense).unwrap()).unwrap();
            assert!(f.holds(1e-12), "{f:?}");
        }
    }
}
