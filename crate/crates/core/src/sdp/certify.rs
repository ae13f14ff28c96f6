//! Solution checking from scratch, with explicit index loops rather than the
//! solver's embedded arithmetic.

use num_traits::Zero;
use serde::Serialize;

use super::{PartialTraceSdp, SdpSolution, Sense};
use crate::linalg::{min_eigenvalue, ComplexMatrix};
use crate::scalar::{Real, C};

/// Recomputed residuals, values and per-check verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate<T> {
    pub tol: T,
    pub primal_value: T,
    pub dual_value: T,
    pub gap: T,
    pub primal_min_eigenvalue: T,
    pub primal_residual: T,
    pub dual_slack_min_eigenvalue: T,
    pub primal_psd: bool,
    pub primal_feasible: bool,
    pub dual_feasible: bool,
    pub gap_ok: bool,
    pub weak_duality: bool,
    /// Weak duality at every recorded solver iterate (vacuous without history).
    pub history_weak_duality: bool,
    pub passed: bool,
}

/// Checks `s` against its own requested tolerance.
pub fn certify<T: Real>(p: &PartialTraceSdp<T>, s: &SdpSolution<T>) -> Certificate<T> {
    certify_with(p, s, s.tol)
}

pub fn certify_with<T: Real>(p: &PartialTraceSdp<T>, s: &SdpSolution<T>, tol: T) -> Certificate<T> {
    let (dx, dy) = (p.dim_x(), p.dim_y());
    let n = dx * dy;
    let psd_tol = T::lit(1e-8f64.max(T::PSD_TOL));
    let duality_slack = T::lit(T::PSD_TOL);
    let x = &s.primal_x;
    let y = &s.dual_y;
    let q = p.q();

    if x.shape() != (n, n) || y.shape() != (dx, dx) {
        return failed(tol);
    }

    let mut primal_value = T::zero();
    for i in 0..n {
        for j in 0..n {
            primal_value += (q[(i, j)].conj() * x[(i, j)]).re;
        }
    }
    let dual_value = (0..dx).map(|i| y[(i, i)].re).sum::<T>();

    let mut primal_residual = T::zero();
    for i in 0..dx {
        for j in 0..dx {
            let mut acc = C::zero();
            for b in 0..dy {
                acc += x[(b * dx + i, b * dx + j)];
            }
            if i == j {
                acc.re -= T::one();
            }
            primal_residual = primal_residual.max(acc.norm());
        }
    }

    let sign = match p.sense() {
        Sense::Max => T::one(),
        Sense::Min => -T::one(),
    };
    let slack = ComplexMatrix::from_fn(n, n, |r, c| {
        let (br, ir) = (r / dx, r % dx);
        let (bc, ic) = (c / dx, c % dx);
        let lifted = if br == bc { y[(ir, ic)] } else { C::zero() };
        (lifted - q[(r, c)]).scale(sign)
    });

    let eig = |m: &ComplexMatrix<T>| min_eigenvalue(&m.hermitian_part()).unwrap_or(T::neg_infinity());
    let primal_min_eigenvalue = eig(x);
    let dual_slack_min_eigenvalue = eig(&slack);
    let gap = (primal_value - dual_value).abs();

    let weak_duality = match p.sense() {
        Sense::Max => primal_value <= dual_value + duality_slack,
        Sense::Min => dual_value <= primal_value + duality_slack,
    };
    let history_weak_duality = s.history.iter().all(|h| h.weakly_dual(p.sense(), duality_slack));

    let primal_psd = primal_min_eigenvalue >= -psd_tol;
    let primal_feasible = primal_residual <= tol;
    let dual_feasible = dual_slack_min_eigenvalue >= -psd_tol;
    let gap_ok = gap <= tol;
    Certificate {
        tol,
        primal_value,
        dual_value,
        gap,
        primal_min_eigenvalue,
        primal_residual,
        dual_slack_min_eigenvalue,
        primal_psd,
        primal_feasible,
        dual_feasible,
        gap_ok,
        weak_duality,
        history_weak_duality,
        passed: primal_psd && primal_feasible && dual_feasible && gap_ok && weak_duality && history_weak_duality,
    }
}

fn failed<T: Real>(tol: T) -> Certificate<T> {
    let nan = T::nan();
    Certificate {
        tol,
        primal_value: nan,
        dual_value: nan,
        gap: nan,
        primal_min_eigenvalue: nan,
        primal_residual: nan,
        dual_slack_min_eigenvalue: nan,
        primal_psd: false,
        primal_feasible: false,
        dual_feasible: false,
        gap_ok: false,
        weak_duality: false,
        history_weak_duality: false,
        passed: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdp::{classical_exact, solve};

    #[test]
    fn zero_primal_fails_on_residual() {
        let q = ComplexMatrix::<f64>::from_real_diag(&[0.2, 0.4, 0.6, 0.1]);
        let p = PartialTraceSdp::new(q, 2, 2, Sense::Max).unwrap();
        let s = solve(&p, 1e-8, 200).unwrap();
        assert!(certify(&p, &s).passed);

        let mut bad = s.clone();
        bad.primal_x = ComplexMatrix::zeros(4, 4);
        let cert = certify(&p, &bad);
        assert!(!cert.passed);
        assert!(!cert.primal_feasible);
        assert!((cert.primal_residual - 1.0).abs() < 1e-15);
    }

    #[test]
    fn classical_pair_certifies_with_zero_gap() {
        let q = ComplexMatrix::<f64>::from_real_diag(&[0.2, 0.9, 0.6, 0.1, 0.5, 0.5]);
        for sense in [Sense::Max, Sense::Min] {
            let p = PartialTraceSdp::new(q.clone(), 2, 3, sense).unwrap();
            let opt = classical_exact(&p).unwrap();
            let s = SdpSolution::from_pair(&p, opt.strategy.into_matrix(), opt.dual_y, 1e-12).unwrap();
            let cert = certify(&p, &s);
            assert!(cert.passed, "{cert:?}");
            assert_eq!(cert.gap, 0.0);
            assert_eq!(s.dual_shift, 0.0);
        }
    }

    #[test]
    fn wrong_shapes_fail() {
        let p = PartialTraceSdp::new(ComplexMatrix::<f64>::identity(4), 2, 2, Sense::Max).unwrap();
        let mut s = solve(&p, 1e-8, 200).unwrap();
        s.dual_y = ComplexMatrix::identity(3);
        assert!(!certify(&p, &s).passed);
    }
}
