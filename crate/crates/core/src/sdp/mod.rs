//! Partial-trace constrained semidefinite programs
//!
//! ```text
//!   max / min  ⟨Q, X⟩            dual (max):  min Tr(Y)  s.t. 1_Y ⊗ Y ≥ Q
//!   s.t.  Tr_Y(X) = 1_X, X ≥ 0   dual (min):  max Tr(Y)  s.t. 1_Y ⊗ Y ≤ Q
//! ```
//!
//! over Choi operators `X` on `Y ⊗ X`. The optimal values are the extreme
//! probabilities of an outcome over all channel strategies.

mod certify;
mod dense;
mod embed;
mod oracle;
mod solver;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interactive::{effective_operator, InteractiveMeasurement};
use crate::linalg::{eig_hermitian, inner, partial_trace, tensor, ComplexMatrix, SystemDims};
use crate::scalar::Real;

pub use certify::{certify, certify_with, Certificate};
pub use oracle::{classical_exact, random_strategy_bound, ClassicalOptimum, ENUMERATION_CAP};
pub use solver::{solve, solve_with, strict_feasibility, StrictFeasibility};

/// Optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Max,
    Min,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Max => "max",
            Sense::Min => "min",
        })
    }
}

impl FromStr for Sense {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Sense::Max),
            "min" => Ok(Sense::Min),
            other => Err(Error::CheckFailed(format!("unknown sense {other:?}"))),
        }
    }
}

/// Objective `Q` on `Y ⊗ X` plus the dimensions and direction.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialTraceSdp<T: Real> {
    q: ComplexMatrix<T>,
    dim_x: usize,
    dim_y: usize,
    sense: Sense,
}

impl<T: Real> PartialTraceSdp<T> {
    pub fn new(q: ComplexMatrix<T>, dim_x: usize, dim_y: usize, sense: Sense) -> Result<Self> {
        let n = dim_x * dim_y;
        if n == 0 || q.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "objective {:?} for dim_x {dim_x}, dim_y {dim_y}",
                q.shape()
            )));
        }
        q.require_hermitian()?;
        Ok(Self {
            q: q.hermitian_part(),
            dim_x,
            dim_y,
            sense,
        })
    }

    /// The program whose optimum is `M(a)` (max) or `m(a)` (min).
    pub fn for_outcome(im: &InteractiveMeasurement<T>, label: &str, sense: Sense) -> Result<Self> {
        Self::new(effective_operator(im, label)?, im.dim_x(), im.dim_y(), sense)
    }

    pub fn q(&self) -> &ComplexMatrix<T> {
        &self.q
    }

    pub fn dim_x(&self) -> usize {
        self.dim_x
    }

    pub fn dim_y(&self) -> usize {
        self.dim_y
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn with_sense(&self, sense: Sense) -> Self {
        Self { sense, ..self.clone() }
    }

    pub(crate) fn choi_dims(&self) -> SystemDims {
        SystemDims::new([self.dim_y, self.dim_x]).expect("positive dimensions")
    }

    /// `⟨Q, X⟩`.
    pub fn objective(&self, x: &ComplexMatrix<T>) -> Result<T> {
        Ok(inner(&self.q, x)?.re)
    }

    /// Dual slack: `1 ⊗ Y - Q` (max) or `Q - 1 ⊗ Y` (min).
    pub fn dual_slack(&self, y: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if y.shape() != (self.dim_x, self.dim_x) {
            return Err(Error::DimensionMismatch(format!(
                "dual variable {:?}, expected {}",
                y.shape(),
                self.dim_x
            )));
        }
        let lifted = tensor(&ComplexMatrix::identity(self.dim_y), y);
        Ok(match self.sense {
            Sense::Max => &lifted - &self.q,
            Sense::Min => &self.q - &lifted,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpOptions<T> {
    pub tol: T,
    pub max_iter: usize,
    /// Fraction of the distance to the cone boundary taken per step.
    pub step_fraction: T,
}

impl<T: Real> Default for SdpOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-8),
            max_iter: 200,
            step_fraction: T::lit(0.98),
        }
    }
}

/// Objective values at one interior-point iterate, in the caller's sense.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterateRecord<T> {
    pub iteration: usize,
    pub primal_value: T,
    pub dual_value: T,
    pub mu: T,
    pub primal_step: T,
    pub dual_step: T,
}

impl<T: Real> IterateRecord<T> {
    /// `primal ≤ dual` (max) or `dual ≤ primal` (min), up to `slack`.
    pub fn weakly_dual(&self, sense: Sense, slack: T) -> bool {
        match sense {
            Sense::Max => self.primal_value <= self.dual_value + slack,
            Sense::Min => self.dual_value <= self.primal_value + slack,
        }
    }
}

/// Primal/dual pair with its residuals. `dual_y`, `dual_value`, `gap` and
/// `dual_residual` are after the dual repair shift; the `_raw` fields are
/// before it.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution<T: Real> {
    pub sense: Sense,
    pub primal_x: ComplexMatrix<T>,
    pub dual_y: ComplexMatrix<T>,
    pub dual_y_raw: ComplexMatrix<T>,
    pub primal_value: T,
    pub dual_value: T,
    pub dual_value_raw: T,
    pub gap: T,
    pub gap_raw: T,
    /// `ε ≥ 0` added to (max) or subtracted from (min) `Y` by the repair.
    pub dual_shift: T,
    /// `max |Tr_Y(X) - 1|`.
    pub primal_residual: T,
    /// `-λ_min` of the repaired dual slack, clamped at zero.
    pub dual_residual: T,
    pub dual_residual_raw: T,
    pub iterations: usize,
    pub converged: bool,
    pub tol: T,
    pub history: Vec<IterateRecord<T>>,
}

impl<T: Real> SdpSolution<T> {
    /// Optimal value estimate (the primal objective).
    pub fn value(&self) -> T {
        self.primal_value
    }

    /// Evaluates a candidate pair, applying the dual repair
    /// `Y ← Y ± ε·1` with `ε = max(0, -λ_min(slack))`.
    pub fn from_pair(p: &PartialTraceSdp<T>, x: ComplexMatrix<T>, y: ComplexMatrix<T>, tol: T) -> Result<Self> {
        let primal_value = p.objective(&x)?;
        let primal_residual = partial_trace(&x, &p.choi_dims(), 0)?.max_abs_diff(&ComplexMatrix::identity(p.dim_x));

        let slack_min = eig_hermitian(&p.dual_slack(&y)?.hermitian_part())?.min();
        let dual_residual_raw = (-slack_min).max(T::zero());
        let dual_shift = dual_residual_raw;
        let shift = ComplexMatrix::identity(p.dim_x).scale(dual_shift);
        let repaired = match p.sense {
            Sense::Max => &y + &shift,
            Sense::Min => &y - &shift,
        };
        let dual_residual = (-eig_hermitian(&p.dual_slack(&repaired)?.hermitian_part())?.min()).max(T::zero());
        let dual_value_raw = y.trace_re();
        let dual_value = repaired.trace_re();
        Ok(Self {
            sense: p.sense,
            primal_x: x,
            dual_y_raw: y,
            dual_y: repaired,
            primal_value,
            dual_value,
            dual_value_raw,
            gap: (primal_value - dual_value).abs(),
            gap_raw: (primal_value - dual_value_raw).abs(),
            dual_shift,
            primal_residual,
            dual_residual,
            dual_residual_raw,
            iterations: 0,
            converged: false,
            tol,
            history: Vec::new(),
        })
    }

    /// Gap and both residuals within `tol`.
    pub fn meets(&self, tol: T) -> bool {
        self.gap <= tol && self.primal_residual <= tol && self.dual_residual <= tol
    }

    pub fn ensure_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged(format!(
                "after {} iterations: gap {:e}, primal residual {:e}, dual residual {:e}",
                self.iterations,
                self.gap.as_f64(),
                self.primal_residual.as_f64(),
                self.dual_residual.as_f64()
            )))
        }
    }
}
