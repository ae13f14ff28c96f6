//! Interactive measurements: a state `ρ` on `X ⊗ Z` is prepared, the `X`
//! part passes through an unknown channel `Φ : L(X) → L(Y)`, and `Y ⊗ Z` is
//! measured with `{P_a}`.

use std::collections::BTreeMap;

use crate::channel::{apply_extended, psi_apply, validate, ChoiOperator};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, inner, permute_systems, tensor, ComplexMatrix, SystemDims};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct InteractiveMeasurement<T: Real> {
    dim_x: usize,
    dim_y: usize,
    dim_z: usize,
    rho: ComplexMatrix<T>,
    outcomes: BTreeMap<String, ComplexMatrix<T>>,
}

/// Residuals reported by [`validate_im`]; nothing here is an error.
#[derive(Debug, Clone, PartialEq)]
pub struct ImValidation<T> {
    pub valid: bool,
    /// `|Tr ρ - 1|`.
    pub trace_residual: T,
    /// `-λ_min(ρ)` clamped at zero, plus Hermiticity defect.
    pub state_psd_residual: T,
    /// Worst `-λ_min(P_a)` over outcomes, plus Hermiticity defect.
    pub measurement_psd_residual: T,
    /// `max |Σ_a P_a - 1|`.
    pub completeness_residual: T,
}

/// `Q_a` on `Y ⊗ X` with `p(a) = ⟨Q_a, J(Φ)⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveOperator<T: Real> {
    pub outcome: String,
    pub q: ComplexMatrix<T>,
}

/// One outcome probability evaluated along both routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityEvaluation<T> {
    /// `⟨P_a, (Φ ⊗ 1)(ρ)⟩`.
    pub direct: T,
    /// `⟨Q_a, J(Φ)⟩`.
    pub via_choi: T,
    pub discrepancy: T,
}

/// Label of the product outcome `(a₁, a₂)`.
pub fn product_label(a1: &str, a2: &str) -> String {
    format!("({a1},{a2})")
}

impl<T: Real> InteractiveMeasurement<T> {
    /// Checks shapes only; use [`validate_im`] for the physical constraints.
    pub fn new(
        dim_x: usize,
        dim_y: usize,
        dim_z: usize,
        rho: ComplexMatrix<T>,
        outcomes: BTreeMap<String, ComplexMatrix<T>>,
    ) -> Result<Self> {
        if dim_x == 0 || dim_y == 0 || dim_z == 0 {
            return Err(Error::DimensionMismatch("dimensions must be positive".into()));
        }
        let nxz = dim_x * dim_z;
        if rho.shape() != (nxz, nxz) {
            return Err(Error::DimensionMismatch(format!(
                "rho is {:?}, expected ({nxz}, {nxz})",
                rho.shape()
            )));
        }
        if outcomes.is_empty() {
            return Err(Error::DimensionMismatch("no measurement outcomes".into()));
        }
        let nyz = dim_y * dim_z;
        for (label, p) in &outcomes {
            if p.shape() != (nyz, nyz) {
                return Err(Error::DimensionMismatch(format!(
                    "measurement {label:?} is {:?}, expected ({nyz}, {nyz})",
                    p.shape()
                )));
            }
        }
        Ok(Self {
            dim_x,
            dim_y,
            dim_z,
            rho,
            outcomes,
        })
    }

    /// The one-dimensional test with a single certain outcome.
    pub fn trivial(label: &str) -> Self {
        let one = ComplexMatrix::identity(1);
        Self {
            dim_x: 1,
            dim_y: 1,
            dim_z: 1,
            rho: one.clone(),
            outcomes: BTreeMap::from([(label.to_owned(), one)]),
        }
    }

    pub fn dim_x(&self) -> usize {
        self.dim_x
    }

    pub fn dim_y(&self) -> usize {
        self.dim_y
    }

    pub fn dim_z(&self) -> usize {
        self.dim_z
    }

    pub fn rho(&self) -> &ComplexMatrix<T> {
        &self.rho
    }

    pub fn outcomes(&self) -> &BTreeMap<String, ComplexMatrix<T>> {
        &self.outcomes
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.outcomes.keys().map(String::as_str)
    }

    pub fn measurement(&self, label: &str) -> Result<&ComplexMatrix<T>> {
        self.outcomes
            .get(label)
            .ok_or_else(|| Error::UnknownOutcome(label.to_owned()))
    }

    /// `dim_y · dim_x`, the side length of the Choi / `Q_a` space.
    pub fn choi_dim(&self) -> usize {
        self.dim_y * self.dim_x
    }

    fn state_dims(&self) -> SystemDims {
        SystemDims::new([self.dim_x, self.dim_z]).expect("positive dimensions")
    }
}

fn psd_residual<T: Real>(m: &ComplexMatrix<T>) -> T {
    let asym = m.hermitian_check().max_asymmetry;
    let min = eig_hermitian(&m.hermitian_part())
        .map(|e| e.min())
        .unwrap_or_else(|_| -T::infinity());
    (-min).max(T::zero()) + asym
}

pub fn validate_im<T: Real>(im: &InteractiveMeasurement<T>, tol: T) -> ImValidation<T> {
    let trace_residual = (im.rho.trace() - T::one()).norm();
    let state_psd_residual = psd_residual(&im.rho);
    let measurement_psd_residual = im.outcomes.values().map(psd_residual).fold(T::zero(), T::max);
    let nyz = im.dim_y * im.dim_z;
    let sum = im
        .outcomes
        .values()
        .fold(ComplexMatrix::zeros(nyz, nyz), |acc, p| &acc + p);
    let completeness_residual = sum.max_abs_diff(&ComplexMatrix::identity(nyz));
    let valid = [
        trace_residual,
        state_psd_residual,
        measurement_psd_residual,
        completeness_residual,
    ]
    .iter()
    .all(|&r| r <= tol);
    ImValidation {
        valid,
        trace_residual,
        state_psd_residual,
        measurement_psd_residual,
        completeness_residual,
    }
}

/// `Q_a = (1_Y ⊗ Ψ_ρ)(P_a)`.
pub fn effective_operator<T: Real>(im: &InteractiveMeasurement<T>, label: &str) -> Result<ComplexMatrix<T>> {
    let p = im.measurement(label)?;
    psi_apply(&im.rho, p, im.dim_x, im.dim_y, im.dim_z)
}

pub fn effective_operators<T: Real>(im: &InteractiveMeasurement<T>) -> Result<Vec<EffectiveOperator<T>>> {
    im.outcomes
        .iter()
        .map(|(label, p)| {
            Ok(EffectiveOperator {
                outcome: label.clone(),
                q: psi_apply(&im.rho, p, im.dim_x, im.dim_y, im.dim_z)?,
            })
        })
        .collect()
}

fn check_strategy<T: Real>(im: &InteractiveMeasurement<T>, strategy: &ChoiOperator<T>) -> Result<()> {
    if strategy.dim_in() != im.dim_x || strategy.dim_out() != im.dim_y {
        return Err(Error::DimensionMismatch(format!(
            "strategy maps {} -> {}, test needs {} -> {}",
            strategy.dim_in(),
            strategy.dim_out(),
            im.dim_x,
            im.dim_y
        )));
    }
    let v = validate(strategy, T::lit(T::CHANNEL_TOL));
    if !v.is_channel() {
        return Err(Error::InvalidChannel {
            cp_residual: v.cp_residual.as_f64(),
            tp_residual: v.tp_residual.as_f64(),
        });
    }
    Ok(())
}

/// Probability of every outcome under `strategy`, along both routes.
pub fn outcome_distribution<T: Real>(
    im: &InteractiveMeasurement<T>,
    strategy: &ChoiOperator<T>,
) -> Result<BTreeMap<String, ProbabilityEvaluation<T>>> {
    check_strategy(im, strategy)?;
    let sigma = apply_extended(strategy, &im.rho, &im.state_dims())?;
    let mut out = BTreeMap::new();
    for (label, p) in &im.outcomes {
        let direct = inner(p, &sigma)?.re;
        let q = psi_apply(&im.rho, p, im.dim_x, im.dim_y, im.dim_z)?;
        let via_choi = inner(&q, strategy.matrix())?.re;
        let discrepancy = (direct - via_choi).abs();
        if discrepancy > T::lit(T::CONSISTENCY_TOL) {
            return Err(Error::InconsistentEvaluation {
                discrepancy: discrepancy.as_f64(),
            });
        }
        out.insert(
            label.clone(),
            ProbabilityEvaluation {
                direct,
                via_choi,
                discrepancy,
            },
        );
    }
    Ok(out)
}

/// `p(a) = ⟨P_a, (Φ ⊗ 1_Z)(ρ)⟩`, cross-checked against `⟨Q_a, J(Φ)⟩`.
pub fn outcome_probability<T: Real>(
    im: &InteractiveMeasurement<T>,
    strategy: &ChoiOperator<T>,
    label: &str,
) -> Result<T> {
    im.measurement(label)?;
    let dist = outcome_distribution(im, strategy)?;
    Ok(dist[label].direct)
}

/// Two tests run side by side on independent registers. Registers are
/// grouped as `(x₁, x₂, z₁, z₂)` for the state and `(y₁, y₂, z₁, z₂)` for
/// the measurement, so the composite `X` is `X₁ ⊗ X₂` and so on.
pub fn product_compose<T: Real>(
    im1: &InteractiveMeasurement<T>,
    im2: &InteractiveMeasurement<T>,
) -> InteractiveMeasurement<T> {
    let state_dims = SystemDims::new([im1.dim_x, im1.dim_z, im2.dim_x, im2.dim_z]).expect("positive dimensions");
    let meas_dims = SystemDims::new([im1.dim_y, im1.dim_z, im2.dim_y, im2.dim_z]).expect("positive dimensions");
    let grouped = [0, 2, 1, 3];
    let rho = permute_systems(&tensor(&im1.rho, &im2.rho), &state_dims, &grouped).expect("consistent dimensions");
    let mut outcomes = BTreeMap::new();
    for (a1, p1) in &im1.outcomes {
        for (a2, p2) in &im2.outcomes {
            let p = permute_systems(&tensor(p1, p2), &meas_dims, &grouped).expect("consistent dimensions");
            outcomes.insert(product_label(a1, a2), p);
        }
    }
    InteractiveMeasurement {
        dim_x: im1.dim_x * im2.dim_x,
        dim_y: im1.dim_y * im2.dim_y,
        dim_z: im1.dim_z * im2.dim_z,
        rho,
        outcomes,
    }
}

/// `Q₁ ⊗ Q₂` on `(y₁, x₁, y₂, x₂)` reordered to the product test's
/// `(y₁, y₂, x₁, x₂)` layout.
pub fn product_effective_operator<T: Real>(
    q1: &ComplexMatrix<T>,
    dims1: (usize, usize),
    q2: &ComplexMatrix<T>,
    dims2: (usize, usize),
) -> Result<ComplexMatrix<T>> {
    let (y1, x1) = dims1;
    let (y2, x2) = dims2;
    let dims = SystemDims::new([y1, x1, y2, x2])?;
    permute_systems(&tensor(q1, q2), &dims, &[0, 2, 1, 3])
}

/// Replaces every operator by its diagonal part.
pub fn dephase_im<T: Real>(im: &InteractiveMeasurement<T>) -> InteractiveMeasurement<T> {
    InteractiveMeasurement {
        dim_x: im.dim_x,
        dim_y: im.dim_y,
        dim_z: im.dim_z,
        rho: im.rho.diagonal_part(),
        outcomes: im
            .outcomes
            .iter()
            .map(|(k, p)| (k.clone(), p.diagonal_part()))
            .collect(),
    }
}

pub fn is_classical<T: Real>(im: &InteractiveMeasurement<T>, tol: T) -> bool {
    im.rho.max_off_diagonal() <= tol && im.outcomes.values().all(|p| p.max_off_diagonal() <= tol)
}
