//! The quantum hedging example and the threshold-repetition bounds.
//!
//! Alice holds half of a maximally entangled pair, passes one qubit to Bob,
//! and later measures `{v v*, 1 - v v*}` with `v = cos(π/8)|00⟩ + sin(π/8)|11⟩`.
//! A single run fails with probability at least `sin²(π/8)`, yet two runs in
//! parallel can be answered so that they never both fail.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::thread;

use num_complex::Complex;
use serde::Serialize;

use crate::channel::{choi_from_unitary, ChoiOperator};
use crate::error::{Error, Result};
use crate::interactive::{
    dephase_im, effective_operator, outcome_distribution, product_compose, product_label, InteractiveMeasurement,
};
use crate::linalg::{fidelity_squared, sqrt_psd, trace_norm, ComplexMatrix};
use crate::sdp::{certify, solve, PartialTraceSdp, SdpSolution, Sense};

type M = ComplexMatrix<f64>;

/// Largest repetition count the threshold bounds accept (exact `u128` binomials).
pub const MAX_REPETITIONS: u32 = 60;

fn angles() -> (f64, f64) {
    ((PI / 8.0).cos(), (PI / 8.0).sin())
}

fn real(x: f64) -> Complex<f64> {
    Complex::new(x, 0.0)
}

/// The single hedging test on `X = Y = Z = C²`.
pub fn build_hedging_test() -> InteractiveMeasurement<f64> {
    let (cs, sn) = angles();
    let rho = M::outer(&[real(FRAC_1_SQRT_2), real(0.0), real(0.0), real(FRAC_1_SQRT_2)]);
    let accept = M::outer(&[real(cs), real(0.0), real(0.0), real(sn)]);
    let reject = &M::identity(4) - &accept;
    InteractiveMeasurement::new(
        2,
        2,
        2,
        rho,
        BTreeMap::from([("0".to_string(), reject), ("1".to_string(), accept)]),
    )
    .expect("hedging test shapes")
}

/// The hedging test with every operator replaced by its diagonal.
pub fn build_dephased_hedging_test() -> InteractiveMeasurement<f64> {
    dephase_im(&build_hedging_test())
}

/// Bob's two-run strategy: conjugation by `diag(-1, 1, 1, 1)` on `X₁ ⊗ X₂`.
pub fn hedging_strategy() -> ChoiOperator<f64> {
    choi_from_unitary(&M::from_real_diag(&[-1.0, 1.0, 1.0, 1.0])).expect("diagonal sign matrix is unitary")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HedgingReport {
    /// Best single-run acceptance probability.
    pub single_max: f64,
    /// Certified upper bound on `single_max` (dual objective), used as `p`
    /// in the threshold bounds.
    pub single_max_upper: f64,
    /// Least single-run failure probability.
    pub single_min_fail: f64,
    /// Least probability that both parallel runs fail.
    pub joint_fail_min: f64,
    /// Best probability that both parallel runs accept.
    pub joint_pass_max: f64,
    /// Outcome distribution of [`hedging_strategy`] on the product test.
    pub strategy_distribution: BTreeMap<String, f64>,
    pub strategy_joint_fail: f64,
    /// Probability that at least one run accepts under the strategy.
    pub strategy_pass_at_least_one: f64,
    /// Classical threshold bound for one acceptance out of two.
    pub classical_bound: f64,
    pub quantum_bound: f64,
    pub classical_bound_violated: bool,
    /// Number of solves whose certificate passed, out of `solves`.
    pub certified: usize,
    pub solves: usize,
    pub iterations: Vec<usize>,
}

/// Solves the single and product hedging programs, certifies every solve and
/// evaluates the phase-flip strategy on the same composed test.
pub fn verify_hedging(tol: f64) -> Result<HedgingReport> {
    let single = build_hedging_test();
    let product = product_compose(&single, &single);
    let fail_fail = product_label("0", "0");
    let pass_pass = product_label("1", "1");

    let programs = [
        PartialTraceSdp::for_outcome(&single, "1", Sense::Max)?,
        PartialTraceSdp::for_outcome(&single, "0", Sense::Min)?,
        PartialTraceSdp::for_outcome(&product, &fail_fail, Sense::Min)?,
        PartialTraceSdp::for_outcome(&product, &pass_pass, Sense::Max)?,
    ];
    let solutions: Vec<Result<SdpSolution<f64>>> = thread::scope(|s| {
        let handles: Vec<_> = programs.iter().map(|p| s.spawn(move || solve(p, tol, 200))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });
    let mut solved = Vec::with_capacity(programs.len());
    for (p, s) in programs.iter().zip(solutions) {
        let s = s?.ensure_converged()?;
        let passed = certify(p, &s).passed;
        solved.push((s, passed));
    }

    let dist = outcome_distribution(&product, &hedging_strategy())?;
    let strategy_distribution: BTreeMap<String, f64> = dist.iter().map(|(k, v)| (k.clone(), v.direct)).collect();
    let strategy_joint_fail = strategy_distribution[&fail_fail];
    if strategy_joint_fail.abs() > tol {
        return Err(Error::CheckFailed(format!(
            "strategy fails both runs with probability {strategy_joint_fail:e}"
        )));
    }
    let strategy_pass_at_least_one = 1.0 - strategy_joint_fail;

    let single_max = solved[0].0.value();
    let single_max_upper = solved[0].0.dual_value.min(1.0);
    let query = ThresholdQuery::new(2, 1, single_max_upper)?;
    let classical_bound = classical_threshold_bound(&query);
    Ok(HedgingReport {
        single_max,
        single_max_upper,
        single_min_fail: solved[1].0.value(),
        joint_fail_min: solved[2].0.value(),
        joint_pass_max: solved[3].0.value(),
        strategy_distribution,
        strategy_joint_fail,
        strategy_pass_at_least_one,
        classical_bound,
        quantum_bound: quantum_threshold_bound(&query),
        classical_bound_violated: strategy_pass_at_least_one > classical_bound,
        certified: solved.iter().filter(|(_, ok)| *ok).count(),
        solves: solved.len(),
        iterations: solved.iter().map(|(s, _)| s.iterations).collect(),
    })
}

/// Steps of the fidelity argument bounding single-run acceptance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityChain {
    /// `‖√Q √R‖₁` with `Q = diag(cos²(π/8), sin²(π/8))`, `R = 1/2`.
    pub trace_norm: f64,
    /// Its square, `½(cos(π/8) + sin(π/8))²`.
    pub bound: f64,
    /// The same bound through [`fidelity_squared`].
    pub fidelity_squared: f64,
}

/// Bob's reduced state is `1/2` whatever he does, while acceptance needs
/// Alice's side to look like `Tr_Y(v v*)`; monotonicity of the fidelity under
/// the partial trace caps the acceptance probability by `F(Q, R)²`.
pub fn fidelity_bound_chain() -> Result<FidelityChain> {
    let (cs, sn) = angles();
    let q = M::from_real_diag(&[cs * cs, sn * sn]);
    let r = M::identity(2).scale(0.5);
    let tn = trace_norm(&(&sqrt_psd(&q)? * &sqrt_psd(&r)?));
    Ok(FidelityChain {
        trace_norm: tn,
        bound: tn * tn,
        fidelity_squared: fidelity_squared(&q, &r)?,
    })
}

/// At least `t` acceptances among `k` parallel runs, each accepted with
/// probability at most `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdQuery {
    k: u32,
    t: u32,
    p: f64,
}

impl ThresholdQuery {
    pub fn new(k: u32, t: u32, p: f64) -> Result<Self> {
        if k == 0 || k > MAX_REPETITIONS {
            return Err(Error::InvalidQuery(format!("k = {k} outside 1..={MAX_REPETITIONS}")));
        }
        if t == 0 || t > k {
            return Err(Error::InvalidQuery(format!("t = {t} outside 1..={k}")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidQuery(format!("p = {p} outside [0, 1]")));
        }
        Ok(Self { k, t, p })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

fn binomial(n: u32, k: u32) -> u128 {
    let k = k.min(n - k);
    // each partial product is itself a binomial, so the division is exact
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// `Σ_{j=t}^{k} C(k,j) p^j (1-p)^{k-j}`: independent runs.
pub fn classical_threshold_bound(q: &ThresholdQuery) -> f64 {
    (q.t..=q.k)
        .map(|j| binomial(q.k, j) as f64 * q.p.powi(j as i32) * (1.0 - q.p).powi((q.k - j) as i32))
        .sum()
}

/// `Σ_{j=t}^{k} C(k,j) p^j`: holds against entangled strategies, and may
/// exceed 1.
pub fn quantum_threshold_bound(q: &ThresholdQuery) -> f64 {
    (q.t..=q.k).map(|j| binomial(q.k, j) as f64 * q.p.powi(j as i32)).sum()
}

/// Classical single-run minimum failure probability of the dephased test.
pub fn dephased_single_min(im: &InteractiveMeasurement<f64>, label: &str) -> Result<f64> {
    let p = PartialTraceSdp::new(effective_operator(im, label)?, im.dim_x(), im.dim_y(), Sense::Min)?;
    Ok(crate::sdp::classical_exact(&p)?.value)
}
