//! Interactive quantum measurements and the partial-trace SDPs that bound
//! how well a prover can do against them.
//!
//! A test is a state `ρ` on `X ⊗ Z` plus a measurement on `Y ⊗ Z`; the prover
//! answers with a channel `Φ : L(X) → L(Y)`. Outcome probabilities are linear
//! in the Choi operator `J(Φ)`, so the best and worst cases are semidefinite
//! programs over `{J ⪰ 0, Tr_Y J = 1}`, solved here by [`sdp::solve`] and
//! checked independently by [`sdp::certify`].
//!
//! Everything numeric is generic over [`Real`]; the `*64` and `*32` aliases
//! below fix the scalar.

pub mod analysis;
pub mod channel;
pub mod error;
pub mod interactive;
pub mod io;
pub mod linalg;
pub mod random;
pub mod scalar;
pub mod sdp;

pub use error::{Error, Result};
pub use scalar::{Real, C};

pub type ComplexMatrix64 = linalg::ComplexMatrix<f64>;
pub type ChoiOperator64 = channel::ChoiOperator<f64>;
pub type InteractiveMeasurement64 = interactive::InteractiveMeasurement<f64>;
pub type PartialTraceSdp64 = sdp::PartialTraceSdp<f64>;
pub type SdpSolution64 = sdp::SdpSolution<f64>;

pub type ComplexMatrix32 = linalg::ComplexMatrix<f32>;
pub type ChoiOperator32 = channel::ChoiOperator<f32>;
pub type InteractiveMeasurement32 = interactive::InteractiveMeasurement<f32>;
pub type PartialTraceSdp32 = sdp::PartialTraceSdp<f32>;
pub type SdpSolution32 = sdp::SdpSolution<f32>;
