//! Real scalar abstraction.
//!
//! Everything numeric in the crate is written against [`Real`], which is
//! implemented for `f32` and `f64`. Tolerances are per-type so that the
//! single-precision instantiation stays usable for the linear-algebra layer.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar usable as the real part of matrix entries.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute tolerance on the largest entry asymmetry of a Hermitian matrix.
    const HERMITIAN_TOL: f64;
    /// Smallest eigenvalue still accepted as nonnegative.
    const PSD_TOL: f64;
    /// Tolerance on trace / completeness / trace-preservation residuals.
    const CHANNEL_TOL: f64;
    /// Allowed disagreement between two evaluation routes of one quantity.
    const CONSISTENCY_TOL: f64;

    /// Converts an `f64` literal. Panics only if the value is not representable,
    /// which cannot happen for the finite literals used in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const HERMITIAN_TOL: f64 = 1e-9;
    const PSD_TOL: f64 = 1e-9;
    const CHANNEL_TOL: f64 = 1e-8;
    const CONSISTENCY_TOL: f64 = 1e-6;
}

impl Real for f32 {
    const HERMITIAN_TOL: f64 = 1e-4;
    const PSD_TOL: f64 = 1e-4;
    const CHANNEL_TOL: f64 = 1e-3;
    const CONSISTENCY_TOL: f64 = 1e-2;
}

/// Complex scalar over a [`Real`].
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}
