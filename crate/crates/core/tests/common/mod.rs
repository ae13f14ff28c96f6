#![allow(dead_code)]

use std::collections::BTreeMap;

use qhedge::interactive::InteractiveMeasurement;
use qhedge::linalg::ComplexMatrix;
use qhedge::random::{ginibre, random_density, random_unitary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type M = ComplexMatrix<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random valid two-outcome test: random `ρ` and `{P, 1 - P}` with
/// `P = U diag(w) U*`, `w ∈ [0, 1]`.
pub fn random_im(rng: &mut ChaCha8Rng, dx: usize, dy: usize, dz: usize) -> InteractiveMeasurement<f64> {
    let rho = random_density::<f64, _>(rng, dx * dz);
    let n = dy * dz;
    let u = random_unitary::<f64, _>(rng, n);
    let w: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let p = (&(&u * &M::from_real_diag(&w)) * &u.adjoint()).hermitian_part();
    let q = &M::identity(n) - &p;
    InteractiveMeasurement::new(dx, dy, dz, rho, BTreeMap::from([("a".into(), p), ("b".into(), q)])).unwrap()
}

/// Random PSD matrix with trace `n / 2`, a scale typical of `Q_a`.
pub fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> M {
    let g = ginibre::<f64, _>(rng, n, n);
    let p = (&g * &g.adjoint()).hermitian_part();
    let tr = p.trace_re();
    p.scale(n as f64 / (2.0 * tr))
}

/// Random diagonal objective with entries in `[0, 1)`.
pub fn random_diagonal(rng: &mut ChaCha8Rng, n: usize) -> M {
    let d: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    M::from_real_diag(&d)
}
