#![allow(dead_code)]

use bloch_rspt::spectral::{CMatrix, LoadOptions};
use bloch_rspt::HamiltonianSpec;
use num::complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn two_level() -> HamiltonianSpec {
    HamiltonianSpec::from_json(r#"{"dim":2,"h0":[0,1],"v":[[0,1],[1,0]],"target":0}"#).unwrap()
}

/// Complex Hermitian spec with dimension in 4..=8, every other level at
/// least 1 away from the target, and `||V||_F = 1` (so `||V||_2 <= 1`).
pub fn random_hermitian(rng: &mut ChaCha8Rng) -> HamiltonianSpec {
    let dim = rng.gen_range(4..=8);
    let target = rng.gen_range(0..dim);
    let h0: Vec<f64> = (0..dim)
        .map(|i| {
            if i == target {
                0.0
            } else {
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                sign * rng.gen_range(1.0..4.0)
            }
        })
        .collect();
    let mut v = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        v[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in 0..i {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            v[(i, j)] = z;
            v[(j, i)] = z.conj();
        }
    }
    let norm = v.norm();
    v /= Complex64::new(norm, 0.0);
    // Rescaling can leave rounding-level asymmetry; restore exact Hermiticity.
    let v = (&v + v.adjoint()) * Complex64::new(0.5, 0.0);
    HamiltonianSpec::new(h0, v, target, LoadOptions::default()).unwrap()
}

/// Real symmetric spec whose gaps are powers of two and whose `V` entries are
/// multiples of 1/32, so every series coefficient is exact in double precision.
pub fn random_dyadic(rng: &mut ChaCha8Rng) -> HamiltonianSpec {
    let dim = 4;
    let target = rng.gen_range(0..dim);
    let h0: Vec<f64> = (0..dim)
        .map(|i| {
            if i == target {
                0.0
            } else {
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                sign * f64::powi(2.0, rng.gen_range(0..3))
            }
        })
        .collect();
    let mut v = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..=i {
            let x = rng.gen_range(-8i32..=8) as f64 / 32.0;
            v[(i, j)] = Complex64::new(x, 0.0);
            v[(j, i)] = Complex64::new(x, 0.0);
        }
    }
    HamiltonianSpec::new(h0, v, target, LoadOptions::default()).unwrap()
}
