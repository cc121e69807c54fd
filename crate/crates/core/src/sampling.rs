//! Seeded random ensembles of two-qubit states.
//!
//! # Stream layout
//!
//! [`SeededRng`] is ChaCha8 (`rand_chacha::ChaCha8Rng`). The 256-bit key is
//! expanded from the 64-bit seed by `SeedableRng::seed_from_u64` (a PCG32
//! output hash), and [`SeededRng::split`] selects ChaCha stream number
//! `index` under that key, so split streams never share output.
//!
//! Every variate is built from uniforms, each consuming one `u64`:
//!
//! - uniform on `[0, 1)`: 53 high bits of one `u64`;
//! - complex normal: Box-Muller on two uniforms `(u1, u2)`,
//!   `r = √(−2 ln(1 − u1))`, `(r cos 2πu2, r sin 2πu2)`;
//! - unit exponential: `−ln(1 − u)` on one uniform.

use std::f64::consts::TAU;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{c, qr, CMat4, Complex};
use crate::qstate::{DensityMatrix, PureState};
use crate::{Error, Result};

/// Default number of product terms in [`random_separable`].
pub const DEFAULT_SEPARABLE_TERMS: usize = 8;

/// Deterministic random stream. Single owner; parallel work uses
/// [`SeededRng::split`].
#[derive(Debug, Clone)]
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    /// Stream 0 of `seed`.
    pub fn new(seed: u64) -> Self {
        Self::split(seed, 0)
    }

    /// Stream `index` of `seed`.
    pub fn split(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self(rng)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.0.random::<f64>()
    }

    /// Standard complex normal: real and imaginary parts independent `N(0, 1)`.
    pub fn complex_normal(&mut self) -> Complex {
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        let (s, co) = (TAU * u2).sin_cos();
        c(r * co, r * s)
    }

    pub fn exponential(&mut self) -> f64 {
        -(1.0 - self.uniform()).ln()
    }
}

/// Point of the standard 3-simplex: four non-negative weights summing to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexPoint(pub [f64; 4]);

impl SimplexPoint {
    pub fn weights(&self) -> &[f64; 4] {
        &self.0
    }
}

/// Haar-random pure state: four standard complex normals, normalized.
pub fn haar_pure(rng: &mut SeededRng) -> PureState {
    let amps: [Complex; 4] = std::array::from_fn(|_| rng.complex_normal());
    PureState::normalized(amps).expect("a Gaussian vector is non-zero almost surely")
}

/// Haar-random 4×4 unitary from the QR decomposition of a complex Ginibre
/// matrix, with column `j` of `Q` multiplied by `R_jj / |R_jj|`.
pub fn haar_unitary4(rng: &mut SeededRng) -> CMat4 {
    let g = CMat4::from_fn(|_, _| rng.complex_normal());
    let (q, r) = qr(&g);
    CMat4::from_fn(|i, j| {
        let d = r[(j, j)];
        let n = d.norm();
        if n > 0.0 {
            q[(i, j)] * (d / n)
        } else {
            q[(i, j)]
        }
    })
}

/// Uniform point of the 3-simplex from four normalized unit exponentials.
pub fn simplex_uniform(rng: &mut SeededRng) -> SimplexPoint {
    let e: [f64; 4] = std::array::from_fn(|_| rng.exponential());
    let total: f64 = e.iter().sum();
    SimplexPoint(e.map(|x| x / total))
}

/// `U·diag(w)·U†` with `U` Haar and `w` uniform on the simplex.
///
/// The unitary is drawn before the spectrum.
pub fn random_mixed(rng: &mut SeededRng) -> DensityMatrix {
    let u = haar_unitary4(rng);
    let w = simplex_uniform(rng);
    let m = CMat4::from_fn(|i, j| (0..4).map(|k| u[(i, k)] * u[(j, k)].conj() * w.0[k]).sum());
    // symmetrize so the result is Hermitian to the last bit
    DensityMatrix::from_trusted(CMat4::from_fn(|i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5))
}

fn haar_qubit(rng: &mut SeededRng) -> [Complex; 2] {
    let a = rng.complex_normal();
    let b = rng.complex_normal();
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    [a / n, b / n]
}

/// Tensor product of two independent Haar qubit states, party A first.
pub fn random_product_pure(rng: &mut SeededRng) -> PureState {
    let a = haar_qubit(rng);
    let b = haar_qubit(rng);
    PureState::product(a, b).expect("product of unit vectors is a unit vector")
}

/// Mixture of `k` random product pure states with uniform simplex weights.
pub fn random_separable(rng: &mut SeededRng, k: usize) -> Result<DensityMatrix> {
    if k < 1 {
        return Err(Error::InvalidCount);
    }
    let e: Vec<f64> = (0..k).map(|_| rng.exponential()).collect();
    let total: f64 = e.iter().sum();
    let mut acc = CMat4::zeros();
    for w in e {
        let psi = random_product_pure(rng);
        acc = acc + DensityMatrix::from_pure(&psi).mat().scale_real(w / total);
    }
    Ok(DensityMatrix::from_trusted(acc))
}
