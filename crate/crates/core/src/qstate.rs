//! Two-qubit states and the entanglement quantities computed from them.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::linalg::{c, hermitian_eigen, re, CMat4, Complex, HERMITIAN_TOL};
use crate::{Error, Result};

/// Tolerance on `‖ψ‖ − 1` accepted by [`PureState::new`].
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance on `Tr ρ − 1` and on the smallest eigenvalue of a density matrix.
pub const STATE_TOL: f64 = 1e-10;
/// Negativity above which a state counts as entangled.
pub const ENTANGLEMENT_TOL: f64 = 1e-10;

/// Normalized two-qubit state vector in the `|00>, |01>, |10>, |11>` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState([Complex; 4]);

impl PureState {
    pub fn new(amplitudes: [Complex; 4]) -> Result<Self> {
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self(amplitudes))
    }

    /// Scales a non-zero vector to unit norm.
    pub fn normalized(amplitudes: [Complex; 4]) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NotNormalized(norm));
        }
        Self::new(amplitudes.map(|z| z / norm))
    }

    pub fn amplitudes(&self) -> &[Complex; 4] {
        &self.0
    }

    pub fn product(a: [Complex; 2], b: [Complex; 2]) -> Result<Self> {
        Self::new([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]])
    }

    /// `(|00> + |11>)/√2`
    pub fn phi_plus() -> Self {
        let h = re(FRAC_1_SQRT_2);
        Self([h, re(0.0), re(0.0), h])
    }

    /// `(|00> − |11>)/√2`
    pub fn phi_minus() -> Self {
        let h = re(FRAC_1_SQRT_2);
        Self([h, re(0.0), re(0.0), -h])
    }

    /// `(|01> + |10>)/√2`
    pub fn psi_plus() -> Self {
        let h = re(FRAC_1_SQRT_2);
        Self([re(0.0), h, h, re(0.0)])
    }

    /// `(|01> − |10>)/√2`
    pub fn psi_minus() -> Self {
        let h = re(FRAC_1_SQRT_2);
        Self([re(0.0), h, -h, re(0.0)])
    }

    pub fn basis(index: usize) -> Self {
        let mut a = [re(0.0); 4];
        a[index] = re(1.0);
        Self(a)
    }
}

/// Validated two-qubit density matrix: Hermitian, unit trace and positive
/// semidefinite, each to within `1e-10`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(CMat4);

impl DensityMatrix {
    pub fn new(mat: CMat4) -> Result<Self> {
        if !mat.is_finite() {
            return Err(Error::NonFinite);
        }
        let norm = mat.frobenius_norm();
        let defect = mat.hermitian_defect();
        if defect > HERMITIAN_TOL * norm.max(1.0) {
            return Err(Error::NotHermitian(defect / norm.max(1.0)));
        }
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let eig = hermitian_eigen(&mat, HERMITIAN_TOL)?;
        if eig.values[0] < -STATE_TOL {
            return Err(Error::NotPositive(eig.values[0]));
        }
        Ok(Self(mat))
    }

    /// Skips validation; callers construct states that are valid by design.
    pub(crate) fn from_trusted(mat: CMat4) -> Self {
        Self(mat)
    }

    /// Projector `|ψ><ψ|`.
    pub fn from_pure(psi: &PureState) -> Self {
        let a = psi.amplitudes();
        Self(CMat4::from_fn(|i, j| a[i] * a[j].conj()))
    }

    pub fn maximally_mixed() -> Self {
        Self(CMat4::identity().scale_real(0.25))
    }

    /// `p|Φ+><Φ+| + (1 − p) I/4`, valid for `p ∈ [−1/3, 1]`.
    pub fn werner(p: f64) -> Result<Self> {
        let phi = Self::from_pure(&PureState::phi_plus());
        Self::new(phi.0.scale_real(p) + CMat4::identity().scale_real((1.0 - p) / 4.0))
    }

    /// Convex combination `Σ w_k ρ_k`. Weights must be non-negative and sum to 1.
    pub fn mixture(terms: &[(f64, DensityMatrix)]) -> Result<Self> {
        let mut acc = CMat4::zeros();
        for (w, rho) in terms {
            acc = acc + rho.0.scale_real(*w);
        }
        Self::new(acc)
    }

    pub fn mat(&self) -> &CMat4 {
        &self.0
    }

    pub fn purity(&self) -> f64 {
        self.0.trace_product(&self.0).re
    }

    /// `U ρ U†`; `u` must be unitary.
    pub fn conjugate_by(&self, u: &CMat4) -> Result<Self> {
        Self::new(*u * self.0 * u.adjoint())
    }

    /// Reduced state of party A (trace over B).
    pub fn reduced_a(&self) -> [[Complex; 2]; 2] {
        let m = &self.0;
        std::array::from_fn(|i| std::array::from_fn(|k| m[(2 * i, 2 * k)] + m[(2 * i + 1, 2 * k + 1)]))
    }

    /// Reduced state of party B (trace over A).
    pub fn reduced_b(&self) -> [[Complex; 2]; 2] {
        let m = &self.0;
        std::array::from_fn(|j| std::array::from_fn(|l| m[(j, l)] + m[(2 + j, 2 + l)]))
    }
}

/// Transpose on the B index: `((i,j),(k,l)) ↦ ((i,l),(k,j))` with row index
/// `2i + j`. The result is Hermitian with unit trace but may be indefinite.
pub fn partial_transpose(rho: &DensityMatrix) -> CMat4 {
    partial_transpose_mat(rho.mat())
}

pub fn partial_transpose_mat(m: &CMat4) -> CMat4 {
    let mut out = CMat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + l, 2 * k + j)] = m[(2 * i + j, 2 * k + l)];
                }
            }
        }
    }
    out
}

/// Negativity `2 Σ max(0, −λ_k)` over the partial-transpose spectrum.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NegativityValue {
    value: f64,
    raw: f64,
}

impl NegativityValue {
    /// Clamped to `[0, 1]`.
    pub fn value(&self) -> f64 {
        self.value
    }

    /// Unclamped sum, kept for diagnostics.
    pub fn raw(&self) -> f64 {
        self.raw
    }
}

pub fn negativity(rho: &DensityMatrix) -> NegativityValue {
    let pt = partial_transpose(rho);
    // the partial transpose of a valid state is Hermitian by construction
    let eig = hermitian_eigen(&pt, f64::INFINITY).expect("finite Hermitian input");
    let raw = 2.0 * eig.values.iter().map(|&l| (-l).max(0.0)).sum::<f64>();
    NegativityValue {
        value: raw.clamp(0.0, 1.0),
        raw,
    }
}

/// PPT test; exact for two qubits.
pub fn is_entangled(rho: &DensityMatrix, tol: f64) -> bool {
    negativity(rho).value() > tol
}

/// Fully entangled fraction `F(ρ) ∈ [1/4, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Fidelity(f64);

impl Fidelity {
    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Magic basis as columns: `(|Φ+>, −i|Φ−>, |Ψ−>, −i|Ψ+>)`.
///
/// In this basis every maximally entangled state is a real unit vector up to
/// a global phase, so maximizing `<Ψ|ρ|Ψ>` over maximally entangled `Ψ`
/// reduces to the top eigenvalue of the real part of `ρ` in this basis.
pub fn magic_basis() -> CMat4 {
    let cols = [
        PureState::phi_plus(),
        PureState::phi_minus(),
        PureState::psi_minus(),
        PureState::psi_plus(),
    ];
    let phases = [re(1.0), c(0.0, -1.0), re(1.0), c(0.0, -1.0)];
    CMat4::from_fn(|i, k| cols[k].amplitudes()[i] * phases[k])
}

pub fn fully_entangled_fraction(rho: &DensityMatrix) -> Fidelity {
    let m = magic_basis();
    let in_magic = m.adjoint() * *rho.mat() * m;
    let real_part = CMat4::from_fn(|i, j| re(in_magic[(i, j)].re));
    let eig = hermitian_eigen(&real_part, f64::INFINITY).expect("finite symmetric input");
    Fidelity(eig.values[3])
}

/// `(1 + N(ρ))/2 − F(ρ)`; never below `−1e-9` for a valid state.
pub fn fidelity_negativity_slack(rho: &DensityMatrix) -> f64 {
    (1.0 + negativity(rho).value()) / 2.0 - fully_entangled_fraction(rho).value()
}
