//! Bell-CHSH operators for orthogonal spin measurements.
//!
//! Each party measures spin along two perpendicular directions. From the four
//! observables `A1, A2, B1, B2` the operator
//!
//! ```text
//! B = A1⊗(B1 + B2) + A2⊗(B1 − B2)
//! ```
//!
//! and its three sign/order variants are formed. For orthogonal settings
//! every such operator has spectrum `{−2√2, 0, 0, 2√2}`, which is what makes
//! the separable bound `√2` and its negativity generalization `√2(1 + N)`
//! hold.

mod optimize;

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::linalg::{kron, re, CMat2, CMat4};
use crate::qstate::DensityMatrix;
use crate::{Error, Result};

pub use optimize::{max_over_orthogonal_settings, rotation_zyz, OptimizerBudget, SettingsOptimum};

/// Local hidden variable (CHSH) bound.
pub const CHSH_BOUND: f64 = 2.0;
/// Bound for separable states under orthogonal settings.
pub const RUS_BOUND: f64 = SQRT_2;
/// Quantum-mechanical maximum.
pub const CIRELSON_BOUND: f64 = 2.0 * SQRT_2;

pub const UNIT_TOL: f64 = 1e-10;
pub const ORTHO_TOL: f64 = 1e-10;
/// Slack allowed when checking the Cirel'son and negativity bounds.
pub const BOUND_TOL: f64 = 1e-9;

/// Unit vector in three-dimensional space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Direction {
    x: f64,
    y: f64,
    z: f64,
}

impl Direction {
    pub const X: Direction = Direction { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Direction = Direction { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Direction = Direction { x: 0.0, y: 0.0, z: 1.0 };

    /// Accepts vectors whose norm is within `1e-10` of one.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit(norm));
        }
        Ok(Self { x, y, z })
    }

    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NotUnit(norm));
        }
        Self::new(x / norm, y / norm, z / norm)
    }

    pub fn from_array(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }
}

impl std::ops::Neg for Direction {
    type Output = Direction;
    fn neg(self) -> Direction {
        Direction { x: -self.x, y: -self.y, z: -self.z }
    }
}

impl TryFrom<[f64; 3]> for Direction {
    type Error = Error;
    fn try_from(v: [f64; 3]) -> Result<Self> {
        Self::from_array(v)
    }
}

impl From<Direction> for [f64; 3] {
    fn from(d: Direction) -> Self {
        d.to_array()
    }
}

/// `d·σ`, a dichotomic observable with eigenvalues ±1.
pub fn spin_op(d: &Direction) -> CMat2 {
    CMat2::pauli_x().scale_real(d.x) + CMat2::pauli_y().scale_real(d.y) + CMat2::pauli_z().scale_real(d.z)
}

fn check_orthogonal(a: &Direction, b: &Direction) -> Result<()> {
    let dot = a.dot(b);
    if dot.abs() > ORTHO_TOL {
        return Err(Error::NotOrthogonal(dot));
    }
    Ok(())
}

/// Two perpendicular measurement directions for one party.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[Direction; 2]", into = "[Direction; 2]")]
pub struct OrthogonalPair {
    d1: Direction,
    d2: Direction,
}

impl OrthogonalPair {
    /// Rejects pairs with `|d1·d2| > 1e-10`; see [`gram_schmidt_pair`] for
    /// approximate input.
    pub fn new(d1: Direction, d2: Direction) -> Result<Self> {
        check_orthogonal(&d1, &d2)?;
        Ok(Self { d1, d2 })
    }

    pub fn d1(&self) -> Direction {
        self.d1
    }

    pub fn d2(&self) -> Direction {
        self.d2
    }

    /// `(d1·σ, d2·σ)`
    pub fn observables(&self) -> (CMat2, CMat2) {
        (spin_op(&self.d1), spin_op(&self.d2))
    }
}

impl TryFrom<[Direction; 2]> for OrthogonalPair {
    type Error = Error;
    fn try_from(v: [Direction; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }
}

impl From<OrthogonalPair> for [Direction; 2] {
    fn from(p: OrthogonalPair) -> Self {
        [p.d1, p.d2]
    }
}

/// Keeps `d1` and replaces the raw second vector by its normalized component
/// orthogonal to `d1`.
pub fn gram_schmidt_pair(d1: Direction, raw: [f64; 3]) -> Result<OrthogonalPair> {
    let proj = d1.x * raw[0] + d1.y * raw[1] + d1.z * raw[2];
    let d2 = Direction::normalized(raw[0] - proj * d1.x, raw[1] - proj * d1.y, raw[2] - proj * d1.z)?;
    OrthogonalPair::new(d1, d2)
}

/// Three mutually perpendicular directions for one party.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[Direction; 3]", into = "[Direction; 3]")]
pub struct Triad {
    d: [Direction; 3],
}

impl Triad {
    pub fn new(d1: Direction, d2: Direction, d3: Direction) -> Result<Self> {
        check_orthogonal(&d1, &d2)?;
        check_orthogonal(&d2, &d3)?;
        check_orthogonal(&d3, &d1)?;
        Ok(Self { d: [d1, d2, d3] })
    }

    /// `(x, y, z)`
    pub fn axes() -> Self {
        Self { d: [Direction::X, Direction::Y, Direction::Z] }
    }

    pub fn directions(&self) -> [Direction; 3] {
        self.d
    }

    /// The three unordered pairs in cyclic order `(d1,d2), (d2,d3), (d3,d1)`.
    pub fn pairs(&self) -> [OrthogonalPair; 3] {
        let [a, b, c] = self.d;
        [
            OrthogonalPair { d1: a, d2: b },
            OrthogonalPair { d1: b, d2: c },
            OrthogonalPair { d1: c, d2: a },
        ]
    }
}

impl TryFrom<[Direction; 3]> for Triad {
    type Error = Error;
    fn try_from(v: [Direction; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<Triad> for [Direction; 3] {
    fn from(t: Triad) -> Self {
        t.d
    }
}

/// Settings `(A1, A2)` for party A and `(B1, B2)` for party B. No relation
/// between the two parties' directions is assumed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SettingsPair {
    pub a: OrthogonalPair,
    pub b: OrthogonalPair,
}

impl SettingsPair {
    pub fn new(a: OrthogonalPair, b: OrthogonalPair) -> Self {
        Self { a, b }
    }

    /// `A1 = z, A2 = x` and `B1 = z, B2 = x`.
    pub fn axes() -> Self {
        let p = OrthogonalPair { d1: Direction::Z, d2: Direction::X };
        Self { a: p, b: p }
    }

    /// `A1 = z, A2 = x, B1 = (z+x)/√2, B2 = (z−x)/√2`: reaches `2√2` on `|Φ+>`.
    pub fn cirelson() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            a: OrthogonalPair { d1: Direction::Z, d2: Direction::X },
            b: OrthogonalPair {
                d1: Direction { x: h, y: 0.0, z: h },
                d2: Direction { x: -h, y: 0.0, z: h },
            },
        }
    }
}

/// Which sign pattern of the four correlations an operator uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// `A1⊗(B1 + B2) + A2⊗(B1 − B2)`
    V1,
    /// `A1⊗(B1 + B2) − A2⊗(B1 − B2)`
    V2,
    /// `A1⊗(B1 − B2) + A2⊗(B1 + B2)`
    V3,
    /// `A1⊗(−B1 + B2) + A2⊗(B1 + B2)`
    V4,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::V1, Variant::V2, Variant::V3, Variant::V4];

    /// 1-based index.
    pub fn index(self) -> u8 {
        match self {
            Variant::V1 => 1,
            Variant::V2 => 2,
            Variant::V3 => 3,
            Variant::V4 => 4,
        }
    }

    /// Signs `(s11, s12, s21, s22)` such that the expectation equals
    /// `s11 E11 + s12 E12 + s21 E21 + s22 E22` with `Eij = <Ai⊗Bj>`.
    pub fn signs(self) -> [f64; 4] {
        match self {
            Variant::V1 => [1.0, 1.0, 1.0, -1.0],
            Variant::V2 => [1.0, 1.0, -1.0, 1.0],
            Variant::V3 => [1.0, -1.0, 1.0, 1.0],
            Variant::V4 => [-1.0, 1.0, 1.0, 1.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellOperator {
    pub mat: CMat4,
    pub settings: SettingsPair,
    pub variant: Variant,
}

fn build(settings: &SettingsPair, variant: Variant) -> BellOperator {
    let (a1, a2) = settings.a.observables();
    let (b1, b2) = settings.b.observables();
    let mat = match variant {
        Variant::V1 => kron(&a1, &(b1 + b2)) + kron(&a2, &(b1 - b2)),
        Variant::V2 => kron(&a1, &(b1 + b2)) - kron(&a2, &(b1 - b2)),
        Variant::V3 => kron(&a1, &(b1 - b2)) + kron(&a2, &(b1 + b2)),
        Variant::V4 => kron(&a1, &(b2 - b1)) + kron(&a2, &(b1 + b2)),
    };
    BellOperator { mat, settings: *settings, variant }
}

/// The standard operator `A1⊗(B1 + B2) + A2⊗(B1 − B2)`.
pub fn bell_operator(settings: &SettingsPair) -> BellOperator {
    build(settings, Variant::V1)
}

/// All four operators obtainable from the four correlations `<Ai⊗Bj>`, in
/// the order `V1..V4`.
pub fn bell_family4(settings: &SettingsPair) -> [BellOperator; 4] {
    Variant::ALL.map(|v| build(settings, v))
}

/// The 36 operators available from spin measurements along three fixed
/// directions per party: every pair from `ta` (cyclic order) against every
/// pair from `tb`, four variants each. Index `12·i + 4·j + v` holds A-pair `i`,
/// B-pair `j`, variant `v`.
pub fn bell_family36(ta: &Triad, tb: &Triad) -> Vec<BellOperator> {
    let mut out = Vec::with_capacity(36);
    for a in ta.pairs() {
        for b in tb.pairs() {
            out.extend(bell_family4(&SettingsPair::new(a, b)));
        }
    }
    out
}

/// `Tr(Bρ)`. The imaginary part vanishes for Hermitian inputs and is
/// discarded.
pub fn expectation(op: &BellOperator, rho: &DensityMatrix) -> f64 {
    let t = op.mat.trace_product(rho.mat());
    debug_assert!(t.im.abs() <= 1e-10, "imaginary expectation {}", t.im);
    t.re
}

/// Comparison of a Bell expectation against the CHSH, separable-orthogonal
/// and Cirel'son thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub value: f64,
    pub violates_chsh: bool,
    pub violates_rus: bool,
    pub within_cirelson: bool,
    /// Smallest negativity compatible with `|value| ≤ √2(1 + N)`.
    pub negativity_lower_bound: f64,
    /// Whether `|value| ≤ √2(1 + N) + 1e-9`, when `N` was supplied.
    pub within_negativity_bound: Option<bool>,
}

pub fn classify(value: f64, negativity: Option<f64>) -> Verdict {
    let v = value.abs();
    Verdict {
        value,
        violates_chsh: v > CHSH_BOUND,
        violates_rus: v > RUS_BOUND,
        within_cirelson: v <= CIRELSON_BOUND + BOUND_TOL,
        negativity_lower_bound: (v / SQRT_2 - 1.0).max(0.0),
        within_negativity_bound: negativity.map(|n| v <= negativity_bound(n) + BOUND_TOL),
    }
}

/// `√2(1 + N)`, the largest orthogonal-setting expectation for negativity `N`.
pub fn negativity_bound(negativity: f64) -> f64 {
    SQRT_2 * (1.0 + negativity)
}

/// Correlation matrix `T_ij = Tr(ρ σ_i⊗σ_j)`, `i, j ∈ {x, y, z}`.
pub fn correlation_matrix(rho: &DensityMatrix) -> [[f64; 3]; 3] {
    let paulis = [CMat2::pauli_x(), CMat2::pauli_y(), CMat2::pauli_z()];
    std::array::from_fn(|i| std::array::from_fn(|j| kron(&paulis[i], &paulis[j]).trace_product(rho.mat()).re))
}

/// Unconstrained CHSH maximum `2√(m1 + m2)` over all (not necessarily
/// orthogonal) settings, with `m1 ≥ m2` the two largest eigenvalues of `TᵀT`.
pub fn horodecki_max(rho: &DensityMatrix) -> f64 {
    let t = correlation_matrix(rho);
    let mut m = CMat4::zeros();
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = re((0..3).map(|k| t[k][i] * t[k][j]).sum());
        }
    }
    // the padding row/column adds an eigenvalue 0, below m1 and m2 since TᵀT ⪰ 0
    let eig = crate::linalg::hermitian_eigen(&m, f64::INFINITY).expect("finite symmetric input");
    2.0 * (eig.values[3] + eig.values[2]).max(0.0).sqrt()
}
