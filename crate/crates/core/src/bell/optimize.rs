//! Maximization of the Bell expectation over orthogonal settings.
//!
//! Each party's orthonormal pair is the first two columns of a rotation
//! `Rz(α)·Ry(β)·Rz(γ)`, so the search runs over six angles. The objective is
//! evaluated through the correlation matrix `T`:
//!
//! ```text
//! <B> = a1ᵀ T (b1 + b2) + a2ᵀ T (b1 − b2)
//! ```
//!
//! Restarts begin at random Euler angles. Each then runs coordinate ascent
//! where a coordinate is a one-parameter turn of the frames (see `Move`
//! below): the turn angle is bracketed on an 8-point grid over a full period and
//! refined by golden-section search. A move is only taken when it improves
//! the objective.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use crate::bell::{bell_operator, correlation_matrix, expectation, gram_schmidt_pair, Direction, SettingsPair};
use crate::qstate::DensityMatrix;
use crate::sampling::SeededRng;

const GRID: usize = 8;
const GOLDEN_TOL: f64 = 1e-9;
const SWEEP_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptimizerBudget {
    pub restarts: usize,
    /// Maximum coordinate sweeps per restart.
    pub iterations: usize,
}

impl Default for OptimizerBudget {
    fn default() -> Self {
        Self { restarts: 8, iterations: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SettingsOptimum {
    /// `Tr(Bρ)` evaluated at `settings`.
    pub value: f64,
    pub settings: SettingsPair,
    /// `(αA, βA, γA, αB, βB, γB)`
    pub angles: [f64; 6],
}

/// Rotation matrix `Rz(α)·Ry(β)·Rz(γ)`.
pub fn rotation_zyz(alpha: f64, beta: f64, gamma: f64) -> [[f64; 3]; 3] {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let (sg, cg) = gamma.sin_cos();
    [
        [ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb],
        [sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb],
        [-sb * cg, sb * sg, cb],
    ]
}

type Rot = [[f64; 3]; 3];

fn matmul(a: &Rot, b: &Rot) -> Rot {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
}

/// Rotation by `theta` about coordinate axis `axis`.
fn axis_rotation(axis: usize, theta: f64) -> Rot {
    let (s, c) = theta.sin_cos();
    let (p, q) = ((axis + 1) % 3, (axis + 2) % 3);
    let mut r = [[0.0; 3]; 3];
    r[axis][axis] = 1.0;
    r[p][p] = c;
    r[q][q] = c;
    r[q][p] = s;
    r[p][q] = -s;
    r
}

fn first_columns(r: &Rot) -> ([f64; 3], [f64; 3]) {
    ([r[0][0], r[1][0], r[2][0]], [r[0][1], r[1][1], r[2][1]])
}

fn objective(t: &[[f64; 3]; 3], ra: &Rot, rb: &Rot) -> f64 {
    let (a1, a2) = first_columns(ra);
    let (b1, b2) = first_columns(rb);
    let mut v = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            v += t[i][j] * (a1[i] * (b1[j] + b2[j]) + a2[i] * (b1[j] - b2[j]));
        }
    }
    v
}

/// Euler angles `(α, β, γ)` with `rotation_zyz(α, β, γ) = r`.
fn zyz_angles(r: &Rot) -> [f64; 3] {
    let beta = r[2][2].clamp(-1.0, 1.0).acos();
    if beta.sin() > 1e-12 {
        [r[1][2].atan2(r[0][2]), beta, r[2][1].atan2(-r[2][0])]
    } else {
        // only α ± γ is determined; put it all in α
        let sign = r[2][2].signum();
        [(sign * r[1][0]).atan2(sign * r[0][0]), beta, 0.0]
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > GOLDEN_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Frame change from `(b1, b2, b3)` to `((b1 + b2)/√2, (b1 − b2)/√2, b3)`;
/// symmetric and its own inverse.
const SUM_DIFF: Rot = [
    [FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0],
    [FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0],
    [0.0, 0.0, 1.0],
];

/// The search coordinates, each a one-parameter family of frame turns.
#[derive(Clone, Copy)]
enum Move {
    /// Turn one party's frame about a fixed axis.
    Fixed(usize, usize),
    /// Turn one party's frame about one of its own axes.
    Body(usize, usize),
    /// Turn A's frame and B's sum/difference frame about matching axes, in
    /// the same or opposite sense. Near-degenerate correlation matrices have
    /// long ridges along these.
    Joint(usize, f64),
}

const MOVES: [Move; 18] = [
    Move::Fixed(0, 0),
    Move::Fixed(0, 1),
    Move::Fixed(0, 2),
    Move::Fixed(1, 0),
    Move::Fixed(1, 1),
    Move::Fixed(1, 2),
    Move::Body(0, 0),
    Move::Body(0, 1),
    Move::Body(0, 2),
    Move::Body(1, 0),
    Move::Body(1, 1),
    Move::Body(1, 2),
    Move::Joint(0, 1.0),
    Move::Joint(1, 1.0),
    Move::Joint(2, 1.0),
    Move::Joint(0, -1.0),
    Move::Joint(1, -1.0),
    Move::Joint(2, -1.0),
];

fn apply(m: Move, r: &[Rot; 2], theta: f64) -> [Rot; 2] {
    let mut y = *r;
    match m {
        Move::Fixed(party, axis) => y[party] = matmul(&axis_rotation(axis, theta), &r[party]),
        Move::Body(party, axis) => y[party] = matmul(&r[party], &axis_rotation(axis, theta)),
        Move::Joint(axis, sense) => {
            y[0] = matmul(&r[0], &axis_rotation(axis, theta));
            let g = matmul(&matmul(&SUM_DIFF, &axis_rotation(axis, sense * theta)), &SUM_DIFF);
            y[1] = matmul(&r[1], &g);
        }
    }
    y
}

fn coordinate_ascent(t: &[[f64; 3]; 3], start: [Rot; 2], sweeps: usize) -> ([Rot; 2], f64) {
    let mut r = start;
    let mut fx = objective(t, &r[0], &r[1]);
    let step = TAU / GRID as f64;
    for _ in 0..sweeps {
        let before = fx;
        for m in MOVES {
            let moved = |theta: f64| apply(m, &r, theta);
            let at = |theta: f64| {
                let y = moved(theta);
                objective(t, &y[0], &y[1])
            };
            let (mut grid_theta, mut grid_f) = (0.0, fx);
            for g in 1..GRID {
                let theta = step * g as f64;
                let f = at(theta);
                if f > grid_f {
                    grid_theta = theta;
                    grid_f = f;
                }
            }
            let (g_theta, g_f) = golden_max(at, grid_theta - step, grid_theta + step);
            let (mut best_theta, mut best_f) = (0.0, fx);
            for (theta, f) in [(grid_theta, grid_f), (g_theta, g_f)] {
                if f > best_f {
                    best_theta = theta;
                    best_f = f;
                }
            }
            if best_f > fx {
                r = moved(best_theta);
                fx = objective(t, &r[0], &r[1]);
            }
        }
        if fx - before <= SWEEP_TOL {
            break;
        }
    }
    (r, fx)
}

fn settings_from_rotations(r: &[Rot; 2]) -> SettingsPair {
    let pair = |r: &Rot| {
        let (c1, c2) = first_columns(r);
        let d1 = Direction::normalized(c1[0], c1[1], c1[2]).expect("rotation column");
        // re-orthogonalize against rounding accumulated over many products
        gram_schmidt_pair(d1, c2).expect("rotation columns are independent")
    };
    SettingsPair::new(pair(&r[0]), pair(&r[1]))
}

/// Largest `Tr(Bρ)` found over orthogonal settings.
///
/// The returned value is the expectation actually achieved at the returned
/// settings, so it never exceeds the true maximum. Restart `k` starts from
/// the `k`-th Euler-angle draw of the stream seeded by `seed`, which makes
/// the result deterministic and non-decreasing in `budget.restarts`.
pub fn max_over_orthogonal_settings(rho: &DensityMatrix, budget: OptimizerBudget, seed: u64) -> SettingsOptimum {
    let t = correlation_matrix(rho);
    let mut rng = SeededRng::new(seed);
    let mut best: Option<SettingsOptimum> = None;
    for _ in 0..budget.restarts.max(1) {
        let mut euler = || rotation_zyz(rng.uniform() * TAU, rng.uniform() * PI, rng.uniform() * TAU);
        let start = [euler(), euler()];
        let (r, _) = coordinate_ascent(&t, start, budget.iterations);
        let settings = settings_from_rotations(&r);
        // compare restarts on the certified value, not the search objective
        let value = expectation(&bell_operator(&settings), rho);
        if best.as_ref().is_none_or(|b| value > b.value) {
            let [a0, a1, a2] = zyz_angles(&r[0]);
            let [b0, b1, b2] = zyz_angles(&r[1]);
            best = Some(SettingsOptimum { value, settings, angles: [a0, a1, a2, b0, b1, b2] });
        }
    }
    best.expect("at least one restart")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{bell_family4, horodecki_max, CIRELSON_BOUND};
    use crate::qstate::{fully_entangled_fraction, negativity, PureState};
    use std::f64::consts::SQRT_2;

    #[test]
    fn rotation_is_orthogonal() {
        let r = rotation_zyz(0.3, 1.1, -2.0);
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| r[k][i] * r[k][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-15);
            }
        }
        let id = rotation_zyz(0.0, 0.0, 0.0);
        assert_eq!(id, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
    }

    // Over orthonormal pairs, a1ᵀTc1 + a2ᵀTc2 peaks at s1 + s2 (top two
    // singular values of T), and b1 ± b2 = √2·c1, √2·c2 for orthogonal b.
    fn closed_form_max(rho: &DensityMatrix) -> f64 {
        let t = correlation_matrix(rho);
        let m = crate::linalg::CMat4::from_fn(|i, j| {
            if i < 3 && j < 3 {
                crate::linalg::re((0..3).map(|k| t[k][i] * t[k][j]).sum())
            } else {
                crate::linalg::re(0.0)
            }
        });
        let e = crate::linalg::hermitian_eigen(&m, f64::INFINITY).unwrap();
        SQRT_2 * (e.values[3].max(0.0).sqrt() + e.values[2].max(0.0).sqrt())
    }

    #[test]
    fn matches_closed_form_on_random_states() {
        let mut rng = crate::sampling::SeededRng::new(31);
        let mut worst: f64 = 0.0;
        for k in 0..300 {
            let rho = crate::sampling::random_mixed(&mut rng);
            let want = closed_form_max(&rho);
            let got = max_over_orthogonal_settings(&rho, OptimizerBudget::default(), k);
            assert!(got.value <= want + 1e-9, "{} > {want}", got.value);
            worst = worst.max(want - got.value);
        }
        assert!(worst < 1e-12, "worst gap {worst}");
    }

    fn rotations(a: &[f64; 6]) -> [Rot; 2] {
        [rotation_zyz(a[0], a[1], a[2]), rotation_zyz(a[3], a[4], a[5])]
    }

    fn settings_from_angles(a: &[f64; 6]) -> SettingsPair {
        settings_from_rotations(&rotations(a))
    }

    #[test]
    fn objective_matches_operator_trace() {
        let rho = DensityMatrix::werner(0.7).unwrap();
        let t = correlation_matrix(&rho);
        let angles = [0.1, 0.7, 2.0, -1.0, 2.2, 0.4];
        let [ra, rb] = rotations(&angles);
        let direct = expectation(&bell_operator(&settings_from_angles(&angles)), &rho);
        assert!((objective(&t, &ra, &rb) - direct).abs() < 1e-14);
    }

    #[test]
    fn euler_angles_invert_rotation() {
        for (a, b, g) in [(0.3, 1.1, -2.0), (2.9, 0.0, 0.4), (-1.0, PI, 0.7), (0.0, 3.0, 3.0)] {
            let r = rotation_zyz(a, b, g);
            let [a2, b2, g2] = zyz_angles(&r);
            let back = rotation_zyz(a2, b2, g2);
            for i in 0..3 {
                for j in 0..3 {
                    assert!((back[i][j] - r[i][j]).abs() < 1e-12, "{a} {b} {g}");
                }
            }
        }
        let r = matmul(&axis_rotation(0, 0.4), &axis_rotation(1, -1.3));
        let [a, b, g] = zyz_angles(&r);
        let back = rotation_zyz(a, b, g);
        assert!((0..9).all(|k| (back[k / 3][k % 3] - r[k / 3][k % 3]).abs() < 1e-12));
    }

    #[test]
    fn returned_angles_reproduce_settings() {
        let rho = crate::sampling::random_mixed(&mut crate::sampling::SeededRng::new(4));
        let opt = max_over_orthogonal_settings(&rho, OptimizerBudget::default(), 2);
        let again = settings_from_angles(&opt.angles);
        assert!((expectation(&bell_operator(&again), &rho) - opt.value).abs() < 1e-10);
    }

    #[test]
    fn bell_state_reaches_cirelson() {
        let phi = DensityMatrix::from_pure(&PureState::phi_plus());
        let opt = max_over_orthogonal_settings(&phi, OptimizerBudget::default(), 0);
        assert!((opt.value - CIRELSON_BOUND).abs() < 1e-6, "{}", opt.value);
    }

    #[test]
    fn maximally_mixed_is_zero() {
        let opt = max_over_orthogonal_settings(&DensityMatrix::maximally_mixed(), OptimizerBudget::default(), 0);
        assert!(opt.value.abs() < 1e-9);
    }

    #[test]
    fn deterministic_and_monotone_in_budget() {
        let rho = DensityMatrix::mixture(&[
            (0.6, DensityMatrix::from_pure(&PureState::psi_minus())),
            (0.4, DensityMatrix::from_pure(&PureState::basis(1))),
        ])
        .unwrap();
        let a = max_over_orthogonal_settings(&rho, OptimizerBudget { restarts: 3, iterations: 200 }, 9);
        let b = max_over_orthogonal_settings(&rho, OptimizerBudget { restarts: 3, iterations: 200 }, 9);
        assert_eq!(a, b);
        let mut prev = f64::NEG_INFINITY;
        for restarts in 1..=6 {
            let v = max_over_orthogonal_settings(&rho, OptimizerBudget { restarts, iterations: 200 }, 9).value;
            assert!(v >= prev);
            prev = v;
        }
        let mut prev = f64::NEG_INFINITY;
        for iterations in [0, 1, 2, 5, 50] {
            let v = max_over_orthogonal_settings(&rho, OptimizerBudget { restarts: 2, iterations }, 9).value;
            assert!(v >= prev);
            prev = v;
        }
    }

    /// Dense grid over the six angles with the operator-trace expectation.
    fn grid_max(rho: &DensityMatrix, points: usize) -> f64 {
        let mut best = f64::NEG_INFINITY;
        let ang = |k: usize, span: f64| span * k as f64 / points as f64;
        let mut a = [0.0; 6];
        for i0 in 0..points {
            a[0] = ang(i0, TAU);
            for i1 in 0..points {
                a[1] = ang(i1, PI);
                for i2 in 0..points {
                    a[2] = ang(i2, TAU);
                    for i3 in 0..points {
                        a[3] = ang(i3, TAU);
                        for i4 in 0..points {
                            a[4] = ang(i4, PI);
                            for i5 in 0..points {
                                a[5] = ang(i5, TAU);
                                let s = settings_from_angles(&a);
                                best = best.max(expectation(&bell_operator(&s), rho));
                            }
                        }
                    }
                }
            }
        }
        best
    }

    #[test]
    fn werner_against_grid_and_bounds() {
        let p = 0.9;
        let rho = DensityMatrix::werner(p).unwrap();
        let opt = max_over_orthogonal_settings(&rho, OptimizerBudget::default(), 1);
        let upper = (2.0 * SQRT_2 * fully_entangled_fraction(&rho).value())
            .min(SQRT_2 * (1.0 + negativity(&rho).value()))
            .min(horodecki_max(&rho));
        assert!(opt.value <= upper + 1e-6);
        assert!(opt.value >= 2.0 * SQRT_2 * p - 1e-6);
        let grid = grid_max(&rho, 8);
        assert!(opt.value >= grid - 1e-9, "{} < grid {}", opt.value, grid);
    }

    #[test]
    fn optimum_dominates_fixed_settings() {
        let rho = DensityMatrix::mixture(&[
            (0.7, DensityMatrix::from_pure(&PureState::phi_minus())),
            (0.3, DensityMatrix::from_pure(&PureState::basis(2))),
        ])
        .unwrap();
        let opt = max_over_orthogonal_settings(&rho, OptimizerBudget::default(), 2);
        for s in [SettingsPair::axes(), SettingsPair::cirelson()] {
            for op in bell_family4(&s) {
                assert!(opt.value >= expectation(&op, &rho).abs() - 1e-9);
            }
        }
        assert!(opt.value <= horodecki_max(&rho) + 1e-6);
    }
}
