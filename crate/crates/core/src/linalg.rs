//! Fixed-size complex matrices (2×2 and 4×4) and a cyclic Jacobi eigensolver
//! for Hermitian 4×4 input.
//!
//! Storage is dense and row-major. Every value is `Copy`; all operations are
//! pure.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::{Error, Result};

pub type Complex = num_complex::Complex64;

/// Default relative Hermiticity tolerance for [`hermitian_eigen`].
pub const HERMITIAN_TOL: f64 = 1e-10;

const JACOBI_REL_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 50;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);
const I: Complex = Complex::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

macro_rules! square_matrix {
    ($name:ident, $n:expr) => {
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $name(pub [[Complex; $n]; $n]);

        impl $name {
            pub const DIM: usize = $n;

            pub fn zeros() -> Self {
                Self([[ZERO; $n]; $n])
            }

            pub fn identity() -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    m.0[i][i] = ONE;
                }
                m
            }

            pub fn from_real_diagonal(d: [f64; $n]) -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    m.0[i][i] = re(d[i]);
                }
                m
            }

            pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex) -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    for j in 0..$n {
                        m.0[i][j] = f(i, j);
                    }
                }
                m
            }

            pub fn adjoint(&self) -> Self {
                Self::from_fn(|i, j| self.0[j][i].conj())
            }

            pub fn transpose(&self) -> Self {
                Self::from_fn(|i, j| self.0[j][i])
            }

            pub fn scale(&self, s: Complex) -> Self {
                Self::from_fn(|i, j| self.0[i][j] * s)
            }

            pub fn scale_real(&self, s: f64) -> Self {
                Self::from_fn(|i, j| self.0[i][j] * s)
            }

            pub fn trace(&self) -> Complex {
                (0..$n).map(|i| self.0[i][i]).sum()
            }

            /// Real part of the trace. Debug builds check that the imaginary
            /// part is negligible, as it is for any Hermitian matrix.
            pub fn trace_real(&self) -> f64 {
                let t = self.trace();
                debug_assert!(
                    t.im.abs() <= 1e-12 * (1.0 + self.frobenius_norm()),
                    "trace has imaginary part {}",
                    t.im
                );
                t.re
            }

            pub fn frobenius_norm(&self) -> f64 {
                self.0
                    .iter()
                    .flatten()
                    .map(|z| z.norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
            }

            /// `‖self − self†‖_F`.
            pub fn hermitian_defect(&self) -> f64 {
                (*self - self.adjoint()).frobenius_norm()
            }

            pub fn is_hermitian(&self, rel_tol: f64) -> bool {
                self.hermitian_defect() <= rel_tol * self.frobenius_norm()
            }

            pub fn column(&self, j: usize) -> [Complex; $n] {
                std::array::from_fn(|i| self.0[i][j])
            }

            pub fn mul_vec(&self, v: &[Complex; $n]) -> [Complex; $n] {
                std::array::from_fn(|i| (0..$n).map(|k| self.0[i][k] * v[k]).sum())
            }

            /// `Tr(self · other)` without forming the product.
            pub fn trace_product(&self, other: &Self) -> Complex {
                let mut acc = ZERO;
                for i in 0..$n {
                    for k in 0..$n {
                        acc += self.0[i][k] * other.0[k][i];
                    }
                }
                acc
            }
        }

        impl Default for $name {
            fn default() -> Self {
                Self::zeros()
            }
        }

        impl Index<(usize, usize)> for $name {
            type Output = Complex;
            fn index(&self, (i, j): (usize, usize)) -> &Complex {
                &self.0[i][j]
            }
        }

        impl IndexMut<(usize, usize)> for $name {
            fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
                &mut self.0[i][j]
            }
        }

        impl Add for $name {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
            }
        }

        impl Sub for $name {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
            }
        }

        impl Neg for $name {
            type Output = Self;
            fn neg(self) -> Self {
                Self::from_fn(|i, j| -self.0[i][j])
            }
        }

        impl Mul for $name {
            type Output = Self;
            fn mul(self, rhs: Self) -> Self {
                Self::from_fn(|i, j| (0..$n).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
            }
        }
    };
}

square_matrix!(CMat2, 2);
square_matrix!(CMat4, 4);

impl CMat2 {
    pub fn pauli_x() -> Self {
        CMat2([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn pauli_y() -> Self {
        CMat2([[ZERO, -I], [I, ZERO]])
    }

    pub fn pauli_z() -> Self {
        CMat2([[ONE, ZERO], [ZERO, -ONE]])
    }
}

/// Kronecker product with `a` as the slow (left) factor.
pub fn kron(a: &CMat2, b: &CMat2) -> CMat4 {
    CMat4::from_fn(|r, col| a.0[r / 2][col / 2] * b.0[r % 2][col % 2])
}

/// Eigendecomposition of a Hermitian 4×4 matrix.
///
/// `values` are ascending and column `k` of `vectors` is the unit eigenvector
/// for `values[k]`. Vectors inside a degenerate cluster come in whatever
/// orthonormal basis the rotations produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenResult4 {
    pub values: [f64; 4],
    pub vectors: CMat4,
}

impl EigenResult4 {
    pub fn vector(&self, k: usize) -> [Complex; 4] {
        self.vectors.column(k)
    }

    /// `Σ_k λ_k v_k v_k†`.
    pub fn reconstruct(&self) -> CMat4 {
        let v = &self.vectors;
        CMat4::from_fn(|i, j| {
            (0..4)
                .map(|k| v.0[i][k] * v.0[j][k].conj() * self.values[k])
                .sum()
        })
    }
}

/// Cyclic Jacobi diagonalization of a Hermitian 4×4 matrix.
///
/// Fails with [`Error::NotHermitian`] when `‖m − m†‖_F > tol·‖m‖_F`. Only the
/// Hermitian part of `m` is used.
pub fn hermitian_eigen(m: &CMat4, tol: f64) -> Result<EigenResult4> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let norm = m.frobenius_norm();
    let defect = m.hermitian_defect();
    if defect > tol * norm {
        return Err(Error::NotHermitian(if norm > 0.0 { defect / norm } else { defect }));
    }
    Ok(jacobi_hermitian(m))
}

fn off_diagonal_norm(a: &CMat4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                s += a.0[i][j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi_hermitian(m: &CMat4) -> EigenResult4 {
    // symmetrize so round-off in the input cannot bias the diagonal
    let mut a = CMat4::from_fn(|i, j| (m.0[i][j] + m.0[j][i].conj()) * 0.5);
    let mut v = CMat4::identity();
    let threshold = JACOBI_REL_TOL * a.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a.0[i][i].re.total_cmp(&a.0[j][j].re));
    EigenResult4 {
        values: order.map(|k| a.0[k][k].re),
        vectors: CMat4::from_fn(|i, k| v.0[i][order[k]]),
    }
}

/// Annihilates `a[p][q]` with the unitary `G = diag(e, 1)·R(θ)` acting on
/// the (p, q) plane, where `e` is the phase of `a[p][q]` and `R` the real
/// Jacobi rotation of the resulting real symmetric 2×2 block.
fn rotate(a: &mut CMat4, v: &mut CMat4, p: usize, q: usize) {
    let apq = a.0[p][q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a.0[p][p].re;
    let aqq = a.0[q][q].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;

    // G = [[e c, e s], [-s, c]]
    let g00 = phase * cs;
    let g01 = phase * sn;
    let g10 = re(-sn);
    let g11 = re(cs);

    // A <- A G
    for k in 0..4 {
        let akp = a.0[k][p];
        let akq = a.0[k][q];
        a.0[k][p] = akp * g00 + akq * g10;
        a.0[k][q] = akp * g01 + akq * g11;
    }
    // A <- G† A
    for k in 0..4 {
        let apk = a.0[p][k];
        let aqk = a.0[q][k];
        a.0[p][k] = g00.conj() * apk + g10.conj() * aqk;
        a.0[q][k] = g01.conj() * apk + g11.conj() * aqk;
    }
    a.0[p][q] = ZERO;
    a.0[q][p] = ZERO;
    a.0[p][p].im = 0.0;
    a.0[q][q].im = 0.0;

    for k in 0..4 {
        let vkp = v.0[k][p];
        let vkq = v.0[k][q];
        v.0[k][p] = vkp * g00 + vkq * g10;
        v.0[k][q] = vkp * g01 + vkq * g11;
    }
}

/// QR factorization by modified Gram-Schmidt with one re-orthogonalization
/// pass. `R` has a real non-negative diagonal. A rank-deficient column gives
/// a zero column in `Q`.
pub fn qr(m: &CMat4) -> (CMat4, CMat4) {
    let mut q = *m;
    let mut r = CMat4::zeros();
    for j in 0..4 {
        for _pass in 0..2 {
            for i in 0..j {
                let proj: Complex = (0..4).map(|k| q.0[k][i].conj() * q.0[k][j]).sum();
                r.0[i][j] += proj;
                for k in 0..4 {
                    let qki = q.0[k][i];
                    q.0[k][j] -= proj * qki;
                }
            }
        }
        let norm = (0..4).map(|k| q.0[k][j].norm_sqr()).sum::<f64>().sqrt();
        r.0[j][j] = re(norm);
        if norm > 0.0 {
            for k in 0..4 {
                q.0[k][j] /= norm;
            }
        }
    }
    (q, r)
}
