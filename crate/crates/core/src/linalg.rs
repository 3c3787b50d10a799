//! Dense 2×2 complex matrices with closed-form spectral routines.
//!
//! Everything here is exact algebra on four entries; no iterative
//! eigen/SVD solvers are involved.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type C = Complex64;

pub const ZERO: C = C::new(0.0, 0.0);
pub const ONE: C = C::new(1.0, 0.0);
pub const I: C = C::new(0.0, 1.0);

/// Row-major 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [[C; 2]; 2]);

/// Spectral decomposition of a Hermitian 2×2 matrix.
#[derive(Debug, Clone, Copy)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: [f64; 2],
    /// Orthonormal eigenvectors; `vectors[i]` belongs to `values[i]`.
    pub vectors: [[C; 2]; 2],
}

impl Mat2 {
    pub const fn new(a: C, b: C, c: C, d: C) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub const fn identity() -> Self {
        Mat2::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Mat2::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn pauli_x() -> Self {
        Mat2::new(ZERO, ONE, ONE, ZERO)
    }

    pub const fn pauli_y() -> Self {
        Mat2::new(ZERO, C::new(0.0, -1.0), I, ZERO)
    }

    pub const fn pauli_z() -> Self {
        Mat2::new(ONE, ZERO, ZERO, C::new(-1.0, 0.0))
    }

    /// `|v⟩⟨v|` for a (not necessarily normalized) vector.
    pub fn outer(v: [C; 2]) -> Self {
        Mat2([
            [v[0] * v[0].conj(), v[0] * v[1].conj()],
            [v[1] * v[0].conj(), v[1] * v[1].conj()],
        ])
    }

    /// `a0·I + r·σ`.
    pub fn from_pauli_components(a0: f64, r: [f64; 3]) -> Self {
        Mat2::new(
            C::new(a0 + r[2], 0.0),
            C::new(r[0], -r[1]),
            C::new(r[0], r[1]),
            C::new(a0 - r[2], 0.0),
        )
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn trace(&self) -> C {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn scale(&self, s: C) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn apply(&self, v: [C; 2]) -> [C; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// Largest entrywise modulus of `self − self†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let m = &self.0;
        (0..2)
            .flat_map(|i| (0..2).map(move |j| (m[i][j] - m[j][i].conj()).norm()))
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other - *other * *self
    }

    /// Sum of singular values, from `(s₁ + s₂)² = ‖M‖_F² + 2|det M|`.
    pub fn trace_norm(&self) -> f64 {
        (self.frobenius_sq() + 2.0 * self.det().norm()).max(0.0).sqrt()
    }

    /// Decomposes the Hermitian part into `a0·I + r·σ`.
    pub fn pauli_components(&self) -> (f64, [f64; 3]) {
        let m = &self.0;
        let a0 = 0.5 * (m[0][0].re + m[1][1].re);
        let rz = 0.5 * (m[0][0].re - m[1][1].re);
        let off = 0.5 * (m[1][0] + m[0][1].conj());
        (a0, [off.re, off.im, rz])
    }

    /// Closed-form eigen decomposition; assumes `self` is Hermitian.
    pub fn hermitian_eigen(&self) -> HermitianEigen {
        let (a0, r) = self.pauli_components();
        let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if len == 0.0 {
            return HermitianEigen {
                values: [a0, a0],
                vectors: [[ONE, ZERO], [ZERO, ONE]],
            };
        }
        let (nx, ny, nz) = (r[0] / len, r[1] / len, r[2] / len);
        let (plus, minus) = if nz >= 0.0 {
            let s = (2.0 * (1.0 + nz)).sqrt();
            (
                [C::new(1.0 + nz, 0.0) / s, C::new(nx, ny) / s],
                [C::new(-nx, ny) / s, C::new(1.0 + nz, 0.0) / s],
            )
        } else {
            let s = (2.0 * (1.0 - nz)).sqrt();
            (
                [C::new(nx, -ny) / s, C::new(1.0 - nz, 0.0) / s],
                [C::new(1.0 - nz, 0.0) / s, C::new(-nx, -ny) / s],
            )
        };
        HermitianEigen {
            values: [a0 - len, a0 + len],
            vectors: [minus, plus],
        }
    }

    /// Applies `f` to the spectrum of a Hermitian matrix.
    pub fn hermitian_map(&self, f: impl Fn(f64) -> f64) -> Mat2 {
        let (a0, r) = self.pauli_components();
        let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if len == 0.0 {
            return Mat2::identity().scale(C::new(f(a0), 0.0));
        }
        let (fp, fm) = (f(a0 + len), f(a0 - len));
        let n = [r[0] / len, r[1] / len, r[2] / len];
        let half_diff = 0.5 * (fp - fm);
        Mat2::from_pauli_components(
            0.5 * (fp + fm),
            [n[0] * half_diff, n[1] * half_diff, n[2] * half_diff],
        )
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2::new(
            a[0][0] - b[0][0],
            a[0][1] - b[0][1],
            a[1][0] - b[1][0],
            a[1][1] - b[1][1],
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}
