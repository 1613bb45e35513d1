//! The group SU(3), its Lie algebra su(3), and the linear algebra behind them.
//!
//! Matrices are stored as [`Matrix3C`] (nalgebra `Matrix3<Complex64>`).
//! [`SpecialUnitary3`] and [`Su3Algebra`] are thin validated wrappers; the
//! validation tolerance is [`UNITARY_TOL`]. Products and adjoints of valid
//! elements are trusted without re-validation, and long products are pulled
//! back onto the group with [`renormalize`].

mod algebra;
mod eigen;
mod sample;

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use algebra::{
    adjoint_action, adjoint_matrix, algebra_basis, exp_algebra, inner_product, AdMatrix,
};
pub use eigen::{
    circle_gap, torus_frame, unit_cubic_roots, unitary_eigen, TorusFrame, UnitaryEigen,
};
pub use sample::{haar_random, random_algebra};

/// 3×3 complex matrix.
pub type Matrix3C = nalgebra::Matrix3<Complex64>;

/// Tolerance for the group and algebra invariant checks.
pub const UNITARY_TOL: f64 = 1e-9;

/// Minimal eigenvalue circle gap (in radians) for an element to count as regular.
pub const REGULARITY_GAP: f64 = 1e-8;

/// Group multiplications between renormalizations in long products.
pub const RENORMALIZE_EVERY: usize = 64;

/// Inputs further than this from the unitary group are rejected by [`renormalize`].
pub const DRIFT_GUARD: f64 = 0.1;

/// `e^{2πi/3}`.
pub fn omega() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)
}

/// Largest entry modulus.
pub fn max_abs(m: &Matrix3C) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Trace of a complex 3×3 matrix.
pub fn trace(m: &Matrix3C) -> Complex64 {
    m[(0, 0)] + m[(1, 1)] + m[(2, 2)]
}

fn unitarity_defect(m: &Matrix3C) -> f64 {
    max_abs(&(m * m.adjoint() - Matrix3C::identity()))
}

/// An element of SU(3).
#[derive(Clone, Copy, PartialEq)]
pub struct SpecialUnitary3(Matrix3C);

impl SpecialUnitary3 {
    /// Validates `m` against [`UNITARY_TOL`].
    pub fn new(m: Matrix3C) -> Result<Self> {
        let unitarity = unitarity_defect(&m);
        let det = (m.determinant() - Complex64::new(1.0, 0.0)).norm();
        if !(unitarity <= UNITARY_TOL && det <= UNITARY_TOL) {
            return Err(Error::NotSpecialUnitary { unitarity, det });
        }
        Ok(Self(m))
    }

    /// Wraps `m` without checking. Callers guarantee `m` is in SU(3) up to roundoff.
    pub(crate) fn from_matrix_unchecked(m: Matrix3C) -> Self {
        Self(m)
    }

    pub fn identity() -> Self {
        Self(Matrix3C::identity())
    }

    /// `ω^k · Id`.
    pub fn central(k: u32) -> Self {
        Self(Matrix3C::identity() * omega().powu(k % 3))
    }

    /// Diagonal matrix with the given unit-modulus entries. The determinant is
    /// not corrected; supply entries whose product is 1.
    pub fn diagonal(entries: [Complex64; 3]) -> Result<Self> {
        Self::new(Matrix3C::from_diagonal(&nalgebra::Vector3::from(entries)))
    }

    /// `diag(e^{2πiθ₁}, e^{2πiθ₂}, e^{-2πi(θ₁+θ₂)})`, always in SU(3).
    pub fn torus(angles: [f64; 2]) -> Self {
        let tau = 2.0 * std::f64::consts::PI;
        let d = [
            Complex64::from_polar(1.0, tau * angles[0]),
            Complex64::from_polar(1.0, tau * angles[1]),
            Complex64::from_polar(1.0, -tau * (angles[0] + angles[1])),
        ];
        Self(Matrix3C::from_diagonal(&nalgebra::Vector3::from(d)))
    }

    /// The cyclic permutation matrix with ones at (0,1), (1,2), (2,0).
    pub fn cyclic_permutation() -> Self {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        Self(Matrix3C::new(o, l, o, o, o, l, l, o, o))
    }

    pub fn matrix(&self) -> &Matrix3C {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix3C {
        self.0
    }

    /// Inverse, computed as the conjugate transpose.
    pub fn inverse(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        trace(&self.0)
    }

    /// `g · self · g⁻¹`.
    pub fn conjugated_by(&self, g: &SpecialUnitary3) -> Self {
        Self(g.0 * self.0 * g.0.adjoint())
    }

    /// `‖U·U† − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.0)
    }

    /// Max-entry distance to another element.
    pub fn distance(&self, other: &SpecialUnitary3) -> f64 {
        max_abs(&(self.0 - other.0))
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut acc = Self::identity();
        let mut base = *self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    /// Whether the three eigenvalues are pairwise separated by at least
    /// [`REGULARITY_GAP`] on the circle.
    pub fn is_regular(&self) -> bool {
        unitary_eigen(self).min_gap() >= REGULARITY_GAP
    }

    /// Whether the element is a multiple of the identity, within `tol`.
    pub fn is_central(&self, tol: f64) -> bool {
        let s = self.0[(0, 0)];
        max_abs(&(self.0 - Matrix3C::identity() * s)) <= tol
    }
}

impl fmt::Debug for SpecialUnitary3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpecialUnitary3{}", self.0)
    }
}

impl Mul for SpecialUnitary3 {
    type Output = SpecialUnitary3;
    fn mul(self, rhs: SpecialUnitary3) -> SpecialUnitary3 {
        SpecialUnitary3(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a SpecialUnitary3> for &'a SpecialUnitary3 {
    type Output = SpecialUnitary3;
    fn mul(self, rhs: &SpecialUnitary3) -> SpecialUnitary3 {
        SpecialUnitary3(self.0 * rhs.0)
    }
}

/// A traceless anti-Hermitian 3×3 matrix.
#[derive(Clone, Copy, PartialEq)]
pub struct Su3Algebra(Matrix3C);

impl Su3Algebra {
    pub fn new(m: Matrix3C) -> Result<Self> {
        let defect = max_abs(&(m + m.adjoint())).max(trace(&m).norm());
        if !(defect <= UNITARY_TOL) {
            return Err(Error::InvalidAlgebraElement { defect });
        }
        Ok(Self(m))
    }

    pub fn zero() -> Self {
        Self(Matrix3C::zeros())
    }

    /// Projects an arbitrary matrix onto su(3): `(m − m†)/2` minus its trace part.
    pub fn traceless_anti_hermitian(m: &Matrix3C) -> Self {
        let skew = (m - m.adjoint()) * Complex64::new(0.5, 0.0);
        let t = trace(&skew) / 3.0;
        Self(skew - Matrix3C::identity() * t)
    }

    /// `i·diag(h)` for real `h` with zero sum; the sum is subtracted off if not.
    pub fn diagonal(h: [f64; 3]) -> Self {
        let mean = (h[0] + h[1] + h[2]) / 3.0;
        let d = h.map(|x| Complex64::new(0.0, x - mean));
        Self(Matrix3C::from_diagonal(&nalgebra::Vector3::from(d)))
    }

    pub fn matrix(&self) -> &Matrix3C {
        &self.0
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0 * Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &Su3Algebra) -> Self {
        Self(self.0 + other.0)
    }

    /// Lie bracket `XY − YX`.
    pub fn bracket(&self, other: &Su3Algebra) -> Self {
        Self(self.0 * other.0 - other.0 * self.0)
    }

    /// Norm induced by `−⟨·,·⟩`.
    pub fn norm(&self) -> f64 {
        (-inner_product(self, self)).max(0.0).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.0)
    }

    /// Coordinates in the orthonormal basis [`algebra_basis`].
    pub fn coords(&self) -> [f64; 8] {
        algebra::coords(&self.0)
    }

    pub fn from_coords(c: &[f64; 8]) -> Self {
        algebra::from_coords(c)
    }
}

impl fmt::Debug for Su3Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Su3Algebra{}", self.0)
    }
}

/// Nearest special-unitary matrix to `u`.
///
/// Polar projection by Newton–Schulz iteration, then the determinant phase is
/// removed by a scalar cube root. Inputs with `‖U U† − I‖_max > DRIFT_GUARD`
/// are rejected.
pub fn renormalize(u: &Matrix3C) -> Result<SpecialUnitary3> {
    let deviation = unitarity_defect(u);
    if !(deviation <= DRIFT_GUARD) {
        return Err(Error::DriftExplosion { deviation });
    }
    let id = Matrix3C::identity();
    let half = Complex64::new(0.5, 0.0);
    let mut x = *u;
    for _ in 0..8 {
        let gram = x.adjoint() * x;
        if max_abs(&(gram - id)) <= 4.0 * f64::EPSILON {
            break;
        }
        x = x * (id * Complex64::new(3.0, 0.0) - gram) * half;
    }
    let phase = x.determinant().arg();
    if phase != 0.0 {
        x *= Complex64::from_polar(1.0, -phase / 3.0);
    }
    Ok(SpecialUnitary3(x))
}
